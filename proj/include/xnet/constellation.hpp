#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xnet/numerics.hpp"

namespace xnet {

/// Finite unit-average-energy alphabet with Gray bit labels.  Immutable after
/// construction; the rotation angle is baked into the points.
struct Constellation {
  std::string name;
  double rotation_phi = 0.0;
  int bits = 0;  // label width, log2(points.size())
  std::vector<cxd> points;
  std::vector<std::uint32_t> labels;      // labels[i] = bit label of points[i]
  std::vector<int> index_by_label;        // index_by_label[label] = point index

  int size() const { return static_cast<int>(points.size()); }
};

/// QAM families used by the schemes: order in {4, 8, 16}.  8-QAM is the
/// rectangular 4x2 grid.  All are Gray labeled, normalized to unit average
/// energy, then rotated by e^{j phi}.
Constellation make_qam(int order, double phi);

/// Config-facing names: "qpsk", "qam8", "qam16".
Constellation make_constellation(const std::string& name, double phi);

/// Coordinate product distance: min over distinct pairs of |dRe|*|dIm|.
double cpd(const Constellation& c);

cxd bits_to_point(const Constellation& c, std::uint32_t label, int nbits);
std::uint32_t point_to_bits(const Constellation& c, cxd point);

}  // namespace xnet
