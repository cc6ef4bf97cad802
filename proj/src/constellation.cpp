#include "xnet/constellation.hpp"

#include <cmath>

namespace xnet {

namespace {

// 2-bit Gray code over 4 ascending levels: 00, 01, 11, 10.
constexpr std::uint32_t kGray4[4] = {0b00, 0b01, 0b11, 0b10};

Constellation finalize(Constellation c, double phi) {
  // rotate, then normalize to unit average energy (rotation preserves energy)
  const cxd rot = std::polar(1.0, phi);
  double energy = 0.0;
  for (auto& p : c.points) {
    p *= rot;
    energy += std::norm(p);
  }
  const double scale = 1.0 / std::sqrt(energy / static_cast<double>(c.points.size()));
  for (auto& p : c.points) p *= scale;

  c.rotation_phi = phi;
  c.bits = 0;
  while ((1u << c.bits) < c.points.size()) ++c.bits;
  c.index_by_label.assign(c.points.size(), -1);
  for (int i = 0; i < c.size(); ++i) c.index_by_label[c.labels[i]] = i;
  return c;
}

}  // namespace

Constellation make_qam(int order, double phi) {
  Constellation c;
  switch (order) {
    case 4: {
      c.name = "qpsk";
      // label convention: 00 -> (1+j)/sqrt2, then counterclockwise Gray ring
      c.points = {{1.0, 1.0}, {-1.0, 1.0}, {-1.0, -1.0}, {1.0, -1.0}};
      c.labels = {0b00, 0b01, 0b11, 0b10};
      break;
    }
    case 8: {
      c.name = "qam8";
      // rectangular 4x2 grid: Re in {-3,-1,1,3}, Im in {-1,1}; Gray per axis
      for (int i = 0; i < 4; ++i)
        for (int q = 0; q < 2; ++q) {
          c.points.emplace_back(static_cast<double>(2 * i - 3), static_cast<double>(2 * q - 1));
          c.labels.push_back((kGray4[i] << 1) | static_cast<std::uint32_t>(q));
        }
      break;
    }
    case 16: {
      c.name = "qam16";
      for (int i = 0; i < 4; ++i)
        for (int q = 0; q < 4; ++q) {
          c.points.emplace_back(static_cast<double>(2 * i - 3), static_cast<double>(2 * q - 3));
          c.labels.push_back((kGray4[i] << 2) | kGray4[q]);
        }
      break;
    }
    default:
      throw UnsupportedOrder("make_qam: order must be 4, 8 or 16");
  }
  return finalize(std::move(c), phi);
}

Constellation make_constellation(const std::string& name, double phi) {
  if (name == "qpsk") return make_qam(4, phi);
  if (name == "qam8") return make_qam(8, phi);
  if (name == "qam16") return make_qam(16, phi);
  throw UnsupportedOrder("unknown constellation: " + name);
}

double cpd(const Constellation& c) {
  if (c.size() < 2) throw TooFewPoints("cpd: need at least two points");
  double best = std::numeric_limits<double>::infinity();
  for (int a = 0; a < c.size(); ++a)
    for (int b = a + 1; b < c.size(); ++b) {
      const cxd d = c.points[a] - c.points[b];
      best = std::min(best, std::abs(d.real()) * std::abs(d.imag()));
    }
  return best;
}

cxd bits_to_point(const Constellation& c, std::uint32_t label, int nbits) {
  if (nbits != c.bits) throw BadLabelLength("bits_to_point: label width mismatch");
  if (label >= c.points.size()) throw BadLabelLength("bits_to_point: label out of range");
  return c.points[c.index_by_label[label]];
}

std::uint32_t point_to_bits(const Constellation& c, cxd point) {
  for (int i = 0; i < c.size(); ++i)
    if (std::abs(c.points[i] - point) < 1e-9) return c.labels[i];
  throw NotAMember("point_to_bits: point is not a constellation member");
}

}  // namespace xnet
