#pragma once

#include <span>
#include <vector>

#include "xnet/constellation.hpp"
#include "xnet/schemes.hpp"

namespace xnet {

/// Candidate point set for one complex symbol slot.  Labels are optional
/// (decision feedback only needs the points; bit counting needs labels).
struct Alphabet {
  const cxd* pts = nullptr;
  int n = 0;
  const std::uint32_t* labels = nullptr;
};

inline Alphabet alphabet_of(const Constellation& c) {
  return {c.points.data(), c.size(), c.labels.data()};
}

/// Real-valued lift of a complex linear observation model, whitened so every
/// real dimension has unit noise variance.  Generator column 2k holds
/// d(obs)/d Re(s_k), column 2k+1 holds d(obs)/d Im(s_k).
struct RealLinearModel {
  RVec observation;
  RMat generator;
  std::vector<Alphabet> symbol_slots;
  double noise_variance = 1.0;  // per real dimension, after whitening
};

/// Lift of obs = gen * s + n with per-row complex noise variances row_var.
RealLinearModel build_complex_model(const CMat& gen, const CVec& obs,
                                    std::span<const Alphabet> slots,
                                    std::span<const double> row_var);

/// Stacked 24-real-dimension model covering the R- and S-systems jointly:
/// each source symbol feeds its real part to one system and its imaginary
/// part to the other, so the two cannot be decoded separately once the
/// constellation is rotated.  Slot order: tx1 x1..x6, then tx2 x1..x6.
RealLinearModel build_real_model(const CMat& r, const CMat& s, const Constellation& c,
                                 double scale, const CVec& z_r, const CVec& z_s,
                                 std::span<const double, 6> var_r,
                                 std::span<const double, 6> var_s);

/// Symbol-by-symbol recovery: invert R and S, reassemble source symbols from
/// the p-components.  Returns the 12 estimates (tx1 then tx2).  Throws
/// ChannelDegenerate when either matrix is below the rank tolerance.
std::pair<CVec, CVec> zf_decode(const CMat& r, const CMat& s, const CVec& z_r,
                                const CVec& z_s, double scale);

struct Decision {
  std::vector<int> point_index;  // per symbol slot
  double metric = 0.0;
};

/// Exact argmin by exhaustive enumeration; guard at 2^20 hypotheses.
/// Ties break toward the lexicographically smallest index tuple.
Decision ml_enumerate(const RealLinearModel& model);

/// Depth-first Schnorr-Euchner search over per-symbol constellation points;
/// exact ML with the same metric accumulation and tie-break as ml_enumerate.
Decision sphere_decode(const RealLinearModel& model);

}  // namespace xnet
