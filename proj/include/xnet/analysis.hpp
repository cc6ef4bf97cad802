#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "xnet/constellation.hpp"
#include "xnet/stbc.hpp"

namespace xnet {

struct RankSearchOptions {
  double rel_tol = kRankRelTol;
  std::uint64_t max_vectors = 100'000'000;  // guard on the dedup'd difference space
  int workers = 0;                          // 0 = all hardware threads
  std::size_t max_failures_recorded = 16;
};

struct RankFailure {
  CVec delta;
  Eigen::Index rank;
};

struct RankSearchReport {
  std::string code_name;
  std::string constellation_name;
  double theta = 0.0;
  std::uint64_t vectors_checked = 0;
  std::uint64_t failure_count = 0;
  double min_min_singular_value = std::numeric_limits<double>::infinity();
  std::vector<RankFailure> failures;  // first few, by enumeration order

  bool pass() const { return failure_count == 0; }
};

/// Exhaustive full-rank census of the nonzero difference matrices: by
/// linearity it enumerates distinct symbol-difference vectors (with +/- sign
/// dedup) instead of codeword pairs.  Throws SearchSpaceTooLarge past the guard.
RankSearchReport rank_search(const LinearDispersionCode& code, const Constellation& c,
                             const RankSearchOptions& opt = {});

enum class DeltaCase { kBothZero = 1, kFirstNonzero = 2, kSecondNonzero = 3, kBothNonzero = 4 };

struct CaseAudit {
  DeltaCase label;
  bool rank3_for_all_theta;  // guaranteed by the theta-independent determinant
};

/// Classifies a nonzero 6-symbol difference vector by which of the
/// (dx1_re, dx3_re) and (dx5_re, dx6_re) pairs vanish.  Requires a
/// nonzero-CPD alphabet so a component's real and imaginary parts vanish
/// together; throws CpdZeroConstellation when the input violates that.
CaseAudit case_split_audit(const CVec& delta);

struct CertificateReport {
  double theta = 0.0;
  cxd det_r;
  cxd det_s;
  cxd expected_s;
  bool pass_r = false;
  bool pass_s = false;
  bool pass() const { return pass_r && pass_s; }
};

/// Determinant witnesses for the effective R and S systems on fixed channel
/// assignments: det(R) = -2 and det(S) = 3(3 - e^{j theta}), both independent
/// of theta up to the stated closed form.  Throws CertificateFailed with the
/// computed values when either misses by more than 1e-9.
CertificateReport appendix_c_certificates(double theta);

/// Convenience sweep over a uniform theta grid.
std::vector<CertificateReport> certify_grid(int grid_points);

struct BerPoint {
  double p_db = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t bit_errors = 0;
  double ber = 0.0;
};

struct BerCurve {
  std::string scheme;
  std::string constellation;
  double theta = 0.0;
  double phi = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t bits_per_trial = 0;
  std::vector<BerPoint> points;  // ascending p_db
};

/// Least-squares slope of log10(BER) against p_db/10 over the last
/// tail_points entries, negated so a P^-d law returns d.
double diversity_slope(const BerCurve& curve, int tail_points);

}  // namespace xnet
