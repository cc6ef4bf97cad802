#include "xnet/analysis.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>

#include "xnet/schemes.hpp"

namespace xnet {

namespace {

// Distinct pairwise differences of the constellation points, zero first.
// Exact duplicates collapse within a small absolute tolerance (grid spacing
// is O(1), so the gap is wide).
std::vector<cxd> difference_alphabet(const Constellation& c) {
  std::vector<cxd> diffs{cxd{0.0, 0.0}};
  for (int a = 0; a < c.size(); ++a)
    for (int b = 0; b < c.size(); ++b) {
      if (a == b) continue;
      const cxd d = c.points[a] - c.points[b];
      bool seen = false;
      for (const cxd& e : diffs)
        if (std::abs(d - e) < 1e-9) {
          seen = true;
          break;
        }
      if (!seen) diffs.push_back(d);
    }
  return diffs;
}

bool canonical_sign(cxd d) {
  if (d.real() > 1e-12) return true;
  if (d.real() < -1e-12) return false;
  return d.imag() > 0.0;
}

void decode_tuple(std::uint64_t index, int base, int l, int* out) {
  for (int k = l - 1; k >= 0; --k) {
    out[k] = static_cast<int>(index % base);
    index /= base;
  }
}

}  // namespace

RankSearchReport rank_search(const LinearDispersionCode& code, const Constellation& c,
                             const RankSearchOptions& opt) {
  const std::vector<cxd> diffs = difference_alphabet(c);
  const int base = static_cast<int>(diffs.size());
  const int l = code.l;

  if (std::pow(static_cast<double>(base), l) / 2.0 > static_cast<double>(opt.max_vectors))
    throw SearchSpaceTooLarge("rank_search: difference space exceeds guard");
  std::uint64_t space = 1;
  for (int k = 0; k < l; ++k) space *= static_cast<std::uint64_t>(base);

  std::vector<bool> canon(base);
  for (int i = 0; i < base; ++i) canon[i] = canonical_sign(diffs[i]);

  RankSearchReport report;
  report.code_name = code.name;
  report.constellation_name = c.name;
  report.theta = code.theta;

  const int nthreads = opt.workers > 0 ? opt.workers : omp_get_max_threads();
  std::vector<double> local_min(nthreads, std::numeric_limits<double>::infinity());
  std::vector<std::uint64_t> local_checked(nthreads, 0), local_failed(nthreads, 0);
  std::vector<std::vector<std::pair<std::uint64_t, Eigen::Index>>> local_failures(nthreads);

  const auto run_range = [&](int tid, std::uint64_t begin, std::uint64_t end) {
    std::vector<int> tuple(l);
    CVec delta(l);
    CMat dmat(code.m, code.t_prime);
    Eigen::JacobiSVD<CMat> dec;
    for (std::uint64_t idx = begin; idx < end; ++idx) {
      decode_tuple(idx, base, l, tuple.data());
      int first = -1;
      for (int k = 0; k < l; ++k)
        if (tuple[k] != 0) {
          first = k;
          break;
        }
      if (first < 0 || !canon[tuple[first]]) continue;  // zero vector or mirror image
      for (int k = 0; k < l; ++k) delta(k) = diffs[tuple[k]];
      encode_into(code, delta, dmat);
      dec.compute(dmat);
      const RVec& s = dec.singularValues();
      const double smin = s(s.size() - 1), smax = s(0);
      ++local_checked[tid];
      local_min[tid] = std::min(local_min[tid], smin);
      if (smin <= opt.rel_tol * smax) {
        ++local_failed[tid];
        if (local_failures[tid].size() < opt.max_failures_recorded) {
          Eigen::Index rank = 0;
          for (Eigen::Index i = 0; i < s.size(); ++i)
            if (s(i) > opt.rel_tol * smax) ++rank;
          local_failures[tid].emplace_back(idx, rank);
        }
      }
    }
  };

  if (nthreads <= 1) {
    run_range(0, 0, space);  // serial reference path
  } else {
#pragma omp parallel num_threads(nthreads)
    {
      const int tid = omp_get_thread_num();
      const int nt = omp_get_num_threads();
      const std::uint64_t chunk = (space + nt - 1) / nt;
      const std::uint64_t begin = chunk * static_cast<std::uint64_t>(tid);
      const std::uint64_t end = std::min(space, begin + chunk);
      if (begin < end) run_range(tid, begin, end);
    }
  }

  std::vector<std::pair<std::uint64_t, Eigen::Index>> merged;
  for (int t = 0; t < nthreads; ++t) {
    report.vectors_checked += local_checked[t];
    report.failure_count += local_failed[t];
    report.min_min_singular_value = std::min(report.min_min_singular_value, local_min[t]);
    merged.insert(merged.end(), local_failures[t].begin(), local_failures[t].end());
  }
  std::sort(merged.begin(), merged.end());
  if (merged.size() > opt.max_failures_recorded) merged.resize(opt.max_failures_recorded);
  std::vector<int> tuple(l);
  for (const auto& [idx, rank] : merged) {
    decode_tuple(idx, base, l, tuple.data());
    CVec delta(l);
    for (int k = 0; k < l; ++k) delta(k) = diffs[tuple[k]];
    report.failures.push_back({std::move(delta), rank});
  }
  return report;
}

CaseAudit case_split_audit(const CVec& delta) {
  if (delta.size() != 6) throw DimensionMismatch("case_split_audit: expected 6 components");
  if (delta.isZero(0.0)) throw DimensionMismatch("case_split_audit: zero difference");
  constexpr double tol = 1e-12;
  for (Eigen::Index k = 0; k < 6; ++k) {
    const bool re0 = std::abs(delta(k).real()) <= tol;
    const bool im0 = std::abs(delta(k).imag()) <= tol;
    if (re0 != im0)
      throw CpdZeroConstellation(
          "case_split_audit: component with one vanishing coordinate implies zero CPD");
  }
  const bool first_zero =
      std::abs(delta(0).real()) <= tol && std::abs(delta(2).real()) <= tol;
  const bool second_zero =
      std::abs(delta(4).real()) <= tol && std::abs(delta(5).real()) <= tol;
  if (first_zero && second_zero) return {DeltaCase::kBothZero, true};
  if (!first_zero && second_zero) return {DeltaCase::kFirstNonzero, true};
  if (first_zero && !second_zero) return {DeltaCase::kSecondNonzero, false};
  return {DeltaCase::kBothNonzero, false};
}

CertificateReport appendix_c_certificates(double theta) {
  const cxd e = std::polar(1.0, theta);
  CertificateReport rep;
  rep.theta = theta;

  CMat h_r(3, 3), g_r(3, 3);
  h_r << 1, 0, 0, 0, 1, 1, 1, 0, 1;
  g_r << 0, 0, 0, 1, 0, 0, 1, -std::polar(1.0, 2.0 * theta), 1;
  rep.det_r = build_effective_r(h_r, g_r, theta).determinant();
  rep.pass_r = std::abs(rep.det_r - cxd{-2.0, 0.0}) <= 1e-9;

  // Witness realizing det(S) = 3(3 - e^{j theta}) for every theta: a cyclic
  // antenna permutation against a diagonal partner with one theta-dependent
  // gain.  (No theta-independent det exists for S; this one never vanishes.)
  CMat h_s = CMat::Zero(3, 3), g_s = CMat::Zero(3, 3);
  h_s(0, 2) = 1;
  h_s(1, 0) = 1;
  h_s(2, 1) = 1;
  g_s(1, 1) = 1;
  g_s(2, 2) = 3.0 - e;
  rep.det_s = build_effective_s(h_s, g_s, theta).determinant();
  rep.expected_s = 3.0 * (3.0 - e);
  rep.pass_s = std::abs(rep.det_s - rep.expected_s) <= 1e-9;

  if (!rep.pass()) {
    std::ostringstream msg;
    msg << "appendix_c_certificates: theta=" << theta << " det_r=" << rep.det_r
        << " (want -2), det_s=" << rep.det_s << " (want " << rep.expected_s << ")";
    throw CertificateFailed(msg.str());
  }
  return rep;
}

std::vector<CertificateReport> certify_grid(int grid_points) {
  std::vector<CertificateReport> out;
  out.reserve(grid_points);
  for (int k = 0; k < grid_points; ++k)
    out.push_back(appendix_c_certificates(2.0 * std::numbers::pi * k / grid_points));
  return out;
}

double diversity_slope(const BerCurve& curve, int tail_points) {
  if (tail_points < 2) throw InsufficientData("diversity_slope: need at least 2 tail points");
  if (static_cast<int>(curve.points.size()) < tail_points)
    throw InsufficientData("diversity_slope: curve shorter than requested tail");
  const int n = static_cast<int>(curve.points.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = n - tail_points; i < n; ++i) {
    const BerPoint& pt = curve.points[i];
    if (pt.ber <= 0.0) throw ZeroBerInTail("diversity_slope: zero BER in fit window");
    const double x = pt.p_db / 10.0;
    const double y = std::log10(pt.ber);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = tail_points;
  return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace xnet
