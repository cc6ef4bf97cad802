// End-to-end acceptance gate.  Runs every criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion; exits nonzero on any failure.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "xnet/harness.hpp"

using namespace xnet;
using clk = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* text, bool pass, const std::string& detail, clk::time_point t0) {
  const double dt = std::chrono::duration<double>(clk::now() - t0).count();
  std::printf("%s [%2d] %-58s (%7.2f s)%s%s\n", pass ? "PASS" : "FAIL", id, text, dt,
              detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

const double kPhiStar = std::atan(2.0) / 2.0;
const double kQuarterPi = std::numbers::pi / 4;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), f, a, b, c, d);
  return buf;
}

void criterion_1_cancellation_verifier() {
  const auto t0 = clk::now();
  bool pass = true;
  for (int k = 0; k < 16; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / 16;
    pass = pass && verify_column_cancellation(proposed_3tx_code(theta)).pass;
    pass = pass && verify_column_cancellation(sr_4tx_code(theta)).pass;
  }
  LinearDispersionCode bad = proposed_3tx_code(kQuarterPi);
  bad.a_re[0](0, 0) = -bad.a_re[0](0, 0);
  pass = pass && !verify_column_cancellation(bad).pass;
  report(1, "column-cancellation verifier (16 thetas + mutant)", pass, "", t0);
}

void criterion_2_interference_nulling() {
  const auto t0 = clk::now();
  Rng rng(1002);
  const double theta = kQuarterPi, p_lin = std::pow(10.0, 1.8);
  const LinearDispersionCode code3 = proposed_3tx_code(theta);
  const LinearDispersionCode code2 = alamouti_code();
  const Constellation c = make_qam(4, kPhiStar);
  const RMat f = ljj2_zero_forcer();
  const double scale = std::sqrt(kLjjPowerShare * p_lin);
  double null3 = 0, match3 = 0, null2 = 0, match2 = 0;

  auto symbols = [&](int n) {
    CVec s(n);
    for (int k = 0; k < n; ++k) s(k) = c.points[static_cast<int>(rng.next_bits(2))];
    return s;
  };

  for (int it = 0; it < 1000; ++it) {
    {
      const ChannelRealization ch = sample_channel(rng, 3);
      const Precoders v = ljj_precoders(ch);
      const CVec s11 = symbols(6), s12 = symbols(6), s21 = symbols(6), s22 = symbols(6);
      const CMat zero = CMat::Zero(3, 4);
      auto [xi1, xi2] = ljj_transmit(v, zero, encode(code3, s12), zero, encode(code3, s22));
      null3 = std::max(null3, receive_cancel_rx1(
                                  (std::sqrt(p_lin) * (ch(0, 0) * xi1 + ch(1, 0) * xi2)).eval(),
                                  code3)
                                  .norm());
      auto [xj1, xj2] = ljj_transmit(v, encode(code3, s11), zero, encode(code3, s21), zero);
      null3 = std::max(null3, receive_cancel_rx2(
                                  (std::sqrt(p_lin) * (ch(0, 1) * xj1 + ch(1, 1) * xj2)).eval(),
                                  code3)
                                  .norm());
      auto [x1, x2] = ljj_transmit(v, encode(code3, s11), encode(code3, s12),
                                   encode(code3, s21), encode(code3, s22));
      const CMat want1 =
          scale * (ch(0, 0) * v.v11 * encode(code3, s11) + ch(1, 0) * v.v21 * encode(code3, s21));
      match3 = std::max(
          match3, (receive_cancel_rx1(
                       (std::sqrt(p_lin) * (ch(0, 0) * x1 + ch(1, 0) * x2)).eval(), code3) -
                   want1)
                      .norm());
      const CMat want2 =
          scale * (ch(0, 1) * v.v12 * encode(code3, s12) + ch(1, 1) * v.v22 * encode(code3, s22));
      match3 = std::max(
          match3, (receive_cancel_rx2(
                       (std::sqrt(p_lin) * (ch(0, 1) * x1 + ch(1, 1) * x2)).eval(), code3) -
                   want2)
                      .norm());
    }
    {
      const ChannelRealization ch = sample_channel(rng, 2);
      const Precoders v = ljj_precoders(ch);
      const CVec s11 = symbols(2), s12 = symbols(2), s21 = symbols(2), s22 = symbols(2);
      const CMat zero = CMat::Zero(2, 2);
      auto [xi1, xi2] = ljj_transmit(v, zero, encode(code2, s12), zero, encode(code2, s22));
      null2 = std::max(
          null2, (f.cast<cxd>() *
                  ljj2_y_double_prime(
                      (std::sqrt(p_lin) * (ch(0, 0) * xi1 + ch(1, 0) * xi2)).eval()))
                     .norm());
      auto [x1, x2] = ljj_transmit(v, encode(code2, s11), encode(code2, s12),
                                   encode(code2, s21), encode(code2, s22));
      const CMat r2 = build_effective_r2(ch(0, 0) * v.v11, ch(1, 0) * v.v21);
      CVec sym(4);
      sym << s11, s21;
      match2 = std::max(
          match2, (f.cast<cxd>() *
                       ljj2_y_double_prime(
                           (std::sqrt(p_lin) * (ch(0, 0) * x1 + ch(1, 0) * x2)).eval()) -
                   scale * r2 * sym)
                      .norm());
    }
  }
  const bool pass = null3 <= 1e-10 && match3 <= 1e-9 && null2 <= 1e-10 && match2 <= 1e-9;
  report(2, "exact interference nulling (1e3 draws, both schemes)", pass,
         fmt("residuals: null3 %.2e match3 %.2e null2 %.2e match2 %.2e", null3, match3, null2,
             match2),
         t0);
}

void criterion_3_certificates() {
  const auto t0 = clk::now();
  double worst_r = 0, worst_s = 0;
  bool pass = true;
  std::string detail;
  try {
    for (const CertificateReport& rep : certify_grid(64)) {
      worst_r = std::max(worst_r, std::abs(rep.det_r - cxd{-2.0, 0.0}));
      worst_s = std::max(worst_s, std::abs(rep.det_s - rep.expected_s));
    }
    detail = fmt("max |det_r+2| %.2e, max |det_s-3(3-e^{jt})| %.2e", worst_r, worst_s);
  } catch (const CertificateFailed& e) {
    pass = false;
    detail = e.what();
  }
  report(3, "determinant certificates on a 64-point theta grid", pass, detail, t0);
}

void criterion_4_dof_property() {
  const auto t0 = clk::now();
  Rng rng(1004);
  const Constellation c = make_qam(4, kPhiStar);
  const double p_lin = std::pow(10.0, 1.2);
  bool pass = true;
  double worst = 0.0;
  for (double theta : {0.0, kQuarterPi, 2.0}) {
    const LinearDispersionCode code = proposed_3tx_code(theta);
    for (int it = 0; it < 1000 && pass; ++it) {
      const ChannelRealization ch = sample_channel(rng, 3);
      const Precoders v = ljj_precoders(ch);
      const auto [r, s] = ljj3_effective_matrices(ch, theta);
      if (numeric_rank(r) < 6 || numeric_rank(s) < 6) {
        pass = false;
        break;
      }
      CVec s11(6), s21(6);
      for (int k = 0; k < 6; ++k) {
        s11(k) = c.points[static_cast<int>(rng.next_bits(2))];
        s21(k) = c.points[static_cast<int>(rng.next_bits(2))];
      }
      auto [x1, x2] = ljj_transmit(v, encode(code, s11), CMat::Zero(3, 4), encode(code, s21),
                                   CMat::Zero(3, 4));
      const CMat y1 = std::sqrt(p_lin) * (ch(0, 0) * x1 + ch(1, 0) * x2);
      const auto [zr, zs] = vectorize_processed(receive_cancel_rx1(y1, code), theta);
      const auto [x1_hat, x2_hat] =
          zf_decode(r, s, zr, zs, std::sqrt(kLjjPowerShare * p_lin));
      const double err = std::max((x1_hat - s11).norm(), (x2_hat - s21).norm());
      worst = std::max(worst, err);
      pass = pass && err < 1e-8;
    }
  }
  report(4, "symbol-by-symbol zero-forcing over 3e3 channels x 3 thetas", pass,
         fmt("worst recovery error %.2e", worst), t0);
}

void criterion_5_rank_search() {
  const auto t0 = clk::now();
  RankSearchOptions opt;
  opt.workers = omp_get_max_threads();
  const RankSearchReport good = rank_search(proposed_3tx_code(kQuarterPi), make_qam(4, kPhiStar), opt);
  const RankSearchReport ar = rank_search(proposed_3tx_code(0.0), make_qam(4, 0.0), opt);
  const bool pass = good.pass() && good.vectors_checked == 265720ull && ar.failure_count > 0;
  report(5, "exhaustive difference-matrix rank search (QPSK)", pass,
         fmt("rotated: min sigma %.3e over %.0f vectors; unrotated: %.0f deficient",
             good.min_min_singular_value, static_cast<double>(good.vectors_checked),
             static_cast<double>(ar.failure_count)),
         t0);
}

void criterion_6_cpd() {
  const auto t0 = clk::now();
  const double zero = cpd(make_qam(4, 0.0));
  const Constellation rotated = make_qam(4, kPhiStar);
  const double v = cpd(rotated);
  double oracle = 1e300;  // direct 6-pair enumeration
  for (int a = 0; a < 4; ++a)
    for (int b = a + 1; b < 4; ++b)
      oracle = std::min(oracle, std::abs(rotated.points[a].real() - rotated.points[b].real()) *
                                    std::abs(rotated.points[a].imag() - rotated.points[b].imag()));
  const bool pass = zero == 0.0 && v > 0.0 && std::abs(v - oracle) <= 1e-12;
  report(6, "coordinate product distance (axis-aligned vs rotated QPSK)", pass,
         fmt("cpd(phi=0)=%.1f cpd(phi*)=%.12f", zero, v), t0);
}

void criterion_7_decoder_equivalence() {
  const auto t0 = clk::now();
  Rng rng(1007);
  const Constellation c = make_qam(4, kPhiStar);
  const std::array<Alphabet, 4> slots{alphabet_of(c), alphabet_of(c), alphabet_of(c),
                                      alphabet_of(c)};
  const std::array<double, 4> var{1, 1, 1, 1};
  int match = 0;
  const int n = 1000;
  for (int it = 0; it < n; ++it) {
    CMat gen(4, 4);
    do {
      for (int r = 0; r < 4; ++r)
        for (int cc = 0; cc < 4; ++cc) gen(r, cc) = rng.cnormal(1.0);
    } while (numeric_rank(gen, 1e-3) < 4);
    CVec s(4);
    for (int k = 0; k < 4; ++k) s(k) = c.points[static_cast<int>(rng.next_bits(2))];
    CVec y = 2.0 * gen * s;
    for (int k = 0; k < 4; ++k) y(k) += rng.cnormal(it % 4 == 3 ? 6.0 : 0.3);
    const RealLinearModel model = build_complex_model((2.0 * gen).eval(), y, slots, var);
    const Decision a = sphere_decode(model);
    const Decision b = ml_enumerate(model);
    if (a.point_index == b.point_index && a.metric == b.metric) ++match;
  }
  report(7, "sphere decoder == exhaustive ML on 1e3 noisy trials", match == n,
         fmt("%.0f/1000 identical decisions and metrics", static_cast<double>(match)), t0);
}

void criterion_8_alignment() {
  const auto t0 = clk::now();
  Rng rng(1008);
  double worst = 0.0;
  int rank_ok = 0, tested = 0;
  for (int it = 0; it < 1000; ++it) {
    const ChannelRealization ch = sample_channel(rng, 3);
    JsPrecoders v;
    try {
      v = js3_precoders(ch);
    } catch (const Error&) {
      continue;
    }
    ++tested;
    const CMat h11 = extend3(ch(0, 0)), h12 = extend3(ch(0, 1));
    const CMat h21 = extend3(ch(1, 0)), h22 = extend3(ch(1, 1));
    worst = std::max(worst, (h22 * v.v21 - h12 * v.v11).norm());
    worst = std::max(worst, (h21 * v.v22 - h11 * v.v12).norm());
    CMat interf(9, 6);
    interf << h11 * v.v12 / v.v12.norm(), h21 * v.v22 / v.v22.norm();
    if (numeric_rank(interf) == 3) ++rank_ok;
  }
  const bool pass = worst <= 1e-8 && rank_ok == tested && tested >= 998;
  report(8, "interference alignment identities + rank-3 subspace", pass,
         fmt("max residual %.2e, rank-3 in %.0f/%.0f", worst, static_cast<double>(rank_ok),
             static_cast<double>(tested)),
         t0);
}

void criterion_9_ber() {
  const auto t0 = clk::now();
  SimConfig cfg;
  cfg.scheme = "ljj3";
  cfg.constellation = "qpsk";
  cfg.rotation_phi = kPhiStar;
  cfg.theta = kQuarterPi;
  cfg.p_db = {16.0, 20.0, 24.0, 28.0};
  cfg.target_bit_errors = 200;
  cfg.max_trials_per_point = 5'000'000;
  cfg.seed = 2024;
  cfg.workers = omp_get_max_threads();
  const BerCurve proposed = run_ber(cfg);
  cfg.scheme = "ar";
  const BerCurve ar = run_ber(cfg);

  const double slope = diversity_slope(proposed, 3);
  const std::size_t n = proposed.points.size();
  const bool beats = proposed.points[n - 1].ber < ar.points[n - 1].ber &&
                     proposed.points[n - 2].ber < ar.points[n - 2].ber;
  const bool pass = slope >= 2.5 && beats;
  report(9, "desk-scale BER: diversity slope and AR comparison", pass,
         fmt("slope %.2f; ber@28dB proposed %.3e vs ar %.3e", slope, proposed.points[3].ber,
             ar.points[3].ber),
         t0);
}

void criterion_10_reproducibility() {
  const auto t0 = clk::now();
  SimConfig cfg;
  cfg.scheme = "ljj3";
  cfg.constellation = "qpsk";
  cfg.rotation_phi = kPhiStar;
  cfg.theta = kQuarterPi;
  cfg.p_db = {12.0, 16.0};
  cfg.target_bit_errors = 120;
  cfg.max_trials_per_point = 30000;
  cfg.seed = 7;
  cfg.workers = 1;
  const std::string serial = curve_to_csv(run_ber(cfg));
  cfg.workers = 8;
  const std::string parallel = curve_to_csv(run_ber(cfg));
  report(10, "byte-identical CSV at worker counts 1 and 8", serial == parallel, "", t0);
}

}  // namespace

int main() {
  std::printf("acceptance suite (%d hardware threads)\n", omp_get_max_threads());
  criterion_1_cancellation_verifier();
  criterion_2_interference_nulling();
  criterion_3_certificates();
  criterion_4_dof_property();
  criterion_5_rank_search();
  criterion_6_cpd();
  criterion_7_decoder_equivalence();
  criterion_8_alignment();
  criterion_9_ber();
  criterion_10_reproducibility();
  std::printf("%s\n", failures == 0 ? "all criteria pass" : "CRITERIA FAILED");
  return failures == 0 ? 0 : 1;
}
