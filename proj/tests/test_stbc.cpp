#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "xnet/channel.hpp"
#include "xnet/schemes.hpp"
#include "xnet/stbc.hpp"

using namespace xnet;

namespace {

CVec unit_symbol(int l, int k, cxd v) {
  CVec s = CVec::Zero(l);
  s(k) = v;
  return s;
}

}  // namespace

TEST_CASE("3-antenna code entry layout") {
  const double theta = 0.7;
  const LinearDispersionCode code = proposed_3tx_code(theta);
  CHECK(code.m == 3);
  CHECK(code.t_prime == 4);
  CHECK(code.l == 6);

  CHECK(encode(code, CVec::Zero(6)).norm() == 0.0);

  const CMat x1 = encode(code, unit_symbol(6, 0, 1.0));
  CHECK(std::abs(x1(0, 0) - cxd{1, 0}) < 1e-15);
  CHECK(std::abs(x1(1, 1) - cxd{1, 0}) < 1e-15);
  CHECK(x1.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const CMat x5 = encode(code, unit_symbol(6, 4, cxd{0, 1}));
  const cxd want = cxd{0, 1} * std::polar(1.0, theta);
  CHECK(std::abs(x5(2, 0) - want) < 1e-15);
  CHECK(std::abs(x5(2, 1) - want) < 1e-15);
  CHECK(x5.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("4-antenna code entry layout") {
  const LinearDispersionCode code = sr_4tx_code(0.9);
  CHECK(code.m == 4);
  CHECK(code.t_prime == 4);
  CHECK(code.l == 8);
  CHECK(encode(code, CVec::Zero(8)).norm() == 0.0);

  const CMat x1 = encode(code, unit_symbol(8, 0, 1.0));
  CHECK(std::abs(x1(0, 0) - cxd{1, 0}) < 1e-15);
  CHECK(std::abs(x1(1, 1) - cxd{1, 0}) < 1e-15);
  CHECK(std::abs(x1(2, 2)) == 0.0);
  CHECK(std::abs(x1(2, 3)) == 0.0);
}

TEST_CASE("alamouti layout and orthogonality") {
  const LinearDispersionCode code = alamouti_code();
  CVec s(2);
  s << cxd{1, 0}, cxd{0, 0};
  CHECK((encode(code, s) - CMat::Identity(2, 2)).norm() == 0.0);

  s << cxd{0, 1}, cxd{1, 0};
  CMat want(2, 2);
  want << cxd{0, 1}, cxd{-1, 0}, cxd{1, 0}, cxd{0, -1};
  CHECK((encode(code, s) - want).norm() == 0.0);

  Rng rng(1);
  for (int it = 0; it < 100; ++it) {
    CVec r(2);
    r << rng.cnormal(1.0), rng.cnormal(1.0);
    const CMat x = encode(code, r);
    const double e = std::norm(r(0)) + std::norm(r(1));
    CHECK((x * x.adjoint() - e * CMat::Identity(2, 2)).norm() < 1e-12);
  }
}

TEST_CASE("column cancellation verifier") {
  for (double theta : {0.0, std::numbers::pi / 4, 1.234})
    CHECK(verify_column_cancellation(proposed_3tx_code(theta)).pass);
  CHECK(verify_column_cancellation(sr_4tx_code(std::numbers::pi / 4)).pass);
  Rng rng(2);
  for (int it = 0; it < 10; ++it) {
    const double theta = rng.uniform() * 2.0 * std::numbers::pi;
    CHECK(verify_column_cancellation(sr_4tx_code(theta)).pass);
  }
  CHECK(verify_column_cancellation(alamouti_code()).pass);

  LinearDispersionCode bad = proposed_3tx_code(0.4);
  bad.a_re[0](0, 0) = -bad.a_re[0](0, 0);
  const CancellationVerdict v = verify_column_cancellation(bad);
  CHECK(!v.pass);
  CHECK(v.dispersion_index == 0);
  CHECK(v.column == 0);
  CHECK(v.row == 0);
}

TEST_CASE("all built-in maps are unit modulus") {
  for (const auto& code :
       {proposed_3tx_code(1.1), sr_4tx_code(0.3), alamouti_code()}) {
    for (double s2 : code.sigma_sq) CHECK(s2 == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("zero-column interleaving") {
  Rng rng(3);
  CMat x(3, 4);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 4; ++c) x(r, c) = rng.cnormal(1.0);

  const CMat y1 = interleave_zero_columns(x, RxSide::rx1);
  CHECK(y1.cols() == 6);
  CHECK(y1.col(2).norm() == 0.0);
  CHECK(y1.col(5).norm() == 0.0);
  const int data1[] = {0, 1, 3, 4};
  for (int k = 0; k < 4; ++k) CHECK((y1.col(data1[k]) - x.col(k)).norm() == 0.0);

  const CMat y2 = interleave_zero_columns(x, RxSide::rx2);
  CHECK(y2.col(0).norm() == 0.0);
  CHECK(y2.col(3).norm() == 0.0);
  const int data2[] = {1, 2, 4, 5};
  for (int k = 0; k < 4; ++k) CHECK((y2.col(data2[k]) - x.col(k)).norm() == 0.0);
}

TEST_CASE("difference matrices") {
  const double theta = 0.6;
  const LinearDispersionCode code = proposed_3tx_code(theta);
  Rng rng(4);
  CVec s1(6), s2(6);
  for (int k = 0; k < 6; ++k) {
    s1(k) = rng.cnormal(1.0);
    s2(k) = rng.cnormal(1.0);
  }
  const Codeword c1 = make_codeword(code, s1), c2 = make_codeword(code, s2);
  CHECK(difference_matrix(c1, c1).norm() == 0.0);
  CHECK((difference_matrix(c1, c2) - encode(code, (s1 - s2).eval())).norm() < 1e-12);

  // single differing symbol: real part on the diagonal pair, imaginary part
  // in the rotated fourth column and in the third-row block
  const cxd delta{0.8, -0.5};
  const CMat d = difference_matrix(make_codeword(code, (s2 + unit_symbol(6, 0, delta)).eval()),
                                   make_codeword(code, s2));
  CHECK(std::abs(d(0, 0) - cxd{delta.real(), 0}) < 1e-12);
  CHECK(std::abs(d(1, 1) - cxd{delta.real(), 0}) < 1e-12);
  CHECK(std::abs(d(0, 3) - std::polar(1.0, theta) * cxd{0, delta.imag()}) < 1e-12);
  CHECK(std::abs(d(2, 2) - cxd{0, delta.imag()}) < 1e-12);

  const Codeword other = make_codeword(alamouti_code(), (CVec(2) << 1.0, 1.0).finished());
  CHECK_THROWS_AS(difference_matrix(c1, other), CodeMismatch);
}

TEST_CASE("alamouti differences are always full rank") {
  const LinearDispersionCode code = alamouti_code();
  Rng rng(5);
  for (int it = 0; it < 200; ++it) {
    CVec d(2);
    d << rng.cnormal(1.0), rng.cnormal(1.0);
    const CMat x = encode(code, d);
    CHECK(numeric_rank(x) == 2);
    const double det2 = std::norm(x.determinant());
    const double want = std::pow(std::norm(d(0)) + std::norm(d(1)), 2);
    CHECK(det2 == doctest::Approx(want).epsilon(1e-10));
  }
}

TEST_CASE("post-cancellation noise variance doubles on cleaned slots") {
  const LinearDispersionCode code = proposed_3tx_code(0.77);
  Rng rng(6);
  const int n = 20000;
  std::array<double, 4> acc{};
  for (int it = 0; it < n; ++it) {
    const CMat y = receive_cancel_rx1(awgn(rng, 3, 6, 1.0), code);
    for (int c = 0; c < 4; ++c) acc[c] += y.col(c).squaredNorm() / 3.0;
  }
  CHECK(acc[0] / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(acc[1] / n == doctest::Approx(2.0).epsilon(0.05));
  CHECK(acc[2] / n == doctest::Approx(1.0).epsilon(0.05));
  CHECK(acc[3] / n == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("throughput accounting") {
  const LinearDispersionCode code = proposed_3tx_code(0.1);
  CHECK(2.0 * code.l / code.t_prime == doctest::Approx(3.0).epsilon(1e-15));  // cspcu * 2
  const CMat framed = interleave_zero_columns(encode(code, CVec::Ones(6)), RxSide::rx1);
  CHECK(framed.cols() == 6);  // 6 symbols per destination over 6 slots
}
