#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <bit>
#include <cmath>

#include "xnet/constellation.hpp"

using namespace xnet;

namespace {

double avg_energy(const Constellation& c) {
  double e = 0.0;
  for (const cxd& p : c.points) e += std::norm(p);
  return e / c.size();
}

std::vector<double> pairwise_distances(const Constellation& c) {
  std::vector<double> d;
  for (int a = 0; a < c.size(); ++a)
    for (int b = a + 1; b < c.size(); ++b) d.push_back(std::abs(c.points[a] - c.points[b]));
  std::sort(d.begin(), d.end());
  return d;
}

// independent pair-enumeration oracle, kept deliberately separate from cpd()
double cpd_oracle(const std::vector<cxd>& pts) {
  double best = 1e300;
  for (std::size_t a = 0; a < pts.size(); ++a)
    for (std::size_t b = 0; b < pts.size(); ++b) {
      if (a == b) continue;
      best = std::min(best, std::abs(pts[a].real() - pts[b].real()) *
                                std::abs(pts[a].imag() - pts[b].imag()));
    }
  return best;
}

}  // namespace

TEST_CASE("qpsk points and label convention") {
  const Constellation c = make_qam(4, 0.0);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(bits_to_point(c, 0b00, 2) - cxd{s, s}) < 1e-15);
  CHECK(std::abs(bits_to_point(c, 0b01, 2) - cxd{-s, s}) < 1e-15);
  CHECK(std::abs(bits_to_point(c, 0b11, 2) - cxd{-s, -s}) < 1e-15);
  CHECK(std::abs(bits_to_point(c, 0b10, 2) - cxd{s, -s}) < 1e-15);
}

TEST_CASE("unit average energy for every family") {
  for (int order : {4, 8, 16})
    for (double phi : {0.0, 0.31, std::atan(2.0) / 2.0})
      CHECK(std::abs(avg_energy(make_qam(order, phi)) - 1.0) <= 1e-12);
}

TEST_CASE("rotation is an isometry") {
  const auto d0 = pairwise_distances(make_qam(4, 0.0));
  const auto d1 = pairwise_distances(make_qam(4, std::atan(2.0) / 2.0));
  REQUIRE(d0.size() == d1.size());
  for (std::size_t k = 0; k < d0.size(); ++k) CHECK(std::abs(d0[k] - d1[k]) < 1e-12);
}

TEST_CASE("gray labels differ in one bit between nearest neighbours") {
  for (int order : {4, 8, 16}) {
    const Constellation c = make_qam(order, 0.0);
    double dmin = 1e300;
    for (int a = 0; a < c.size(); ++a)
      for (int b = a + 1; b < c.size(); ++b)
        dmin = std::min(dmin, std::abs(c.points[a] - c.points[b]));
    for (int a = 0; a < c.size(); ++a)
      for (int b = a + 1; b < c.size(); ++b)
        if (std::abs(c.points[a] - c.points[b]) < dmin * 1.0001)
          CHECK(std::popcount(c.labels[a] ^ c.labels[b]) == 1);
  }
}

TEST_CASE("coordinate product distance") {
  CHECK(cpd(make_qam(4, 0.0)) == 0.0);

  const double phi = std::atan(2.0) / 2.0;
  const Constellation rotated = make_qam(4, phi);
  const double v = cpd(rotated);
  CHECK(v > 0.0);
  CHECK(std::abs(v - cpd_oracle(rotated.points)) <= 1e-12);
  // the maximin angle equalizes the adjacent and diagonal pair products at 2/sqrt(5)
  CHECK(std::abs(v - 2.0 / std::sqrt(5.0)) <= 1e-12);

  Constellation two;
  two.name = "pair";
  two.points = {cxd{1, 1}, cxd{-1, -1}};
  two.labels = {0, 1};
  two.bits = 1;
  CHECK(std::abs(cpd(two) - 4.0) < 1e-15);

  Constellation one;
  one.points = {cxd{1, 0}};
  one.labels = {0};
  CHECK_THROWS_AS(cpd(one), TooFewPoints);
}

TEST_CASE("cpd translation invariance; positive cpd forbids shared coordinates") {
  const double phi = std::atan(2.0) / 2.0;
  Constellation c = make_qam(8, phi);
  const double base = cpd(c);
  Constellation shifted = c;
  for (auto& p : shifted.points) p += cxd{0.37, -1.9};
  CHECK(std::abs(cpd(shifted) - base) <= 1e-12);
  for (int a = 0; a < c.size(); ++a)
    for (int b = a + 1; b < c.size(); ++b) {
      CHECK(std::abs(c.points[a].real() - c.points[b].real()) > 1e-9);
      CHECK(std::abs(c.points[a].imag() - c.points[b].imag()) > 1e-9);
    }
}

TEST_CASE("bit mapping round trip and errors") {
  const Constellation c = make_qam(8, std::atan(2.0) / 2.0);
  for (std::uint32_t label = 0; label < 8; ++label)
    CHECK(point_to_bits(c, bits_to_point(c, label, 3)) == label);
  CHECK_THROWS_AS(bits_to_point(c, 0, 2), BadLabelLength);
  CHECK_THROWS_AS(point_to_bits(c, cxd{5.0, 5.0}), NotAMember);
}

TEST_CASE("normalization is idempotent") {
  const Constellation c = make_qam(16, 0.7);
  double energy = 0.0;
  for (const cxd& p : c.points) energy += std::norm(p);
  const double scale = 1.0 / std::sqrt(energy / c.size());
  for (const cxd& p : c.points) CHECK(std::abs(p * scale - p) <= 1e-12);
}

TEST_CASE("unsupported order") {
  CHECK_THROWS_AS(make_qam(32, 0.0), UnsupportedOrder);
  CHECK_THROWS_AS(make_constellation("qam64", 0.0), UnsupportedOrder);
}
