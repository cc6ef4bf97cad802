#include "xnet/channel.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/SVD>

namespace xnet {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log1p(-u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

cxd Rng::cnormal(double variance) {
  const double s = std::sqrt(variance / 2.0);
  return {s * gaussian(), s * gaussian()};
}

namespace {

bool numerically_nonsingular(const CMat& a) {
  Eigen::JacobiSVD<CMat> dec(a);
  const RVec& s = dec.singularValues();
  return s(0) > 0.0 && s(s.size() - 1) > kSingularityRelTol * s(0);
}

}  // namespace

ChannelRealization sample_channel(Rng& rng, int m) {
  if (m < 1) throw DimensionMismatch("sample_channel: m must be >= 1");
  for (int attempt = 0; attempt < 8; ++attempt) {
    ChannelRealization ch;
    ch.m = m;
    bool ok = true;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        CMat h(m, m);
        for (Eigen::Index r = 0; r < m; ++r)
          for (Eigen::Index c = 0; c < m; ++c) h(r, c) = rng.cnormal(1.0);
        ch.h[i][j] = std::move(h);
      }
    for (int i = 0; i < 2 && ok; ++i)
      for (int j = 0; j < 2 && ok; ++j) ok = numerically_nonsingular(ch.h[i][j]);
    if (ok) return ch;
  }
  throw ChannelDegenerate("sample_channel: 8 consecutive singular draws");
}

CMat awgn(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance) {
  if (variance <= 0.0) throw ConfigInvalid("awgn: variance must be positive");
  CMat n(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) n(r, c) = rng.cnormal(variance);
  return n;
}

}  // namespace xnet
