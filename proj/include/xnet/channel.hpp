#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "xnet/numerics.hpp"

namespace xnet {

std::uint64_t splitmix64(std::uint64_t x);

/// Deterministic stream: same seed, same draw sequence, on every platform.
/// Gaussian variates come from a hand-rolled Box-Muller over raw mt19937_64
/// output; the std distributions are implementation-defined and would break
/// byte-identical reproducibility across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// uniform in [0, 1)
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  /// standard normal
  double gaussian();

  /// circularly symmetric complex Gaussian CN(0, variance)
  cxd cnormal(double variance);

  /// uniform label of `bits` bits
  std::uint32_t next_bits(int bits) {
    return static_cast<std::uint32_t>(gen_() >> (64 - bits));
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Per-trial stream derivation: master seed xor a mixed trial index.
inline std::uint64_t trial_seed(std::uint64_t master, std::uint64_t trial_index) {
  return master ^ splitmix64(trial_index + 0x9E3779B97F4A7C15ull);
}

/// The four Tx-i -> Rx-j gain matrices of the 2x2 network, each m x m.
struct ChannelRealization {
  int m = 0;
  std::array<std::array<CMat, 2>, 2> h;  // h[i][j], 0-based tx/rx

  const CMat& operator()(int tx, int rx) const { return h[tx][rx]; }
  CMat& operator()(int tx, int rx) { return h[tx][rx]; }
};

/// i.i.d. CN(0,1) entries; resamples internally (max 8 attempts) until every
/// H_ij passes the numeric nonsingularity gate, then throws ChannelDegenerate.
ChannelRealization sample_channel(Rng& rng, int m);

/// rows x cols matrix of i.i.d. CN(0, variance) entries.
CMat awgn(Rng& rng, Eigen::Index rows, Eigen::Index cols, double variance);

}  // namespace xnet
