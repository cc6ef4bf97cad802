// Throughput comparison of the serial reference loops against the OpenMP
// kernels: Monte-Carlo trials/second and rank-search vectors/second.

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <numbers>

#include "xnet/harness.hpp"

using clk = std::chrono::steady_clock;

namespace {

double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

void bench_trials(int workers, std::uint64_t trials) {
  xnet::SimConfig cfg;
  cfg.scheme = "ljj3";
  cfg.constellation = "qpsk";
  cfg.rotation_phi = std::atan(2.0) / 2.0;
  cfg.theta = std::numbers::pi / 4;
  cfg.p_db = {20.0};
  cfg.target_bit_errors = ~0ull >> 1;  // never stop early
  cfg.max_trials_per_point = trials;
  cfg.workers = workers;
  const auto t0 = clk::now();
  const xnet::BerCurve curve = xnet::run_ber(cfg);
  const double dt = seconds_since(t0);
  std::printf("  mc workers=%d: %llu trials in %.3f s  (%.0f trials/s, ber %.3e)\n", workers,
              static_cast<unsigned long long>(curve.points[0].trials), dt,
              static_cast<double>(trials) / dt, curve.points[0].ber);
}

void bench_rank_search(int workers) {
  xnet::RankSearchOptions opt;
  opt.workers = workers;
  const auto t0 = clk::now();
  const xnet::RankSearchReport rep = xnet::rank_search(
      xnet::proposed_3tx_code(std::numbers::pi / 4), xnet::make_qam(4, std::atan(2.0) / 2.0), opt);
  const double dt = seconds_since(t0);
  std::printf("  rank-search workers=%d: %llu vectors in %.3f s  (%.0f vectors/s, pass=%d)\n",
              workers, static_cast<unsigned long long>(rep.vectors_checked), dt,
              static_cast<double>(rep.vectors_checked) / dt, rep.pass() ? 1 : 0);
}

}  // namespace

int main(int argc, char** argv) {
  std::uint64_t trials = 4000;
  if (argc > 1) trials = std::strtoull(argv[1], nullptr, 10);
  const int hw = omp_get_max_threads();

  std::printf("Monte-Carlo trial throughput (3-antenna scheme, QPSK, 20 dB):\n");
  bench_trials(1, trials);
  bench_trials(hw, trials);

  std::printf("difference-matrix rank search (rotated QPSK, theta=pi/4):\n");
  bench_rank_search(1);
  bench_rank_search(hw);
  return 0;
}
