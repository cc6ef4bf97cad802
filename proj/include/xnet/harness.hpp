#pragma once

#include <optional>
#include <string>
#include <vector>

#include "xnet/analysis.hpp"
#include "xnet/decoders.hpp"

namespace xnet {

struct SimConfig {
  std::string scheme = "ljj3";         // "ljj3" | "ar" | "ljj2" | "js3"
  std::string constellation = "qpsk";  // "qpsk" | "qam8" | "qam16"
  double rotation_phi = 0.0;
  double theta = 0.0;
  std::vector<double> p_db;
  std::uint64_t target_bit_errors = 200;
  std::uint64_t max_trials_per_point = 2'000'000;
  std::uint64_t seed = 0;
  int workers = 1;

  void validate() const;       // throws ConfigInvalid
  SimConfig normalized() const;  // "ar" pins theta = 0, rotation_phi = 0
};

SimConfig config_from_json(const std::string& text);

struct TrialOutcome {
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
};

/// Everything a trial shares across the Monte-Carlo loop; immutable, so one
/// instance serves any number of concurrent workers.
struct TrialContext {
  SimConfig cfg;
  Constellation constellation;
  LinearDispersionCode code;  // unused by js3
  std::uint64_t bits_per_trial = 0;

  explicit TrialContext(const SimConfig& cfg_in);
};

/// One end-to-end network frame at linear power p_lin: sample a channel,
/// draw all four messages, transmit, receive-process, decode every message,
/// count bit errors against the Gray labels.
TrialOutcome run_trial(const TrialContext& ctx, double p_lin, Rng& rng);

/// Monte-Carlo BER sweep.  Deterministic for a given (config, seed) at any
/// worker count: per-trial streams are derived from the trial index and the
/// early-stop decision is taken on fixed-size batch boundaries.
BerCurve run_ber(const SimConfig& cfg);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

/// suite: cancellation | certificates | rank-search | alignment |
///        decoder-equivalence | all
VerifyReport run_verify(const std::string& suite, int workers = 0);

std::string to_json(const VerifyReport& report);

/// CSV with a comment header (scheme, constellation, theta, phi, seed) and a
/// p_db,trials,bit_errors,ber row per point.  ref_exponent adds a reference
/// column a*P^-d anchored at the last point.
std::string curve_to_csv(const BerCurve& curve, std::optional<double> ref_exponent = {});
void emit_plot_data(const BerCurve& curve, const std::string& path,
                    std::optional<double> ref_exponent = {});
BerCurve curve_from_csv(const std::string& text);

}  // namespace xnet
