// Command-line front end: Monte-Carlo BER sweeps, verification suites,
// difference-matrix rank searches, slope fits and determinant certificates.
//
// Exit codes: 0 success / all checks pass, 1 check failure, 2 usage error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "xnet/harness.hpp"

namespace {

std::vector<double> parse_pdb(const std::string& list) {
  std::vector<double> out;
  std::istringstream in(list);
  std::string cell;
  while (std::getline(in, cell, ',')) {
    if (!cell.empty()) out.push_back(std::stod(cell));
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw xnet::IoError("cannot open " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw xnet::IoError("cannot open " + path);
  f << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"2x2 X-network space-time coding simulator"};
  app.require_subcommand(1);

  // ---- simulate ----
  auto* sim = app.add_subcommand("simulate", "run a Monte-Carlo BER sweep");
  std::string cfg_path, scheme, constellation, pdb_list, out_path;
  double phi = std::nan(""), theta = std::nan("");
  std::int64_t seed = -1, target = -1, max_trials = -1;
  int workers = -1;
  double ref_exponent = 0.0;
  bool with_ref = false;
  sim->add_option("--config", cfg_path, "JSON config file");
  sim->add_option("--scheme", scheme, "ljj3 | ar | ljj2 | js3");
  sim->add_option("--constellation", constellation, "qpsk | qam8 | qam16");
  sim->add_option("--phi", phi, "constellation rotation (radians)");
  sim->add_option("--theta", theta, "code rotation (radians)");
  sim->add_option("--pdb", pdb_list, "comma-separated P values in dB");
  sim->add_option("--seed", seed, "master seed");
  sim->add_option("--target-errors", target, "bit errors collected per point");
  sim->add_option("--max-trials", max_trials, "trial cap per point");
  sim->add_option("--workers", workers, "worker threads (0 = all cores)");
  sim->add_option("--out", out_path, "output CSV path (default stdout)");
  sim->add_option("--ref-slope", ref_exponent, "emit an a*P^-d reference column")
      ->each([&](const std::string&) { with_ref = true; });

  // ---- verify ----
  auto* ver = app.add_subcommand("verify", "run a verification suite");
  std::string suite = "all";
  int ver_workers = 0;
  std::string ver_out;
  ver->add_option("--suite", suite,
                  "cancellation | certificates | rank-search | alignment | "
                  "decoder-equivalence | all");
  ver->add_option("--workers", ver_workers, "worker threads for the rank search");
  ver->add_option("--out", ver_out, "write the JSON report here as well");

  // ---- rank-search ----
  auto* rs = app.add_subcommand("rank-search", "exhaustive difference-matrix rank census");
  std::string rs_code = "proposed", rs_const = "qpsk", rs_out;
  double rs_phi = std::atan(2.0) / 2.0, rs_theta = std::numbers::pi / 4;
  std::uint64_t rs_guard = 100'000'000;
  int rs_workers = 0;
  rs->add_option("--code", rs_code, "proposed | sr4 | alamouti");
  rs->add_option("--constellation", rs_const, "qpsk | qam8 | qam16");
  rs->add_option("--phi", rs_phi, "constellation rotation (radians)");
  rs->add_option("--theta", rs_theta, "code rotation (radians)");
  rs->add_option("--guard", rs_guard, "difference-vector budget");
  rs->add_option("--workers", rs_workers, "worker threads (0 = all cores)");
  rs->add_option("--out", rs_out, "write the JSON report here as well");

  // ---- slope ----
  auto* sl = app.add_subcommand("slope", "fit the diversity slope of a BER curve");
  std::string sl_in;
  int sl_tail = 3;
  sl->add_option("--in", sl_in, "curve CSV produced by simulate")->required();
  sl->add_option("--tail", sl_tail, "points in the fit window");

  // ---- certify ----
  auto* ce = app.add_subcommand("certify", "determinant certificates over a theta grid");
  int ce_grid = 64;
  ce->add_option("--grid", ce_grid, "grid points in [0, 2pi)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (sim->parsed()) {
      xnet::SimConfig cfg;
      if (!cfg_path.empty()) cfg = xnet::config_from_json(read_file(cfg_path));
      if (!scheme.empty()) cfg.scheme = scheme;
      if (!constellation.empty()) cfg.constellation = constellation;
      if (!std::isnan(phi)) cfg.rotation_phi = phi;
      if (!std::isnan(theta)) cfg.theta = theta;
      if (!pdb_list.empty()) cfg.p_db = parse_pdb(pdb_list);
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (target > 0) cfg.target_bit_errors = static_cast<std::uint64_t>(target);
      if (max_trials > 0) cfg.max_trials_per_point = static_cast<std::uint64_t>(max_trials);
      if (workers >= 0) cfg.workers = workers;
      cfg.normalized().validate();
      const xnet::BerCurve curve = xnet::run_ber(cfg);
      const std::string csv = xnet::curve_to_csv(
          curve, with_ref ? std::optional<double>(ref_exponent) : std::nullopt);
      if (out_path.empty())
        std::cout << csv;
      else
        write_file(out_path, csv);
      return 0;
    }

    if (ver->parsed()) {
      const xnet::VerifyReport rep = xnet::run_verify(suite, ver_workers);
      const std::string text = xnet::to_json(rep);
      std::cout << text << "\n";
      if (!ver_out.empty()) write_file(ver_out, text);
      return rep.all_pass() ? 0 : 1;
    }

    if (rs->parsed()) {
      xnet::LinearDispersionCode code;
      if (rs_code == "proposed")
        code = xnet::proposed_3tx_code(rs_theta);
      else if (rs_code == "sr4")
        code = xnet::sr_4tx_code(rs_theta);
      else if (rs_code == "alamouti")
        code = xnet::alamouti_code();
      else
        throw xnet::ConfigInvalid("unknown code: " + rs_code);
      xnet::RankSearchOptions opt;
      opt.max_vectors = rs_guard;
      opt.workers = rs_workers;
      const xnet::RankSearchReport rep =
          xnet::rank_search(code, xnet::make_constellation(rs_const, rs_phi), opt);
      nlohmann::json j;
      j["code"] = rep.code_name;
      j["constellation"] = rep.constellation_name;
      j["theta"] = rep.theta;
      j["vectors_checked"] = rep.vectors_checked;
      j["failure_count"] = rep.failure_count;
      j["min_min_singular_value"] = rep.min_min_singular_value;
      j["pass"] = rep.pass();
      j["failures"] = nlohmann::json::array();
      for (const auto& f : rep.failures) {
        nlohmann::json d = nlohmann::json::array();
        for (Eigen::Index k = 0; k < f.delta.size(); ++k)
          d.push_back({f.delta(k).real(), f.delta(k).imag()});
        j["failures"].push_back({{"delta", d}, {"rank", f.rank}});
      }
      const std::string text = j.dump(2);
      std::cout << text << "\n";
      if (!rs_out.empty()) write_file(rs_out, text);
      return rep.pass() ? 0 : 1;
    }

    if (sl->parsed()) {
      const xnet::BerCurve curve = xnet::curve_from_csv(read_file(sl_in));
      const double d = xnet::diversity_slope(curve, sl_tail);
      std::printf("%.6f\n", d);
      return 0;
    }

    if (ce->parsed()) {
      bool pass = true;
      try {
        for (const auto& rep : xnet::certify_grid(ce_grid))
          std::printf("theta=%.6f det_r=(%.9f,%.9f) det_s=(%.9f,%.9f) expected_s=(%.9f,%.9f)\n",
                      rep.theta, rep.det_r.real(), rep.det_r.imag(), rep.det_s.real(),
                      rep.det_s.imag(), rep.expected_s.real(), rep.expected_s.imag());
      } catch (const xnet::CertificateFailed& e) {
        std::cerr << "FAIL: " << e.what() << "\n";
        pass = false;
      }
      std::cout << (pass ? "all certificates pass\n" : "certificate failure\n");
      return pass ? 0 : 1;
    }
  } catch (const xnet::ConfigInvalid& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
