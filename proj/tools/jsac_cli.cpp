#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "jsac/baselines.hpp"
#include "jsac/scenario.hpp"
#include "jsac/sdp.hpp"
#include "jsac/sweep.hpp"

namespace {

jsac::ScenarioConfig load_config(const std::string& path) {
  if (path.empty()) return jsac::ScenarioConfig{};
  return jsac::config_from_json_file(path);
}

// "count" or a comma-separated alpha list
std::vector<double> parse_alpha_spec(const std::string& spec, int& count_out) {
  count_out = 0;
  if (spec.find(',') == std::string::npos && spec.find('.') == std::string::npos) {
    count_out = std::stoi(spec);
    return {};
  }
  std::vector<double> alphas;
  std::stringstream ss(spec);
  std::string cell;
  while (std::getline(ss, cell, ',')) alphas.push_back(std::stod(cell));
  return alphas;
}

int run_solve(const std::string& config_path, double alpha, const std::string& diag_path) {
  jsac::ScenarioConfig cfg = load_config(config_path);
  cfg.alpha = alpha;
  const jsac::Scenario s = jsac::scenario_from_config(cfg);
  const jsac::SdpSolution sol = jsac::solve(jsac::stack(s, alpha));
  const double c = jsac::snr_comm(s, sol.w_star);
  const double sv = jsac::snr_sense(s, sol.w_star);
  std::printf("alpha            %.6f\n", alpha);
  std::printf("optimal value    %.12g\n", sol.primal_value);
  std::printf("dual value       %.12g\n", sol.dual_value);
  std::printf("duality gap      %.3e\n", sol.gap);
  std::printf("complementarity  %.3e\n", sol.complementarity_residual);
  std::printf("y1, y2           %.9g, %.9g\n", sol.dual.y1, sol.dual.y2);
  std::printf("rank ratio       %.3e (declared rank %d)\n", sol.rank_certificate.ratio,
              sol.rank_certificate.declared_rank);
  std::printf("snr_c            %.9g (%.6f dB)\n", c, jsac::to_db(c));
  std::printf("snr_s            %.9g (%.6f dB)\n", sv, jsac::to_db(sv));
  if (!diag_path.empty()) {
    std::ofstream out(diag_path, std::ios::binary | std::ios::trunc);
    if (!out) throw jsac::IoError("cannot open " + diag_path + " for writing");
    out << jsac::diagnostic_json(sol) << "\n";
  }
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& alpha_spec,
                  const std::string& out_dir) {
  const jsac::ScenarioConfig cfg = load_config(config_path);
  int count = 0;
  const std::vector<double> alphas = parse_alpha_spec(alpha_spec, count);
  const jsac::SweepReport report =
      alphas.empty() ? jsac::run_sweep(cfg, count) : jsac::run_sweep(cfg, alphas);
  jsac::emit_csv(report, out_dir);
  std::printf("swept %zu alpha values into %s\n", report.points.size(), out_dir.c_str());
  std::printf("certificates: max relative gap %.3e, max complementarity %.3e, max rank ratio %.3e\n",
              report.certificates.max_gap, report.certificates.max_comp,
              report.certificates.max_rank_ratio);
  std::printf("baselines attached: %zu\n", report.baselines.size());
  return 0;
}

int run_baselines(const std::string& config_path) {
  const jsac::ScenarioConfig cfg = load_config(config_path);
  const jsac::Scenario s = jsac::scenario_from_config(cfg);
  std::printf("%-22s %14s %14s %14s %14s %14s\n", "name", "snr_c", "snr_c_db", "snr_s", "snr_s_db",
              "objective");
  using Builder = jsac::BaselineResult (*)(const jsac::Scenario&);
  const std::pair<const char*, Builder> entries[] = {
      {"mrt_comm", &jsac::mrt_comm},
      {"mrt_sense", &jsac::mrt_sense},
      {"standalone", &jsac::standalone},
      {"standalone_coherent", &jsac::standalone_coherent},
      {"zero_forcing", &jsac::zero_forcing},
  };
  for (const auto& [name, build] : entries) {
    try {
      const jsac::BaselineResult r = build(s);
      std::printf("%-22s %14.6g %14.6f %14.6g %14.6f %14.6g\n", r.name.c_str(), r.snr_c,
                  jsac::to_db(r.snr_c), r.snr_s, jsac::to_db(r.snr_s), r.objective);
    } catch (const jsac::DegenerateError& e) {
      std::printf("%-22s undefined: %s\n", name, e.what());
    }
  }
  return 0;
}

int run_verify_cmd(const std::string& config_path, const std::string& seeds_spec, int restarts) {
  const jsac::ScenarioConfig cfg = load_config(config_path);
  jsac::VerifyOptions options;
  options.oracle_restarts = restarts;
  if (!seeds_spec.empty()) {
    const auto sep = seeds_spec.find("..");
    if (sep == std::string::npos) {
      const std::uint64_t one = std::stoull(seeds_spec);
      options.seed_range = {one, one};
    } else {
      options.seed_range = {std::stoull(seeds_spec.substr(0, sep)),
                            std::stoull(seeds_spec.substr(sep + 2))};
    }
  }
  const jsac::VerifyReport report = jsac::run_verify(cfg, options);
  for (const auto& check : report.checks)
    std::printf("%s %-22s %s\n", check.pass ? "PASS" : "FAIL", check.name.c_str(),
                check.detail.c_str());
  std::printf("seeds passed: %d/%d\n", report.seeds_passed, report.seeds_run);
  return report.all_pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"globally optimal joint sensing/communication beamforming trade-off toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  double alpha = 0.5;
  std::string diag_path;
  auto* solve_cmd = app.add_subcommand("solve", "solve one weighted instance");
  solve_cmd->add_option("--alpha", alpha, "trade-off weight in [0, 1]")
      ->required()
      ->check(CLI::Range(0.0, 1.0));
  solve_cmd->add_option("--config", config_path, "config JSON path");
  solve_cmd->add_option("--diag", diag_path, "write a JSON diagnostic record here");

  std::string sweep_config, alpha_spec = "101", out_dir = "sweep_out";
  auto* sweep_cmd = app.add_subcommand("sweep", "trace the achievable SNR region");
  sweep_cmd->add_option("--alphas", alpha_spec, "point count or comma-separated alpha list");
  sweep_cmd->add_option("--config", sweep_config, "config JSON path");
  sweep_cmd->add_option("--out", out_dir, "output directory for the CSV artifacts");

  std::string baselines_config;
  auto* baselines_cmd = app.add_subcommand("baselines", "evaluate the benchmark beamformers");
  baselines_cmd->add_option("--config", baselines_config, "config JSON path");

  std::string verify_config, seeds_spec;
  int restarts = 120;
  auto* verify_cmd = app.add_subcommand("verify", "run all optimality certificates");
  verify_cmd->add_option("--config", verify_config, "config JSON path");
  verify_cmd->add_option("--seeds", seeds_spec, "seed or inclusive range a..b");
  verify_cmd->add_option("--restarts", restarts, "oracle restart count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve_cmd->parsed()) return run_solve(config_path, alpha, diag_path);
    if (sweep_cmd->parsed()) return run_sweep_cmd(sweep_config, alpha_spec, out_dir);
    if (baselines_cmd->parsed()) return run_baselines(baselines_config);
    if (verify_cmd->parsed()) return run_verify_cmd(verify_config, seeds_spec, restarts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
