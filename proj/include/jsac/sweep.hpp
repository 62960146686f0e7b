#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "jsac/baselines.hpp"
#include "jsac/scenario.hpp"
#include "jsac/sdp.hpp"

namespace jsac {

struct SolveDiagnostics {
  double y1 = 0.0, y2 = 0.0;
  double gap = 0.0;
  double comp = 0.0;
  double eig_ratio = 0.0;
  int bisection_iterations = 0;
  long eig_evaluations = 0;
};

/// One point of the achievable region trace.
struct TradeoffPoint {
  double alpha = 0.0;
  double snr_c = 0.0, snr_s = 0.0;        // linear
  double snr_c_db = 0.0, snr_s_db = 0.0;  // 10 log10, -300 sentinel at zero
  SolveDiagnostics diag;
};

struct CertificateSummary {
  int solves = 0;
  double max_gap = 0.0;        // relative to max(1, dual value)
  double max_comp = 0.0;
  double max_rank_ratio = 0.0;
};

/// Frontier points ordered alpha = 1 down to 0, plus the baseline points and
/// a certificate summary over all solves.
struct SweepReport {
  std::vector<TradeoffPoint> points;
  std::vector<BaselineResult> baselines;
  CertificateSummary certificates;
  ScenarioConfig config;
};

/// 10 log10(linear); zero maps to the -300.0 sentinel so CSV stays numeric.
double to_db(double linear);

SweepReport run_sweep(const ScenarioConfig& config, int alpha_count);
SweepReport run_sweep(const ScenarioConfig& config, std::vector<double> alphas);

/// Indices of sweep points kept in points.csv: the subset not weakly
/// dominated by any other sweep point.
std::vector<std::size_t> frontier_subset(const std::vector<TradeoffPoint>& points);

/// Writes region.csv (all points), points.csv (frontier subset) and
/// baselines.csv into out_dir. Fixed six fractional digits, '.' separator,
/// '\n' line endings; reruns with the same config are byte-identical.
void emit_csv(const SweepReport& report, const std::filesystem::path& out_dir);

struct VerifyOptions {
  std::optional<std::pair<std::uint64_t, std::uint64_t>> seed_range;  // inclusive
  int oracle_restarts = 120;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  int seeds_run = 0;
  int seeds_passed = 0;
  bool all_pass = false;
};

/// Runs the full certificate suite (duality gap, complementarity, rank,
/// feasibility, oracle agreement, endpoint closed forms, baseline dominance)
/// over the configured seed or seed range.
VerifyReport run_verify(const ScenarioConfig& config, const VerifyOptions& options = {});

}  // namespace jsac
