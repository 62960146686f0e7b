#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "jsac/linalg.hpp"

namespace jsac {

/// One problem instance configuration. Field names mirror the JSON schema
/// one-to-one (snake_case keys); channels_csv, alpha_grid and tau_rank are
/// optional extensions for fixtures, custom sweeps and certificate tuning.
struct ScenarioConfig {
  int n_antennas = 3;
  std::uint64_t seed = 42;
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;
  double p1_max = 1.0;
  double p2_max = 1.0;
  double alpha = 0.5;
  std::string channels_csv;          // when set, channels load from this file
  std::vector<double> alpha_grid;    // optional nonuniform sweep grid
  std::optional<double> tau_rank;    // optional rank-certificate threshold override

  void validate() const;
};

ScenarioConfig config_from_json_text(const std::string& text);
ScenarioConfig config_from_json_file(const std::filesystem::path& path);

/// Channels of one two-AP instance: h1, h2 toward the user terminal and
/// g1, g2 toward the sensing target, each of length n_antennas.
struct Scenario {
  CVector h1, h2, g1, g2;
  ScenarioConfig config;

  void validate() const;
};

/// Draws the four channels i.i.d. circularly-symmetric complex Gaussian with
/// unit variance per entry from the seeded stream, in the fixed order
/// h1, h2, g1, g2 (entry index ascending within each vector).
Scenario generate(const ScenarioConfig& config);

/// Loads fixed channels from a CSV with four rows (h1, h2, g1, g2), each a
/// comma-separated list of interleaved real/imag entry components.
Scenario load_channels_csv(const std::filesystem::path& path, const ScenarioConfig& config);

/// generate() or load_channels_csv() depending on config.channels_csv.
Scenario scenario_from_config(const ScenarioConfig& config);

/// The stacked 2N-dimensional form the solver maximizes. Channels are scaled
/// by the per-AP power budgets so the stacked variable always lives under
/// unit trace caps; with unit budgets the stacking is the plain block
/// concatenation. M = comm_weight h h^H + sense_weight g g^H is PSD with
/// rank at most two.
struct StackedProblem {
  CVector h;  // (sqrt(p1_max) h1, sqrt(p2_max) h2)
  CVector g;  // (sqrt(p1_max) g1, sqrt(p2_max) g2)
  HMatrix M;
  HMatrix B1, B2;       // block selectors, B1 + B2 = I
  double comm_weight;   // alpha / sigma1^2
  double sense_weight;  // (1 - alpha) ||g2||^2 / sigma2^2
  double alpha;
  double p1_max, p2_max;
  int n_antennas;
};

StackedProblem stack(const Scenario& s);
StackedProblem stack(const Scenario& s, double alpha);

/// trace(M W); equals the weighted-SNR objective of any unit-cap beamformer
/// pair w when W = w w^H.
double objective_matrix_value(const StackedProblem& p, const HMatrix& W);

}  // namespace jsac
