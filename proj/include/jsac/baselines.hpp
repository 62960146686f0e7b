#pragma once

#include <string>
#include <vector>

#include "jsac/metrics.hpp"
#include "jsac/scenario.hpp"

namespace jsac {

struct BaselineResult {
  std::string name;
  BeamformerPair pair;
  double snr_c = 0.0;
  double snr_s = 0.0;
  double objective = 0.0;  // at the scenario's alpha
};

/// Both APs aligned with their user channels at full power.
BaselineResult mrt_comm(const Scenario& s);

/// Both APs aligned with their sensing channels at full power.
BaselineResult mrt_sense(const Scenario& s);

/// AP 1 serves the user, AP 2 illuminates the target. SNRs follow the
/// own-task accounting: each AP is credited only with its assigned link, so
/// snr_c = p1 ||h1||^2 / sigma1^2 and snr_s = p2 ||g2||^4 / sigma2^2.
BaselineResult standalone(const Scenario& s);

/// Same beamformers as standalone(), but the SNRs evaluate the full coherent
/// expressions including the cross-AP contributions.
BaselineResult standalone_coherent(const Scenario& s);

/// Per-AP orthogonal projections: w1 orthogonal to h2, w2 orthogonal to h1.
BaselineResult zero_forcing(const Scenario& s);

/// All defined baselines for this scenario; undefined ones are skipped.
std::vector<BaselineResult> all_baselines(const Scenario& s);

/// Independent global-optimum estimate: multi-start projected gradient
/// ascent on the per-AP power spheres plus an exhaustive grid over the
/// two-parameter family of stationary beamformers w_i ~ mu h_i + nu g_i
/// (magnitude split and relative phase of (mu, nu)). Returns the best
/// objective value found.
double oracle(const Scenario& s, int restarts = 120);
double oracle(const Scenario& s, double alpha, int restarts);

}  // namespace jsac
