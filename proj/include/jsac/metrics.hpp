#pragma once

#include <cstddef>
#include <vector>

#include "jsac/linalg.hpp"
#include "jsac/scenario.hpp"

namespace jsac {

/// Per-AP transmit beamformers, each of length n_antennas.
struct BeamformerPair {
  CVector w1, w2;
};

bool is_feasible(const BeamformerPair& b, double p1_max, double p2_max, double tau = 1e-9);

/// |h1^H w1 + h2^H w2|^2 / sigma1^2.
double snr_comm(const Scenario& s, const BeamformerPair& b);

/// Unit-norm receive beamformer at AP 2, aligned with the reflected signal.
/// Undefined (error) when g2 = 0 or the received-signal scalar vanishes.
CVector sensing_rx_beamformer(const Scenario& s, const BeamformerPair& b);

/// ||g2||^2 |g1^H w1 + g2^H w2|^2 / sigma2^2. Zero (the SNR limit) when the
/// received-signal scalar vanishes.
double snr_sense(const Scenario& s, const BeamformerPair& b);

/// alpha * snr_comm + (1 - alpha) * snr_sense.
double objective(const Scenario& s, const BeamformerPair& b);
double objective(const Scenario& s, const BeamformerPair& b, double alpha);

/// Evaluation-only multi-user layout: K user terminals, one sensing target.
struct MultiUserLayout {
  std::vector<CVector> ue_h1, ue_h2;  // channel AP i -> UE k
  std::vector<CVector> ue_w1, ue_w2;  // beamformer at AP i for UE k's stream
  CVector g1, g2;
  double sigma1_sq = 1.0;
  double sigma2_sq = 1.0;

  std::size_t n_users() const { return ue_h1.size(); }
  void validate() const;
};

/// Downlink SINR at user `ue` (0-based): the own coherent term over noise
/// plus the coherent terms of every other user's stream.
double multiuser_sinr_comm(const MultiUserLayout& m, std::size_t ue);

/// ||g2||^2 |sum_k (g1^H w1_k + g2^H w2_k)|^2 / sigma2^2.
double multiuser_snr_sense(const MultiUserLayout& m);

}  // namespace jsac
