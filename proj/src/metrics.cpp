#include "jsac/metrics.hpp"

namespace jsac {

namespace {

void check_pair(const Scenario& s, const BeamformerPair& b) {
  const auto n = static_cast<Eigen::Index>(s.config.n_antennas);
  if (b.w1.size() != n || b.w2.size() != n)
    throw DimensionError("beamformer pair does not match the scenario antenna count");
}

Complex comm_scalar(const Scenario& s, const BeamformerPair& b) {
  return inner(s.h1, b.w1) + inner(s.h2, b.w2);
}

Complex sense_scalar(const Scenario& s, const BeamformerPair& b) {
  return inner(s.g1, b.w1) + inner(s.g2, b.w2);
}

}  // namespace

bool is_feasible(const BeamformerPair& b, double p1_max, double p2_max, double tau) {
  return b.w1.squaredNorm() <= p1_max * (1.0 + tau) + tau &&
         b.w2.squaredNorm() <= p2_max * (1.0 + tau) + tau;
}

double snr_comm(const Scenario& s, const BeamformerPair& b) {
  check_pair(s, b);
  return std::norm(comm_scalar(s, b)) / s.config.sigma1_sq;
}

CVector sensing_rx_beamformer(const Scenario& s, const BeamformerPair& b) {
  check_pair(s, b);
  if (s.g2.norm() == 0.0)
    throw DegenerateError("sensing_rx_beamformer: g2 is zero");
  const Complex r = sense_scalar(s, b);
  if (std::abs(r) == 0.0)
    throw DegenerateError("sensing_rx_beamformer: received-signal scalar is zero");
  CVector v = s.g2 * std::conj(r);
  const double norm = v.norm();
  if (norm == 0.0) throw DegenerateError("sensing_rx_beamformer: direction underflowed");
  return v / norm;
}

double snr_sense(const Scenario& s, const BeamformerPair& b) {
  check_pair(s, b);
  return s.g2.squaredNorm() * std::norm(sense_scalar(s, b)) / s.config.sigma2_sq;
}

double objective(const Scenario& s, const BeamformerPair& b) {
  return objective(s, b, s.config.alpha);
}

double objective(const Scenario& s, const BeamformerPair& b, double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("objective: alpha must lie in [0, 1]");
  return alpha * snr_comm(s, b) + (1.0 - alpha) * snr_sense(s, b);
}

void MultiUserLayout::validate() const {
  const std::size_t k = ue_h1.size();
  if (k == 0) throw DimensionError("multiuser layout: at least one user required");
  if (ue_h2.size() != k || ue_w1.size() != k || ue_w2.size() != k)
    throw DimensionError("multiuser layout: per-user vectors must have equal counts");
  const Eigen::Index n = ue_h1[0].size();
  if (n < 1) throw DimensionError("multiuser layout: channels must be nonempty");
  for (std::size_t i = 0; i < k; ++i) {
    if (ue_h1[i].size() != n || ue_h2[i].size() != n || ue_w1[i].size() != n ||
        ue_w2[i].size() != n)
      throw DimensionError("multiuser layout: all vectors must have the same length");
  }
  if (g1.size() != n || g2.size() != n)
    throw DimensionError("multiuser layout: sensing channels must match the antenna count");
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0))
    throw ConfigError("multiuser layout: noise powers must be positive");
}

double multiuser_sinr_comm(const MultiUserLayout& m, std::size_t ue) {
  m.validate();
  const std::size_t k = m.n_users();
  if (ue >= k) throw DimensionError("multiuser_sinr_comm: user index out of range");
  const double signal =
      std::norm(inner(m.ue_h1[ue], m.ue_w1[ue]) + inner(m.ue_h2[ue], m.ue_w2[ue]));
  double interference = 0.0;
  for (std::size_t l = 0; l < k; ++l) {
    if (l == ue) continue;
    interference += std::norm(inner(m.ue_h1[l], m.ue_w1[l]) + inner(m.ue_h2[l], m.ue_w2[l]));
  }
  return signal / (m.sigma1_sq + interference);
}

double multiuser_snr_sense(const MultiUserLayout& m) {
  m.validate();
  Complex acc = 0.0;
  for (std::size_t k = 0; k < m.n_users(); ++k)
    acc += inner(m.g1, m.ue_w1[k]) + inner(m.g2, m.ue_w2[k]);
  return m.g2.squaredNorm() * std::norm(acc) / m.sigma2_sq;
}

}  // namespace jsac
