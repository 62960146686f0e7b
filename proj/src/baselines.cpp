#include "jsac/baselines.hpp"

#include <cmath>

#include "jsac/rng.hpp"

namespace jsac {

namespace {

BaselineResult evaluate(const Scenario& s, std::string name, BeamformerPair pair) {
  BaselineResult r;
  r.name = std::move(name);
  r.pair = std::move(pair);
  r.snr_c = snr_comm(s, r.pair);
  r.snr_s = snr_sense(s, r.pair);
  r.objective = s.config.alpha * r.snr_c + (1.0 - s.config.alpha) * r.snr_s;
  return r;
}

BeamformerPair standalone_pair(const Scenario& s) {
  if (s.h1.norm() == 0.0) throw DegenerateError("standalone undefined: h1 is zero");
  if (s.g2.norm() == 0.0) throw DegenerateError("standalone undefined: g2 is zero");
  return {s.h1 * (std::sqrt(s.config.p1_max) / s.h1.norm()),
          s.g2 * (std::sqrt(s.config.p2_max) / s.g2.norm())};
}

}  // namespace

BaselineResult mrt_comm(const Scenario& s) {
  s.validate();
  if (s.h1.norm() == 0.0 || s.h2.norm() == 0.0)
    throw DegenerateError("mrt_comm undefined: a communication channel is zero");
  BeamformerPair pair{s.h1 * (std::sqrt(s.config.p1_max) / s.h1.norm()),
                      s.h2 * (std::sqrt(s.config.p2_max) / s.h2.norm())};
  return evaluate(s, "mrt_comm", std::move(pair));
}

BaselineResult mrt_sense(const Scenario& s) {
  s.validate();
  if (s.g1.norm() == 0.0 || s.g2.norm() == 0.0)
    throw DegenerateError("mrt_sense undefined: a sensing channel is zero");
  BeamformerPair pair{s.g1 * (std::sqrt(s.config.p1_max) / s.g1.norm()),
                      s.g2 * (std::sqrt(s.config.p2_max) / s.g2.norm())};
  return evaluate(s, "mrt_sense", std::move(pair));
}

BaselineResult standalone(const Scenario& s) {
  s.validate();
  BaselineResult r;
  r.name = "standalone";
  r.pair = standalone_pair(s);
  // own-task accounting: each AP is credited only with its assigned link
  r.snr_c = std::norm(inner(s.h1, r.pair.w1)) / s.config.sigma1_sq;
  r.snr_s = s.g2.squaredNorm() * std::norm(inner(s.g2, r.pair.w2)) / s.config.sigma2_sq;
  r.objective = s.config.alpha * r.snr_c + (1.0 - s.config.alpha) * r.snr_s;
  return r;
}

BaselineResult standalone_coherent(const Scenario& s) {
  s.validate();
  return evaluate(s, "standalone_coherent", standalone_pair(s));
}

BaselineResult zero_forcing(const Scenario& s) {
  s.validate();
  if (s.config.n_antennas < 2)
    throw DegenerateError("zero_forcing undefined for single-antenna APs");
  if (s.h1.norm() == 0.0 || s.h2.norm() == 0.0)
    throw DegenerateError("zero_forcing undefined: a communication channel is zero");
  CVector w1 = s.h1 - s.h2 * (inner(s.h2, s.h1) / s.h2.squaredNorm());
  CVector w2 = s.h2 - s.h1 * (inner(s.h1, s.h2) / s.h1.squaredNorm());
  if (w1.norm() <= 1e-10 * s.h1.norm() || w2.norm() <= 1e-10 * s.h2.norm())
    throw DegenerateError("zero_forcing undefined: communication channels are parallel");
  BeamformerPair pair{w1.normalized() * std::sqrt(s.config.p1_max),
                      w2.normalized() * std::sqrt(s.config.p2_max)};
  return evaluate(s, "zero_forcing", std::move(pair));
}

std::vector<BaselineResult> all_baselines(const Scenario& s) {
  std::vector<BaselineResult> out;
  using Builder = BaselineResult (*)(const Scenario&);
  for (Builder build : {&mrt_comm, &mrt_sense, &standalone, &standalone_coherent, &zero_forcing}) {
    try {
      out.push_back(build(s));
    } catch (const DegenerateError&) {
      // undefined for this scenario
    }
  }
  return out;
}

namespace {

// Rank-two quadratic form in physical coordinates, evaluated independently of
// the stacked reformulation the solver uses.
struct ObjectiveModel {
  CVector h, g;  // stacked physical channels
  double wc = 0.0, ws = 0.0;
  double r1 = 0.0, r2 = 0.0;  // per-block radius sqrt(p_max)
  int n = 0;

  double value(const CVector& w) const {
    return wc * std::norm(h.dot(w)) + ws * std::norm(g.dot(w));
  }

  CVector ascent_direction(const CVector& w) const {
    return wc * (h * h.dot(w)) + ws * (g * g.dot(w));
  }

  void project(CVector& w) const {
    const double n1 = w.head(n).norm();
    const double n2 = w.tail(n).norm();
    if (n1 > 0.0)
      w.head(n) *= r1 / n1;
    else
      w(0) = r1;
    if (n2 > 0.0)
      w.tail(n) *= r2 / n2;
    else
      w(n) = r2;
  }
};

ObjectiveModel build_model(const Scenario& s, double alpha) {
  ObjectiveModel m;
  m.n = s.config.n_antennas;
  m.h.resize(2 * m.n);
  m.h << s.h1, s.h2;
  m.g.resize(2 * m.n);
  m.g << s.g1, s.g2;
  m.wc = alpha / s.config.sigma1_sq;
  m.ws = (1.0 - alpha) * s.g2.squaredNorm() / s.config.sigma2_sq;
  m.r1 = std::sqrt(s.config.p1_max);
  m.r2 = std::sqrt(s.config.p2_max);
  return m;
}

double gradient_ascent_best(const ObjectiveModel& m, std::uint64_t seed, int restarts) {
  double best = 0.0;
  for (int r = 0; r < restarts; ++r) {
    Rng rng(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1)));
    CVector w(2 * m.n);
    for (Eigen::Index i = 0; i < w.size(); ++i) w(i) = rng.complex_gaussian();
    m.project(w);
    double f = m.value(w);
    double step = 1.0;
    for (int it = 0; it < 200; ++it) {
      const CVector dir = m.ascent_direction(w);
      bool improved = false;
      while (step > 1e-14) {
        CVector cand = w + step * dir;
        m.project(cand);
        const double fc = m.value(cand);
        if (fc > f) {
          w = cand;
          f = fc;
          improved = true;
          step = std::min(step * 2.0, 1e3);
          break;
        }
        step *= 0.5;
      }
      if (!improved) break;
    }
    best = std::max(best, f);
  }
  return best;
}

// Every interior stationary point satisfies w_i ~ mu h_i + nu g_i with the
// same (mu, nu) in both blocks, so an exhaustive scan over the magnitude
// split and relative phase of (mu, nu) covers the whole family.
double stationary_grid_best(const ObjectiveModel& m) {
  constexpr int kSplit = 200;
  constexpr int kPhase = 200;
  double best = 0.0;
  CVector w(2 * m.n);
  for (int i = 0; i < kSplit; ++i) {
    const double split = static_cast<double>(i) / (kSplit - 1);
    for (int k = 0; k < kPhase; ++k) {
      const double phase = 2.0 * M_PI * k / kPhase;
      const Complex mu(1.0 - split, 0.0);
      const Complex nu = std::polar(split, phase);
      w.head(m.n) = mu * m.h.head(m.n) + nu * m.g.head(m.n);
      w.tail(m.n) = mu * m.h.tail(m.n) + nu * m.g.tail(m.n);
      const double n1 = w.head(m.n).norm();
      const double n2 = w.tail(m.n).norm();
      if (n1 > 0.0) w.head(m.n) *= m.r1 / n1;
      if (n2 > 0.0) w.tail(m.n) *= m.r2 / n2;
      best = std::max(best, m.value(w));
    }
  }
  return best;
}

}  // namespace

double oracle(const Scenario& s, int restarts) { return oracle(s, s.config.alpha, restarts); }

double oracle(const Scenario& s, double alpha, int restarts) {
  s.validate();
  if (restarts < 1) throw ConfigError("oracle: restarts must be >= 1");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("oracle: alpha must lie in [0, 1]");
  const ObjectiveModel m = build_model(s, alpha);
  return std::max(gradient_ascent_best(m, s.config.seed, restarts), stationary_grid_best(m));
}

}  // namespace jsac
