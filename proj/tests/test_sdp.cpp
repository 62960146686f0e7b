#include <cmath>

#include "doctest.h"

#include "json.hpp"

#include "jsac/baselines.hpp"
#include "jsac/metrics.hpp"
#include "jsac/scenario.hpp"
#include "jsac/sdp.hpp"

using namespace jsac;

namespace {

CVector cv(Complex a, Complex b) {
  CVector v(2);
  v << a, b;
  return v;
}

Scenario fixed_scenario_n2(CVector h1, CVector h2, CVector g1, CVector g2, double alpha) {
  Scenario s;
  s.config.n_antennas = 2;
  s.config.alpha = alpha;
  s.h1 = std::move(h1);
  s.h2 = std::move(h2);
  s.g1 = std::move(g1);
  s.g2 = std::move(g2);
  s.validate();
  return s;
}

}  // namespace

TEST_CASE("symmetric closed form: the dual multipliers split evenly") {
  // h = (1,0,0,1): the coupled 2x2 reduction gives (y1-1)(y2-1) >= 1, so the
  // optimum of y1 + y2 is y1 = y2 = 2 with value 4.
  const Scenario s = fixed_scenario_n2(cv(1, 0), cv(0, 1), cv(1, 0), cv(0, 1), 1.0);
  const StackedProblem p = stack(s, 1.0);
  const DualPoint d = solve_dual(p);
  CHECK(d.y1 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(d.y2 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(d.y1 + d.y2 == doctest::Approx(4.0).epsilon(1e-9));

  const SdpSolution sol = recover_primal(p, d);
  CHECK(sol.primal_value == doctest::Approx(4.0).epsilon(1e-8));
  // recovered beamformers match the aligned pair up to the fixed global phase
  CHECK(sol.w_star.w1(0).real() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(sol.w_star.w1(1)) < 1e-6);
  CHECK(std::abs(sol.w_star.w2(0)) < 1e-6);
  CHECK(std::abs(sol.w_star.w2(1) - Complex(1.0, 0.0)) < 1e-6);
}

TEST_CASE("inactive first cap: sensing-only instance with g1 = 0") {
  const Scenario s = fixed_scenario_n2(cv(1, 0), cv(0, 1), cv(0, 0), cv(1, 0), 0.0);
  const StackedProblem p = stack(s, 0.0);
  const DualPoint d = solve_dual(p);
  CHECK(d.y1 <= 1e-8 * std::max(1.0, d.y1 + d.y2));
  CHECK(d.y1 + d.y2 == doctest::Approx(1.0).epsilon(1e-8));

  const SdpSolution sol = recover_primal(p, d);
  CHECK(sol.primal_value == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(sol.w_star.w2(0) - Complex(1.0, 0.0)) < 1e-6);
  CHECK(sol.w_star.w1.norm() == doctest::Approx(1.0).epsilon(1e-9));
  // the filler direction contributes nothing
  CHECK(snr_sense(s, sol.w_star) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("random instances meet every certificate") {
  SolverTolerances tols;
  for (int n : {2, 3}) {
    for (int seed = 1; seed <= 12; ++seed) {
      ScenarioConfig cfg;
      cfg.n_antennas = n;
      cfg.seed = static_cast<std::uint64_t>(1000 * n + seed);
      const Scenario s = generate(cfg);
      for (double alpha : {0.0, 0.3, 0.5, 0.8, 1.0}) {
        CAPTURE(n);
        CAPTURE(seed);
        CAPTURE(alpha);
        const StackedProblem p = stack(s, alpha);
        const SdpSolution sol = solve(p);

        // weak duality with the gap inside tolerance
        CHECK(sol.gap >= -tols.gap);
        CHECK(sol.gap <= tols.gap * std::max(1.0, sol.dual_value));
        CHECK(sol.complementarity_residual <= tols.comp);
        CHECK(sol.rank_certificate.declared_rank == 1);
        CHECK(sol.rank_certificate.ratio <= 1e-8);

        // feasibility of the relaxed variable and the dual slack
        const double tr1 = trace_product(sol.W_star, p.B1);
        const double tr2 = trace_product(sol.W_star, p.B2);
        CHECK(tr1 <= 1.0 + tols.feas);
        CHECK(tr2 <= 1.0 + tols.feas);
        CHECK(min_eig(sol.W_star) >= -tols.psd * std::max(1.0, operator_norm(sol.W_star)));
        CHECK(min_eig(sol.dual.Z) >= -tols.psd * std::max(1.0, operator_norm(sol.dual.Z)));
        CHECK(sol.dual.y1 >= 0.0);
        CHECK(sol.dual.y2 >= 0.0);

        // both caps bind at interior weights (generic channels)
        if (alpha > 0.0 && alpha < 1.0) {
          CHECK(tr1 >= 1.0 - 1e-6);
          CHECK(tr2 >= 1.0 - 1e-6);
        }

        // the physical pair reproduces the primal value through the metrics
        CHECK(std::abs(objective(s, sol.w_star, alpha) - sol.primal_value) <=
              tols.gap * std::max(1.0, sol.primal_value));
      }
    }
  }
}

TEST_CASE("alpha extremes match the aligned closed forms") {
  for (int seed = 1; seed <= 10; ++seed) {
    ScenarioConfig cfg;
    cfg.n_antennas = 3;
    cfg.seed = static_cast<std::uint64_t>(seed);
    const Scenario s = generate(cfg);

    const SdpSolution comm = solve(stack(s, 1.0));
    const double comm_expected = std::pow(s.h1.norm() + s.h2.norm(), 2);
    CHECK(std::abs(comm.primal_value - comm_expected) <= 1e-8 * comm_expected);

    const SdpSolution sense = solve(stack(s, 0.0));
    const double sense_expected =
        s.g2.squaredNorm() * std::pow(s.g1.norm() + s.g2.norm(), 2);
    CHECK(std::abs(sense.primal_value - sense_expected) <= 1e-8 * sense_expected);
  }
}

TEST_CASE("general caps and noise powers keep the pipeline consistent") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 77;
  cfg.p1_max = 4.0;
  cfg.p2_max = 0.25;
  cfg.sigma1_sq = 2.0;
  cfg.sigma2_sq = 0.5;
  const Scenario s = generate(cfg);

  const SdpSolution comm = solve(stack(s, 1.0));
  const double amp = 2.0 * s.h1.norm() + 0.5 * s.h2.norm();
  CHECK(comm.primal_value == doctest::Approx(amp * amp / 2.0).epsilon(1e-8));
  CHECK(comm.w_star.w1.squaredNorm() <= cfg.p1_max * (1.0 + 1e-9));
  CHECK(comm.w_star.w2.squaredNorm() <= cfg.p2_max * (1.0 + 1e-9));

  for (double alpha : {0.25, 0.5, 0.75}) {
    const SdpSolution sol = solve(stack(s, alpha));
    CHECK(std::abs(objective(s, sol.w_star, alpha) - sol.primal_value) <=
          1e-7 * std::max(1.0, sol.primal_value));
    CHECK(sol.w_star.w1.squaredNorm() >= cfg.p1_max * (1.0 - 1e-6));
    CHECK(sol.w_star.w2.squaredNorm() >= cfg.p2_max * (1.0 - 1e-6));
  }
}

TEST_CASE("solve is deterministic") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 42;
  const Scenario s = generate(cfg);
  const StackedProblem p = stack(s, 0.5);
  const SdpSolution a = solve(p);
  const SdpSolution b = solve(p);
  CHECK(a.primal_value == b.primal_value);
  CHECK(a.dual_value == b.dual_value);
  CHECK(a.w_star.w1 == b.w_star.w1);
  CHECK(a.w_star.w2 == b.w_star.w2);
}

TEST_CASE("zero objective matrix is a degenerate instance") {
  ScenarioConfig cfg;
  cfg.n_antennas = 2;
  cfg.seed = 1;
  const Scenario s = generate(cfg);
  StackedProblem p = stack(s, 0.5);
  p.M.setZero();
  CHECK_THROWS_AS(solve_dual(p), DegenerateError);

  p = stack(s, 0.5);
  p.M = -p.M;
  CHECK_THROWS_AS(solve_dual(p), ContractError);  // not PSD
}

TEST_CASE("recover_primal rejects an infeasible dual point") {
  ScenarioConfig cfg;
  cfg.n_antennas = 2;
  cfg.seed = 9;
  const Scenario s = generate(cfg);
  const StackedProblem p = stack(s, 0.5);
  DualPoint d;
  d.y1 = 0.05;
  d.y2 = 0.05;  // far below the optimal level: Z is indefinite
  d.Z = (0.05 * p.B1 + 0.05 * p.B2 - p.M).eval();
  CHECK_THROWS_AS(recover_primal(p, d), ContractError);
}

TEST_CASE("rank certificate accepts solver outputs and rejects hand-built violations") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 2;
  const Scenario s = generate(cfg);
  const SdpSolution sol = solve(stack(s, 0.4));
  const RankCertificate ok = verify_rank_bound(sol);
  CHECK(ok.declared_rank == 1);
  CHECK(ok.lambda1 > 0.0);

  // W = I/2 maximizes neither cap and is rank 4, violating the bound
  CHECK_THROWS_AS(verify_rank_bound((0.5 * HMatrix::Identity(4, 4)).eval()), CertificateError);
  // the zero matrix has rank 0, excluded as well
  CHECK_THROWS_AS(verify_rank_bound(HMatrix::Zero(4, 4).eval()), CertificateError);
  // indefinite matrices are not admissible relaxation variables
  HMatrix indef = HMatrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -0.5;
  CHECK_THROWS_AS(verify_rank_bound(indef), CertificateError);
}

TEST_CASE("rank certificate threshold sensitivity") {
  HMatrix w = HMatrix::Zero(4, 4);
  w(0, 0) = 1.0;
  w(1, 1) = 1e-12;  // a second direction far below the default threshold
  SolverTolerances tols;
  CHECK(verify_rank_bound(w, tols).declared_rank == 1);
  tols.rank = 1e-15;
  CHECK_THROWS_AS(verify_rank_bound(w, tols), CertificateError);
}

TEST_CASE("stacking beamformers round-trips") {
  ScenarioConfig cfg;
  cfg.n_antennas = 2;
  cfg.seed = 13;
  cfg.p1_max = 2.0;
  cfg.p2_max = 0.5;
  const Scenario s = generate(cfg);
  const StackedProblem p = stack(s, 0.5);
  const BeamformerPair b{s.h1.normalized(), s.h2.normalized()};
  const CVector u = stack_beamformers(p, b);
  const BeamformerPair back = unstack_beamformers(p, u);
  CHECK(max_abs((back.w1 - b.w1).eval()) < 1e-15);
  CHECK(max_abs((back.w2 - b.w2).eval()) < 1e-15);
  CHECK_THROWS_AS(stack_beamformers(p, BeamformerPair{CVector::Zero(3), CVector::Zero(3)}),
                  DimensionError);
  CHECK_THROWS_AS(unstack_beamformers(p, CVector::Zero(3)), DimensionError);
}

TEST_CASE("diagnostic record carries the certificate fields") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 4;
  const Scenario s = generate(cfg);
  const SdpSolution sol = solve(stack(s, 0.5));
  const auto j = nlohmann::json::parse(diagnostic_json(sol));
  CHECK(j.at("y1").get<double>() == sol.dual.y1);
  CHECK(j.at("y2").get<double>() == sol.dual.y2);
  CHECK(j.at("gap").get<double>() == sol.gap);
  CHECK(j.at("eigenvalue_ratio").get<double>() == sol.rank_certificate.ratio);
  CHECK(j.at("bisection_iterations").get<int>() > 0);
  CHECK(j.at("eig_evaluations").get<long>() > 0);
}
