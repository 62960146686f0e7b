#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "jsac/rng.hpp"
#include "jsac/scenario.hpp"

using namespace jsac;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("generation is deterministic per seed") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 42;
  const Scenario a = generate(cfg);
  const Scenario b = generate(cfg);
  CHECK(a.h1 == b.h1);
  CHECK(a.h2 == b.h2);
  CHECK(a.g1 == b.g1);
  CHECK(a.g2 == b.g2);

  cfg.seed = 43;
  const Scenario c = generate(cfg);
  CHECK(a.h1 != c.h1);
}

TEST_CASE("channel entries have unit empirical variance") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  double acc = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i) {
    cfg.seed = static_cast<std::uint64_t>(i);
    acc += generate(cfg).h1.squaredNorm() / cfg.n_antennas;
  }
  CHECK(acc / draws == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("config validation") {
  ScenarioConfig cfg;
  cfg.n_antennas = 0;
  CHECK_THROWS_AS(generate(cfg), ConfigError);
  cfg = ScenarioConfig{};
  cfg.alpha = 1.5;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.p1_max = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = ScenarioConfig{};
  cfg.sigma2_sq = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("config JSON ingestion") {
  const ScenarioConfig cfg = config_from_json_text(
      R"({"n_antennas": 4, "seed": 7, "sigma1_sq": 2.0, "sigma2_sq": 0.5,
          "p1_max": 1.5, "p2_max": 0.5, "alpha": 0.25})");
  CHECK(cfg.n_antennas == 4);
  CHECK(cfg.seed == 7);
  CHECK(cfg.sigma1_sq == 2.0);
  CHECK(cfg.sigma2_sq == 0.5);
  CHECK(cfg.p1_max == 1.5);
  CHECK(cfg.p2_max == 0.5);
  CHECK(cfg.alpha == 0.25);

  // defaults apply for absent keys
  const ScenarioConfig defaults = config_from_json_text("{}");
  CHECK(defaults.n_antennas == 3);
  CHECK(defaults.seed == 42);
  CHECK(defaults.alpha == 0.5);

  CHECK_THROWS_AS(config_from_json_text(R"({"n_antenas": 3})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"alpha": "half"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"alpha": 2.0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
  CHECK_THROWS_AS(config_from_json_file("/nonexistent/config.json"), IoError);

  const ScenarioConfig with_extras = config_from_json_text(
      R"({"tau_rank": 1e-9, "alpha_grid": [1.0, 0.5, 0.0], "channels_csv": ""})");
  CHECK(with_extras.tau_rank.has_value());
  CHECK(*with_extras.tau_rank == 1e-9);
  CHECK(with_extras.alpha_grid.size() == 3);
}

TEST_CASE("channels CSV round trip") {
  const auto path = temp_file("jsac_channels_fixture.csv");
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "1.0,0.0,2.0,-1.0\n";
    out << "0.0,1.0,0.5,0.5\n";
    out << "0.0,0.0,1.0,0.0\n";
    out << "3.0,0.0,0.0,-2.0\n";
  }
  ScenarioConfig cfg;
  const Scenario s = load_channels_csv(path, cfg);
  CHECK(s.config.n_antennas == 2);
  CHECK(s.h1(0) == Complex(1.0, 0.0));
  CHECK(s.h1(1) == Complex(2.0, -1.0));
  CHECK(s.h2(1) == Complex(0.5, 0.5));
  CHECK(s.g1(1) == Complex(1.0, 0.0));
  CHECK(s.g2(0) == Complex(3.0, 0.0));
  CHECK(s.g2(1) == Complex(0.0, -2.0));

  cfg.channels_csv = path.string();
  const Scenario via_config = scenario_from_config(cfg);
  CHECK(via_config.h1 == s.h1);

  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << "1.0,0.0\n1.0,0.0\n";  // only two rows
  }
  CHECK_THROWS_AS(load_channels_csv(path, ScenarioConfig{}), ConfigError);
  CHECK_THROWS_AS(load_channels_csv("/nonexistent/channels.csv", ScenarioConfig{}), IoError);
  std::filesystem::remove(path);
}

TEST_CASE("scenario invariants") {
  ScenarioConfig cfg;
  cfg.n_antennas = 2;
  Scenario s = generate(cfg);
  s.h1.setZero();
  s.h2.setZero();
  CHECK_THROWS_AS(s.validate(), ContractError);

  s = generate(cfg);
  s.g1.setZero();
  s.g2.setZero();
  CHECK_THROWS_AS(s.validate(), ContractError);

  s = generate(cfg);
  s.g1 = CVector::Zero(3);
  CHECK_THROWS_AS(s.validate(), DimensionError);
}

TEST_CASE("stacking at the alpha extremes") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 5;
  const Scenario s = generate(cfg);
  const int n2 = 2 * cfg.n_antennas;

  const StackedProblem comm_only = stack(s, 1.0);
  CVector h(n2);
  h << s.h1, s.h2;
  CHECK(max_abs((comm_only.h - h).eval()) == 0.0);  // unit caps: plain concatenation
  CHECK(max_abs((comm_only.M - outer(h)).eval()) <= 1e-12 * max_abs(comm_only.M));
  const auto vals = eigvalsh(comm_only.M);
  CHECK(vals(0) == doctest::Approx(h.squaredNorm()).epsilon(1e-12));
  CHECK(std::abs(vals(1)) <= 1e-12 * vals(0));

  const StackedProblem sense_only = stack(s, 0.0);
  CVector g(n2);
  g << s.g1, s.g2;
  const HMatrix expected = s.g2.squaredNorm() * outer(g);
  CHECK(max_abs((sense_only.M - expected).eval()) <= 1e-12 * max_abs(expected));
}

TEST_CASE("stacked invariants at alpha = 0.5") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 17;
  const Scenario s = generate(cfg);
  const StackedProblem p = stack(s, 0.5);
  const int n2 = 2 * cfg.n_antennas;

  CVector h(n2), g(n2);
  h << s.h1, s.h2;
  g << s.g1, s.g2;
  CHECK(p.h == h);
  CHECK(p.g == g);

  const double expected_trace = 0.5 * h.squaredNorm() + 0.5 * s.g2.squaredNorm() * g.squaredNorm();
  CHECK(std::abs(p.M.trace().real() - expected_trace) <= 1e-12 * expected_trace);

  CHECK(max_abs((p.B1 + p.B2 - HMatrix::Identity(n2, n2)).eval()) == 0.0);

  // M stays PSD with rank <= 2 across the whole weight range
  for (double alpha : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0}) {
    const StackedProblem q = stack(s, alpha);
    const auto vals = eigvalsh(q.M);
    CHECK(vals.minCoeff() >= -tol::psd * vals.cwiseAbs().maxCoeff());
    if (vals.size() > 2) CHECK(std::abs(vals(2)) <= 1e-10 * std::max(1.0, vals(0)));
  }
}

TEST_CASE("objective matrix value") {
  ScenarioConfig cfg;
  cfg.n_antennas = 3;
  cfg.seed = 29;
  const Scenario s = generate(cfg);
  const int n2 = 2 * cfg.n_antennas;

  const StackedProblem half = stack(s, 0.5);
  CHECK(objective_matrix_value(half, HMatrix::Zero(n2, n2)) == 0.0);

  CVector h(n2);
  h << s.h1, s.h2;
  const StackedProblem comm_only = stack(s, 1.0);
  CHECK(objective_matrix_value(comm_only, outer(h.normalized())) ==
        doctest::Approx(h.squaredNorm()).epsilon(1e-12));

  CHECK_THROWS_AS(objective_matrix_value(half, HMatrix::Zero(3, 3)), DimensionError);

  // dual-path evaluation: trace form vs the explicit weighted quadratic
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    CVector w(n2);
    for (int i = 0; i < n2; ++i) w(i) = rng.complex_gaussian();
    const double direct =
        0.5 * std::norm(h.dot(w)) + 0.5 * s.g2.squaredNorm() * std::norm(half.g.dot(w));
    const double via_trace = objective_matrix_value(half, outer(w));
    CHECK(std::abs(via_trace - direct) <= 1e-10 * std::max(1.0, std::abs(direct)));

    // block traces pick out the per-AP powers
    CHECK(trace_product(outer(w), half.B1) ==
          doctest::Approx(w.head(3).squaredNorm()).epsilon(1e-12));
    CHECK(trace_product(outer(w), half.B2) ==
          doctest::Approx(w.tail(3).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("stacking honors power caps and noise powers") {
  ScenarioConfig cfg;
  cfg.n_antennas = 2;
  cfg.seed = 3;
  cfg.p1_max = 4.0;
  cfg.p2_max = 0.25;
  cfg.sigma1_sq = 2.0;
  cfg.sigma2_sq = 0.5;
  const Scenario s = generate(cfg);
  const StackedProblem p = stack(s, 0.5);
  CHECK(p.h.head(2) == (2.0 * s.h1).eval());
  CHECK(p.h.tail(2) == (0.5 * s.h2).eval());
  CHECK(p.comm_weight == doctest::Approx(0.25));
  CHECK(p.sense_weight == doctest::Approx(0.5 * s.g2.squaredNorm() / 0.5));
}
