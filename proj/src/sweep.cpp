#include "jsac/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace jsac {

namespace {

constexpr double kSweepSlack = 1e-8;     // monotonicity slack along the frontier
constexpr double kEndpointDbTol = 1e-6;  // sweep endpoints vs MRT baselines

SolveDiagnostics diagnostics_of(const SdpSolution& sol) {
  SolveDiagnostics d;
  d.y1 = sol.dual.y1;
  d.y2 = sol.dual.y2;
  d.gap = sol.gap;
  d.comp = sol.complementarity_residual;
  d.eig_ratio = sol.rank_certificate.ratio;
  d.bisection_iterations = sol.dual.bisection_iterations;
  d.eig_evaluations = sol.dual.eig_evaluations;
  return d;
}

TradeoffPoint solve_point(const Scenario& s, double alpha, const SolverTolerances& tols) {
  const SdpSolution sol = solve(stack(s, alpha), tols);
  TradeoffPoint pt;
  pt.alpha = alpha;
  pt.snr_c = snr_comm(s, sol.w_star);
  pt.snr_s = snr_sense(s, sol.w_star);
  pt.snr_c_db = to_db(pt.snr_c);
  pt.snr_s_db = to_db(pt.snr_s);
  pt.diag = diagnostics_of(sol);
  return pt;
}

void run_points_parallel(const Scenario& s, const std::vector<double>& alphas,
                         std::vector<TradeoffPoint>& points) {
  const std::size_t count = alphas.size();
  points.resize(count);
  std::vector<std::exception_ptr> failures(count);
  std::atomic<std::size_t> cursor{0};
  auto worker = [&] {
    for (std::size_t i = cursor.fetch_add(1); i < count; i = cursor.fetch_add(1)) {
      try {
        points[i] = solve_point(s, alphas[i], SolverTolerances{});
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t n_threads = std::min<std::size_t>(hw, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& failure : failures)
    if (failure) std::rethrow_exception(failure);
}

void check_frontier_shape(const std::vector<TradeoffPoint>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double c_slack = kSweepSlack * std::max(1.0, std::abs(pts[i].snr_c));
    const double s_slack = kSweepSlack * std::max(1.0, std::abs(pts[i + 1].snr_s));
    if (pts[i + 1].snr_c > pts[i].snr_c + c_slack)
      throw SolverError("run_sweep: snr_c is not nonincreasing along the alpha sweep");
    if (pts[i + 1].snr_s + s_slack < pts[i].snr_s)
      throw SolverError("run_sweep: snr_s is not nondecreasing along the alpha sweep");
  }
}

const BaselineResult* find_baseline(const std::vector<BaselineResult>& baselines,
                                    const std::string& name) {
  for (const auto& b : baselines)
    if (b.name == name) return &b;
  return nullptr;
}

void check_endpoints(const SweepReport& report) {
  if (report.points.empty()) return;
  const auto close_db = [](const TradeoffPoint& pt, const BaselineResult& b) {
    return std::abs(pt.snr_c_db - to_db(b.snr_c)) <= kEndpointDbTol &&
           std::abs(pt.snr_s_db - to_db(b.snr_s)) <= kEndpointDbTol;
  };
  if (report.points.front().alpha == 1.0) {
    if (const auto* mrt = find_baseline(report.baselines, "mrt_comm"); mrt != nullptr) {
      if (!close_db(report.points.front(), *mrt))
        throw SolverError("run_sweep: the alpha = 1 endpoint does not match mrt_comm");
    }
  }
  if (report.points.back().alpha == 0.0) {
    if (const auto* mrt = find_baseline(report.baselines, "mrt_sense"); mrt != nullptr) {
      if (!close_db(report.points.back(), *mrt))
        throw SolverError("run_sweep: the alpha = 0 endpoint does not match mrt_sense");
    }
  }
}

}  // namespace

double to_db(double linear) { return linear > 0.0 ? 10.0 * std::log10(linear) : -300.0; }

SweepReport run_sweep(const ScenarioConfig& config, int alpha_count) {
  if (!config.alpha_grid.empty()) return run_sweep(config, config.alpha_grid);
  if (alpha_count < 2) throw ConfigError("run_sweep: at least two alpha values required");
  std::vector<double> alphas(alpha_count);
  for (int i = 0; i < alpha_count; ++i)
    alphas[i] = 1.0 - static_cast<double>(i) / (alpha_count - 1);
  return run_sweep(config, std::move(alphas));
}

SweepReport run_sweep(const ScenarioConfig& config, std::vector<double> alphas) {
  if (alphas.size() < 2) throw ConfigError("run_sweep: at least two alpha values required");
  for (double a : alphas)
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("run_sweep: alpha values must lie in [0, 1]");
  std::sort(alphas.begin(), alphas.end(), std::greater<>());

  const Scenario s = scenario_from_config(config);
  SweepReport report;
  report.config = config;
  run_points_parallel(s, alphas, report.points);
  report.baselines = all_baselines(s);

  report.certificates.solves = static_cast<int>(report.points.size());
  for (const auto& pt : report.points) {
    const double rel_gap = pt.diag.gap / std::max(1.0, pt.diag.y1 + pt.diag.y2);
    report.certificates.max_gap = std::max(report.certificates.max_gap, rel_gap);
    report.certificates.max_comp = std::max(report.certificates.max_comp, pt.diag.comp);
    report.certificates.max_rank_ratio =
        std::max(report.certificates.max_rank_ratio, pt.diag.eig_ratio);
  }

  check_frontier_shape(report.points);
  check_endpoints(report);
  return report;
}

std::vector<std::size_t> frontier_subset(const std::vector<TradeoffPoint>& points) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    const double ci = points[i].snr_c, si = points[i].snr_s;
    const double eps_c = 1e-9 * std::max(1.0, std::abs(ci));
    const double eps_s = 1e-9 * std::max(1.0, std::abs(si));
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      if (j == i) continue;
      const double cj = points[j].snr_c, sj = points[j].snr_s;
      const bool weakly_better = cj >= ci - eps_c && sj >= si - eps_s;
      const bool strictly_better = cj > ci + eps_c || sj > si + eps_s;
      const bool duplicate_earlier =
          j < i && std::abs(cj - ci) <= eps_c && std::abs(sj - si) <= eps_s;
      dominated = (weakly_better && strictly_better) || duplicate_earlier;
    }
    if (!dominated) kept.push_back(i);
  }
  return kept;
}

namespace {

std::string format_db_row(double a, double b) {
  char buf[80];
  std::snprintf(buf, sizeof(buf), "%.6f,%.6f\n", a, b);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("emit_csv: cannot open " + path.string() + " for writing");
  out << content;
  if (!out) throw IoError("emit_csv: short write to " + path.string());
}

}  // namespace

void emit_csv(const SweepReport& report, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("emit_csv: cannot create " + out_dir.string() + ": " + ec.message());

  std::string region = "snr_c_db,snr_s_db\n";
  for (const auto& pt : report.points) region += format_db_row(pt.snr_c_db, pt.snr_s_db);
  write_file(out_dir / "region.csv", region);

  std::string frontier = "snr_c_db,snr_s_db\n";
  for (std::size_t i : frontier_subset(report.points))
    frontier += format_db_row(report.points[i].snr_c_db, report.points[i].snr_s_db);
  write_file(out_dir / "points.csv", frontier);

  std::string baselines = "name,snr_c_db,snr_s_db\n";
  for (const auto& b : report.baselines)
    baselines += b.name + "," + format_db_row(to_db(b.snr_c), to_db(b.snr_s));
  write_file(out_dir / "baselines.csv", baselines);
}

namespace {

struct CheckAccumulator {
  explicit CheckAccumulator(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool pass = true;
  double worst = -std::numeric_limits<double>::infinity();
  double bound = 0.0;
  long instances = 0;
  std::string note;

  void record(double value, double limit) {
    ++instances;
    if (value > worst) worst = value;
    bound = limit;
    if (value > limit) pass = false;
  }

  void fail(const std::string& why) {
    ++instances;
    pass = false;
    if (note.empty()) note = why;
  }

  VerifyCheck finish() const {
    std::ostringstream detail;
    if (!note.empty()) {
      detail << note << "; ";
    }
    if (instances == 0)
      detail << "no instances";
    else
      detail << "worst " << worst << " (bound " << bound << ") over " << instances << " instances";
    return {name, pass, detail.str()};
  }
};

double endpoint_comm_value(const Scenario& s) {
  const double amp = std::sqrt(s.config.p1_max) * s.h1.norm() +
                     std::sqrt(s.config.p2_max) * s.h2.norm();
  return amp * amp / s.config.sigma1_sq;
}

double endpoint_sense_value(const Scenario& s) {
  const double amp = std::sqrt(s.config.p1_max) * s.g1.norm() +
                     std::sqrt(s.config.p2_max) * s.g2.norm();
  return s.g2.squaredNorm() * amp * amp / s.config.sigma2_sq;
}

}  // namespace

VerifyReport run_verify(const ScenarioConfig& config, const VerifyOptions& options) {
  config.validate();
  SolverTolerances tols;
  if (config.tau_rank) tols.rank = *config.tau_rank;

  std::vector<std::uint64_t> seeds;
  if (options.seed_range) {
    if (options.seed_range->second < options.seed_range->first)
      throw ConfigError("run_verify: empty seed range");
    for (std::uint64_t s = options.seed_range->first; s <= options.seed_range->second; ++s)
      seeds.push_back(s);
  } else {
    seeds.push_back(config.seed);
  }

  CheckAccumulator gap_check("duality_gap");
  CheckAccumulator comp_check("complementarity");
  CheckAccumulator rank_check("rank_one");
  CheckAccumulator feas_check("feasibility");
  CheckAccumulator power_check("full_power");
  CheckAccumulator endpoint_check("endpoint_closed_forms");
  CheckAccumulator oracle_check("oracle_agreement");
  CheckAccumulator dominance_check("baseline_dominance");

  int seeds_passed = 0;
  for (std::uint64_t seed : seeds) {
    bool seed_ok = true;
    auto guard = [&](CheckAccumulator& acc, auto&& fn) {
      const bool was_passing = acc.pass;
      try {
        fn();
      } catch (const std::exception& e) {
        acc.fail(e.what());
      }
      if (was_passing && !acc.pass) seed_ok = false;
    };

    ScenarioConfig cfg = config;
    cfg.seed = seed;
    const Scenario s = scenario_from_config(cfg);

    std::vector<double> alphas = {0.0, 0.25, 0.5, 0.75, 1.0};
    if (std::find(alphas.begin(), alphas.end(), cfg.alpha) == alphas.end())
      alphas.push_back(cfg.alpha);

    double value_at_config_alpha = 0.0;
    for (double alpha : alphas) {
      SdpSolution sol;
      bool solved = false;
      guard(rank_check, [&] {
        sol = solve(stack(s, alpha), tols);
        solved = true;
        rank_check.record(sol.rank_certificate.ratio, tols.rank);
      });
      if (!solved) {
        seed_ok = false;
        continue;
      }
      if (alpha == cfg.alpha) value_at_config_alpha = sol.primal_value;

      guard(gap_check, [&] {
        gap_check.record(std::abs(sol.gap) / std::max(1.0, sol.dual_value), 1e-7);
      });
      guard(comp_check, [&] { comp_check.record(sol.complementarity_residual, 1e-7); });
      guard(feas_check, [&] {
        const int n = s.config.n_antennas;
        const double tr1 = std::real(trace_product(sol.W_star, stack(s, alpha).B1));
        const double tr2 = std::real(trace_product(sol.W_star, stack(s, alpha).B2));
        feas_check.record(std::max(tr1, tr2) - 1.0, 1e-9);
        feas_check.record(-min_eig(sol.W_star), 1e-9 * std::max(1.0, operator_norm(sol.W_star)));
        feas_check.record(-min_eig(sol.dual.Z), 1e-9 * std::max(1.0, operator_norm(sol.dual.Z)));
        (void)n;
      });
      if (alpha > 0.0 && alpha < 1.0) {
        guard(power_check, [&] {
          const double tr1 = sol.w_star.w1.squaredNorm() / s.config.p1_max;
          const double tr2 = sol.w_star.w2.squaredNorm() / s.config.p2_max;
          power_check.record(1.0 - std::min(tr1, tr2), 1e-6);
        });
      }
      if (alpha == 1.0) {
        guard(endpoint_check, [&] {
          const double expected = endpoint_comm_value(s);
          endpoint_check.record(std::abs(sol.primal_value - expected) / expected, 1e-8);
        });
      }
      if (alpha == 0.0) {
        guard(endpoint_check, [&] {
          const double expected = endpoint_sense_value(s);
          endpoint_check.record(std::abs(sol.primal_value - expected) / expected, 1e-8);
        });
      }
    }

    guard(oracle_check, [&] {
      const double reference = oracle(s, cfg.alpha, options.oracle_restarts);
      const double scale = std::max(std::abs(value_at_config_alpha), 1e-300);
      oracle_check.record(std::abs(value_at_config_alpha - reference) / scale, 1e-4);
    });
    guard(dominance_check, [&] {
      for (const auto& b : all_baselines(s))
        dominance_check.record(b.objective - value_at_config_alpha, 1e-8);
    });

    if (seed_ok) ++seeds_passed;
  }

  VerifyReport report;
  for (const auto* acc : {&gap_check, &comp_check, &rank_check, &feas_check, &power_check,
                          &endpoint_check, &oracle_check, &dominance_check})
    report.checks.push_back(acc->finish());
  report.seeds_run = static_cast<int>(seeds.size());
  report.seeds_passed = seeds_passed;
  report.all_pass = true;
  for (const auto& c : report.checks) report.all_pass = report.all_pass && c.pass;
  return report;
}

}  // namespace jsac
