#include "jsac/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "jsac/rng.hpp"

namespace jsac {

void ScenarioConfig::validate() const {
  if (n_antennas < 1) throw ConfigError("config: n_antennas must be >= 1");
  if (!(sigma1_sq > 0.0) || !(sigma2_sq > 0.0))
    throw ConfigError("config: noise powers must be strictly positive");
  if (!(p1_max > 0.0) || !(p2_max > 0.0))
    throw ConfigError("config: power caps must be strictly positive");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("config: alpha must lie in [0, 1]");
  for (double a : alpha_grid)
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("config: alpha_grid entries must lie in [0, 1]");
  if (tau_rank && !(*tau_rank > 0.0)) throw ConfigError("config: tau_rank must be positive");
}

namespace {

ScenarioConfig parse_config(const nlohmann::json& j) {
  static const std::set<std::string> known = {
      "n_antennas", "seed",   "sigma1_sq",    "sigma2_sq", "p1_max",
      "p2_max",     "alpha",  "channels_csv", "alpha_grid", "tau_rank"};
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) throw ConfigError("config: unknown key '" + item.key() + "'");
  }
  ScenarioConfig cfg;
  try {
    cfg.n_antennas = j.value("n_antennas", cfg.n_antennas);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.sigma1_sq = j.value("sigma1_sq", cfg.sigma1_sq);
    cfg.sigma2_sq = j.value("sigma2_sq", cfg.sigma2_sq);
    cfg.p1_max = j.value("p1_max", cfg.p1_max);
    cfg.p2_max = j.value("p2_max", cfg.p2_max);
    cfg.alpha = j.value("alpha", cfg.alpha);
    cfg.channels_csv = j.value("channels_csv", cfg.channels_csv);
    if (j.contains("alpha_grid")) cfg.alpha_grid = j.at("alpha_grid").get<std::vector<double>>();
    if (j.contains("tau_rank")) cfg.tau_rank = j.at("tau_rank").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  cfg.validate();
  return cfg;
}

}  // namespace

ScenarioConfig config_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: document must be a JSON object");
  return parse_config(j);
}

ScenarioConfig config_from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("config: cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return config_from_json_text(buffer.str());
}

void Scenario::validate() const {
  config.validate();
  const auto n = static_cast<Eigen::Index>(config.n_antennas);
  if (h1.size() != n || h2.size() != n || g1.size() != n || g2.size() != n)
    throw DimensionError("scenario: all channels must have length n_antennas");
  if (h1.norm() == 0.0 && h2.norm() == 0.0)
    throw ContractError("scenario: both communication channels are zero");
  if (g1.norm() == 0.0 && g2.norm() == 0.0)
    throw ContractError("scenario: both sensing channels are zero");
}

Scenario generate(const ScenarioConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const int n = config.n_antennas;
  Scenario s;
  s.config = config;
  for (CVector* channel : {&s.h1, &s.h2, &s.g1, &s.g2}) {
    channel->resize(n);
    for (int i = 0; i < n; ++i) (*channel)(i) = rng.complex_gaussian();
  }
  s.validate();
  return s;
}

namespace {

CVector parse_channel_row(const std::string& line, int row_index) {
  std::vector<double> values;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      values.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw ConfigError("channels csv: row " + std::to_string(row_index + 1) +
                        " has a non-numeric cell '" + cell + "'");
    }
  }
  if (values.empty() || values.size() % 2 != 0)
    throw ConfigError("channels csv: row " + std::to_string(row_index + 1) +
                      " must hold interleaved real/imag pairs");
  CVector v(values.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = Complex(values[2 * i], values[2 * i + 1]);
  return v;
}

}  // namespace

Scenario load_channels_csv(const std::filesystem::path& path, const ScenarioConfig& config) {
  std::ifstream in(path);
  if (!in) throw IoError("channels csv: cannot open " + path.string());
  std::vector<CVector> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    rows.push_back(parse_channel_row(line, static_cast<int>(rows.size())));
  }
  if (rows.size() != 4)
    throw ConfigError("channels csv: expected 4 rows (h1, h2, g1, g2), got " +
                      std::to_string(rows.size()));
  for (const auto& r : rows)
    if (r.size() != rows[0].size())
      throw ConfigError("channels csv: all rows must have the same length");

  Scenario s;
  s.config = config;
  s.config.n_antennas = static_cast<int>(rows[0].size());
  s.h1 = rows[0];
  s.h2 = rows[1];
  s.g1 = rows[2];
  s.g2 = rows[3];
  s.validate();
  return s;
}

Scenario scenario_from_config(const ScenarioConfig& config) {
  if (!config.channels_csv.empty()) return load_channels_csv(config.channels_csv, config);
  return generate(config);
}

StackedProblem stack(const Scenario& s) { return stack(s, s.config.alpha); }

StackedProblem stack(const Scenario& s, double alpha) {
  s.validate();
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("stack: alpha must lie in [0, 1]");
  const int n = s.config.n_antennas;
  StackedProblem p;
  p.n_antennas = n;
  p.alpha = alpha;
  p.p1_max = s.config.p1_max;
  p.p2_max = s.config.p2_max;

  const double r1 = std::sqrt(p.p1_max);
  const double r2 = std::sqrt(p.p2_max);
  p.h.resize(2 * n);
  p.h << r1 * s.h1, r2 * s.h2;
  p.g.resize(2 * n);
  p.g << r1 * s.g1, r2 * s.g2;

  p.comm_weight = alpha / s.config.sigma1_sq;
  p.sense_weight = (1.0 - alpha) * s.g2.squaredNorm() / s.config.sigma2_sq;
  p.M = p.comm_weight * outer(p.h) + p.sense_weight * outer(p.g);

  p.B1 = HMatrix::Zero(2 * n, 2 * n);
  p.B1.topLeftCorner(n, n) = HMatrix::Identity(n, n);
  p.B2 = HMatrix::Zero(2 * n, 2 * n);
  p.B2.bottomRightCorner(n, n) = HMatrix::Identity(n, n);
  return p;
}

double objective_matrix_value(const StackedProblem& p, const HMatrix& W) {
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(p.n_antennas);
  if (W.rows() != dim || W.cols() != dim)
    throw DimensionError("objective_matrix_value: W must be 2N x 2N");
  require_hermitian(W, "objective_matrix_value: W");
  return trace_product(p.M, W);
}

}  // namespace jsac
