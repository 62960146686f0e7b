#include "jsac/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "json.hpp"

// Dual-first solver for the relaxed beamforming program
//
//   max  trace(M W)   s.t.  trace(B1 W) <= 1,  trace(B2 W) <= 1,  W >= 0,
//
// whose dual is  min y1 + y2  s.t.  Z(y) = y1 B1 + y2 B2 - M >= 0,  y >= 0.
// The feasible set in y is convex (min-eig of an affine matrix pencil is
// concave) and upward closed, so the optimal level t* = y1 + y2 is found by
// bisection on t with a golden-section search along each level line. The
// smallest eigenvector's block-norm imbalance is the directional derivative
// of the line objective, so a sign bisection on it pins the in-line maximum
// to machine precision; at that point the recovered rank-one primal draws
// full power from both blocks and complementarity holds to solver accuracy.

namespace jsac {

namespace {

constexpr double kInvGolden = 0.61803398874989484820;
constexpr int kLineIterationsCoarse = 56;  // interval shrink ~2e-12 of the level
constexpr int kLineIterationsFinal = 72;
constexpr double kBalanceTolerance = 1e-7;  // block imbalance accepted as balanced

HMatrix dual_slack_matrix(const StackedProblem& p, double y1, double y2) {
  HMatrix z = (-p.M).eval();
  z.diagonal().head(p.n_antennas).array() += y1;
  z.diagonal().tail(p.n_antennas).array() += y2;
  return z;
}

double smallest_eigenvalue(const HMatrix& z, long& eig_evaluations) {
  ++eig_evaluations;
  Eigen::SelfAdjointEigenSolver<HMatrix> solver(z, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw SolverError("solve_dual: eigenvalue computation failed");
  return solver.eigenvalues()(0);
}

CVector smallest_eigenvector(const HMatrix& z, long& eig_evaluations) {
  ++eig_evaluations;
  Eigen::SelfAdjointEigenSolver<HMatrix> solver(z);
  if (solver.info() != Eigen::Success)
    throw SolverError("solve_dual: eigenvector computation failed");
  return solver.eigenvectors().col(0);
}

double block_imbalance(int n, const CVector& u) {
  return u.head(n).squaredNorm() - u.tail(n).squaredNorm();
}

struct LinePoint {
  double y1 = 0.0;
  double value = 0.0;
};

// Maximize y1 -> min_eig(Z(y1, t - y1)) over [0, t]; concave in y1.
LinePoint line_max(const StackedProblem& p, double t, int iterations, long& evals) {
  double a = 0.0, b = t;
  double x1 = b - kInvGolden * (b - a);
  double x2 = a + kInvGolden * (b - a);
  double f1 = smallest_eigenvalue(dual_slack_matrix(p, x1, t - x1), evals);
  double f2 = smallest_eigenvalue(dual_slack_matrix(p, x2, t - x2), evals);
  for (int i = 0; i < iterations; ++i) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvGolden * (b - a);
      f2 = smallest_eigenvalue(dual_slack_matrix(p, x2, t - x2), evals);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvGolden * (b - a);
      f1 = smallest_eigenvalue(dual_slack_matrix(p, x1, t - x1), evals);
    }
  }
  return f1 >= f2 ? LinePoint{x1, f1} : LinePoint{x2, f2};
}

// Sign bisection on the imbalance of the smallest eigenvector along the
// level line; the imbalance is nonincreasing in y1 by concavity.
double balance_point(const StackedProblem& p, double t, long& evals) {
  const int n = p.n_antennas;
  auto imbalance = [&](double y1) {
    return block_imbalance(n, smallest_eigenvector(dual_slack_matrix(p, y1, t - y1), evals));
  };
  double lo = 0.0, hi = t;
  if (imbalance(lo) <= 0.0) return lo;
  if (imbalance(hi) >= 0.0) return hi;
  for (int i = 0; i < 110 && hi - lo > 1e-16 * t; ++i) {
    const double mid = 0.5 * (lo + hi);
    (imbalance(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

CVector scale_to_block_caps(int n, const CVector& u) {
  const double n1 = u.head(n).norm();
  const double n2 = u.tail(n).norm();
  const double big = std::max(n1, n2);
  if (big <= 0.0) throw SolverError("recover_primal: null direction vanished");
  return u / big;
}

// Unit combination of two orthonormal null directions whose block norms are
// equal. The block Gram difference Q is a 2x2 Hermitian form; a zero of
// x^H Q x with |x| = 1 exists whenever Q has eigenvalues of opposite sign.
CVector balanced_null_combination(int n, const CVector& u, const CVector& v) {
  Eigen::Matrix2cd q;
  q(0, 0) = u.head(n).squaredNorm() - u.tail(n).squaredNorm();
  q(0, 1) = u.head(n).dot(v.head(n)) - u.tail(n).dot(v.tail(n));
  q(1, 0) = std::conj(q(0, 1));
  q(1, 1) = v.head(n).squaredNorm() - v.tail(n).squaredNorm();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> dec(q);
  const double mu_lo = std::min(dec.eigenvalues()(0), 0.0);
  const double mu_hi = std::max(dec.eigenvalues()(1), 0.0);
  const double span = mu_hi - mu_lo;
  Eigen::Vector2cd coeff;
  if (span <= 1e-15) {
    coeff << 1.0, 0.0;  // already balanced in every direction
  } else {
    coeff = std::sqrt(-mu_lo / span) * dec.eigenvectors().col(1) +
            std::sqrt(mu_hi / span) * dec.eigenvectors().col(0);
  }
  const CVector combo = coeff(0) * u + coeff(1) * v;
  return scale_to_block_caps(n, combo);
}

// First canonical basis direction of the block, orthogonalized against the
// objective-carrying channels of that block and normalized. Contributes
// nothing to the objective wherever the block is inactive.
CVector zero_effect_direction(const StackedProblem& p, bool first_block) {
  const int n = p.n_antennas;
  const CVector hb = first_block ? p.h.head(n).eval() : p.h.tail(n).eval();
  const CVector gb = first_block ? p.g.head(n).eval() : p.g.tail(n).eval();
  std::vector<CVector> span;
  auto maybe_add = [&](double weight, const CVector& channel) {
    if (weight <= 0.0 || channel.norm() == 0.0) return;
    CVector q = channel;
    for (const auto& b : span) q -= b * b.dot(q);
    if (q.norm() > 1e-12 * channel.norm()) span.push_back(q.normalized());
  };
  maybe_add(p.comm_weight, hb);
  maybe_add(p.sense_weight, gb);
  for (int k = 0; k < n; ++k) {
    CVector v = CVector::Zero(n);
    v(k) = 1.0;
    for (const auto& b : span) v -= b * b.dot(v);
    if (v.norm() > 1e-8) return v.normalized();
  }
  return CVector::Zero(n);
}

// Makes the first non-negligible entry real positive.
void fix_global_phase(CVector& w) {
  const double scale = max_abs(w);
  if (scale <= 0.0) return;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (std::abs(w(i)) > 1e-12 * scale) {
      w *= std::conj(w(i)) / std::abs(w(i));
      return;
    }
  }
}

// One cap is inactive: the optimum concentrates in the other block. The
// active beamformer is the leading eigenvector of the block of M; the
// inactive block is filled with a deterministic zero-effect direction.
CVector boundary_recovery(const StackedProblem& p, const DualPoint& d,
                          const SolverTolerances& tols) {
  const int n = p.n_antennas;
  const double level = std::max(1.0, d.y1 + d.y2);
  const bool y1_inactive = d.y1 <= tols.boundary * level;
  const bool y2_inactive = d.y2 <= tols.boundary * level;
  if (!y1_inactive && !y2_inactive)
    throw SolverError("recover_primal: boundary recovery invoked away from the boundary");
  // the active block is the one whose cap still binds
  const bool first_active = (y1_inactive && y2_inactive) ? d.y1 >= d.y2 : y2_inactive;

  const int offset = first_active ? 0 : n;
  const HMatrix active_block = p.M.block(offset, offset, n, n);
  const auto dec = eigh(active_block);
  if (dec.eigenvalues(0) <= 0.0)
    throw SolverError("recover_primal: active block carries no objective mass");

  CVector w = CVector::Zero(2 * n);
  if (first_active) {
    w.head(n) = dec.eigenvectors.col(0);
    w.tail(n) = zero_effect_direction(p, /*first_block=*/false);
  } else {
    w.tail(n) = dec.eigenvectors.col(0);
    w.head(n) = zero_effect_direction(p, /*first_block=*/true);
  }
  return w;
}

}  // namespace

DualPoint solve_dual(const StackedProblem& p, const SolverTolerances& tols) {
  require_hermitian(p.M, "solve_dual: M");
  const RVector mvals = eigvalsh(p.M);
  const double lmax = mvals(0);
  const double mnorm = mvals.cwiseAbs().maxCoeff();
  if (mnorm <= 0.0 || lmax <= 0.0)
    throw DegenerateError("solve_dual: objective matrix is zero, optimum is trivially 0");
  if (mvals.minCoeff() < -tols.psd * mnorm)
    throw ContractError("solve_dual: M is not positive semidefinite");

  long evals = 1;
  int bisections = 0;

  // t* lies in [lmax, 2 lmax]: the top eigenvector forces y1 |x1|^2 + y2 |x2|^2
  // >= lmax, and y1 = y2 = lmax is feasible.
  double t_lo = lmax * (1.0 - 1e-12);
  double t_hi = 2.0 * lmax * (1.0 + 1e-12);
  for (int grow = 0; line_max(p, t_hi, kLineIterationsCoarse, evals).value < 0.0; ++grow) {
    if (grow >= 8) throw SolverError("solve_dual: could not bracket a feasible dual level");
    t_hi *= 2.0;
  }
  while (t_hi - t_lo > tols.dual * std::max(1.0, t_hi) && bisections < 200) {
    ++bisections;
    const double mid = 0.5 * (t_lo + t_hi);
    if (line_max(p, mid, kLineIterationsCoarse, evals).value >= 0.0)
      t_hi = mid;
    else
      t_lo = mid;
  }

  const double t = t_hi;
  const LinePoint coarse = line_max(p, t, kLineIterationsFinal, evals);
  double y1 = balance_point(p, t, evals);
  double slack = smallest_eigenvalue(dual_slack_matrix(p, y1, t - y1), evals);
  if (slack + 1e-12 * std::max(1.0, t) < coarse.value) {
    y1 = coarse.y1;  // imbalance sign was unreliable (multiple smallest eigenvalue)
    slack = coarse.value;
  }
  double y2 = t - y1;
  if (slack < 0.0) {
    // lift both multipliers just past the PSD boundary
    const double lift = -slack;
    y1 += lift;
    y2 += lift;
  }

  DualPoint d;
  d.y1 = y1;
  d.y2 = y2;
  d.Z = dual_slack_matrix(p, y1, y2);
  d.bisection_iterations = bisections;
  d.eig_evaluations = evals;
  return d;
}

SdpSolution recover_primal(const StackedProblem& p, const DualPoint& d,
                           const SolverTolerances& tols) {
  const int n = p.n_antennas;
  const Eigen::Index dim = 2 * static_cast<Eigen::Index>(n);
  if (d.Z.rows() != dim || d.Z.cols() != dim)
    throw DimensionError("recover_primal: dual slack has the wrong dimension");
  if (d.y1 < 0.0 || d.y2 < 0.0)
    throw ContractError("recover_primal: negative dual multipliers");

  const auto zdec = eigh(d.Z);
  const double znorm = std::max(zdec.eigenvalues.cwiseAbs().maxCoeff(), 1e-300);
  if (zdec.eigenvalues(dim - 1) < -tols.psd * znorm)
    throw ContractError("recover_primal: dual point is not feasible");

  const double t = d.y1 + d.y2;
  const double level = std::max(1.0, t);

  CVector w;
  if (d.y1 <= tols.boundary * level || d.y2 <= tols.boundary * level) {
    w = boundary_recovery(p, d, tols);
  } else {
    std::vector<Eigen::Index> null_cols;
    for (Eigen::Index i = dim - 1; i >= 0; --i) {
      if (zdec.eigenvalues(i) <= tols.nullspace * znorm) null_cols.push_back(i);
    }
    if (null_cols.empty())
      throw SolverError(
          "recover_primal: dual slack has no null direction; the point cannot be optimal");
    if (null_cols.size() > 2) {
      std::ostringstream msg;
      msg << "recover_primal: near-null space has dimension " << null_cols.size()
          << " (eigenvalues:";
      for (auto i : null_cols) msg << ' ' << zdec.eigenvalues(i);
      msg << "); instance is degenerate";
      throw DegenerateError(msg.str());
    }
    const CVector u0 = zdec.eigenvectors.col(null_cols[0]);
    if (null_cols.size() == 1 || std::abs(block_imbalance(n, u0)) <= kBalanceTolerance) {
      w = scale_to_block_caps(n, u0);
    } else {
      const CVector u1 = zdec.eigenvectors.col(null_cols[1]);
      w = balanced_null_combination(n, u0, u1);
    }
  }
  fix_global_phase(w);

  SdpSolution sol;
  sol.W_star = outer(w);
  sol.w_star = unstack_beamformers(p, w);
  sol.primal_value = objective_matrix_value(p, sol.W_star);
  sol.dual_value = t;
  sol.gap = sol.dual_value - sol.primal_value;
  sol.complementarity_residual = trace_product(sol.W_star, d.Z);
  sol.rank_certificate = rank_certificate(sol.W_star, tols);
  sol.dual = d;

  const double tr1 = w.head(n).squaredNorm();
  const double tr2 = w.tail(n).squaredNorm();
  if (tr1 > 1.0 + tols.feas || tr2 > 1.0 + tols.feas)
    throw SolverError("recover_primal: block power traces exceed the caps");
  if (sol.gap < -tols.gap || sol.gap > tols.gap * std::max(1.0, sol.dual_value)) {
    std::ostringstream msg;
    msg << "recover_primal: duality gap " << sol.gap << " outside tolerance "
        << tols.gap * std::max(1.0, sol.dual_value);
    throw SolverError(msg.str());
  }
  if (sol.complementarity_residual > tols.comp) {
    std::ostringstream msg;
    msg << "recover_primal: complementarity residual " << sol.complementarity_residual
        << " exceeds " << tols.comp;
    throw SolverError(msg.str());
  }
  return sol;
}

RankCertificate rank_certificate(const HMatrix& W, const SolverTolerances& tols) {
  const auto dec = eigh(W);
  RankCertificate cert;
  cert.lambda1 = dec.eigenvalues(0);
  cert.lambda2 = dec.eigenvalues.size() > 1 ? dec.eigenvalues(1) : 0.0;
  if (cert.lambda1 <= 0.0) {
    cert.ratio = 0.0;
    cert.declared_rank = 0;
    return cert;
  }
  // magnitude-based numerical rank: a second eigenvalue of either sign that
  // stands above the threshold disqualifies a rank-one claim
  cert.ratio = std::abs(cert.lambda2) / cert.lambda1;
  cert.declared_rank = 1;
  for (Eigen::Index i = 1; i < dec.eigenvalues.size(); ++i) {
    if (std::abs(dec.eigenvalues(i)) / cert.lambda1 > tols.rank) ++cert.declared_rank;
  }
  return cert;
}

RankCertificate verify_rank_bound(const HMatrix& W, const SolverTolerances& tols) {
  const RankCertificate cert = rank_certificate(W, tols);
  const auto vals = eigvalsh(W);
  const double scale = std::max(vals.cwiseAbs().maxCoeff(), 1e-300);
  if (vals.minCoeff() < -tols.psd * scale)
    throw CertificateError("rank certificate: W is not positive semidefinite");
  if (cert.declared_rank == 0)
    throw CertificateError("rank certificate: W is numerically zero (rank 0 excluded)");
  if (cert.declared_rank != 1) {
    std::ostringstream msg;
    msg << "rank certificate violated: lambda1 = " << cert.lambda1
        << ", lambda2 = " << cert.lambda2 << ", ratio = " << cert.ratio << " > " << tols.rank
        << " (two trace caps admit rank^2 <= 2, so the rank must be 1)";
    throw CertificateError(msg.str());
  }
  return cert;
}

RankCertificate verify_rank_bound(const SdpSolution& sol, const SolverTolerances& tols) {
  return verify_rank_bound(sol.W_star, tols);
}

SdpSolution solve(const StackedProblem& p, const SolverTolerances& tols) {
  SolverTolerances attempt = tols;
  for (int round = 0;; ++round) {
    try {
      const DualPoint d = solve_dual(p, attempt);
      SdpSolution sol = recover_primal(p, d, tols);
      sol.rank_certificate = verify_rank_bound(sol, tols);
      return sol;
    } catch (const SolverError&) {
      if (round >= 2) throw;
      attempt.dual /= 32.0;  // retry with a tighter dual level before giving up
    }
  }
}

CVector stack_beamformers(const StackedProblem& p, const BeamformerPair& b) {
  const auto n = static_cast<Eigen::Index>(p.n_antennas);
  if (b.w1.size() != n || b.w2.size() != n)
    throw DimensionError("stack_beamformers: pair does not match the problem dimension");
  CVector u(2 * n);
  u.head(n) = b.w1 / std::sqrt(p.p1_max);
  u.tail(n) = b.w2 / std::sqrt(p.p2_max);
  return u;
}

BeamformerPair unstack_beamformers(const StackedProblem& p, const CVector& w) {
  const auto n = static_cast<Eigen::Index>(p.n_antennas);
  if (w.size() != 2 * n)
    throw DimensionError("unstack_beamformers: stacked vector must have length 2N");
  BeamformerPair b;
  b.w1 = std::sqrt(p.p1_max) * w.head(n);
  b.w2 = std::sqrt(p.p2_max) * w.tail(n);
  return b;
}

std::string diagnostic_json(const SdpSolution& sol) {
  nlohmann::json j;
  j["y1"] = sol.dual.y1;
  j["y2"] = sol.dual.y2;
  j["primal_value"] = sol.primal_value;
  j["dual_value"] = sol.dual_value;
  j["gap"] = sol.gap;
  j["complementarity_residual"] = sol.complementarity_residual;
  j["eigenvalue_ratio"] = sol.rank_certificate.ratio;
  j["declared_rank"] = sol.rank_certificate.declared_rank;
  j["bisection_iterations"] = sol.dual.bisection_iterations;
  j["eig_evaluations"] = sol.dual.eig_evaluations;
  return j.dump();
}

}  // namespace jsac
