#pragma once

#include <string>

#include "jsac/metrics.hpp"
#include "jsac/scenario.hpp"

namespace jsac {

/// Solver and certificate tolerances. The solver targets are kept roughly
/// two orders of magnitude tighter than the certificate thresholds they back.
struct SolverTolerances {
  double dual = 1e-9;       // relative accuracy of the dual optimal value
  double nullspace = 1e-7;  // relative near-null threshold on eigenvalues of Z
  double rank = 1e-6;       // max lambda2/lambda1 for a rank-one certificate
  double gap = 1e-7;        // duality gap bound, relative to max(1, dual value)
  double comp = 1e-7;       // complementarity residual bound
  double feas = 1e-9;       // slack on the block power traces
  double psd = 1e-9;        // PSD membership threshold, relative
  double boundary = 1e-8;   // multiplier size below which a cap is treated as inactive
};

/// Optimal multipliers of the two trace caps and the dual slack matrix
/// Z = y1 B1 + y2 B2 - M (positive semidefinite at a feasible point).
struct DualPoint {
  double y1 = 0.0;
  double y2 = 0.0;
  HMatrix Z;
  int bisection_iterations = 0;
  long eig_evaluations = 0;
};

/// Leading eigenvalue pair of the recovered W and the rank it certifies.
/// With one matrix variable under two trace caps the certified rank must
/// satisfy rank^2 <= 2, i.e. exactly one for any nonzero solution.
struct RankCertificate {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double ratio = 0.0;
  int declared_rank = 0;
};

struct SdpSolution {
  HMatrix W_star;         // optimal relaxed variable, unit-cap coordinates
  BeamformerPair w_star;  // physical per-AP beamformers
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;
  RankCertificate rank_certificate;
  double complementarity_residual = 0.0;
  DualPoint dual;
};

/// Minimizes y1 + y2 over the spectrahedron {y >= 0 : Z(y) >= 0} by bisection
/// on the level t = y1 + y2 with a concave line search in y1; every step is
/// certified through the Hermitian eigensolver.
DualPoint solve_dual(const StackedProblem& p, const SolverTolerances& tols = {});

/// Builds the rank-one primal from the (near-)null space of the dual slack
/// and checks feasibility, complementarity and the duality gap.
SdpSolution recover_primal(const StackedProblem& p, const DualPoint& d,
                           const SolverTolerances& tols = {});

/// Computes the eigenvalue-ratio certificate without enforcing it.
RankCertificate rank_certificate(const HMatrix& W, const SolverTolerances& tols = {});

/// Asserts that W is (numerically) PSD of rank exactly one and returns the
/// certificate; throws CertificateError otherwise.
RankCertificate verify_rank_bound(const HMatrix& W, const SolverTolerances& tols = {});
RankCertificate verify_rank_bound(const SdpSolution& sol, const SolverTolerances& tols = {});

/// solve_dual -> recover_primal -> verify_rank_bound.
SdpSolution solve(const StackedProblem& p, const SolverTolerances& tols = {});

/// Physical pair -> unit-cap stacked vector and back.
CVector stack_beamformers(const StackedProblem& p, const BeamformerPair& b);
BeamformerPair unstack_beamformers(const StackedProblem& p, const CVector& w);

/// One-line JSON diagnostic record: multipliers, gap, eigenvalue ratio,
/// iteration counts.
std::string diagnostic_json(const SdpSolution& sol);

}  // namespace jsac
