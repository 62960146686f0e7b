#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <sstream>

#include "jsac/errors.hpp"

namespace jsac {

using Complex = std::complex<double>;
using CVector = Eigen::VectorXcd;
using HMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

/// Relative tolerances of the dense Hermitian kernel. Problem sizes here are
/// tiny (n <= 16), so double precision leaves these comfortably attainable.
namespace tol {
inline constexpr double herm = 1e-10;  // Hermitian symmetry defect
inline constexpr double eig = 1e-10;   // eigendecomposition residuals
inline constexpr double psd = 1e-9;    // PSD membership threshold
}  // namespace tol

/// Eigendecomposition of a Hermitian matrix: real eigenvalues in descending
/// order and matching orthonormal eigenvectors stored column-wise.
template <typename Scalar>
struct EigDecompositionT {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Vector<Real, Eigen::Dynamic> eigenvalues;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;
};

using EigDecomposition = EigDecompositionT<Complex>;

namespace detail {

[[noreturn]] inline void throw_dimension(const char* op, long a, long b) {
  std::ostringstream msg;
  msg << op << ": dimension mismatch (" << a << " vs " << b << ")";
  throw DimensionError(msg.str());
}

}  // namespace detail

/// Largest entry magnitude; zero for an empty expression.
template <typename Derived>
double max_abs(const Eigen::MatrixBase<Derived>& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// max_ij |A_ij - conj(A_ji)|.
template <typename Derived>
double hermitian_defect(const Eigen::MatrixBase<Derived>& a) {
  if (a.rows() != a.cols()) detail::throw_dimension("hermitian_defect", a.rows(), a.cols());
  return max_abs(a - a.adjoint());
}

/// Rejects matrices whose Hermitian symmetry defect exceeds tau relative to
/// the entry scale. Violations are an error, never silently symmetrized.
template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const char* who,
                       double tau = tol::herm) {
  const double defect = hermitian_defect(a);
  const double scale = std::max(1.0, max_abs(a));
  if (defect > tau * scale) {
    std::ostringstream msg;
    msg << who << ": matrix is not Hermitian (defect " << defect << ", scale " << scale << ")";
    throw ContractError(msg.str());
  }
}

/// Scalar product, conjugate-linear in the first argument: inner(a, b) = a^H b.
template <typename DA, typename DB>
typename DA::Scalar inner(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.size() != b.size()) detail::throw_dimension("inner", a.size(), b.size());
  return a.dot(b);
}

/// Rank-one Hermitian outer product a a^H.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> outer(
    const Eigen::MatrixBase<Derived>& a) {
  return a * a.adjoint();
}

/// trace(A B) for equally sized square matrices; real-valued for Hermitian
/// pairs, in which case the imaginary part is rounding noise and dropped.
template <typename DA, typename DB>
typename Eigen::NumTraits<typename DA::Scalar>::Real trace_product(
    const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  if (a.rows() != a.cols()) detail::throw_dimension("trace_product", a.rows(), a.cols());
  if (b.rows() != b.cols()) detail::throw_dimension("trace_product", b.rows(), b.cols());
  if (a.rows() != b.rows()) detail::throw_dimension("trace_product", a.rows(), b.rows());
  const typename DA::Scalar tr = a.cwiseProduct(b.transpose()).sum();
  return Eigen::numext::real(tr);
}

/// Full Hermitian eigendecomposition, eigenvalues descending.
template <typename Derived>
EigDecompositionT<typename Derived::Scalar> eigh(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat dense = a;
  require_hermitian(dense, "eigh");
  Eigen::SelfAdjointEigenSolver<Mat> solver(dense);
  if (solver.info() != Eigen::Success) throw SolverError("eigh: eigensolver did not converge");
  EigDecompositionT<Scalar> out;
  out.eigenvalues = solver.eigenvalues().reverse();
  out.eigenvectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

/// Eigenvalues only, descending.
template <typename Derived>
Eigen::Vector<typename Eigen::NumTraits<typename Derived::Scalar>::Real, Eigen::Dynamic>
eigvalsh(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat dense = a;
  require_hermitian(dense, "eigvalsh");
  Eigen::SelfAdjointEigenSolver<Mat> solver(dense, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw SolverError("eigvalsh: eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

template <typename Derived>
double min_eig(const Eigen::MatrixBase<Derived>& a) {
  return eigvalsh(a).minCoeff();
}

/// Operator norm of a Hermitian matrix = max |eigenvalue|.
template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& a) {
  return eigvalsh(a).cwiseAbs().maxCoeff();
}

/// PSD membership with a relative threshold on the smallest eigenvalue.
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& a, double tau = tol::psd) {
  const auto vals = eigvalsh(a);
  const double scale = vals.cwiseAbs().maxCoeff();
  return vals.minCoeff() >= -tau * std::max(scale, 1e-300);
}

}  // namespace jsac
