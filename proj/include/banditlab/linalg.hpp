#pragma once

// Small dense kernel: projectors onto / against spans, weighted norms,
// symmetric spectra, SPD solves and rank-one inverse updates.
//
// Everything is templated on the Eigen scalar; the rest of the library uses
// the double aliases at the bottom of this file.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "banditlab/errors.hpp"

namespace banditlab {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Vec = Vector<double>;
using Mat = Matrix<double>;

/// Singular values at or below this fraction of the largest are dropped when
/// building a basis.
inline constexpr double kRankTolerance = 1e-10;

namespace linalg_detail {

template <typename Scalar>
Matrix<Scalar> stack_columns(const std::vector<Vector<Scalar>>& vectors) {
  if (vectors.empty()) return Matrix<Scalar>(0, 0);
  const Eigen::Index d = vectors.front().size();
  if (d < 1) throw InvalidInput("orth_basis: vectors must have dimension >= 1");
  Matrix<Scalar> columns(d, static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t j = 0; j < vectors.size(); ++j) {
    if (vectors[j].size() != d)
      throw InvalidInput("orth_basis: dimension mismatch (" + std::to_string(vectors[j].size()) +
                         " vs " + std::to_string(d) + ")");
    columns.col(static_cast<Eigen::Index>(j)) = vectors[j];
  }
  return columns;
}

}  // namespace linalg_detail

/// Orthonormal basis (as columns) of the column span of `columns`.
template <typename Derived>
Matrix<typename Derived::Scalar> orth_basis(const Eigen::MatrixBase<Derived>& columns,
                                            typename Derived::Scalar rank_tol = kRankTolerance) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index d = columns.rows();
  if (columns.cols() == 0 || d == 0) return Matrix<Scalar>(d, 0);
  Eigen::JacobiSVD<Matrix<Scalar>> svd(columns.eval(), Eigen::ComputeThinU);
  const auto& sigma = svd.singularValues();
  const Scalar sigma_max = sigma.size() > 0 ? sigma(0) : Scalar(0);
  Eigen::Index rank = 0;
  if (sigma_max > Scalar(0)) {
    while (rank < sigma.size() && sigma(rank) > rank_tol * sigma_max) ++rank;
  }
  return svd.matrixU().leftCols(rank);
}

/// Orthonormal basis of span(vectors), one column per retained direction. An
/// empty input yields a 0x0 matrix.
template <typename Scalar>
Matrix<Scalar> orth_basis(const std::vector<Vector<Scalar>>& vectors,
                          Scalar rank_tol = Scalar(kRankTolerance)) {
  if (vectors.empty()) return Matrix<Scalar>(0, 0);
  return orth_basis(linalg_detail::stack_columns(vectors), rank_tol);
}

/// x minus its component in the span of the columns of `basis`, which must be
/// orthonormal.
template <typename DerivedU, typename DerivedX>
Vector<typename DerivedX::Scalar> remove_span(const Eigen::MatrixBase<DerivedU>& basis,
                                              const Eigen::MatrixBase<DerivedX>& x) {
  if (basis.cols() == 0) return x;
  if (basis.rows() != x.size()) throw InvalidInput("remove_span: dimension mismatch");
  return x - basis * (basis.transpose() * x);
}

/// Projection of x onto the orthogonal complement of span(spanning). The
/// spanning set need not be orthonormal.
template <typename Scalar>
Vector<Scalar> proj_orth_complement(const std::vector<Vector<Scalar>>& spanning,
                                    const Vector<Scalar>& x) {
  for (const auto& v : spanning)
    if (v.size() != x.size()) throw InvalidInput("proj_orth_complement: dimension mismatch");
  if (spanning.empty()) return x;
  return remove_span(orth_basis(spanning), x);
}

/// I - U Uᵀ for an orthonormal U with d rows.
template <typename Derived>
Matrix<typename Derived::Scalar> complement_projector(const Eigen::MatrixBase<Derived>& basis,
                                                      Eigen::Index d) {
  using Scalar = typename Derived::Scalar;
  Matrix<Scalar> p = Matrix<Scalar>::Identity(d, d);
  if (basis.cols() > 0) p.noalias() -= basis * basis.transpose();
  return p;
}

template <typename Derived>
void require_symmetric(const Eigen::MatrixBase<Derived>& m, const char* who) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols()) throw InvalidInput(std::string(who) + ": matrix is not square");
  if (m.size() == 0) return;
  const Scalar scale = std::max<Scalar>(Scalar(1), m.cwiseAbs().maxCoeff());
  const Scalar asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= Scalar(1e-12) * scale))
    throw InvalidInput(std::string(who) + ": matrix is not symmetric");
}

/// Eigenvalues in ascending order.
template <typename Derived>
Vector<typename Derived::Scalar> sym_eigenvalues(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  require_symmetric(m, "sym_eigenvalues");
  if (m.size() == 0) return Vector<Scalar>(0);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(m.eval(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

template <typename Derived>
typename Derived::Scalar min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  const auto values = sym_eigenvalues(m);
  if (values.size() == 0) throw InvalidInput("min_eigenvalue: empty matrix");
  return values(0);
}

/// Spectral norm of a symmetric matrix.
template <typename Derived>
typename Derived::Scalar sym_spectral_norm(const Eigen::MatrixBase<Derived>& m) {
  const auto values = sym_eigenvalues(m);
  if (values.size() == 0) return 0;
  return std::max(std::abs(values(0)), std::abs(values(values.size() - 1)));
}

/// sqrt(xᵀ M x) for positive semidefinite M.
template <typename DerivedX, typename DerivedM>
typename DerivedX::Scalar weighted_norm(const Eigen::MatrixBase<DerivedX>& x,
                                        const Eigen::MatrixBase<DerivedM>& m) {
  using Scalar = typename DerivedX::Scalar;
  if (m.rows() != x.size() || m.cols() != x.size())
    throw InvalidInput("weighted_norm: dimension mismatch");
  const Scalar q = x.dot(m * x);
  if (q < Scalar(-1e-12)) throw NumericalError("weighted_norm: negative quadratic form");
  return std::sqrt(std::max(q, Scalar(0)));
}

/// Solves M x = b for symmetric positive definite M.
template <typename DerivedM, typename DerivedB>
Vector<typename DerivedB::Scalar> spd_solve(const Eigen::MatrixBase<DerivedM>& m,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedB::Scalar;
  if (m.rows() != m.cols() || m.rows() != b.size())
    throw InvalidInput("spd_solve: dimension mismatch");
  Eigen::LLT<Matrix<Scalar>> llt(m.eval());
  if (llt.info() != Eigen::Success) throw NumericalError("spd_solve: matrix is not positive definite");
  return llt.solve(b.eval());
}

/// (M + a aᵀ)⁻¹ given M⁻¹.
template <typename DerivedM, typename DerivedA>
Matrix<typename DerivedM::Scalar> sherman_morrison_update(const Eigen::MatrixBase<DerivedM>& m_inv,
                                                          const Eigen::MatrixBase<DerivedA>& a) {
  using Scalar = typename DerivedM::Scalar;
  if (m_inv.rows() != a.size() || m_inv.cols() != a.size())
    throw InvalidInput("sherman_morrison_update: dimension mismatch");
  const Vector<Scalar> m_inv_a = m_inv * a;
  const Scalar denom = Scalar(1) + a.dot(m_inv_a);
  if (!(denom > Scalar(0))) throw NumericalError("sherman_morrison_update: non-positive denominator");
  Matrix<Scalar> out = m_inv;
  out.noalias() -= (m_inv_a * m_inv_a.transpose()) / denom;
  return (out + out.transpose()) / Scalar(2);
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace banditlab
