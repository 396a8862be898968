#pragma once

// Regularized least-squares estimation with self-normalized confidence
// ellipsoids  {θ : ‖θ̂ − θ‖_V ≤ √β}.

#include <cmath>
#include <cstdint>

#include "banditlab/errors.hpp"
#include "banditlab/linalg.hpp"

namespace banditlab {

/// Noise scale, norm bound and failure probability of one ellipsoid.
struct ConfidenceParams {
  double R = 1.0;
  double M = 1.0;
  double delta = 0.05;
  int d = 1;

  void validate() const {
    if (!(R >= 0.0)) throw InvalidInput("ConfidenceParams: R must be >= 0");
    if (!(M > 0.0)) throw InvalidInput("ConfidenceParams: M must be > 0");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidInput("ConfidenceParams: delta must lie in (0,1)");
    if (d < 1) throw InvalidInput("ConfidenceParams: d must be >= 1");
  }
};

/// √β_T = R √(d log((1 + T M²/ρ)/δ)) + √ρ M.
inline double beta_radius(std::int64_t count, const ConfidenceParams& params, double rho) {
  const double t = static_cast<double>(count < 0 ? 0 : count);
  const double log_term = std::log((1.0 + t * params.M * params.M / rho) / params.delta);
  return params.R * std::sqrt(params.d * log_term) + std::sqrt(rho) * params.M;
}

/// Design matrix V = Σ a aᵀ + ρI, its inverse, and b = Σ a x for one unknown
/// vector. The inverse is maintained by rank-one updates and rebuilt from V
/// every kRefreshPeriod updates.
template <typename Scalar>
class Estimator {
 public:
  static constexpr std::int64_t kRefreshPeriod = 256;

  Estimator() = default;

  Estimator(Eigen::Index d, Scalar rho) {
    if (!(rho > Scalar(0))) throw InvalidInput("estimator_init: rho must be > 0");
    if (d < 1) throw InvalidInput("estimator_init: d must be >= 1");
    rho_ = rho;
    design_ = Matrix<Scalar>::Identity(d, d) * rho;
    inverse_ = Matrix<Scalar>::Identity(d, d) / rho;
    response_ = Vector<Scalar>::Zero(d);
  }

  /// Restores a state from its parts (e.g. a synthetic prior). `design` must
  /// dominate rho·I.
  static Estimator from_parts(Matrix<Scalar> design, Vector<Scalar> response, std::int64_t count,
                              Scalar rho) {
    Estimator e(design.rows(), rho);
    if (design.cols() != design.rows() || response.size() != design.rows())
      throw InvalidInput("Estimator::from_parts: dimension mismatch");
    require_symmetric(design, "Estimator::from_parts");
    e.design_ = std::move(design);
    e.response_ = std::move(response);
    e.count_ = count;
    e.refresh();
    return e;
  }

  template <typename Derived>
  void update(const Eigen::MatrixBase<Derived>& a, Scalar x) {
    if (a.size() != dim()) throw InvalidInput("estimator_update: dimension mismatch");
    design_.noalias() += a * a.transpose();
    response_.noalias() += a * x;
    ++count_;
    if (count_ % kRefreshPeriod == 0) {
      refresh();
    } else {
      inverse_ = sherman_morrison_update(inverse_, a);
    }
  }

  Eigen::Index dim() const { return design_.rows(); }
  Scalar rho() const { return rho_; }
  std::int64_t count() const { return count_; }
  const Matrix<Scalar>& design() const { return design_; }
  const Matrix<Scalar>& design_inverse() const { return inverse_; }
  const Vector<Scalar>& response() const { return response_; }

 private:
  void refresh() {
    Eigen::LLT<Matrix<Scalar>> llt(design_);
    if (llt.info() != Eigen::Success) throw NumericalError("Estimator: design matrix lost definiteness");
    inverse_ = llt.solve(Matrix<Scalar>::Identity(dim(), dim()));
    inverse_ = (inverse_ + inverse_.transpose()) / Scalar(2);
  }

  Scalar rho_ = Scalar(1);
  Matrix<Scalar> design_;
  Matrix<Scalar> inverse_;
  Vector<Scalar> response_;
  std::int64_t count_ = 0;
};

using EstimatorState = Estimator<double>;

/// θ̂ = V⁻¹ b.
template <typename Scalar>
Vector<Scalar> mle(const Estimator<Scalar>& est) {
  return spd_solve(est.design(), est.response());
}

/// ‖a‖_{V⁻¹}.
template <typename Scalar, typename Derived>
Scalar exploration_width(const Estimator<Scalar>& est, const Eigen::MatrixBase<Derived>& a) {
  if (a.size() != est.dim()) throw InvalidInput("exploration_width: dimension mismatch");
  return weighted_norm(a, est.design_inverse());
}

/// ‖θ̂ − θ‖_V ≤ radius.
template <typename Scalar, typename Derived>
bool in_ellipsoid(const Estimator<Scalar>& est, const Eigen::MatrixBase<Derived>& theta, Scalar radius) {
  if (theta.size() != est.dim()) throw InvalidInput("in_ellipsoid: dimension mismatch");
  const Vector<Scalar> diff = mle(est) - theta;
  return weighted_norm(diff, est.design()) <= radius;
}

}  // namespace banditlab
