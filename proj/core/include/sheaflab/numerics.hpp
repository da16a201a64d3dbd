#ifndef SHEAFLAB_NUMERICS_HPP
#define SHEAFLAB_NUMERICS_HPP

#include <Eigen/Dense>

#include "sheaflab/errors.hpp"

namespace sheaflab {

/// Relative singular-value cutoff used when a caller does not choose one.
inline constexpr double kDefaultRelTol = 1e-9;

/// Orthonormal basis of a subspace together with the absolute singular-value
/// cutoff that produced it.
struct TolerancedBasis {
  Eigen::MatrixXd columns;  // ambient_dimension x dimension, orthonormal
  double rank_tol = 0.0;

  Eigen::Index dimension() const noexcept { return columns.cols(); }
  Eigen::Index ambient_dimension() const noexcept { return columns.rows(); }
};

/// Orthonormal basis of {x : ||Ax|| <= sigma_max * rel_tol * ||x||} via SVD
/// with absolute cutoff sigma_max * rel_tol. An all-zero or empty-row matrix
/// yields the standard basis of the full domain. Basis columns are
/// sign-normalized (largest-magnitude entry positive) so output is
/// reproducible. Throws NonFiniteEntry; rel_tol must lie in (0, 1).
TolerancedBasis nullspace_basis(const Eigen::MatrixXd& A, double rel_tol);

/// Orthogonal projection B * (B^T x) onto the basis's span.
/// Throws DimensionMismatch.
Eigen::VectorXd project_onto(const TolerancedBasis& basis,
                             const Eigen::VectorXd& x);

}  // namespace sheaflab

#endif
