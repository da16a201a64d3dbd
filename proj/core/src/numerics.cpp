#include "sheaflab/numerics.hpp"

#include <stdexcept>

namespace sheaflab {

namespace {

void normalize_column_signs(Eigen::MatrixXd& columns) {
  for (Eigen::Index j = 0; j < columns.cols(); ++j) {
    Eigen::Index pivot = 0;
    columns.col(j).cwiseAbs().maxCoeff(&pivot);
    if (columns(pivot, j) < 0) columns.col(j) = -columns.col(j);
  }
}

}  // namespace

TolerancedBasis nullspace_basis(const Eigen::MatrixXd& A, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw std::invalid_argument("nullspace_basis: rel_tol must be in (0, 1)");
  }
  if (!A.allFinite()) {
    throw Error(Errc::NonFiniteEntry,
                "nullspace_basis: matrix has non-finite entries");
  }
  const Eigen::Index n = A.cols();
  if (A.rows() == 0 || n == 0 || A.cwiseAbs().maxCoeff() == 0.0) {
    return {Eigen::MatrixXd::Identity(n, n), 0.0};
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double cutoff = sigma(0) * rel_tol;
  Eigen::Index rank = 0;
  while (rank < sigma.size() && sigma(rank) > cutoff) ++rank;
  Eigen::MatrixXd kernel = svd.matrixV().rightCols(n - rank);
  normalize_column_signs(kernel);
  return {std::move(kernel), cutoff};
}

Eigen::VectorXd project_onto(const TolerancedBasis& basis,
                             const Eigen::VectorXd& x) {
  if (x.size() != basis.ambient_dimension()) {
    throw Error(Errc::DimensionMismatch,
                "project_onto: vector length " + std::to_string(x.size()) +
                    " does not match ambient dimension " +
                    std::to_string(basis.ambient_dimension()));
  }
  if (basis.dimension() == 0) return Eigen::VectorXd::Zero(x.size());
  return basis.columns * (basis.columns.transpose() * x);
}

}  // namespace sheaflab
