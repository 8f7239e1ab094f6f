#pragma once

#include <Eigen/Core>

namespace npivq {

/// Rank cutoff shared by every generalized inverse in the estimator: singular
/// values (or eigenvalues) below rel_rank_tol * sigma_max are treated as zero.
struct TolerancePolicy {
  double rel_rank_tol = 1e-10;

  void validate() const;
};

/// M^{-1/2} for symmetric PSD M via eigendecomposition. Eigenvalues under the
/// cutoff are clamped to the cutoff (not dropped) so downstream 1/s quantities
/// stay finite; *clamped reports whether that happened. Throws InvalidInputError
/// for materially non-symmetric or indefinite input.
Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& m, const TolerancePolicy& tol = {},
                             bool* clamped = nullptr);

/// Smallest of the min(r,c) singular values, >= 0.
double min_singular_value(const Eigen::MatrixXd& m);

/// Moore-Penrose left pseudoinverse (c x r) via SVD with rank cutoff; requires
/// r >= c. *rank reports the numerical rank.
Eigen::MatrixXd pinv_left(const Eigen::MatrixXd& m, const TolerancePolicy& tol = {},
                          int* rank = nullptr);

}  // namespace npivq
