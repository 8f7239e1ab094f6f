#pragma once

#include <Eigen/Core>

namespace npivq {

/// Observed triples (Y_i, X_i, W_i) with X, W already living on [0,1].
struct Sample {
  Eigen::VectorXd y;
  Eigen::VectorXd x;
  Eigen::VectorXd w;

  Eigen::Index size() const { return y.size(); }

  /// Equal lengths, n >= 4, finite entries, x and w inside [0,1].
  void validate() const;
};

}  // namespace npivq
