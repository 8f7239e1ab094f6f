#include "npivq/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <string>

#include "npivq/errors.hpp"

namespace npivq {

void TolerancePolicy::validate() const {
  if (!(rel_rank_tol > 0.0 && rel_rank_tol < 1.0))
    throw InvalidInputError("tolerance: rel_rank_tol must be in (0,1)");
}

Eigen::MatrixXd sym_inv_sqrt(const Eigen::MatrixXd& m, const TolerancePolicy& tol, bool* clamped) {
  tol.validate();
  if (m.rows() != m.cols()) throw InvalidInputError("sym_inv_sqrt: matrix not square");
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (scale > 0.0 && asym > 1e-8 * scale)
    throw InvalidInputError("sym_inv_sqrt: input not symmetric within 1e-8 relative");

  const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) throw NumericError("sym_inv_sqrt: eigendecomposition failed");
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double emax = ev.maxCoeff();
  if (!(emax > 0.0)) throw InvalidInputError("sym_inv_sqrt: matrix has no positive eigenvalue");
  const double cutoff = tol.rel_rank_tol * emax;
  if (ev.minCoeff() < -cutoff)
    throw InvalidInputError("sym_inv_sqrt: matrix indefinite (eigenvalue " +
                            std::to_string(ev.minCoeff()) + ")");

  bool did_clamp = false;
  Eigen::VectorXd inv_sqrt(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    double lambda = ev[i];
    if (lambda < cutoff) {
      lambda = cutoff;
      did_clamp = true;
    }
    inv_sqrt[i] = 1.0 / std::sqrt(lambda);
  }
  if (clamped) *clamped = did_clamp;
  Eigen::MatrixXd out = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  return 0.5 * (out + out.transpose());
}

double min_singular_value(const Eigen::MatrixXd& m) {
  if (m.rows() < 1 || m.cols() < 1) throw InvalidInputError("min_singular_value: empty matrix");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues().minCoeff();
}

Eigen::MatrixXd pinv_left(const Eigen::MatrixXd& m, const TolerancePolicy& tol, int* rank) {
  tol.validate();
  if (m.rows() < m.cols()) throw InvalidInputError("pinv_left: requires rows >= cols");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv.maxCoeff() : 0.0;
  const double cutoff = tol.rel_rank_tol * smax;
  int r = 0;
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cutoff && sv[i] > 0.0) {
      inv[i] = 1.0 / sv[i];
      ++r;
    }
  }
  if (rank) *rank = r;
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

}  // namespace npivq
