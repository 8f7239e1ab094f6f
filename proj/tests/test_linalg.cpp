#include "npivq/linalg.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "doctest.h"

#include "npivq/errors.hpp"
#include "npivq/rng.hpp"

using namespace npivq;

namespace {

Eigen::MatrixXd random_matrix(int r, int c, RngStream& s) {
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = s.normal();
  return m;
}

}  // namespace

TEST_CASE("sym_inv_sqrt on diagonal inputs") {
  CHECK((sym_inv_sqrt(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);
  Eigen::MatrixXd d = Eigen::Vector2d(4.0, 9.0).asDiagonal();
  const Eigen::MatrixXd r = sym_inv_sqrt(d);
  CHECK(r(0, 0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r(1, 1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(std::abs(r(0, 1)) < 1e-15);
}

TEST_CASE("sym_inv_sqrt defining identity on random SPD matrices") {
  RngStream s(11, 0, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd a = random_matrix(5, 5, s);
    const Eigen::MatrixXd m = a * a.transpose() + Eigen::MatrixXd::Identity(5, 5);
    const Eigen::MatrixXd h = sym_inv_sqrt(m);
    CHECK((h * m * h - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((h * h * m - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    CHECK((h - h.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("sym_inv_sqrt rejects bad input and clamps tiny eigenvalues") {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 0.5, -0.5, 1.0;
  CHECK_THROWS_AS(sym_inv_sqrt(asym), InvalidInputError);

  Eigen::MatrixXd indef = Eigen::Vector2d(1.0, -0.5).asDiagonal();
  CHECK_THROWS_AS(sym_inv_sqrt(indef), InvalidInputError);

  Eigen::MatrixXd nearly = Eigen::Vector2d(1.0, 1e-14).asDiagonal();
  bool clamped = false;
  const Eigen::MatrixXd h = sym_inv_sqrt(nearly, {}, &clamped);
  CHECK(clamped);
  CHECK(std::isfinite(h(1, 1)));
  CHECK(h(1, 1) == doctest::Approx(1e5).epsilon(1e-9));  // 1/sqrt(1e-10 cutoff)
}

TEST_CASE("min singular value basics") {
  CHECK(min_singular_value(Eigen::MatrixXd::Identity(4, 4)) == doctest::Approx(1.0));

  // diag(3, 0.5) padded with a zero column: full SVD over min(r,c)=2 values
  Eigen::MatrixXd padded = Eigen::MatrixXd::Zero(2, 3);
  padded(0, 0) = 3.0;
  padded(1, 1) = 0.5;
  CHECK(min_singular_value(padded) == doctest::Approx(0.5).epsilon(1e-14));

  RngStream s(12, 0, 0);
  for (int trial = 0; trial < 8; ++trial) {
    const Eigen::MatrixXd m = random_matrix(4 + trial % 3, 4, s);
    CHECK(min_singular_value(m) ==
          doctest::Approx(min_singular_value(m.transpose())).epsilon(1e-12));
    // Frobenius bound
    CHECK(min_singular_value(m) <=
          m.norm() / std::sqrt(static_cast<double>(std::min(m.rows(), m.cols()))) + 1e-12);
  }
}

TEST_CASE("pinv_left identities") {
  CHECK((pinv_left(Eigen::MatrixXd::Identity(3, 3)) - Eigen::MatrixXd::Identity(3, 3))
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  Eigen::MatrixXd col(2, 1);
  col << 3.0, 4.0;
  const Eigen::MatrixXd p = pinv_left(col);
  CHECK(p(0, 0) == doctest::Approx(3.0 / 25.0).epsilon(1e-14));
  CHECK(p(0, 1) == doctest::Approx(4.0 / 25.0).epsilon(1e-14));

  RngStream s(13, 0, 0);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::MatrixXd m = random_matrix(8, 3, s);
    CHECK((pinv_left(m) * m - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-10);
    // normal-equations oracle
    const Eigen::MatrixXd oracle = (m.transpose() * m).inverse() * m.transpose();
    CHECK((pinv_left(m) - oracle).cwiseAbs().maxCoeff() < 1e-8);
  }

  CHECK_THROWS_AS(pinv_left(Eigen::MatrixXd::Zero(2, 3)), InvalidInputError);
}

TEST_CASE("pinv_left rank cutoff") {
  Eigen::MatrixXd m(4, 2);
  m << 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0;  // rank 1
  int rank = 0;
  const Eigen::MatrixXd p = pinv_left(m, {}, &rank);
  CHECK(rank == 1);
  // Moore-Penrose property on the rank-deficient case: M p M = M
  CHECK((m * p * m - m).cwiseAbs().maxCoeff() < 1e-12);
}
