#include "npivq/basis.hpp"

#include <cmath>

#include "doctest.h"

#include "npivq/errors.hpp"
#include "npivq/rng.hpp"

using namespace npivq;

namespace {
const double kSq2 = std::sqrt(2.0);
}

TEST_CASE("cosine basis point values") {
  const Eigen::VectorXd at0 = eval_basis({BasisFamily::Cosine, 2}, 0.0);
  CHECK(at0[0] == doctest::Approx(kSq2).epsilon(1e-15));
  CHECK(at0[1] == doctest::Approx(kSq2).epsilon(1e-15));

  const Eigen::VectorXd mid = eval_basis({BasisFamily::Cosine, 1}, 0.5);
  CHECK(std::abs(mid[0]) < 1e-15);
}

TEST_CASE("cosine recurrence matches direct evaluation") {
  const BasisSpec spec{BasisFamily::Cosine, 40};
  for (double x : {0.0, 0.123, 0.5, 0.987, 1.0}) {
    const Eigen::VectorXd v = eval_basis(spec, x);
    for (int j = 1; j <= 40; ++j)
      CHECK(v[j - 1] == doctest::Approx(kSq2 * std::cos(M_PI * j * x)).epsilon(1e-12));
  }
}

TEST_CASE("bspline partition of unity") {
  BasisSpec spec{BasisFamily::BSpline, 6};
  spec.bspline_order = 4;
  for (int g = 0; g <= 10; ++g) {
    const double x = g / 10.0;
    const Eigen::VectorXd v = eval_basis(spec, x);
    CHECK(v.sum() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(v.minCoeff() >= 0.0);
  }
  // endpoint splines are the only nonzero ones at the boundary
  CHECK(eval_basis(spec, 0.0)[0] == doctest::Approx(1.0));
  CHECK(eval_basis(spec, 1.0)[5] == doctest::Approx(1.0));
}

TEST_CASE("legendre basis is orthonormal and starts at the constant") {
  const BasisSpec spec{BasisFamily::Legendre, 5};
  CHECK(eval_basis(spec, 0.3)[0] == doctest::Approx(1.0));
  const Eigen::MatrixXd g = gram_matrix(spec, WeightFn::uniform());
  CHECK((g - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(eval_basis({BasisFamily::Cosine, 3}, -0.01), InvalidInputError);
  CHECK_THROWS_AS(eval_basis({BasisFamily::Cosine, 3}, 1.01), InvalidInputError);
  CHECK_THROWS_AS(eval_basis({BasisFamily::Cosine, 0}, 0.5), InvalidInputError);
  BasisSpec bad{BasisFamily::BSpline, 3};
  bad.bspline_order = 4;
  CHECK_THROWS_AS(eval_basis(bad, 0.5), InvalidInputError);
  CHECK_THROWS_AS(design_matrix({BasisFamily::Cosine, 2}, Eigen::VectorXd()), InvalidInputError);
}

TEST_CASE("design matrix rows equal eval_basis") {
  Eigen::VectorXd pts(2);
  pts << 0.0, 0.0;
  const Eigen::MatrixXd m = design_matrix({BasisFamily::Cosine, 1}, pts);
  CHECK(m.rows() == 2);
  CHECK(m(0, 0) == doctest::Approx(kSq2));
  CHECK(m(1, 0) == doctest::Approx(kSq2));

  Eigen::VectorXd one(1);
  one << 0.37;
  const BasisSpec spec{BasisFamily::Cosine, 4};
  CHECK((design_matrix(spec, one).row(0).transpose() - eval_basis(spec, 0.37)).norm() < 1e-15);
}

TEST_CASE("monte carlo orthonormality of the cosine design") {
  RngStream stream(7, 0, 0);
  Eigen::VectorXd pts(200);
  for (int i = 0; i < 200; ++i) pts[i] = stream.uniform();
  const Eigen::MatrixXd psi = design_matrix({BasisFamily::Cosine, 3}, pts);
  const Eigen::MatrixXd m = psi.transpose() * psi / 200.0;
  CHECK((m - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() < 0.2);
}

TEST_CASE("gram matrix of the cosine basis is the identity") {
  const Eigen::MatrixXd g4 = gram_matrix({BasisFamily::Cosine, 4}, WeightFn::uniform());
  CHECK((g4 - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-10);

  const Eigen::MatrixXd g1 = gram_matrix({BasisFamily::Cosine, 1}, WeightFn::uniform());
  CHECK(g1(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  const Eigen::MatrixXd g50 = gram_matrix({BasisFamily::Cosine, 50}, WeightFn::uniform());
  CHECK((g50 - Eigen::MatrixXd::Identity(50, 50)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("bspline gram matches a dense riemann sum") {
  BasisSpec spec{BasisFamily::BSpline, 6};
  spec.bspline_order = 4;
  const Eigen::MatrixXd g = gram_matrix(spec, WeightFn::uniform());
  const int m = 1000000;
  Eigen::MatrixXd riemann = Eigen::MatrixXd::Zero(6, 6);
  for (int i = 0; i < m; ++i) {
    const double x = (i + 0.5) / m;
    const Eigen::VectorXd v = eval_basis(spec, x);
    riemann += v * v.transpose() / m;
  }
  CHECK((g - riemann).cwiseAbs().maxCoeff() < 1e-6);
  CHECK((g - g.transpose()).cwiseAbs().maxCoeff() == 0.0);  // symmetrized exactly
}

TEST_CASE("gram resolution guard and conditioning") {
  CHECK_THROWS_AS(gram_matrix({BasisFamily::Cosine, 20}, WeightFn::uniform(), 10),
                  InvalidInputError);
}

TEST_CASE("tabulated weights interpolate linearly and stay positive") {
  const WeightFn w = WeightFn::tabulated({0.0, 0.5, 1.0}, {1.0, 2.0, 1.0});
  CHECK(w(0.25) == doctest::Approx(1.5));
  CHECK(w(0.5) == doctest::Approx(2.0));
  CHECK(w(1.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(WeightFn::tabulated({0.0, 1.0}, {1.0, 0.0}), InvalidInputError);
  CHECK_THROWS_AS(WeightFn::tabulated({0.1, 1.0}, {1.0, 1.0}), InvalidInputError);

  // weighted gram picks up the weight
  const Eigen::MatrixXd g = gram_matrix({BasisFamily::Cosine, 2}, w);
  CHECK(g(0, 0) > 1.0);
}

TEST_CASE("zeta growth") {
  CHECK(zeta_growth({BasisFamily::Cosine, 9}) == doctest::Approx(3.0));
  CHECK(zeta_growth({BasisFamily::Legendre, 9}) == doctest::Approx(9.0));
  CHECK(zeta_growth({BasisFamily::BSpline, 1}) == doctest::Approx(1.0));
}

TEST_CASE("linearity of basis expansions") {
  const BasisSpec spec{BasisFamily::Cosine, 6};
  Eigen::VectorXd coef(6);
  coef << 0.3, -1.2, 0.05, 2.0, -0.7, 0.11;
  Eigen::VectorXd pts(5);
  pts << 0.05, 0.31, 0.5, 0.77, 0.99;
  const Eigen::VectorXd via_design = design_matrix(spec, pts) * coef;
  for (int i = 0; i < 5; ++i) {
    double direct = 0.0;
    for (int j = 1; j <= 6; ++j) direct += coef[j - 1] * kSq2 * std::cos(M_PI * j * pts[i]);
    CHECK(std::abs(via_design[i] - direct) < 1e-12);
  }
}
