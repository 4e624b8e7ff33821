#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "sau/linear_model.hpp"
#include "sau/rng.hpp"

using namespace sau;
using Eigen::VectorXd;

namespace {
VectorXd unit(int dim, int i) {
  VectorXd v = VectorXd::Zero(dim);
  v[i] = 1.0;
  return v;
}
}  // namespace

TEST_CASE("ridge-free fit recovers exact coefficients") {
  LinearArmModel m(2, 0.0);
  CHECK_FALSE(m.solvable());
  CHECK(m.predict(unit(2, 0)) == 0.0);  // theta stays zero pre-solvability
  m.update(unit(2, 0), 1.0);
  CHECK_FALSE(m.solvable());  // rank 1 of 2
  m.update(unit(2, 1), 3.0);
  CHECK(m.solvable());
  CHECK(m.theta()[0] == doctest::Approx(1.0));
  CHECK(m.theta()[1] == doctest::Approx(3.0));
  VectorXd x(2);
  x << 2.0, -1.0;
  CHECK(m.predict(x) == doctest::Approx(2.0 * 1.0 - 1.0 * 3.0));
  CHECK(m.count() == 2);
  CHECK(m.dim() == 2);
}

TEST_CASE("ridge prior alone gives identity gram leverage") {
  LinearArmModel m(3, 1.0);
  // gram = I, so h = ||x||^2 and mse = h * sigma2.
  LeverageReport rep = m.leverage(unit(3, 0), 0.25);
  CHECK(rep.h == doctest::Approx(1.0));
  CHECK(rep.mse == doctest::Approx(0.25));
  VectorXd x(3);
  x << 1.0, 2.0, 2.0;  // ||x||^2 = 9
  CHECK(m.leverage(x, 0.0).h == doctest::Approx(9.0));
}

TEST_CASE("balanced one-dimensional design has leverage 1/n") {
  LinearArmModel m(1, 0.0);
  VectorXd one(1);
  one << 1.0;
  for (int i = 0; i < 8; ++i) m.update(one, 0.5);
  CHECK(m.leverage(one).h == doctest::Approx(1.0 / 8.0));
}

TEST_CASE("leverages over the design sum to the feature dimension") {
  LinearArmModel m(2, 0.0);
  Eigen::MatrixXd rows(3, 2);
  rows << 1, 0, 0, 1, 1, 1;
  for (int i = 0; i < rows.rows(); ++i) m.update(rows.row(i), 0.0);
  double trace = 0.0;
  for (int i = 0; i < rows.rows(); ++i) trace += m.leverage(rows.row(i)).h;
  CHECK(trace == doctest::Approx(2.0));
}

TEST_CASE("leverage on a singular gram throws") {
  LinearArmModel m(2, 0.0);
  CHECK_THROWS_AS((void)m.leverage(unit(2, 0)), std::runtime_error);
  m.update(unit(2, 0), 1.0);  // still rank deficient
  CHECK_THROWS_AS((void)m.leverage(unit(2, 1)), std::runtime_error);
}

TEST_CASE("incremental updates track the normal equations") {
  // The rank-one Cholesky path must stay consistent with a direct solve.
  const int dim = 6;
  LinearArmModel m(dim, 1.0);
  RngStream rng(31);
  for (int i = 0; i < 200; ++i) {
    VectorXd x(dim);
    for (int j = 0; j < dim; ++j) x[j] = rng.gaussian(0.0, 1.0);
    m.update(x, rng.gaussian(0.0, 1.0));
  }
  // theta solves gram * theta = xty to tight tolerance.
  double resid = (m.gram() * m.theta() - m.xty()).norm();
  CHECK(resid <= 1e-8 * std::max(1.0, m.xty().norm()));
  // And matches an independent full solve.
  VectorXd direct = m.gram().ldlt().solve(m.xty());
  CHECK((m.theta() - direct).norm() == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("in-sample residual variance matches 1 - leverage") {
  // For y = x'theta + eps fit by least squares, the residual at a design
  // point has variance (1 - h) sigma^2. Verify by Monte Carlo on a fixed
  // tiny design, refitting from scratch each redraw.
  const int n = 12, p = 2;
  RngStream rng(32);
  Eigen::MatrixXd X(n, p);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < p; ++j) X(i, j) = rng.gaussian(0.0, 1.0);
  VectorXd theta(p);
  theta << 0.5, -0.25;
  const double sigma2 = 0.04;

  LinearArmModel ref(p, 0.0);
  for (int i = 0; i < n; ++i) ref.update(X.row(i), 0.0);
  double h = ref.leverage(X.row(n - 1)).h;

  const int reps = 20000;
  double acc = 0.0;
  for (int r = 0; r < reps; ++r) {
    LinearArmModel m(p, 0.0);
    double last_y = 0.0;
    for (int i = 0; i < n; ++i) {
      double y = X.row(i).dot(theta) + rng.gaussian(0.0, sigma2);
      m.update(X.row(i), y);
      last_y = y;
    }
    double e = last_y - m.predict(X.row(n - 1));
    acc += e * e;
  }
  double expected = (1.0 - h) * sigma2;
  // sd of e^2 is sqrt(2) * expected; 4-sigma band on the MC mean.
  double band = 4.0 * std::sqrt(2.0) * expected / std::sqrt(double(reps));
  CHECK(std::abs(acc / reps - expected) < band);
}
