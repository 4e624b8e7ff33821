#include "sau/linear_model.hpp"

#include <cmath>
#include <stdexcept>

namespace sau {

LinearArmModel::LinearArmModel(int dim, double ridge) {
  if (dim < 1) throw std::invalid_argument("linear model: dim must be >= 1");
  if (ridge < 0.0) throw std::invalid_argument("linear model: ridge must be >= 0");
  gram_ = ridge * Eigen::MatrixXd::Identity(dim, dim);
  xty_ = Eigen::VectorXd::Zero(dim);
  theta_ = Eigen::VectorXd::Zero(dim);
  refresh();
}

void LinearArmModel::update(const Eigen::VectorXd& x, double r) {
  if (x.size() != gram_.rows())
    throw std::invalid_argument("linear model: context dimension mismatch");
  gram_.selfadjointView<Eigen::Lower>().rankUpdate(x);
  gram_.triangularView<Eigen::StrictlyUpper>() =
      gram_.triangularView<Eigen::StrictlyLower>().transpose();
  xty_ += x * r;
  n_ += 1;
  // Once factored, a rank-1 update of the factor is O(p^2) per step; the
  // residual test below catches any drift and falls back to a full refactor.
  if (solvable_) {
    chol_.rankUpdate(x, 1.0);
    Eigen::VectorXd cand = chol_.solve(xty_);
    if (cand.allFinite() &&
        (gram_ * cand - xty_).norm() <= 1e-9 * std::max(1.0, xty_.norm())) {
      theta_ = cand;
      return;
    }
  }
  refresh();
}

void LinearArmModel::refresh() {
  chol_.compute(gram_);
  solvable_ = false;
  if (chol_.info() != Eigen::Success) return;
  Eigen::VectorXd cand = chol_.solve(xty_);
  if (!cand.allFinite()) return;
  // accept only solutions that actually satisfy the normal equations; a
  // semidefinite gram can factor without erroring yet produce garbage
  double resid = (gram_ * cand - xty_).norm();
  if (resid <= 1e-9 * std::max(1.0, xty_.norm())) {
    theta_ = cand;
    solvable_ = true;
  }
}

double LinearArmModel::predict(const Eigen::VectorXd& x) const {
  if (x.size() != gram_.rows())
    throw std::invalid_argument("linear model: context dimension mismatch");
  return x.dot(theta_);
}

LeverageReport LinearArmModel::leverage(const Eigen::VectorXd& x, double sigma2) const {
  if (x.size() != gram_.rows())
    throw std::invalid_argument("linear model: context dimension mismatch");
  if (!solvable_)
    throw std::runtime_error("leverage: gram matrix is singular");
  Eigen::VectorXd g = chol_.solve(x);
  if (!g.allFinite())
    throw std::runtime_error("leverage: gram matrix is singular");
  double h = x.dot(g);
  return LeverageReport{h, h * sigma2};
}

}  // namespace sau
