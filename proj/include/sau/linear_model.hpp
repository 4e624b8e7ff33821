#pragma once

#include <Eigen/Dense>

namespace sau {

struct LeverageReport {
  double h = 0.0;    // x' gram^-1 x
  double mse = 0.0;  // h * sigma2 when a true noise variance is supplied
};

// Per-arm ridge least squares on accumulated (x, r) pairs.
// gram = ridge*I + sum x x', xty = sum x r; theta_hat is refreshed after each
// update by a Cholesky solve (dimensions stay small, so O(p^3) per step is
// fine). With ridge = 0 the model is the pure least-squares path used by the
// leverage diagnostics; theta_hat stays at zero until the normal equations
// become solvable.
class LinearArmModel {
 public:
  explicit LinearArmModel(int dim, double ridge = 1.0);

  void update(const Eigen::VectorXd& x, double r);
  double predict(const Eigen::VectorXd& x) const;  // x' theta_hat

  // Leverage of x under the current gram. Throws when gram is singular.
  LeverageReport leverage(const Eigen::VectorXd& x, double sigma2 = 0.0) const;

  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& xty() const { return xty_; }
  const Eigen::VectorXd& theta() const { return theta_; }
  long count() const { return n_; }
  int dim() const { return static_cast<int>(gram_.rows()); }
  bool solvable() const { return solvable_; }

 private:
  void refresh();

  Eigen::MatrixXd gram_;
  Eigen::VectorXd xty_;
  Eigen::VectorXd theta_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  long n_ = 0;
  bool solvable_ = false;
};

}  // namespace sau
