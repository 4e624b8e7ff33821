#pragma once

#include <Eigen/Dense>
#include <span>

#include "sau/rng.hpp"

namespace sau {

// Beta-Bernoulli Thompson sampling state for one arm.
struct BetaArm {
  double alpha = 1.0;
  double beta = 1.0;

  double mean() const { return alpha / (alpha + beta); }
  // posterior variance alpha*beta / ((alpha+beta)^2 (alpha+beta+1))
  double variance() const {
    double s = alpha + beta;
    return alpha * beta / (s * s * (s + 1.0));
  }
};

double beta_ts_sample(const BetaArm& arm, RngStream& rng);

// Bernoulli update: (alpha, beta) += (r, 1-r); r must be exactly 0 or 1.
void beta_ts_update(BetaArm& arm, double r);

// mu_hat + sqrt(2 log(step) / n_a); step >= 1, n_a >= 1.
double ucb1_score(double mu_hat, long n_a, double step);

// Linear decay from eps0 to eps_min over the first decay_frac of the horizon,
// constant afterwards. eps(1) = eps0.
struct EpsilonSchedule {
  double eps0 = 0.1;
  double eps_min = 0.01;
  long decay_steps = 1;  // steps to reach eps_min

  static EpsilonSchedule for_horizon(long horizon, double eps0 = 0.1,
                                     double eps_min = 0.01,
                                     double decay_frac = 0.2);
  double eps(long step) const;
};

// Explore uniformly with probability eps, otherwise exploit the best value.
int epsilon_greedy_act(std::span<const double> values, double eps, RngStream& rng);

int uniform_act(int num_arms, RngStream& rng);

// Exact Bayesian linear regression with a normal-inverse-gamma prior:
//   theta | s2 ~ N(0, s2 (lambda I)^-1),  s2 ~ InvGamma(a0, b0).
// Closed-form posterior tracked through sufficient statistics; sampling a
// reward prediction integrates over both theta and the noise level.
class BayesLinearArm {
 public:
  BayesLinearArm(int dim, double lambda = 0.25, double a0 = 6.0, double b0 = 6.0);

  void update(const Eigen::VectorXd& x, double r);

  // x' theta with theta ~ posterior (exact covariance).
  double ts_sample(const Eigen::VectorXd& x, RngStream& rng) const;
  // Same, but the covariance is replaced by the inverse of the diagonal of
  // the precision matrix.
  double ts_sample_diag(const Eigen::VectorXd& x, RngStream& rng) const;

  const Eigen::MatrixXd& precision() const { return precision_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  double noise_shape() const { return a0_ + 0.5 * static_cast<double>(n_); }
  double noise_rate() const { return b_; }
  long count() const { return n_; }

 private:
  double draw_noise_var(RngStream& rng) const;

  Eigen::MatrixXd precision_;  // lambda I + sum x x'
  Eigen::VectorXd moment_;     // sum x r
  Eigen::VectorXd mean_;       // precision^-1 moment
  Eigen::LLT<Eigen::MatrixXd> chol_;
  double a0_, b0_;
  double yty_ = 0.0;
  double b_;  // posterior rate b0 + (yty - moment' mean)/2
  long n_ = 0;
};

}  // namespace sau
