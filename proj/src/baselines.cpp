#include "sau/baselines.hpp"

#include <cmath>
#include <stdexcept>

#include "sau/sau.hpp"

namespace sau {

double beta_ts_sample(const BetaArm& arm, RngStream& rng) {
  return rng.beta(arm.alpha, arm.beta);
}

void beta_ts_update(BetaArm& arm, double r) {
  if (r != 0.0 && r != 1.0)
    throw std::invalid_argument("beta_ts_update: reward must be 0 or 1");
  arm.alpha += r;
  arm.beta += 1.0 - r;
}

double ucb1_score(double mu_hat, long n_a, double step) {
  if (n_a < 1) throw std::invalid_argument("ucb1_score: arm has no pulls yet");
  if (!(step >= 1.0)) throw std::invalid_argument("ucb1_score: step must be >= 1");
  return mu_hat + std::sqrt(2.0 * std::log(step) / static_cast<double>(n_a));
}

EpsilonSchedule EpsilonSchedule::for_horizon(long horizon, double eps0,
                                             double eps_min, double decay_frac) {
  if (horizon < 1) throw std::invalid_argument("epsilon schedule: empty horizon");
  if (!(eps0 >= eps_min) || eps_min < 0.0 || eps0 > 1.0)
    throw std::invalid_argument("epsilon schedule: need 0 <= eps_min <= eps0 <= 1");
  if (!(decay_frac > 0.0) || decay_frac > 1.0)
    throw std::invalid_argument("epsilon schedule: decay fraction in (0, 1]");
  EpsilonSchedule s;
  s.eps0 = eps0;
  s.eps_min = eps_min;
  s.decay_steps = std::max<long>(1, std::lround(decay_frac * static_cast<double>(horizon)));
  return s;
}

double EpsilonSchedule::eps(long step) const {
  if (step < 1) throw std::invalid_argument("epsilon schedule: step is 1-based");
  double frac = static_cast<double>(step - 1) / static_cast<double>(decay_steps);
  if (frac > 1.0) frac = 1.0;
  return eps0 - (eps0 - eps_min) * frac;
}

int epsilon_greedy_act(std::span<const double> values, double eps, RngStream& rng) {
  if (values.empty()) throw std::invalid_argument("epsilon_greedy_act: no values");
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("epsilon_greedy_act: eps outside [0, 1]");
  if (rng.uniform01() < eps) return rng.uniform_int(static_cast<int>(values.size()));
  return argmax_lowest(values);
}

int uniform_act(int num_arms, RngStream& rng) {
  if (num_arms < 1) throw std::invalid_argument("uniform_act: no arms");
  return rng.uniform_int(num_arms);
}

BayesLinearArm::BayesLinearArm(int dim, double lambda, double a0, double b0)
    : a0_(a0), b0_(b0), b_(b0) {
  if (dim < 1) throw std::invalid_argument("bayes linear: dim must be >= 1");
  if (!(lambda > 0.0)) throw std::invalid_argument("bayes linear: lambda must be > 0");
  if (!(a0 > 0.0) || !(b0 > 0.0))
    throw std::invalid_argument("bayes linear: a0, b0 must be > 0");
  precision_ = lambda * Eigen::MatrixXd::Identity(dim, dim);
  moment_ = Eigen::VectorXd::Zero(dim);
  mean_ = Eigen::VectorXd::Zero(dim);
  chol_.compute(precision_);
}

void BayesLinearArm::update(const Eigen::VectorXd& x, double r) {
  if (x.size() != precision_.rows())
    throw std::invalid_argument("bayes linear: context dimension mismatch");
  precision_.selfadjointView<Eigen::Lower>().rankUpdate(x);
  precision_.triangularView<Eigen::StrictlyUpper>() =
      precision_.triangularView<Eigen::StrictlyLower>().transpose();
  moment_ += x * r;
  yty_ += r * r;
  n_ += 1;
  // precision stays positive definite (lambda > 0), so the factor can be
  // rank-1 updated in O(p^2); refactor periodically to cap roundoff drift
  if (n_ % 512 == 0)
    chol_.compute(precision_);
  else
    chol_.rankUpdate(x, 1.0);
  mean_ = chol_.solve(moment_);
  // b stays positive: yty - moment' mean = |y - X mean|^2 + lambda |mean|^2 >= 0
  b_ = b0_ + 0.5 * (yty_ - moment_.dot(mean_));
  if (b_ <= 0.0) b_ = b0_;  // numerical floor, unreachable in exact arithmetic
}

double BayesLinearArm::draw_noise_var(RngStream& rng) const {
  // InvGamma(a, b): b over a unit-scale gamma draw
  return b_ / rng.gamma(noise_shape());
}

double BayesLinearArm::ts_sample(const Eigen::VectorXd& x, RngStream& rng) const {
  if (x.size() != precision_.rows())
    throw std::invalid_argument("bayes linear: context dimension mismatch");
  double s2 = draw_noise_var(rng);
  Eigen::VectorXd z(precision_.rows());
  for (int i = 0; i < z.size(); ++i) z[i] = rng.gaussian(0.0, 1.0);
  // theta = mean + sqrt(s2) L^-T z has covariance s2 * precision^-1
  Eigen::VectorXd theta =
      mean_ + std::sqrt(s2) * chol_.matrixU().solve(z);
  return x.dot(theta);
}

double BayesLinearArm::ts_sample_diag(const Eigen::VectorXd& x, RngStream& rng) const {
  if (x.size() != precision_.rows())
    throw std::invalid_argument("bayes linear: context dimension mismatch");
  double s2 = draw_noise_var(rng);
  double acc = 0.0;
  for (int i = 0; i < x.size(); ++i) {
    double sd = std::sqrt(s2 / precision_(i, i));
    acc += x[i] * (mean_[i] + sd * rng.gaussian(0.0, 1.0));
  }
  return acc;
}

}  // namespace sau
