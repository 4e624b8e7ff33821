#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>

#include "sau/rng.hpp"

namespace sau {

// A bandit task. Contextual tasks return a fresh context each step; plain
// multi-armed tasks have context_dim() == 0 and return an empty vector.
// expected_reward/optimal_value describe the means of the CURRENT step (the
// one whose context was just produced), which is what expected regret needs.
class Environment {
 public:
  virtual ~Environment() = default;
  virtual int num_arms() const = 0;
  virtual int context_dim() const = 0;
  virtual Eigen::VectorXd next_context(RngStream& rng) = 0;
  virtual double reward(int arm, const Eigen::VectorXd& x, RngStream& rng) = 0;
  virtual double expected_reward(int arm, const Eigen::VectorXd& x) const = 0;
  virtual double optimal_value(const Eigen::VectorXd& x) const = 0;
  // Number of steps the instance can serve; -1 when unbounded.
  virtual long horizon_limit() const { return -1; }
  virtual std::string name() const = 0;
};

// Arm 0 pays Bernoulli(mu_best), every other arm Bernoulli(mu_best - gap).
std::unique_ptr<Environment> make_bernoulli_env(int arms, double mu_best, double gap);

// Same means, but the reward is 1{U <= mu_a} for a fresh U ~ Uniform[0,1].
std::unique_ptr<Environment> make_uniform_threshold_env(int arms, double mu_best,
                                                        double gap);

enum class ContextDist { gaussian_iid, gaussian_ar1, t2_truncated };
enum class ThetaDist { uniform_normalized, gaussian_normalized };
enum class ErrorCorr { iid, ar1 };

struct LinearEnvSpec {
  int arms = 5;
  int dim = 5;
  double noise_sd = 0.5;
  ContextDist context_dist = ContextDist::gaussian_iid;
  double context_rho = 0.5;  // lag-1 correlation of AR(1) contexts
  double t_cap = 5.0;        // clip bound for heavy-tailed contexts
  ThetaDist theta_dist = ThetaDist::uniform_normalized;
  ErrorCorr error_corr = ErrorCorr::iid;
  double error_rho = 0.5;  // serial correlation of an arm's reward noise
};

// r = x' theta_a + eps with unit-norm arm parameters drawn at construction.
// AR(1) errors are serially correlated across an arm's successive pulls with
// stationary marginal N(0, noise_sd^2).
std::unique_ptr<Environment> make_linear_env(const LinearEnvSpec& spec, RngStream& rng);

// Exposed for diagnostics/tests: the arm parameter matrix of a linear env.
const Eigen::MatrixXd& linear_env_theta(const Environment& env);

}  // namespace sau
