#include "sau/envs.hpp"

#include <cmath>
#include <vector>

#include "sau/errors.hpp"

namespace sau {

namespace {

class GapMabEnv : public Environment {
 public:
  GapMabEnv(int arms, double mu_best, double gap, bool threshold)
      : arms_(arms), mu_best_(mu_best), gap_(gap), threshold_(threshold) {
    if (arms < 1) throw ConfigError("mab env: need at least one arm");
    if (gap < 0.0) throw ConfigError("mab env: gap must be >= 0");
    if (mu_best > 1.0 || mu_best - gap < 0.0)
      throw ConfigError("mab env: arm means must stay inside [0, 1]");
  }

  int num_arms() const override { return arms_; }
  int context_dim() const override { return 0; }
  Eigen::VectorXd next_context(RngStream&) override { return Eigen::VectorXd(); }

  double reward(int arm, const Eigen::VectorXd&, RngStream& rng) override {
    double mu = mean_of(arm);
    double u = rng.uniform01();
    // same law either way; the threshold form mirrors the uniform bandit
    return (threshold_ ? u <= mu : u < mu) ? 1.0 : 0.0;
  }

  double expected_reward(int arm, const Eigen::VectorXd&) const override {
    return mean_of(arm);
  }
  double optimal_value(const Eigen::VectorXd&) const override { return mu_best_; }
  std::string name() const override {
    return threshold_ ? "uniform-threshold" : "bernoulli";
  }

 private:
  double mean_of(int arm) const {
    if (arm < 0 || arm >= arms_) throw std::invalid_argument("mab env: bad arm");
    return arm == 0 ? mu_best_ : mu_best_ - gap_;
  }

  int arms_;
  double mu_best_, gap_;
  bool threshold_;
};

class LinearEnv : public Environment {
 public:
  LinearEnv(const LinearEnvSpec& spec, RngStream& rng) : spec_(spec) {
    if (spec.arms < 1 || spec.dim < 1)
      throw ConfigError("linear env: arms and dim must be >= 1");
    if (spec.noise_sd < 0.0) throw ConfigError("linear env: noise_sd must be >= 0");
    if (spec.context_rho <= -1.0 || spec.context_rho >= 1.0)
      throw ConfigError("linear env: context_rho must be in (-1, 1)");
    if (spec.error_rho <= -1.0 || spec.error_rho >= 1.0)
      throw ConfigError("linear env: error_rho must be in (-1, 1)");
    theta_.resize(spec.arms, spec.dim);
    for (int a = 0; a < spec.arms; ++a) {
      Eigen::VectorXd row(spec.dim);
      do {
        for (int j = 0; j < spec.dim; ++j) {
          row[j] = spec.theta_dist == ThetaDist::uniform_normalized
                       ? rng.uniform(-1.0, 1.0)
                       : rng.gaussian(0.0, 1.0);
        }
      } while (row.norm() == 0.0);
      theta_.row(a) = row / row.norm();
    }
    err_state_.assign(static_cast<std::size_t>(spec.arms), 0.0);
    err_started_.assign(static_cast<std::size_t>(spec.arms), false);
  }

  int num_arms() const override { return spec_.arms; }
  int context_dim() const override { return spec_.dim; }

  Eigen::VectorXd next_context(RngStream& rng) override {
    Eigen::VectorXd x(spec_.dim);
    switch (spec_.context_dist) {
      case ContextDist::gaussian_iid:
        for (int j = 0; j < spec_.dim; ++j) x[j] = rng.gaussian(0.0, 1.0);
        break;
      case ContextDist::gaussian_ar1: {
        double rho = spec_.context_rho;
        x[0] = rng.gaussian(0.0, 1.0);
        for (int j = 1; j < spec_.dim; ++j)
          x[j] = rho * x[j - 1] + rng.gaussian(0.0, 1.0 - rho * rho);
        break;
      }
      case ContextDist::t2_truncated:
        for (int j = 0; j < spec_.dim; ++j)
          x[j] = rng.student_t_truncated(2.0, spec_.t_cap);
        break;
    }
    return x;
  }

  double reward(int arm, const Eigen::VectorXd& x, RngStream& rng) override {
    double mean = expected_reward(arm, x);
    double s2 = spec_.noise_sd * spec_.noise_sd;
    if (spec_.error_corr == ErrorCorr::iid) return mean + rng.gaussian(0.0, s2);
    // AR(1) across this arm's pulls, stationary marginal N(0, s2)
    auto a = static_cast<std::size_t>(arm);
    double rho = spec_.error_rho;
    if (!err_started_[a]) {
      err_state_[a] = rng.gaussian(0.0, s2);
      err_started_[a] = true;
    } else {
      err_state_[a] = rho * err_state_[a] + rng.gaussian(0.0, (1.0 - rho * rho) * s2);
    }
    return mean + err_state_[a];
  }

  double expected_reward(int arm, const Eigen::VectorXd& x) const override {
    if (arm < 0 || arm >= spec_.arms)
      throw std::invalid_argument("linear env: bad arm");
    return theta_.row(arm).dot(x);
  }

  double optimal_value(const Eigen::VectorXd& x) const override {
    return (theta_ * x).maxCoeff();
  }

  std::string name() const override { return "linear"; }

  const Eigen::MatrixXd& theta() const { return theta_; }

 private:
  LinearEnvSpec spec_;
  Eigen::MatrixXd theta_;  // arms x dim, unit-norm rows
  std::vector<double> err_state_;
  std::vector<bool> err_started_;
};

}  // namespace

std::unique_ptr<Environment> make_bernoulli_env(int arms, double mu_best, double gap) {
  return std::make_unique<GapMabEnv>(arms, mu_best, gap, false);
}

std::unique_ptr<Environment> make_uniform_threshold_env(int arms, double mu_best,
                                                        double gap) {
  return std::make_unique<GapMabEnv>(arms, mu_best, gap, true);
}

std::unique_ptr<Environment> make_linear_env(const LinearEnvSpec& spec, RngStream& rng) {
  return std::make_unique<LinearEnv>(spec, rng);
}

const Eigen::MatrixXd& linear_env_theta(const Environment& env) {
  return dynamic_cast<const LinearEnv&>(env).theta();
}

}  // namespace sau
