#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace sau {

struct PropCheckResult {
  std::string name;
  bool pass = false;
  double observed = 0.0;  // measured deviation / statistic
  double bound = 0.0;     // acceptance band (R^2 checks: the minimum R^2)
  std::string details;
};

// Single Bernoulli(mu) arm under a Beta(1,1) posterior, pulled n times per
// replication. The final prediction residual squared over n tracks the
// posterior variance: |E[V_hat] - E[e_n^2/n]| <= 10/n^2 + 3*SEM (paired).
PropCheckResult check_ts_variance_match(double mu, long n, int reps,
                                        std::uint64_t seed);

// Single Bernoulli(mu) arm with a running-sample-mean predictor. The final
// residual tracks the mean's MSE: |E[e_n^2/n] - mu(1-mu)/n^2-ish target|
// <= 10/n^2 + 3*SEM, target mu(1-mu)/n.
PropCheckResult check_residual_mse(double mu, long n, int reps,
                                   std::uint64_t seed);

// Fixed Gaussian design (n x dim), ridge 0. Over noise redraws, the
// in-sample residual at the last design row satisfies
// E[e^2/n] = (1-h) sigma^2 / n within a 3-sigma Monte-Carlo band; h is the
// row's leverage. Throws when the design leaves the gram singular.
PropCheckResult check_leverage_residual(int dim, long n, double sigma2,
                                        int reps, std::uint64_t seed);

// tau^2 computed against the running mean including the current reward (the
// trace form of the estimator) converges to the reward variance:
// |mean(tau^2) - sigma^2| <= sigma^2 (1 + log(1+n))/n + 3*SEM over trials.
PropCheckResult check_tau_convergence(double mu, long n, int trials,
                                      std::uint64_t seed);

struct LogFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
};

// Least-squares fit of cumulative regret against log(step) after a burn-in.
// Requires the window to span at least a decade: cumulative.size() must be
// >= 10 * burn_in, burn_in >= 1.
LogFit fit_log_curve(std::span<const double> cumulative, long burn_in);

PropCheckResult check_log_regret(std::span<const double> cumulative,
                                 long burn_in, double r2_min = 0.95);

// Knobs for the named checks behind the `prop-check` command.
struct PropCheckParams {
  double mu = 0.5;
  long n = 0;  // 0 -> per-check default
  int reps = 10000;
  int trials = 200;
  double sigma2 = 0.25;
  int dim = 5;
};

// which: "1", "2", "4", "tau-convergence", "log-regret" or "all".
std::vector<PropCheckResult> run_prop_checks(const std::string& which,
                                             const PropCheckParams& params,
                                             std::uint64_t seed);

}  // namespace sau
