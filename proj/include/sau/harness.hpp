#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "sau/config.hpp"

namespace sau {

struct RegretTrace {
  std::vector<double> instantaneous;
  std::vector<double> cumulative;

  double final_regret() const {
    return cumulative.empty() ? 0.0 : cumulative.back();
  }
};

// Expected (not realized) per-step regret of pulling `arm` in context `x`.
double step_regret(const Environment& env, const Eigen::VectorXd& x, int arm);

// One full bandit run. The environment stream depends only on (seed, trial),
// so every policy evaluated under the same seed sees identical contexts and
// reward noise; the policy stream is additionally salted by the policy kind.
RegretTrace run_trial(const EnvBundle& env, const PolicyConfig& pol,
                      long horizon, std::uint64_t seed, long trial);

struct AggregateSummary {
  std::vector<double> mean_cum;            // per step, averaged over trials
  std::vector<double> sem;                 // empty when trials == 1
  std::vector<double> finals;              // final regret per trial, trial order
  double final_mean = 0.0;
  double final_sem = 0.0;                  // NaN when trials == 1
  std::array<double, 5> final_quantiles{}; // min, p25, median, p75, max
};

AggregateSummary aggregate(const std::vector<RegretTrace>& traces);

struct ExperimentResult {
  std::string label;
  AggregateSummary agg;
};

// All trials for one policy, fanned out over `jobs` worker threads. Traces
// are merged in trial-index order, so the result is independent of `jobs`.
ExperimentResult run_experiment(const EnvBundle& env, const PolicyConfig& pol,
                                long horizon, int trials, std::uint64_t seed,
                                int jobs, bool progress = false);

}  // namespace sau
