#include "sau/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "sau/errors.hpp"

namespace sau {

double step_regret(const Environment& env, const Eigen::VectorXd& x, int arm) {
  return env.optimal_value(x) - env.expected_reward(arm, x);
}

RegretTrace run_trial(const EnvBundle& env, const PolicyConfig& pol,
                      long horizon, std::uint64_t seed, long trial) {
  RngStream env_rng = RngStream::derive(seed, static_cast<std::uint64_t>(trial),
                                        StreamPurpose::env);
  std::uint64_t policy_master = splitmix64(seed ^ fnv1a64(pol.kind));
  RngStream pol_rng = RngStream::derive(
      policy_master, static_cast<std::uint64_t>(trial), StreamPurpose::policy);

  std::unique_ptr<Environment> e = env.create(env_rng);
  std::unique_ptr<Policy> p =
      build_policy(pol, env.arms(), env.dim(), horizon, std::move(pol_rng));
  if (p->num_arms() != e->num_arms())
    throw ConfigError("policy '" + pol.display_label() + "' was built for " +
                      std::to_string(p->num_arms()) + " arms but env '" +
                      e->name() + "' has " + std::to_string(e->num_arms()));

  RegretTrace trace;
  trace.instantaneous.reserve(static_cast<std::size_t>(horizon));
  trace.cumulative.reserve(static_cast<std::size_t>(horizon));
  double cum = 0.0;
  for (long n = 1; n <= horizon; ++n) {
    Eigen::VectorXd x = e->next_context(env_rng);
    std::vector<double> values = p->predict(x);
    int a = p->act(values, n);
    double r = e->reward(a, x, env_rng);
    p->update(x, a, r);
    double inst = step_regret(*e, x, a);
    cum += inst;
    trace.instantaneous.push_back(inst);
    trace.cumulative.push_back(cum);
  }
  return trace;
}

namespace {

// Type-7 (linear interpolation) quantile of a sorted vector.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (sorted.size() == 1) return sorted[0];
  double pos = q * static_cast<double>(sorted.size() - 1);
  std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

AggregateSummary aggregate(const std::vector<RegretTrace>& traces) {
  if (traces.empty()) throw std::invalid_argument("aggregate: no traces");
  const std::size_t steps = traces[0].cumulative.size();
  for (const auto& t : traces)
    if (t.cumulative.size() != steps)
      throw std::invalid_argument("aggregate: traces have unequal lengths");

  const std::size_t m = traces.size();
  AggregateSummary out;
  out.mean_cum.assign(steps, 0.0);
  for (const auto& t : traces)
    for (std::size_t i = 0; i < steps; ++i) out.mean_cum[i] += t.cumulative[i];
  for (double& v : out.mean_cum) v /= static_cast<double>(m);

  if (m > 1) {
    out.sem.assign(steps, 0.0);
    for (const auto& t : traces)
      for (std::size_t i = 0; i < steps; ++i) {
        double d = t.cumulative[i] - out.mean_cum[i];
        out.sem[i] += d * d;
      }
    for (double& v : out.sem)
      v = std::sqrt(v / static_cast<double>(m - 1) / static_cast<double>(m));
  }

  out.finals.reserve(m);
  for (const auto& t : traces) out.finals.push_back(t.final_regret());
  out.final_mean = steps == 0 ? 0.0 : out.mean_cum.back();
  out.final_sem = (m > 1 && steps > 0) ? out.sem.back()
                                       : std::numeric_limits<double>::quiet_NaN();

  std::vector<double> sorted = out.finals;
  std::sort(sorted.begin(), sorted.end());
  out.final_quantiles = {quantile_sorted(sorted, 0.0), quantile_sorted(sorted, 0.25),
                         quantile_sorted(sorted, 0.5), quantile_sorted(sorted, 0.75),
                         quantile_sorted(sorted, 1.0)};
  return out;
}

ExperimentResult run_experiment(const EnvBundle& env, const PolicyConfig& pol,
                                long horizon, int trials, std::uint64_t seed,
                                int jobs, bool progress) {
  if (trials < 1) throw std::invalid_argument("run_experiment: trials < 1");
  if (jobs < 1) jobs = 1;
  jobs = std::min(jobs, trials);

  std::vector<RegretTrace> traces(static_cast<std::size_t>(trials));
  std::atomic<long> next{0};
  std::atomic<long> done{0};
  std::mutex err_mu;
  std::exception_ptr first_error;

  auto worker = [&] {
    for (;;) {
      long t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        traces[static_cast<std::size_t>(t)] = run_trial(env, pol, horizon, seed, t);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mu);
        if (!first_error) first_error = std::current_exception();
        return;
      }
      long k = done.fetch_add(1) + 1;
      if (progress)
        std::fprintf(stderr, "%s: trial %ld/%d\n", pol.display_label().c_str(),
                     k, trials);
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  ExperimentResult res;
  res.label = pol.display_label();
  res.agg = aggregate(traces);
  return res;
}

}  // namespace sau
