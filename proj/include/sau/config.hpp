#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sau/dataset.hpp"
#include "sau/envs.hpp"
#include "sau/policy.hpp"

namespace sau {

struct EnvConfig {
  std::string kind = "bernoulli";  // bernoulli | uniform-threshold | linear | dataset
  // gap bandits
  int arms = 10;
  double mu_best = 0.5;
  double gap = 0.1;
  // linear
  int dim = 5;
  double noise_sd = 0.5;
  std::string context_dist = "gaussian-iid";  // | gaussian-ar1 | t2-truncated
  double context_rho = 0.5;
  double t_cap = 5.0;
  std::string theta_dist = "uniform-normalized";  // | gaussian-normalized
  std::string error_corr = "iid";                 // | ar1
  double error_rho = 0.5;
  // dataset
  std::string dataset;
  std::string file;
  bool standardize = true;
  long warmup = 1000;
};

struct PolicyConfig {
  std::string kind = "sau-ucb";
  std::string label;  // defaults to kind when empty
  // sample-average-uncertainty
  double prior_s2 = 1.0;
  std::string ucb_form = "tau2";  // | tau
  // Beta-Bernoulli prior
  double beta_a0 = 1.0;
  double beta_b0 = 1.0;
  // epsilon-greedy schedule
  double eps0 = 0.1;
  double eps_min = 0.01;
  double eps_decay_frac = 0.2;
  // ridge regression
  double ridge = 1.0;
  // Bayesian linear regression prior
  double bayes_lambda = 0.25;
  double bayes_a0 = 6.0;
  double bayes_b0 = 6.0;
  // network
  int hidden1 = 100, hidden2 = 100;
  double lr = 0.003, adam_beta1 = 0.9, adam_beta2 = 0.999;
  int train_every = 20, train_batches = 10, batch_size = 64;

  std::string display_label() const { return label.empty() ? kind : label; }
};

struct RunSpec {
  EnvConfig env;
  std::vector<PolicyConfig> policies;
  long horizon = 20000;
  int trials = 100;
  std::uint64_t seed = 1;
  int jobs = 1;
  std::string out_dir = "results";
};

// Environment factory with any dataset loaded once up front, so parallel
// trials share the parsed table and only reshuffle row order.
struct EnvBundle {
  EnvConfig cfg;
  std::shared_ptr<const DatasetTable> table;

  std::unique_ptr<Environment> create(RngStream& rng) const;
  int arms() const;
  int dim() const;            // 0 for plain multi-armed tasks
  long horizon_limit() const; // -1 when unbounded
  std::string env_name() const;
};

EnvBundle prepare_env(const EnvConfig& cfg);

std::unique_ptr<Policy> build_policy(const PolicyConfig& cfg, int arms, int dim,
                                     long horizon, RngStream rng);

// Cross-field checks (horizon >= arms, contextual policies need contexts,
// dataset horizons fit the table, labels unique, ...). Throws ConfigError.
// The one-argument form prepares the env itself; pass a bundle to avoid
// loading a dataset twice.
void validate_run_spec(const RunSpec& spec);
void validate_run_spec(const RunSpec& spec, const EnvBundle& bundle);

bool is_known_policy_kind(const std::string& kind);
bool policy_kind_needs_context(const std::string& kind);
UcbForm parse_ucb_form(const std::string& s);
LinearEnvSpec to_linear_spec(const EnvConfig& cfg);

// Text config format: [run] / [env] / [policy <label>] sections holding
// `key = value` lines; '#' or ';' starts a comment line. Keys are checked
// against a per-section (and for env/policy, per-kind) whitelist, and an
// unknown key or section is a hard error naming the offender. Dataset file
// paths resolve relative to base_dir (for files, the config's directory).
RunSpec parse_config_text(const std::string& text,
                          const std::string& base_dir = "");
RunSpec parse_config_file(const std::string& path);

}  // namespace sau
