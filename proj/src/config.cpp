#include "sau/config.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "sau/errors.hpp"

namespace sau {
namespace {

[[noreturn]] void fail(const std::string& msg) { throw ConfigError(msg); }

void require(bool ok, const std::string& msg) {
  if (!ok) fail(msg);
}

}  // namespace

UcbForm parse_ucb_form(const std::string& s) {
  if (s == "tau2") return UcbForm::tau2;
  if (s == "tau") return UcbForm::tau;
  fail("ucb_form must be 'tau2' or 'tau', got '" + s + "'");
}

LinearEnvSpec to_linear_spec(const EnvConfig& cfg) {
  LinearEnvSpec spec;
  spec.arms = cfg.arms;
  spec.dim = cfg.dim;
  spec.noise_sd = cfg.noise_sd;
  if (cfg.context_dist == "gaussian-iid") {
    spec.context_dist = ContextDist::gaussian_iid;
  } else if (cfg.context_dist == "gaussian-ar1") {
    spec.context_dist = ContextDist::gaussian_ar1;
  } else if (cfg.context_dist == "t2-truncated") {
    spec.context_dist = ContextDist::t2_truncated;
  } else {
    fail("context_dist must be gaussian-iid, gaussian-ar1 or t2-truncated, got '" +
         cfg.context_dist + "'");
  }
  spec.context_rho = cfg.context_rho;
  spec.t_cap = cfg.t_cap;
  if (cfg.theta_dist == "uniform-normalized") {
    spec.theta_dist = ThetaDist::uniform_normalized;
  } else if (cfg.theta_dist == "gaussian-normalized") {
    spec.theta_dist = ThetaDist::gaussian_normalized;
  } else {
    fail("theta_dist must be uniform-normalized or gaussian-normalized, got '" +
         cfg.theta_dist + "'");
  }
  if (cfg.error_corr == "iid") {
    spec.error_corr = ErrorCorr::iid;
  } else if (cfg.error_corr == "ar1") {
    spec.error_corr = ErrorCorr::ar1;
  } else {
    fail("error_corr must be iid or ar1, got '" + cfg.error_corr + "'");
  }
  spec.error_rho = cfg.error_rho;
  return spec;
}

std::unique_ptr<Environment> EnvBundle::create(RngStream& rng) const {
  if (cfg.kind == "bernoulli")
    return make_bernoulli_env(cfg.arms, cfg.mu_best, cfg.gap);
  if (cfg.kind == "uniform-threshold")
    return make_uniform_threshold_env(cfg.arms, cfg.mu_best, cfg.gap);
  if (cfg.kind == "linear") return make_linear_env(to_linear_spec(cfg), rng);
  if (cfg.kind == "dataset") return make_dataset_env(table, rng);
  fail("unknown env kind '" + cfg.kind + "'");
}

int EnvBundle::arms() const {
  if (cfg.kind == "dataset") return table->spec.arms;
  return cfg.arms;
}

int EnvBundle::dim() const {
  if (cfg.kind == "dataset") return static_cast<int>(table->features.cols());
  if (cfg.kind == "linear") return cfg.dim;
  return 0;
}

long EnvBundle::horizon_limit() const {
  if (cfg.kind == "dataset") return table->features.rows();
  return -1;
}

std::string EnvBundle::env_name() const {
  if (cfg.kind == "dataset") return "dataset-" + cfg.dataset;
  if (cfg.kind == "linear") {
    std::ostringstream os;
    os << "linear-k" << cfg.arms << "-d" << cfg.dim;
    return os.str();
  }
  std::ostringstream os;
  os << cfg.kind << "-k" << cfg.arms;
  return os.str();
}

EnvBundle prepare_env(const EnvConfig& cfg) {
  EnvBundle bundle;
  bundle.cfg = cfg;
  if (cfg.kind == "bernoulli" || cfg.kind == "uniform-threshold") {
    require(cfg.arms >= 2, "env arms must be >= 2");
    require(cfg.mu_best > 0.0 && cfg.mu_best < 1.0, "mu_best must lie in (0, 1)");
    require(cfg.gap >= 0.0 && cfg.gap < cfg.mu_best, "gap must lie in [0, mu_best)");
  } else if (cfg.kind == "linear") {
    require(cfg.arms >= 2, "env arms must be >= 2");
    require(cfg.dim >= 1, "env dim must be >= 1");
    require(cfg.noise_sd > 0.0, "noise_sd must be > 0");
    if (cfg.context_dist == "gaussian-ar1")
      require(cfg.context_rho > -1.0 && cfg.context_rho < 1.0,
              "context_rho must lie in (-1, 1)");
    if (cfg.context_dist == "t2-truncated")
      require(cfg.t_cap > 0.0, "t_cap must be > 0");
    if (cfg.error_corr == "ar1")
      require(cfg.error_rho > -1.0 && cfg.error_rho < 1.0,
              "error_rho must lie in (-1, 1)");
    to_linear_spec(cfg);  // validates the enum strings
  } else if (cfg.kind == "dataset") {
    require(!cfg.dataset.empty(), "dataset env needs a dataset name");
    require(!cfg.file.empty(), "dataset env needs a csv file path");
    require(cfg.warmup >= 1, "warmup must be >= 1");
    bundle.table = load_dataset(cfg.dataset, cfg.file, cfg.standardize,
                                cfg.warmup);
  } else {
    fail("unknown env kind '" + cfg.kind + "'");
  }
  return bundle;
}

bool is_known_policy_kind(const std::string& kind) {
  static const std::set<std::string> kinds = {
      "uniform",          "ucb1",
      "beta-ts",          "eps-greedy",
      "sau-ucb",          "sau-sampling",
      "linear-greedy",    "linear-sau-ucb",
      "linear-sau-sampling", "linear-ts",
      "linear-ts-diag",   "neural-greedy",
      "neural-sau-ucb",   "neural-sau-sampling"};
  return kinds.count(kind) > 0;
}

bool policy_kind_needs_context(const std::string& kind) {
  return kind.rfind("linear-", 0) == 0 || kind.rfind("neural-", 0) == 0;
}

std::unique_ptr<Policy> build_policy(const PolicyConfig& cfg, int arms, int dim,
                                     long horizon, RngStream rng) {
  const std::string& k = cfg.kind;
  auto schedule = [&] {
    return EpsilonSchedule::for_horizon(horizon, cfg.eps0, cfg.eps_min,
                                        cfg.eps_decay_frac);
  };
  NeuralOptions net;
  net.hidden1 = cfg.hidden1;
  net.hidden2 = cfg.hidden2;
  net.lr = cfg.lr;
  net.adam_beta1 = cfg.adam_beta1;
  net.adam_beta2 = cfg.adam_beta2;
  net.train_every = cfg.train_every;
  net.train_batches = cfg.train_batches;
  net.batch_size = cfg.batch_size;

  if (k == "uniform") return make_uniform_policy(arms, std::move(rng));
  if (k == "ucb1") return make_ucb1_policy(arms);
  if (k == "beta-ts")
    return make_beta_ts_policy(arms, cfg.beta_a0, cfg.beta_b0, std::move(rng));
  if (k == "eps-greedy")
    return make_eps_greedy_policy(arms, schedule(), std::move(rng));
  if (k == "sau-ucb")
    return make_sau_mab_policy(arms, SauMode::ucb, cfg.prior_s2,
                               parse_ucb_form(cfg.ucb_form), std::move(rng));
  if (k == "sau-sampling")
    return make_sau_mab_policy(arms, SauMode::sampling, cfg.prior_s2,
                               UcbForm::tau2, std::move(rng));
  if (k == "linear-greedy")
    return make_linear_greedy_policy(arms, dim, cfg.ridge, schedule(),
                                     std::move(rng));
  if (k == "linear-sau-ucb")
    return make_linear_sau_policy(arms, dim, cfg.ridge, SauMode::ucb,
                                  cfg.prior_s2, parse_ucb_form(cfg.ucb_form),
                                  std::move(rng));
  if (k == "linear-sau-sampling")
    return make_linear_sau_policy(arms, dim, cfg.ridge, SauMode::sampling,
                                  cfg.prior_s2, UcbForm::tau2, std::move(rng));
  if (k == "linear-ts")
    return make_bayes_lin_ts_policy(arms, dim, cfg.bayes_lambda, cfg.bayes_a0,
                                    cfg.bayes_b0, /*diag=*/false, std::move(rng));
  if (k == "linear-ts-diag")
    return make_bayes_lin_ts_policy(arms, dim, cfg.bayes_lambda, cfg.bayes_a0,
                                    cfg.bayes_b0, /*diag=*/true, std::move(rng));
  if (k == "neural-greedy")
    return make_neural_greedy_policy(arms, dim, net, schedule(), std::move(rng));
  if (k == "neural-sau-ucb")
    return make_neural_sau_policy(arms, dim, net, SauMode::ucb, cfg.prior_s2,
                                  parse_ucb_form(cfg.ucb_form), std::move(rng));
  if (k == "neural-sau-sampling")
    return make_neural_sau_policy(arms, dim, net, SauMode::sampling, cfg.prior_s2,
                                  UcbForm::tau2, std::move(rng));
  fail("unknown policy kind '" + k + "'");
}

namespace {

void validate_policy_config(const PolicyConfig& p) {
  const std::string where = "policy '" + p.display_label() + "': ";
  require(is_known_policy_kind(p.kind), where + "unknown kind '" + p.kind + "'");
  require(p.prior_s2 >= 0.0, where + "prior_s2 must be >= 0");
  parse_ucb_form(p.ucb_form);
  require(p.beta_a0 > 0.0 && p.beta_b0 > 0.0, where + "beta prior must be > 0");
  require(p.eps0 >= 0.0 && p.eps0 <= 1.0, where + "eps0 must lie in [0, 1]");
  require(p.eps_min >= 0.0 && p.eps_min <= p.eps0,
          where + "eps_min must lie in [0, eps0]");
  require(p.eps_decay_frac > 0.0 && p.eps_decay_frac <= 1.0,
          where + "eps_decay_frac must lie in (0, 1]");
  require(p.ridge > 0.0, where + "ridge must be > 0");
  require(p.bayes_lambda > 0.0, where + "bayes_lambda must be > 0");
  require(p.bayes_a0 > 1.0, where + "bayes_a0 must be > 1");
  require(p.bayes_b0 > 0.0, where + "bayes_b0 must be > 0");
  require(p.hidden1 >= 1 && p.hidden2 >= 1, where + "hidden sizes must be >= 1");
  require(p.lr > 0.0, where + "lr must be > 0");
  require(p.adam_beta1 >= 0.0 && p.adam_beta1 < 1.0,
          where + "adam_beta1 must lie in [0, 1)");
  require(p.adam_beta2 >= 0.0 && p.adam_beta2 < 1.0,
          where + "adam_beta2 must lie in [0, 1)");
  require(p.train_every >= 1, where + "train_every must be >= 1");
  require(p.train_batches >= 1, where + "train_batches must be >= 1");
  require(p.batch_size >= 1, where + "batch_size must be >= 1");
}

}  // namespace

void validate_run_spec(const RunSpec& spec) {
  validate_run_spec(spec, prepare_env(spec.env));
}

void validate_run_spec(const RunSpec& spec, const EnvBundle& bundle) {
  require(spec.horizon >= 1, "horizon must be >= 1");
  require(spec.trials >= 1, "trials must be >= 1");
  require(spec.jobs >= 1, "jobs must be >= 1");
  require(!spec.policies.empty(), "config needs at least one [policy] section");

  require(spec.horizon >= bundle.arms(),
          "horizon must be >= the number of arms (every arm is played once "
          "before scoring starts)");
  if (bundle.horizon_limit() >= 0)
    require(spec.horizon <= bundle.horizon_limit(),
            "horizon exceeds the dataset row count");

  std::set<std::string> labels;
  for (const auto& p : spec.policies) {
    validate_policy_config(p);
    if (!labels.insert(p.display_label()).second)
      fail("duplicate policy label '" + p.display_label() + "'");
    if (policy_kind_needs_context(p.kind) && bundle.dim() == 0)
      fail("policy '" + p.display_label() + "' needs a contextual environment");
  }
}

}  // namespace sau
