#include "sau/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <stdexcept>

namespace sau {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

void atomic_write(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string results_csv(std::span<const ExperimentResult> results,
                        const std::string& env_name) {
  std::string out = "step,mean_cum_regret,sem,policy,env\n";
  for (const auto& res : results) {
    const auto& agg = res.agg;
    for (std::size_t i = 0; i < agg.mean_cum.size(); ++i) {
      out += std::to_string(i + 1);
      out += ',';
      out += format_double(agg.mean_cum[i]);
      out += ',';
      if (!agg.sem.empty()) out += format_double(agg.sem[i]);
      out += ',';
      out += res.label;
      out += ',';
      out += env_name;
      out += '\n';
    }
  }
  return out;
}

std::string ranking_csv(std::span<const ExperimentResult> results) {
  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].agg.final_mean != results[b].agg.final_mean)
      return results[a].agg.final_mean < results[b].agg.final_mean;
    return results[a].label < results[b].label;
  });
  std::string out = "rank,policy,final_mean_cum_regret,final_sem\n";
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto& res = results[order[r]];
    out += std::to_string(r + 1);
    out += ',';
    out += res.label;
    out += ',';
    out += format_double(res.agg.final_mean);
    out += ',';
    if (!std::isnan(res.agg.final_sem)) out += format_double(res.agg.final_sem);
    out += '\n';
  }
  return out;
}

namespace {

nlohmann::json env_json(const EnvConfig& e) {
  nlohmann::json j;
  j["kind"] = e.kind;
  if (e.kind == "bernoulli" || e.kind == "uniform-threshold") {
    j["arms"] = e.arms;
    j["mu_best"] = e.mu_best;
    j["gap"] = e.gap;
  } else if (e.kind == "linear") {
    j["arms"] = e.arms;
    j["dim"] = e.dim;
    j["noise_sd"] = e.noise_sd;
    j["context_dist"] = e.context_dist;
    if (e.context_dist == "gaussian-ar1") j["context_rho"] = e.context_rho;
    if (e.context_dist == "t2-truncated") j["t_cap"] = e.t_cap;
    j["theta_dist"] = e.theta_dist;
    j["error_corr"] = e.error_corr;
    if (e.error_corr == "ar1") j["error_rho"] = e.error_rho;
  } else if (e.kind == "dataset") {
    j["dataset"] = e.dataset;
    j["file"] = e.file;
    j["standardize"] = e.standardize;
    j["warmup"] = e.warmup;
  }
  return j;
}

nlohmann::json policy_json(const PolicyConfig& p) {
  nlohmann::json j;
  j["kind"] = p.kind;
  j["label"] = p.display_label();
  const bool sau = p.kind.find("sau") != std::string::npos;
  const bool linear = p.kind.rfind("linear-", 0) == 0;
  const bool neural = p.kind.rfind("neural-", 0) == 0;
  const bool eps = p.kind == "eps-greedy" || p.kind == "linear-greedy" ||
                   p.kind == "neural-greedy";
  if (sau) {
    j["prior_s2"] = p.prior_s2;
    if (p.kind.find("ucb") != std::string::npos) j["ucb_form"] = p.ucb_form;
  }
  if (p.kind == "beta-ts") {
    j["beta_a0"] = p.beta_a0;
    j["beta_b0"] = p.beta_b0;
  }
  if (eps) {
    j["eps0"] = p.eps0;
    j["eps_min"] = p.eps_min;
    j["eps_decay_frac"] = p.eps_decay_frac;
  }
  if (linear && (sau || p.kind == "linear-greedy")) j["ridge"] = p.ridge;
  if (p.kind == "linear-ts" || p.kind == "linear-ts-diag") {
    j["bayes_lambda"] = p.bayes_lambda;
    j["bayes_a0"] = p.bayes_a0;
    j["bayes_b0"] = p.bayes_b0;
  }
  if (neural) {
    j["hidden1"] = p.hidden1;
    j["hidden2"] = p.hidden2;
    j["lr"] = p.lr;
    j["adam_beta1"] = p.adam_beta1;
    j["adam_beta2"] = p.adam_beta2;
    j["train_every"] = p.train_every;
    j["train_batches"] = p.train_batches;
    j["batch_size"] = p.batch_size;
  }
  return j;
}

}  // namespace

nlohmann::json run_spec_json(const RunSpec& spec) {
  nlohmann::json j;
  j["horizon"] = spec.horizon;
  j["trials"] = spec.trials;
  j["seed"] = spec.seed;
  j["jobs"] = spec.jobs;
  j["out"] = spec.out_dir;
  j["env"] = env_json(spec.env);
  j["policies"] = nlohmann::json::array();
  for (const auto& p : spec.policies) j["policies"].push_back(policy_json(p));
  return j;
}

nlohmann::json summary_json(const RunSpec& spec, const std::string& env_name,
                            std::span<const ExperimentResult> results) {
  nlohmann::json j;
  j["env"] = env_name;
  j["config"] = run_spec_json(spec);
  j["policies"] = nlohmann::json::array();
  for (const auto& res : results) {
    nlohmann::json p;
    p["label"] = res.label;
    p["final_mean_cum_regret"] = res.agg.final_mean;
    if (std::isnan(res.agg.final_sem))
      p["final_sem"] = nullptr;
    else
      p["final_sem"] = res.agg.final_sem;
    p["final_quantiles"] = {{"min", res.agg.final_quantiles[0]},
                            {"p25", res.agg.final_quantiles[1]},
                            {"median", res.agg.final_quantiles[2]},
                            {"p75", res.agg.final_quantiles[3]},
                            {"max", res.agg.final_quantiles[4]}};
    j["policies"].push_back(std::move(p));
  }

  std::vector<std::size_t> order(results.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].agg.final_mean != results[b].agg.final_mean)
      return results[a].agg.final_mean < results[b].agg.final_mean;
    return results[a].label < results[b].label;
  });
  j["ranking"] = nlohmann::json::array();
  for (std::size_t idx : order) j["ranking"].push_back(results[idx].label);
  return j;
}

nlohmann::json prop_check_json(std::span<const PropCheckResult> checks) {
  nlohmann::json j;
  j["checks"] = nlohmann::json::array();
  bool all = true;
  for (const auto& c : checks) {
    nlohmann::json one;
    one["name"] = c.name;
    one["pass"] = c.pass;
    one["observed"] = c.observed;
    one["bound"] = c.bound;
    one["details"] = c.details;
    j["checks"].push_back(std::move(one));
    all = all && c.pass;
  }
  j["all_pass"] = all;
  return j;
}

}  // namespace sau
