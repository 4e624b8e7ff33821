#include <climits>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sau/config.hpp"
#include "sau/errors.hpp"

namespace sau {
namespace {

[[noreturn]] void fail(long line, const std::string& msg) {
  throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Kv {
  std::string key, value;
  long line;
};

struct Section {
  std::string name;   // run | env | policy
  std::string label;  // policy only
  long line;
  std::vector<Kv> kvs;
};

std::vector<Section> split_sections(const std::string& text) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string raw;
  long line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') fail(line, "unterminated section header");
      std::string inner = trim(s.substr(1, s.size() - 2));
      Section sec;
      sec.line = line;
      if (inner == "run" || inner == "env") {
        sec.name = inner;
      } else if (inner == "policy" || inner.rfind("policy ", 0) == 0) {
        sec.name = "policy";
        if (inner.size() > 6) sec.label = trim(inner.substr(6));
      } else {
        fail(line, "unknown section '[" + inner + "]' (expected [run], [env] "
                   "or [policy <label>])");
      }
      sections.push_back(std::move(sec));
      continue;
    }
    std::size_t eq = s.find('=');
    if (eq == std::string::npos)
      fail(line, "expected 'key = value', got '" + s + "'");
    if (sections.empty()) fail(line, "key outside any section");
    Kv kv;
    kv.key = trim(s.substr(0, eq));
    kv.value = trim(s.substr(eq + 1));
    kv.line = line;
    if (kv.key.empty()) fail(line, "empty key");
    sections.back().kvs.push_back(std::move(kv));
  }
  return sections;
}

long parse_long(const Kv& kv, const std::string& where) {
  try {
    std::size_t pos = 0;
    long v = std::stol(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(kv.line, where + " " + kv.key + ": '" + kv.value + "' is not an integer");
  }
}

int parse_int(const Kv& kv, const std::string& where) {
  long v = parse_long(kv, where);
  if (v < INT_MIN || v > INT_MAX)
    fail(kv.line, where + " " + kv.key + ": out of range");
  return static_cast<int>(v);
}

std::uint64_t parse_u64(const Kv& kv, const std::string& where) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(kv.value, &pos);
    if (pos != kv.value.size() || kv.value[0] == '-')
      throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(kv.line, where + " " + kv.key + ": '" + kv.value +
                      "' is not an unsigned integer");
  }
}

double parse_double(const Kv& kv, const std::string& where) {
  try {
    std::size_t pos = 0;
    double v = std::stod(kv.value, &pos);
    if (pos != kv.value.size()) throw std::invalid_argument("");
    return v;
  } catch (const std::exception&) {
    fail(kv.line, where + " " + kv.key + ": '" + kv.value + "' is not a number");
  }
}

bool parse_bool(const Kv& kv, const std::string& where) {
  if (kv.value == "true" || kv.value == "1") return true;
  if (kv.value == "false" || kv.value == "0") return false;
  fail(kv.line, where + " " + kv.key + ": '" + kv.value +
                    "' is not a bool (true/false/1/0)");
}

const Kv* find_key(const Section& sec, const std::string& key) {
  for (const auto& kv : sec.kvs)
    if (kv.key == key) return &kv;
  return nullptr;
}

void reject_unknown(const Section& sec, const std::set<std::string>& allowed,
                    const std::string& where) {
  std::set<std::string> seen;
  for (const auto& kv : sec.kvs) {
    if (!allowed.count(kv.key))
      fail(kv.line, where + " unknown key '" + kv.key + "'");
    if (!seen.insert(kv.key).second)
      fail(kv.line, where + " duplicate key '" + kv.key + "'");
  }
}

void apply_run(const Section& sec, RunSpec& spec) {
  reject_unknown(sec, {"horizon", "trials", "seed", "jobs", "out"}, "[run]");
  for (const auto& kv : sec.kvs) {
    if (kv.key == "horizon") spec.horizon = parse_long(kv, "[run]");
    else if (kv.key == "trials") spec.trials = parse_int(kv, "[run]");
    else if (kv.key == "seed") spec.seed = parse_u64(kv, "[run]");
    else if (kv.key == "jobs") spec.jobs = parse_int(kv, "[run]");
    else if (kv.key == "out") spec.out_dir = kv.value;
  }
}

void apply_env(const Section& sec, EnvConfig& env, const std::string& base_dir) {
  const Kv* kind = find_key(sec, "kind");
  if (kind) env.kind = kind->value;

  std::set<std::string> allowed;
  if (env.kind == "bernoulli" || env.kind == "uniform-threshold") {
    allowed = {"kind", "arms", "mu_best", "gap"};
  } else if (env.kind == "linear") {
    allowed = {"kind",        "arms",       "dim",        "noise_sd",
               "context_dist", "context_rho", "t_cap",     "theta_dist",
               "error_corr",  "error_rho"};
  } else if (env.kind == "dataset") {
    allowed = {"kind", "dataset", "file", "standardize", "warmup"};
  } else {
    fail(kind ? kind->line : sec.line, "[env] unknown kind '" + env.kind + "'");
  }
  reject_unknown(sec, allowed, "[env]");

  for (const auto& kv : sec.kvs) {
    if (kv.key == "kind") continue;
    else if (kv.key == "arms") env.arms = parse_int(kv, "[env]");
    else if (kv.key == "mu_best") env.mu_best = parse_double(kv, "[env]");
    else if (kv.key == "gap") env.gap = parse_double(kv, "[env]");
    else if (kv.key == "dim") env.dim = parse_int(kv, "[env]");
    else if (kv.key == "noise_sd") env.noise_sd = parse_double(kv, "[env]");
    else if (kv.key == "context_dist") env.context_dist = kv.value;
    else if (kv.key == "context_rho") env.context_rho = parse_double(kv, "[env]");
    else if (kv.key == "t_cap") env.t_cap = parse_double(kv, "[env]");
    else if (kv.key == "theta_dist") env.theta_dist = kv.value;
    else if (kv.key == "error_corr") env.error_corr = kv.value;
    else if (kv.key == "error_rho") env.error_rho = parse_double(kv, "[env]");
    else if (kv.key == "dataset") env.dataset = kv.value;
    else if (kv.key == "file") env.file = kv.value;
    else if (kv.key == "standardize") env.standardize = parse_bool(kv, "[env]");
    else if (kv.key == "warmup") env.warmup = parse_long(kv, "[env]");
  }

  if (!env.file.empty() && !base_dir.empty()) {
    std::filesystem::path p(env.file);
    if (p.is_relative())
      env.file = (std::filesystem::path(base_dir) / p).lexically_normal().string();
  }
}

void apply_policy(const Section& sec, PolicyConfig& pol) {
  const Kv* kind = find_key(sec, "kind");
  if (!kind)
    fail(sec.line, "[policy " + (sec.label.empty() ? "" : sec.label) +
                       "] missing 'kind'");
  pol.kind = kind->value;
  pol.label = sec.label;
  const std::string where = "[policy " + pol.display_label() + "]";
  if (!is_known_policy_kind(pol.kind))
    fail(kind->line, where + " unknown kind '" + pol.kind + "'");

  std::set<std::string> allowed = {"kind"};
  const std::string& k = pol.kind;
  auto add = [&](std::initializer_list<const char*> keys) {
    for (const char* key : keys) allowed.insert(key);
  };
  if (k == "beta-ts") add({"beta_a0", "beta_b0"});
  if (k == "eps-greedy" || k == "linear-greedy" || k == "neural-greedy")
    add({"eps0", "eps_min", "eps_decay_frac"});
  if (k.find("sau") != std::string::npos) add({"prior_s2"});
  if (k.find("sau-ucb") != std::string::npos) add({"ucb_form"});
  if (k == "linear-greedy" || k == "linear-sau-ucb" || k == "linear-sau-sampling")
    add({"ridge"});
  if (k == "linear-ts" || k == "linear-ts-diag")
    add({"bayes_lambda", "bayes_a0", "bayes_b0"});
  if (k.rfind("neural-", 0) == 0)
    add({"hidden1", "hidden2", "lr", "adam_beta1", "adam_beta2", "train_every",
         "train_batches", "batch_size"});
  reject_unknown(sec, allowed, where);

  for (const auto& kv : sec.kvs) {
    if (kv.key == "kind") continue;
    else if (kv.key == "beta_a0") pol.beta_a0 = parse_double(kv, where);
    else if (kv.key == "beta_b0") pol.beta_b0 = parse_double(kv, where);
    else if (kv.key == "eps0") pol.eps0 = parse_double(kv, where);
    else if (kv.key == "eps_min") pol.eps_min = parse_double(kv, where);
    else if (kv.key == "eps_decay_frac")
      pol.eps_decay_frac = parse_double(kv, where);
    else if (kv.key == "prior_s2") pol.prior_s2 = parse_double(kv, where);
    else if (kv.key == "ucb_form") pol.ucb_form = kv.value;
    else if (kv.key == "ridge") pol.ridge = parse_double(kv, where);
    else if (kv.key == "bayes_lambda") pol.bayes_lambda = parse_double(kv, where);
    else if (kv.key == "bayes_a0") pol.bayes_a0 = parse_double(kv, where);
    else if (kv.key == "bayes_b0") pol.bayes_b0 = parse_double(kv, where);
    else if (kv.key == "hidden1") pol.hidden1 = parse_int(kv, where);
    else if (kv.key == "hidden2") pol.hidden2 = parse_int(kv, where);
    else if (kv.key == "lr") pol.lr = parse_double(kv, where);
    else if (kv.key == "adam_beta1") pol.adam_beta1 = parse_double(kv, where);
    else if (kv.key == "adam_beta2") pol.adam_beta2 = parse_double(kv, where);
    else if (kv.key == "train_every") pol.train_every = parse_int(kv, where);
    else if (kv.key == "train_batches") pol.train_batches = parse_int(kv, where);
    else if (kv.key == "batch_size") pol.batch_size = parse_int(kv, where);
  }
}

}  // namespace

RunSpec parse_config_text(const std::string& text, const std::string& base_dir) {
  RunSpec spec;
  bool saw_run = false, saw_env = false;
  for (const Section& sec : split_sections(text)) {
    if (sec.name == "run") {
      if (saw_run) fail(sec.line, "duplicate [run] section");
      saw_run = true;
      apply_run(sec, spec);
    } else if (sec.name == "env") {
      if (saw_env) fail(sec.line, "duplicate [env] section");
      saw_env = true;
      apply_env(sec, spec.env, base_dir);
    } else {
      PolicyConfig pol;
      apply_policy(sec, pol);
      for (const PolicyConfig& seen : spec.policies)
        if (seen.display_label() == pol.display_label())
          fail(sec.line,
               "duplicate policy label '" + pol.display_label() + "'");
      spec.policies.push_back(std::move(pol));
    }
  }
  if (!saw_env) throw ConfigError("config needs an [env] section");
  if (spec.policies.empty())
    throw ConfigError("config needs at least one [policy] section");
  return spec;
}

RunSpec parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string dir = std::filesystem::path(path).parent_path().string();
  return parse_config_text(buf.str(), dir);
}

}  // namespace sau
