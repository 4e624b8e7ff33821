#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "sau/config.hpp"
#include "sau/errors.hpp"

using namespace sau;
namespace fs = std::filesystem;

namespace {

std::string msg_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal =
    "[run]\n"
    "horizon = 100\n"
    "trials = 2\n"
    "seed = 5\n"
    "\n"
    "[env]\n"
    "kind = bernoulli\n"
    "arms = 4\n"
    "mu_best = 0.5\n"
    "gap = 0.1\n"
    "\n"
    "[policy ucb]\n"
    "kind = sau-ucb\n"
    "\n"
    "[policy ts]\n"
    "kind = beta-ts\n"
    "beta_a0 = 2\n";

}  // namespace

TEST_CASE("config text parses sections, keys, and labels") {
  RunSpec spec = parse_config_text(kMinimal);
  CHECK(spec.horizon == 100);
  CHECK(spec.trials == 2);
  CHECK(spec.seed == 5);
  CHECK(spec.jobs == 1);  // default
  CHECK(spec.env.kind == "bernoulli");
  CHECK(spec.env.arms == 4);
  REQUIRE(spec.policies.size() == 2);
  CHECK(spec.policies[0].label == "ucb");
  CHECK(spec.policies[0].kind == "sau-ucb");
  CHECK(spec.policies[1].label == "ts");
  CHECK(spec.policies[1].beta_a0 == doctest::Approx(2.0));
  CHECK(spec.policies[1].beta_b0 == doctest::Approx(1.0));  // untouched default
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text =
      "# leading comment\n"
      "[run]\n"
      "horizon = 50\n"
      "; another comment style\n"
      "\n"
      "[env]\n"
      "kind = bernoulli\n"
      "\n"
      "[policy p]\n"
      "kind = uniform\n";
  RunSpec spec = parse_config_text(text);
  CHECK(spec.horizon == 50);
  CHECK(spec.policies.size() == 1);
}

TEST_CASE("unknown keys are rejected by name with their line") {
  std::string text =
      "[run]\n"
      "horizon = 100\n"
      "fnord = 3\n"
      "[env]\n"
      "kind = bernoulli\n"
      "[policy p]\n"
      "kind = uniform\n";
  std::string m = msg_of([&] { parse_config_text(text); });
  CHECK(m.find("fnord") != std::string::npos);
  CHECK(m.find("3") != std::string::npos);  // line number
}

TEST_CASE("keys from the wrong env kind are rejected") {
  std::string text =
      "[run]\nhorizon = 100\n"
      "[env]\nkind = bernoulli\ndim = 5\n"
      "[policy p]\nkind = uniform\n";
  std::string m = msg_of([&] { parse_config_text(text); });
  CHECK(m.find("dim") != std::string::npos);

  std::string text2 =
      "[run]\nhorizon = 100\n"
      "[env]\nkind = linear\ngap = 0.1\n"
      "[policy p]\nkind = linear-ts\n";
  CHECK(msg_of([&] { parse_config_text(text2); }).find("gap") !=
        std::string::npos);
}

TEST_CASE("keys from the wrong policy kind are rejected") {
  std::string text =
      "[run]\nhorizon = 100\n"
      "[env]\nkind = bernoulli\n"
      "[policy p]\nkind = beta-ts\nprior_s2 = 2\n";
  CHECK(msg_of([&] { parse_config_text(text); }).find("prior_s2") !=
        std::string::npos);

  std::string text2 =
      "[run]\nhorizon = 100\n"
      "[env]\nkind = bernoulli\n"
      "[policy p]\nkind = sau-ucb\nridge = 2\n";
  CHECK(msg_of([&] { parse_config_text(text2); }).find("ridge") !=
        std::string::npos);
}

TEST_CASE("unknown kinds and sections are hard errors") {
  CHECK_THROWS_AS(
      (void)parse_config_text("[run]\nhorizon = 10\n[env]\nkind = martian\n"
                              "[policy p]\nkind = uniform\n"),
      ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config_text("[run]\nhorizon = 10\n[env]\nkind = bernoulli\n"
                              "[policy p]\nkind = time-travel\n"),
      ConfigError);
  CHECK_THROWS_AS(
      (void)parse_config_text("[wat]\n[env]\nkind = bernoulli\n"
                              "[policy p]\nkind = uniform\n"),
      ConfigError);
}

TEST_CASE("duplicate keys and sections are rejected") {
  CHECK_THROWS_AS((void)parse_config_text(
                      "[run]\nhorizon = 10\nhorizon = 20\n"
                      "[env]\nkind = bernoulli\n[policy p]\nkind = uniform\n"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config_text(
                      "[env]\nkind = bernoulli\n[env]\nkind = bernoulli\n"
                      "[policy p]\nkind = uniform\n"),
                  ConfigError);
  CHECK_THROWS_AS((void)parse_config_text(
                      "[env]\nkind = bernoulli\n"
                      "[policy p]\nkind = uniform\n[policy p]\nkind = ucb1\n"),
                  ConfigError);
}

TEST_CASE("a config needs an env and at least one policy") {
  CHECK_THROWS_AS((void)parse_config_text("[run]\nhorizon = 10\n"), ConfigError);
  CHECK_THROWS_AS((void)parse_config_text("[env]\nkind = bernoulli\n"),
                  ConfigError);
}

TEST_CASE("malformed values carry their line numbers") {
  std::string m = msg_of([&] {
    parse_config_text(
        "[run]\n"
        "horizon = ten\n"
        "[env]\nkind = bernoulli\n[policy p]\nkind = uniform\n");
  });
  CHECK(m.find("horizon") != std::string::npos);
  CHECK(m.find("2") != std::string::npos);
}

TEST_CASE("cross-field validation catches bad shapes") {
  // horizon below the arm count cannot complete the forced first pass
  RunSpec spec = parse_config_text(kMinimal);
  spec.horizon = 3;  // arms = 4
  CHECK_THROWS_AS(validate_run_spec(spec), ConfigError);

  // duplicate labels
  RunSpec dup = parse_config_text(kMinimal);
  dup.policies[1].label = "ucb";
  CHECK_THROWS_AS(validate_run_spec(dup), ConfigError);

  // contextual policy on a context-free env
  RunSpec ctx = parse_config_text(kMinimal);
  ctx.policies[0].kind = "linear-ts";
  CHECK_THROWS_AS(validate_run_spec(ctx), ConfigError);

  // trials and jobs must be positive
  RunSpec bad = parse_config_text(kMinimal);
  bad.trials = 0;
  CHECK_THROWS_AS(validate_run_spec(bad), ConfigError);
}

TEST_CASE("policy parameter ranges are enforced") {
  RunSpec spec = parse_config_text(kMinimal);
  spec.policies[1].beta_a0 = 0.0;
  CHECK_THROWS_AS(validate_run_spec(spec), ConfigError);

  RunSpec spec2 = parse_config_text(kMinimal);
  spec2.policies[0].prior_s2 = -1.0;
  CHECK_THROWS_AS(validate_run_spec(spec2), ConfigError);

  RunSpec spec3 = parse_config_text(kMinimal);
  spec3.policies[0].ucb_form = "cubed";
  CHECK_THROWS_AS(validate_run_spec(spec3), ConfigError);
}

TEST_CASE("dataset file paths resolve relative to the config directory") {
  fs::path dir = fs::temp_directory_path() / "sau-unit-config";
  fs::create_directories(dir);
  fs::path cfg_path = dir / "exp.cfg";
  {
    std::ofstream out(cfg_path);
    out << "[run]\nhorizon = 10\ntrials = 1\n"
        << "[env]\nkind = dataset\ndataset = statlog\nfile = data/statlog.csv\n"
        << "[policy p]\nkind = uniform\n";
  }
  RunSpec spec = parse_config_file(cfg_path.string());
  CHECK(spec.env.file == (dir / "data/statlog.csv").lexically_normal().string());

  // absolute paths pass through untouched
  {
    std::ofstream out(cfg_path);
    out << "[run]\nhorizon = 10\n"
        << "[env]\nkind = dataset\ndataset = statlog\nfile = /abs/statlog.csv\n"
        << "[policy p]\nkind = uniform\n";
  }
  CHECK(parse_config_file(cfg_path.string()).env.file == "/abs/statlog.csv");
}

TEST_CASE("dataset horizons cannot exceed the table rows") {
  fs::path dir = fs::temp_directory_path() / "sau-unit-config";
  fs::create_directories(dir / "data");
  write_fixture_csv("statlog", (dir / "data" / "statlog.csv").string(), 120, 2);
  std::string text =
      "[run]\nhorizon = 121\ntrials = 1\n"
      "[env]\nkind = dataset\ndataset = statlog\nfile = data/statlog.csv\n"
      "[policy p]\nkind = uniform\n";
  RunSpec spec = parse_config_text(text, dir.string());
  CHECK_THROWS_AS(validate_run_spec(spec), ConfigError);
  spec.horizon = 120;
  validate_run_spec(spec);  // fits exactly
}

TEST_CASE("every built-in policy kind constructs and steps") {
  const char* mab_kinds[] = {"sau-ucb", "sau-sampling", "beta-ts",
                             "ucb1",    "eps-greedy",   "uniform"};
  for (const char* kind : mab_kinds) {
    RngStream rng(7);
    auto pol = build_policy(PolicyConfig{.kind = kind}, 3, 0, 100, std::move(rng));
    REQUIRE(pol);
    CHECK(pol->num_arms() == 3);
    Eigen::VectorXd x;
    auto values = pol->predict(x);
    REQUIRE(values.size() == 3);
    int a = pol->act(values, 1);
    CHECK(a >= 0);
    CHECK(a < 3);
    pol->update(x, a, 1.0);
  }
  const char* ctx_kinds[] = {"linear-sau-ucb", "linear-sau-sampling",
                             "linear-ts",      "linear-ts-diag",
                             "linear-greedy",  "neural-sau-ucb",
                             "neural-sau-sampling", "neural-greedy"};
  for (const char* kind : ctx_kinds) {
    RngStream rng(8);
    PolicyConfig cfg;
    cfg.kind = kind;
    cfg.hidden1 = 8;
    cfg.hidden2 = 8;
    auto pol = build_policy(cfg, 3, 4, 100, std::move(rng));
    REQUIRE(pol);
    Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 0.5);
    auto values = pol->predict(x);
    REQUIRE(values.size() == 3);
    int a = pol->act(values, 1);
    pol->update(x, a, 0.5);
    CHECK(is_known_policy_kind(kind));
    CHECK(policy_kind_needs_context(kind));
  }
  CHECK_FALSE(is_known_policy_kind("astrology"));
  CHECK_FALSE(policy_kind_needs_context("beta-ts"));
}

TEST_CASE("env bundles report their shapes") {
  EnvConfig mab;
  mab.kind = "bernoulli";
  mab.arms = 6;
  EnvBundle b = prepare_env(mab);
  CHECK(b.arms() == 6);
  CHECK(b.dim() == 0);
  CHECK(b.horizon_limit() == -1);
  CHECK(b.env_name() == "bernoulli-k6");

  EnvConfig lin;
  lin.kind = "linear";
  lin.arms = 5;
  lin.dim = 7;
  EnvBundle lb = prepare_env(lin);
  CHECK(lb.dim() == 7);
  CHECK(lb.env_name() == "linear-k5-d7");

  EnvConfig bad;
  bad.kind = "bernoulli";
  bad.mu_best = 1.5;
  CHECK_THROWS_AS((void)prepare_env(bad), ConfigError);
  bad.mu_best = 0.5;
  bad.gap = 0.6;
  CHECK_THROWS_AS((void)prepare_env(bad), ConfigError);
}
