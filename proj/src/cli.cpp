#include "sau/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "presets.inc"
#include "sau/config.hpp"
#include "sau/errors.hpp"
#include "sau/harness.hpp"
#include "sau/io.hpp"
#include "sau/prop_checks.hpp"

namespace sau {

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const PresetDef* p = kPresets; p->name != nullptr; ++p)
    names.emplace_back(p->name);
  std::sort(names.begin(), names.end());
  return names;
}

std::string preset_text(const std::string& name) {
  for (const PresetDef* p = kPresets; p->name != nullptr; ++p)
    if (name == p->name) return p->text;
  std::string known;
  for (const std::string& n : preset_names()) {
    if (!known.empty()) known += ", ";
    known += n;
  }
  throw ConfigError("unknown preset '" + name + "' (known: " + known + ")");
}

namespace {

namespace fs = std::filesystem;

void execute_spec(const RunSpec& spec, const std::string& out_dir,
                  bool progress, bool with_ranking) {
  EnvBundle bundle = prepare_env(spec.env);
  validate_run_spec(spec, bundle);

  std::vector<ExperimentResult> results;
  results.reserve(spec.policies.size());
  for (const PolicyConfig& pol : spec.policies)
    results.push_back(run_experiment(bundle, pol, spec.horizon, spec.trials,
                                     spec.seed, spec.jobs, progress));

  const std::string env_name = bundle.env_name();
  fs::path dir(out_dir);
  atomic_write((dir / "results.csv").string(), results_csv(results, env_name));
  std::cout << "wrote " << (dir / "results.csv").string() << "\n";
  if (with_ranking) {
    atomic_write((dir / "ranking.csv").string(), ranking_csv(results));
    std::cout << "wrote " << (dir / "ranking.csv").string() << "\n";
  }
  atomic_write((dir / "summary.json").string(),
               summary_json(spec, env_name, results).dump(2) + "\n");
  std::cout << "wrote " << (dir / "summary.json").string() << "\n";
}

struct CommonFlags {
  std::uint64_t seed = 0;
  std::string out;
  int jobs = 0;
  bool progress = false;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* jobs_opt = nullptr;

  void attach(CLI::App* cmd) {
    seed_opt = cmd->add_option("--seed", seed, "override the master seed");
    out_opt = cmd->add_option("--out", out, "output directory");
    jobs_opt = cmd->add_option("--jobs", jobs, "worker threads for trials");
    cmd->add_flag("--progress", progress, "report each finished trial on stderr");
  }

  void apply(RunSpec& spec) const {
    if (seed_opt->count() > 0) spec.seed = seed;
    if (jobs_opt->count() > 0) spec.jobs = jobs;
    if (out_opt->count() > 0) spec.out_dir = out;
  }
};

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"sample-average-uncertainty bandit benchmark"};
  app.require_subcommand(1);

  std::string config_path, policy_label;
  CommonFlags run_flags, cmp_flags, rep_flags;

  CLI::App* cmd_run = app.add_subcommand(
      "run", "run a single policy on an environment from a config file");
  cmd_run->add_option("--config", config_path, "config file")->required();
  cmd_run->add_option("--policy", policy_label,
                      "policy label to run when the config lists several");
  run_flags.attach(cmd_run);

  CLI::App* cmd_compare = app.add_subcommand(
      "compare", "run every policy in a config file and rank them");
  cmd_compare->add_option("--config", config_path, "config file")->required();
  cmp_flags.attach(cmd_compare);

  std::string which = "all";
  PropCheckParams params;
  std::uint64_t check_seed = 7;
  std::string check_out;
  CLI::App* cmd_check = app.add_subcommand(
      "prop-check", "run the statistic checks and report pass/fail JSON");
  cmd_check->add_option(
      "which", which, "one of 1, 2, 4, tau-convergence, log-regret, all");
  cmd_check->add_option("--mu", params.mu, "reward mean for Bernoulli checks");
  cmd_check->add_option("--n", params.n, "pulls / design rows (0 = default)");
  cmd_check->add_option("--reps", params.reps, "Monte-Carlo replications");
  cmd_check->add_option("--trials", params.trials,
                        "trials for the convergence check");
  cmd_check->add_option("--sigma2", params.sigma2,
                        "noise variance for the leverage check");
  cmd_check->add_option("--dim", params.dim,
                        "design dimension for the leverage check");
  cmd_check->add_option("--seed", check_seed, "master seed");
  cmd_check->add_option("--out", check_out, "also write the JSON report here");

  std::string preset;
  bool list_presets = false;
  CLI::App* cmd_repro = app.add_subcommand(
      "reproduce", "run a named preset with checked-in configuration");
  cmd_repro->add_option("--preset", preset, "preset name");
  cmd_repro->add_flag("--list", list_presets, "list preset names and exit");
  rep_flags.attach(cmd_repro);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(cmd_run)) {
      RunSpec spec = parse_config_file(config_path);
      if (spec.policies.size() > 1) {
        if (policy_label.empty())
          throw ConfigError(
              "config lists " + std::to_string(spec.policies.size()) +
              " policies; pick one with --policy");
        auto it = std::find_if(spec.policies.begin(), spec.policies.end(),
                               [&](const PolicyConfig& p) {
                                 return p.display_label() == policy_label;
                               });
        if (it == spec.policies.end())
          throw ConfigError("no policy labelled '" + policy_label +
                            "' in " + config_path);
        PolicyConfig chosen = *it;
        spec.policies = {chosen};
      } else if (!policy_label.empty() &&
                 spec.policies[0].display_label() != policy_label) {
        throw ConfigError("no policy labelled '" + policy_label + "' in " +
                          config_path);
      }
      run_flags.apply(spec);
      execute_spec(spec, spec.out_dir, run_flags.progress,
                   /*with_ranking=*/false);
      return 0;
    }

    if (app.got_subcommand(cmd_compare)) {
      RunSpec spec = parse_config_file(config_path);
      cmp_flags.apply(spec);
      execute_spec(spec, spec.out_dir, cmp_flags.progress,
                   /*with_ranking=*/true);
      return 0;
    }

    if (app.got_subcommand(cmd_check)) {
      std::vector<PropCheckResult> checks =
          run_prop_checks(which, params, check_seed);
      nlohmann::json report = prop_check_json(checks);
      std::cout << report.dump(2) << "\n";
      if (!check_out.empty()) atomic_write(check_out, report.dump(2) + "\n");
      return report["all_pass"].get<bool>() ? 0 : 1;
    }

    if (app.got_subcommand(cmd_repro)) {
      if (list_presets) {
        for (const std::string& n : preset_names()) std::cout << n << "\n";
        return 0;
      }
      if (preset.empty())
        throw ConfigError("reproduce needs --preset NAME (or --list)");
      RunSpec spec = parse_config_text(preset_text(preset));
      rep_flags.apply(spec);
      std::string base = rep_flags.out_opt->count() > 0 ? rep_flags.out
                                                        : std::string("results");
      std::string out_dir = (fs::path(base) / preset).string();
      execute_spec(spec, out_dir, rep_flags.progress, /*with_ranking=*/true);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace sau
