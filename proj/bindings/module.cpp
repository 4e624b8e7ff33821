// Python bindings for the bandit core: arm statistics, deterministic RNG
// streams, the experiment harness (driven by the same text config format the
// CLI uses), the statistical check battery, and the baked-in presets.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sau/cli.hpp"
#include "sau/config.hpp"
#include "sau/errors.hpp"
#include "sau/harness.hpp"
#include "sau/prop_checks.hpp"
#include "sau/rng.hpp"
#include "sau/sau.hpp"

namespace py = pybind11;

namespace {

sau::StreamPurpose parse_purpose(const std::string& s) {
  if (s == "env") return sau::StreamPurpose::env;
  if (s == "policy") return sau::StreamPurpose::policy;
  if (s == "check") return sau::StreamPurpose::check;
  if (s == "fixture") return sau::StreamPurpose::fixture;
  throw sau::ConfigError("unknown stream purpose '" + s +
                         "' (expected env, policy, check or fixture)");
}

py::object none_if_nan(double x) {
  if (std::isnan(x)) return py::none();
  return py::float_(x);
}

py::dict summary_to_dict(const sau::ExperimentResult& res, bool include_curves) {
  py::dict p;
  p["label"] = res.label;
  p["final_mean_cum_regret"] = res.agg.final_mean;
  p["final_sem"] = none_if_nan(res.agg.final_sem);
  py::dict q;
  q["min"] = res.agg.final_quantiles[0];
  q["p25"] = res.agg.final_quantiles[1];
  q["median"] = res.agg.final_quantiles[2];
  q["p75"] = res.agg.final_quantiles[3];
  q["max"] = res.agg.final_quantiles[4];
  p["final_quantiles"] = q;
  p["finals"] = res.agg.finals;
  if (include_curves) {
    p["mean_cum_regret"] = res.agg.mean_cum;
    p["sem"] = res.agg.sem;
  }
  return p;
}

// Parse a config, run every policy, and return the aggregate summary as a
// plain dict. jobs/seed, when given, override the values in the config text.
py::dict run_config(const std::string& text, const std::string& base_dir,
                    std::optional<int> jobs, std::optional<std::uint64_t> seed,
                    bool include_curves) {
  sau::RunSpec spec = sau::parse_config_text(text, base_dir);
  if (jobs) spec.jobs = *jobs;
  if (seed) spec.seed = *seed;
  sau::EnvBundle bundle = sau::prepare_env(spec.env);
  sau::validate_run_spec(spec, bundle);

  std::vector<sau::ExperimentResult> results;
  {
    py::gil_scoped_release release;
    results.reserve(spec.policies.size());
    for (const sau::PolicyConfig& pol : spec.policies)
      results.push_back(sau::run_experiment(bundle, pol, spec.horizon,
                                            spec.trials, spec.seed, spec.jobs));
  }

  py::dict out;
  out["env"] = bundle.env_name();
  out["horizon"] = spec.horizon;
  out["trials"] = spec.trials;
  out["seed"] = spec.seed;
  py::list pols;
  for (const sau::ExperimentResult& res : results)
    pols.append(summary_to_dict(res, include_curves));
  out["policies"] = pols;

  std::vector<std::size_t> order(results.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (results[a].agg.final_mean != results[b].agg.final_mean)
      return results[a].agg.final_mean < results[b].agg.final_mean;
    return results[a].label < results[b].label;
  });
  py::list ranking;
  for (std::size_t idx : order) ranking.append(results[idx].label);
  out["ranking"] = ranking;
  return out;
}

py::dict check_to_dict(const sau::PropCheckResult& c) {
  py::dict d;
  d["name"] = c.name;
  d["pass"] = c.pass;
  d["observed"] = c.observed;
  d["bound"] = c.bound;
  d["details"] = c.details;
  return d;
}

py::list prop_checks_py(const std::string& which, std::uint64_t seed, double mu,
                        long n, int reps, int trials, double sigma2, int dim) {
  sau::PropCheckParams params;
  params.mu = mu;
  params.n = n;
  params.reps = reps;
  params.trials = trials;
  params.sigma2 = sigma2;
  params.dim = dim;
  std::vector<sau::PropCheckResult> checks;
  {
    py::gil_scoped_release release;
    checks = sau::run_prop_checks(which, params, seed);
  }
  py::list out;
  for (const sau::PropCheckResult& c : checks) out.append(check_to_dict(c));
  return out;
}

int cli_py(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("sau");
  for (const std::string& a : args) storage.push_back(a);
  std::vector<char*> argv;
  argv.reserve(storage.size());
  for (std::string& s : storage) argv.push_back(s.data());
  py::gil_scoped_release release;
  return sau::run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Variance-adaptive bandit core: arm statistics, deterministic RNG "
            "streams, experiment harness, and statistical checks.";

  py::register_exception<sau::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<sau::IngestError>(m, "IngestError", PyExc_ValueError);

#ifdef SAU_VERSION_INFO
  m.attr("__version__") = SAU_VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif

  // ---- deterministic RNG ----
  m.def("splitmix64", &sau::splitmix64, py::arg("x"),
        "One step of the splitmix64 sequence: advance by the golden gamma, "
        "then finalize.");
  m.def("fnv1a64", [](const std::string& s) { return sau::fnv1a64(s); },
        py::arg("s"), "64-bit FNV-1a hash of a byte string.");
  m.def(
      "derive_seed",
      [](std::uint64_t master, std::uint64_t trial, const std::string& purpose) {
        return sau::RngStream::derive_seed(master, trial, parse_purpose(purpose));
      },
      py::arg("master"), py::arg("trial"), py::arg("purpose"),
      "Seed for the (master, trial, purpose) stream; purpose is one of "
      "'env', 'policy', 'check', 'fixture'.");

  py::class_<sau::RngStream>(m, "RngStream",
                             "Deterministic random stream (mt19937_64 with "
                             "fully specified transforms).")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static(
          "derive",
          [](std::uint64_t master, std::uint64_t trial,
             const std::string& purpose) {
            return sau::RngStream::derive(master, trial, parse_purpose(purpose));
          },
          py::arg("master"), py::arg("trial"), py::arg("purpose"))
      .def("next_u64", &sau::RngStream::next_u64)
      .def("uniform01", &sau::RngStream::uniform01)
      .def("uniform", &sau::RngStream::uniform, py::arg("lo"), py::arg("hi"))
      .def("gaussian", &sau::RngStream::gaussian, py::arg("mean"),
           py::arg("var"))
      .def("gamma", &sau::RngStream::gamma, py::arg("shape"))
      .def("beta", &sau::RngStream::beta, py::arg("a"), py::arg("b"))
      .def("student_t_truncated", &sau::RngStream::student_t_truncated,
           py::arg("df"), py::arg("cap"))
      .def("uniform_int", &sau::RngStream::uniform_int, py::arg("n"))
      .def_property_readonly("seed", &sau::RngStream::seed);

  // ---- per-arm uncertainty statistic ----
  py::class_<sau::ArmState>(m, "ArmState",
                            "Per-arm pull count and accumulated squared "
                            "prediction error.")
      .def(py::init<>())
      .def(py::init([](long n, double s2) { return sau::ArmState{n, s2}; }),
           py::arg("n"), py::arg("s2"))
      .def_readwrite("n", &sau::ArmState::n)
      .def_readwrite("s2", &sau::ArmState::s2)
      .def("tau2", &sau::ArmState::tau2,
           "Variance estimate s2 / n; requires n >= 1.")
      .def("__repr__", [](const sau::ArmState& st) {
        return "ArmState(n=" + std::to_string(st.n) +
               ", s2=" + std::to_string(st.s2) + ")";
      });

  m.def("make_arm_state", &sau::make_arm_state, py::arg("prior_s2"),
        "Fresh arm state with the given squared-error prior.");
  m.def("residual", &sau::residual, py::arg("reward"), py::arg("mu_hat"),
        "Prediction residual reward - mu_hat.");
  m.def("sau_update", &sau::sau_update, py::arg("state"), py::arg("e"),
        "Record one residual: s2 += e^2, n += 1.");
  m.def(
      "ucb_score",
      [](double mu_hat, const sau::ArmState& st, double step,
         const std::string& form) {
        return sau::ucb_score(mu_hat, st, step, sau::parse_ucb_form(form));
      },
      py::arg("mu_hat"), py::arg("state"), py::arg("step"),
      py::arg("form") = "tau2",
      "mu_hat plus the variance-adaptive exploration bonus; form is 'tau2' "
      "or 'tau'.");
  m.def(
      "sampling_score",
      [](double mu_hat, const sau::ArmState& st, sau::RngStream& rng) {
        return sau::sampling_score(mu_hat, st, rng);
      },
      py::arg("mu_hat"), py::arg("state"), py::arg("rng"),
      "One draw from N(mu_hat, tau2 / n).");
  m.def(
      "argmax_lowest",
      [](const std::vector<double>& v) {
        return sau::argmax_lowest(std::span<const double>(v));
      },
      py::arg("values"), "Index of the maximum, lowest index on ties.");
  m.def(
      "select_action",
      [](const std::vector<double>& scores, long step, int num_arms) {
        return sau::select_action(std::span<const double>(scores), step,
                                  num_arms);
      },
      py::arg("scores"), py::arg("step"), py::arg("num_arms"),
      "Round-robin over all arms for the first num_arms steps (1-based), "
      "then greedy with lowest-index ties.");

  // ---- harness, checks, presets, CLI ----
  m.def("run_config", &run_config, py::arg("text"), py::arg("base_dir") = "",
        py::arg("jobs") = py::none(), py::arg("seed") = py::none(),
        py::arg("include_curves") = false,
        "Run every policy in a text config and return the aggregate summary "
        "as a dict. jobs/seed override the config when given; "
        "include_curves=True adds per-step mean cumulative regret and SEM.");
  m.def("run_prop_checks", &prop_checks_py, py::arg("which") = "all",
        py::arg("seed") = 1, py::arg("mu") = 0.5, py::arg("n") = 0,
        py::arg("reps") = 10000, py::arg("trials") = 200,
        py::arg("sigma2") = 0.25, py::arg("dim") = 5,
        "Run the named statistical check ('1', '2', '4', 'tau-convergence', "
        "'log-regret') or 'all'; returns a list of result dicts.");
  m.def(
      "fit_log_curve",
      [](const std::vector<double>& cumulative, long burn_in) {
        sau::LogFit f = sau::fit_log_curve(
            std::span<const double>(cumulative), burn_in);
        py::dict d;
        d["intercept"] = f.intercept;
        d["slope"] = f.slope;
        d["r2"] = f.r2;
        return d;
      },
      py::arg("cumulative"), py::arg("burn_in"),
      "Least-squares fit of a cumulative-regret curve against log(step) "
      "after a burn-in.");
  m.def(
      "check_log_regret",
      [](const std::vector<double>& cumulative, long burn_in, double r2_min) {
        return check_to_dict(sau::check_log_regret(
            std::span<const double>(cumulative), burn_in, r2_min));
      },
      py::arg("cumulative"), py::arg("burn_in"), py::arg("r2_min") = 0.95);
  m.def("preset_names", &sau::preset_names,
        "Names of the baked-in experiment presets, in lexical order.");
  m.def("preset_text", &sau::preset_text, py::arg("name"),
        "Config text for a named preset.");
  m.def("cli", &cli_py, py::arg("args"),
        "Invoke the command-line interface with an argument list (no program "
        "name); returns the exit code.");
}
