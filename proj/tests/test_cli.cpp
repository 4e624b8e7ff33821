#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sau/cli.hpp"
#include "sau/config.hpp"
#include "sau/dataset.hpp"

using namespace sau;
namespace fs = std::filesystem;

namespace {

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "sau-bench");
  std::vector<char*> argv;
  argv.reserve(args.size());
  for (std::string& s : args) argv.push_back(s.data());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

fs::path tmp_dir() {
  fs::path d = fs::temp_directory_path() / "sau-unit-cli";
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& text) {
  fs::path p = tmp_dir() / name;
  std::ofstream out(p);
  out << text;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

const char* kTwoPolicyCfg =
    "[run]\nhorizon = 60\ntrials = 2\nseed = 3\n"
    "[env]\nkind = bernoulli\narms = 3\nmu_best = 0.5\ngap = 0.1\n"
    "[policy sau-ucb]\nkind = sau-ucb\n"
    "[policy ucb1]\nkind = ucb1\n";

}  // namespace

TEST_CASE("usage errors exit with 2, help with 0") {
  CHECK(cli({}) == 2);
  CHECK(cli({"--help"}) == 0);
  CHECK(cli({"run"}) == 2);                       // --config required
  CHECK(cli({"frobnicate"}) == 2);                // unknown subcommand
  CHECK(cli({"run", "--config", "/nope.cfg"}) == 2);
}

TEST_CASE("run executes a config and writes its artifacts") {
  fs::path cfg = write_config("single.cfg",
                              "[run]\nhorizon = 50\ntrials = 2\nseed = 3\n"
                              "[env]\nkind = bernoulli\narms = 3\n"
                              "[policy p]\nkind = sau-ucb\n");
  fs::path out = tmp_dir() / "run-single";
  fs::remove_all(out);
  CHECK(cli({"run", "--config", cfg.string(), "--out", out.string()}) == 0);
  REQUIRE(fs::exists(out / "results.csv"));
  REQUIRE(fs::exists(out / "summary.json"));
  CHECK_FALSE(fs::exists(out / "ranking.csv"));  // compare-only artifact

  std::istringstream csv(slurp(out / "results.csv"));
  std::string line;
  long lines = 0;
  while (std::getline(csv, line)) ++lines;
  CHECK(lines == 51);  // header + one row per step

  nlohmann::json j = nlohmann::json::parse(slurp(out / "summary.json"));
  CHECK(j["config"]["horizon"] == 50);
  CHECK(j["policies"].size() == 1);
}

TEST_CASE("rerunning a config reproduces the files byte for byte") {
  fs::path cfg = write_config("det.cfg", kTwoPolicyCfg);
  fs::path out1 = tmp_dir() / "det-1";
  fs::path out2 = tmp_dir() / "det-2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  REQUIRE(cli({"compare", "--config", cfg.string(), "--out", out1.string()}) == 0);
  REQUIRE(cli({"compare", "--config", cfg.string(), "--out", out2.string(),
               "--jobs", "3"}) == 0);
  CHECK(slurp(out1 / "results.csv") == slurp(out2 / "results.csv"));
  CHECK(slurp(out1 / "ranking.csv") == slurp(out2 / "ranking.csv"));
  CHECK(slurp(out1 / "results.csv").find("sau-ucb") != std::string::npos);

  fs::path out3 = tmp_dir() / "det-3";
  REQUIRE(cli({"compare", "--config", cfg.string(), "--out", out3.string(),
               "--seed", "4"}) == 0);
  CHECK(slurp(out1 / "results.csv") != slurp(out3 / "results.csv"));
}

TEST_CASE("run of one policy matches its rows in the comparison") {
  fs::path cfg = write_config("crn.cfg", kTwoPolicyCfg);
  fs::path ronly = tmp_dir() / "crn-run";
  fs::path both = tmp_dir() / "crn-compare";
  fs::remove_all(ronly);
  fs::remove_all(both);
  REQUIRE(cli({"run", "--config", cfg.string(), "--policy", "sau-ucb",
               "--out", ronly.string()}) == 0);
  REQUIRE(cli({"compare", "--config", cfg.string(), "--out", both.string()}) == 0);

  auto rows_of = [](const std::string& csv, const std::string& label) {
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line))
      if (line.find("," + label + ",") != std::string::npos) rows.push_back(line);
    return rows;
  };
  auto a = rows_of(slurp(ronly / "results.csv"), "sau-ucb");
  auto b = rows_of(slurp(both / "results.csv"), "sau-ucb");
  REQUIRE(a.size() == 60);
  CHECK(a == b);
}

TEST_CASE("run on a multi-policy config requires a selection") {
  fs::path cfg = write_config("multi.cfg", kTwoPolicyCfg);
  fs::path out = tmp_dir() / "multi-out";
  CHECK(cli({"run", "--config", cfg.string(), "--out", out.string()}) == 2);
  CHECK(cli({"run", "--config", cfg.string(), "--policy", "no-such-label",
             "--out", out.string()}) == 2);
}

TEST_CASE("compare ranks a zero-gap tie by label") {
  fs::path cfg = write_config("tie.cfg",
                              "[run]\nhorizon = 40\ntrials = 2\nseed = 1\n"
                              "[env]\nkind = bernoulli\narms = 2\nmu_best = 0.5\n"
                              "gap = 0\n"
                              "[policy zz]\nkind = uniform\n"
                              "[policy aa]\nkind = ucb1\n");
  fs::path out = tmp_dir() / "tie-out";
  fs::remove_all(out);
  REQUIRE(cli({"compare", "--config", cfg.string(), "--out", out.string()}) == 0);
  std::istringstream in(slurp(out / "ranking.csv"));
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(first.rfind("1,aa,0,", 0) == 0);
  CHECK(second.rfind("2,zz,0,", 0) == 0);
}

TEST_CASE("config mistakes exit 2, missing data exits 1") {
  fs::path bad = write_config("bad.cfg",
                              "[run]\nhorizon = 2\n"
                              "[env]\nkind = bernoulli\narms = 5\n"
                              "[policy p]\nkind = uniform\n");
  CHECK(cli({"run", "--config", bad.string()}) == 2);  // horizon < arms

  fs::path missing = write_config(
      "missing-data.cfg",
      "[run]\nhorizon = 10\ntrials = 1\n"
      "[env]\nkind = dataset\ndataset = statlog\nfile = does-not-exist.csv\n"
      "[policy p]\nkind = uniform\n");
  CHECK(cli({"run", "--config", missing.string(),
             "--out", (tmp_dir() / "never").string()}) == 1);
}

TEST_CASE("prop-check writes a parsable report and exits by outcome") {
  fs::path out = tmp_dir() / "check.json";
  fs::remove(out);
  CHECK(cli({"prop-check", "2", "--n", "60", "--reps", "300", "--seed", "5",
             "--out", out.string()}) == 0);
  REQUIRE(fs::exists(out));
  nlohmann::json j = nlohmann::json::parse(slurp(out));
  CHECK(j["all_pass"] == true);
  REQUIRE(j["checks"].size() == 1);
  CHECK(j["checks"][0]["name"] == "residual-vs-mean-mse");

  // an unsolvable design is a runtime failure, not a config mistake
  CHECK(cli({"prop-check", "4", "--n", "3", "--reps", "50"}) == 1);
  // unknown battery name is a config mistake
  CHECK(cli({"prop-check", "9"}) == 2);
}

TEST_CASE("reproduce lists presets and rejects unknown names") {
  CHECK(cli({"reproduce", "--list"}) == 0);
  CHECK(cli({"reproduce", "--preset", "figure-nine"}) == 2);
}

TEST_CASE("the preset catalog is fixed and parsable") {
  std::vector<std::string> names = preset_names();
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "appendixA-bernoulli");
  CHECK(names[1] == "figure1-a");
  CHECK(names[2] == "figure1-b");
  CHECK(names[3] == "figure1-c");
  CHECK(names[4] == "table1-statlog-desk");

  RunSpec a = parse_config_text(preset_text("figure1-a"));
  CHECK(a.env.kind == "linear");
  CHECK(a.env.arms == 5);
  CHECK(a.env.dim == 5);
  CHECK(a.horizon == 20000);
  CHECK(a.trials == 100);
  CHECK(a.policies.size() == 4);

  RunSpec b = parse_config_text(preset_text("figure1-b"));
  CHECK(b.env.arms == 20);
  RunSpec c = parse_config_text(preset_text("figure1-c"));
  CHECK(c.env.dim == 40);

  RunSpec mab = parse_config_text(preset_text("appendixA-bernoulli"));
  CHECK(mab.env.kind == "bernoulli");
  CHECK(mab.env.arms == 10);
  CHECK(mab.policies.size() == 6);

  RunSpec desk = parse_config_text(preset_text("table1-statlog-desk"));
  CHECK(desk.env.kind == "dataset");
  CHECK(desk.env.dataset == "statlog");
  CHECK(desk.horizon == 10000);
  CHECK(desk.trials == 10);
}

TEST_CASE("reproduce runs a preset into a per-preset directory") {
  // Substitute a fast file-backed preset by running the real statlog preset?
  // Too slow here; instead verify the directory convention with the tiniest
  // real preset is still minutes of work, so only check the failure path and
  // leave full preset execution to the acceptance battery.
  fs::path base = tmp_dir() / "repro";
  CHECK(cli({"reproduce", "--preset", "table1-statlog-desk",
             "--out", (base / "missing-data").string()}) == 1);
  // the statlog preset needs data/statlog.csv relative to the cwd; absent
  // here, so the run fails at load time with a runtime (not usage) error.
}
