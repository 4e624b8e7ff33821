#include <filesystem>
#include <iostream>
#include <vector>

#include "CLI11.hpp"
#include "sau/dataset.hpp"
#include "sau/errors.hpp"

namespace {

const std::vector<std::string> kNames = {"statlog", "mushroom", "covertype",
                                         "adult",   "census",   "jester",
                                         "financial"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate synthetic benchmark-shaped dataset fixtures"};
  std::string out_dir = "data";
  std::string name;
  long rows = 0;
  std::uint64_t seed = 1;
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--name", name, "one dataset name (default: all)");
  app.add_option("--rows", rows, "data rows per fixture (0 = per-set default)");
  app.add_option("--seed", seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  std::vector<std::string> todo =
      name.empty() ? kNames : std::vector<std::string>{name};
  try {
    for (const std::string& n : todo) {
      long r = rows > 0 ? rows : sau::default_fixture_rows(n);
      std::filesystem::path path =
          std::filesystem::path(out_dir) / (n + ".csv");
      sau::write_fixture_csv(n, path.string(), r, seed);
      std::cout << "wrote " << path.string() << " (" << r << " rows)\n";
    }
  } catch (const sau::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
