#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "sau/envs.hpp"
#include "sau/rng.hpp"

namespace sau {

// Column roles for CSV ingestion, referenced by header name.
struct CsvSchema {
  std::vector<std::string> numeric;
  std::vector<std::string> categorical;  // expanded to one-hots, levels sorted
  std::string label;                     // classification target, "" if none
  std::vector<std::string> outputs;      // per-arm payoff columns
};

struct IngestResult {
  Eigen::MatrixXd features;  // rows x d, numeric block then one-hot blocks
  std::vector<std::string> feature_names;
  std::vector<int> labels;           // class index per row (sorted class order)
  std::vector<std::string> classes;  // sorted distinct label values
  Eigen::MatrixXd outputs;           // rows x k for payoff-table datasets
  long dropped = 0;                  // rows removed for missing values
};

// Parse a headered CSV. Cells "", "NA", "?" count as missing and drop the
// whole row (the count is reported). One-hot columns are expanded with levels
// in lexicographic order, so the feature layout is deterministic.
IngestResult ingest_csv(const std::string& path, const CsvSchema& schema);

// Center and scale each feature by mean/sd estimated from the first
// min(rows, warmup) rows in file order. Zero-variance features are centered
// but not scaled.
void standardize_features(Eigen::MatrixXd& features, long warmup);

enum class DatasetKind {
  classification,  // reward 1 for the correct class
  mushroom,        // eat/pass with stochastic poisoning penalty
  outputs,         // reward is the chosen column of a payoff table
};

struct DatasetSpec {
  std::string name;
  DatasetKind kind;
  int dim;   // expected feature count after one-hot expansion
  int arms;  // expected number of actions
};

// Registry of the supported table shapes (throws ConfigError on unknown name).
const DatasetSpec& dataset_spec(const std::string& name);

struct DatasetTable {
  DatasetSpec spec;
  Eigen::MatrixXd features;
  std::vector<int> labels;   // classification and mushroom (0 = edible)
  Eigen::MatrixXd outputs;   // outputs kind
  long dropped = 0;
  long rows() const { return features.rows(); }
};

// Read and validate a dataset file against the named shape. Column roles come
// from the header: "label", and prefixes "num_", "cat_", "out_".
std::shared_ptr<const DatasetTable> load_dataset(const std::string& name,
                                                 const std::string& path,
                                                 bool standardize = true,
                                                 long warmup = 1000);

// Bandit over the table rows in a freshly shuffled order; refuses to step
// past the last row. Mushroom arms: 0 = eat, 1 = pass.
std::unique_ptr<Environment> make_dataset_env(std::shared_ptr<const DatasetTable> table,
                                              RngStream& rng);

// Deterministic synthetic tables shaped like the benchmark datasets (same
// column convention as load_dataset expects). rows counts data rows; a small
// deterministic block that covers every categorical level and class is
// included in it.
void write_fixture_csv(const std::string& name, const std::string& path,
                       long rows, std::uint64_t seed);

// Default fixture sizes used by the sau-fixtures tool.
long default_fixture_rows(const std::string& name);

}  // namespace sau
