#include "sau/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sau/errors.hpp"

namespace sau {

namespace {

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "NA" || cell == "?";
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

int column_index(const std::vector<std::string>& header, const std::string& name) {
  auto it = std::find(header.begin(), header.end(), name);
  if (it == header.end())
    throw IngestError("missing column '" + name + "' in header");
  return static_cast<int>(it - header.begin());
}

}  // namespace

IngestResult ingest_csv(const std::string& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw IngestError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header = split_line(line);

  std::vector<int> num_idx, cat_idx, out_idx;
  for (const auto& c : schema.numeric) num_idx.push_back(column_index(header, c));
  for (const auto& c : schema.categorical) cat_idx.push_back(column_index(header, c));
  for (const auto& c : schema.outputs) out_idx.push_back(column_index(header, c));
  int label_idx = schema.label.empty() ? -1 : column_index(header, schema.label);

  std::vector<int> used = num_idx;
  used.insert(used.end(), cat_idx.begin(), cat_idx.end());
  used.insert(used.end(), out_idx.begin(), out_idx.end());
  if (label_idx >= 0) used.push_back(label_idx);

  struct Row {
    std::vector<double> nums;
    std::vector<std::string> cats;
    std::vector<double> outs;
    std::string label;
  };
  std::vector<Row> rows;
  long dropped = 0;
  long row_no = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    ++row_no;
    std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size())
      throw IngestError(path + ": row " + std::to_string(row_no) +
                        " has " + std::to_string(cells.size()) + " cells, expected " +
                        std::to_string(header.size()));
    bool missing = false;
    for (int idx : used)
      if (is_missing(cells[static_cast<std::size_t>(idx)])) missing = true;
    if (missing) {
      ++dropped;
      continue;
    }
    Row r;
    for (int idx : num_idx) {
      const std::string& cell = cells[static_cast<std::size_t>(idx)];
      try {
        std::size_t pos = 0;
        r.nums.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IngestError(path + ": row " + std::to_string(row_no) +
                          ": bad numeric value '" + cell + "'");
      }
    }
    for (int idx : cat_idx) r.cats.push_back(cells[static_cast<std::size_t>(idx)]);
    for (int idx : out_idx) {
      const std::string& cell = cells[static_cast<std::size_t>(idx)];
      try {
        std::size_t pos = 0;
        r.outs.push_back(std::stod(cell, &pos));
        if (pos != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw IngestError(path + ": row " + std::to_string(row_no) +
                          ": bad output value '" + cell + "'");
      }
    }
    if (label_idx >= 0) r.label = cells[static_cast<std::size_t>(label_idx)];
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw IngestError(path + ": no usable rows");

  // level sets per categorical column, sorted for a deterministic layout
  std::vector<std::vector<std::string>> levels(cat_idx.size());
  for (std::size_t c = 0; c < cat_idx.size(); ++c) {
    std::map<std::string, int> seen;
    for (const auto& r : rows) seen.emplace(r.cats[c], 0);
    for (auto& [lvl, _] : seen) levels[c].push_back(lvl);
  }

  IngestResult res;
  res.dropped = dropped;
  long d = static_cast<long>(num_idx.size());
  for (const auto& lv : levels) d += static_cast<long>(lv.size());
  res.features = Eigen::MatrixXd::Zero(static_cast<long>(rows.size()), d);
  for (const auto& c : schema.numeric) res.feature_names.push_back(c);
  for (std::size_t c = 0; c < levels.size(); ++c)
    for (const auto& lvl : levels[c])
      res.feature_names.push_back(schema.categorical[c] + "=" + lvl);

  std::vector<long> cat_offsets(levels.size());
  long off = static_cast<long>(num_idx.size());
  for (std::size_t c = 0; c < levels.size(); ++c) {
    cat_offsets[c] = off;
    off += static_cast<long>(levels[c].size());
  }

  if (label_idx >= 0) {
    std::map<std::string, int> class_ids;
    for (const auto& r : rows) class_ids.emplace(r.label, 0);
    int next = 0;
    for (auto& [name, id] : class_ids) {
      id = next++;
      res.classes.push_back(name);
    }
    res.labels.reserve(rows.size());
    for (const auto& r : rows) res.labels.push_back(class_ids[r.label]);
  }

  if (!out_idx.empty())
    res.outputs.resize(static_cast<long>(rows.size()), static_cast<long>(out_idx.size()));

  for (std::size_t i = 0; i < rows.size(); ++i) {
    long ri = static_cast<long>(i);
    const Row& r = rows[i];
    for (std::size_t j = 0; j < r.nums.size(); ++j)
      res.features(ri, static_cast<long>(j)) = r.nums[j];
    for (std::size_t c = 0; c < r.cats.size(); ++c) {
      auto it = std::lower_bound(levels[c].begin(), levels[c].end(), r.cats[c]);
      res.features(ri, cat_offsets[c] + (it - levels[c].begin())) = 1.0;
    }
    for (std::size_t j = 0; j < r.outs.size(); ++j)
      res.outputs(ri, static_cast<long>(j)) = r.outs[j];
  }
  return res;
}

void standardize_features(Eigen::MatrixXd& features, long warmup) {
  long rows = features.rows();
  if (rows == 0) return;
  long w = std::min(rows, std::max<long>(warmup, 1));
  Eigen::VectorXd mean = features.topRows(w).colwise().mean();
  Eigen::MatrixXd centered = features.topRows(w).rowwise() - mean.transpose();
  Eigen::VectorXd sd =
      (centered.colwise().squaredNorm() / static_cast<double>(std::max<long>(w - 1, 1)))
          .cwiseSqrt();
  features.rowwise() -= mean.transpose();
  for (long j = 0; j < features.cols(); ++j)
    if (sd[j] > 0.0) features.col(j) /= sd[j];
}

const DatasetSpec& dataset_spec(const std::string& name) {
  static const std::vector<DatasetSpec> specs = {
      {"mushroom", DatasetKind::mushroom, 117, 2},
      {"statlog", DatasetKind::classification, 9, 7},
      {"covertype", DatasetKind::classification, 54, 7},
      {"adult", DatasetKind::classification, 92, 14},
      {"census", DatasetKind::classification, 387, 9},
      {"jester", DatasetKind::outputs, 32, 8},
      {"financial", DatasetKind::outputs, 21, 8},
  };
  for (const auto& s : specs)
    if (s.name == name) return s;
  throw ConfigError("unknown dataset '" + name + "'");
}

std::shared_ptr<const DatasetTable> load_dataset(const std::string& name,
                                                 const std::string& path,
                                                 bool standardize, long warmup) {
  const DatasetSpec& spec = dataset_spec(name);

  std::ifstream probe(path);
  if (!probe) throw IngestError("cannot open " + path);
  std::string header_line;
  if (!std::getline(probe, header_line)) throw IngestError(path + ": empty file");
  if (!header_line.empty() && header_line.back() == '\r') header_line.pop_back();
  probe.close();

  CsvSchema schema;
  for (const std::string& col : split_line(header_line)) {
    if (col == "label") schema.label = col;
    else if (col.rfind("num_", 0) == 0) schema.numeric.push_back(col);
    else if (col.rfind("cat_", 0) == 0) schema.categorical.push_back(col);
    else if (col.rfind("out_", 0) == 0) schema.outputs.push_back(col);
    else throw IngestError(path + ": unrecognized column '" + col + "'");
  }

  IngestResult ing = ingest_csv(path, schema);

  auto table = std::make_shared<DatasetTable>();
  table->spec = spec;
  table->features = std::move(ing.features);
  table->labels = std::move(ing.labels);
  table->outputs = std::move(ing.outputs);
  table->dropped = ing.dropped;

  if (table->features.cols() != spec.dim)
    throw IngestError(path + ": expected " + std::to_string(spec.dim) +
                      " features for " + name + ", got " +
                      std::to_string(table->features.cols()));
  if (spec.kind == DatasetKind::outputs) {
    if (table->outputs.cols() != spec.arms)
      throw IngestError(path + ": expected " + std::to_string(spec.arms) +
                        " output columns for " + name);
  } else {
    if (static_cast<int>(ing.classes.size()) != (spec.kind == DatasetKind::mushroom ? 2 : spec.arms))
      throw IngestError(path + ": expected " +
                        std::to_string(spec.kind == DatasetKind::mushroom ? 2 : spec.arms) +
                        " classes for " + name + ", got " +
                        std::to_string(ing.classes.size()));
    if (spec.kind == DatasetKind::mushroom &&
        (ing.classes[0] != "e" || ing.classes[1] != "p"))
      throw IngestError(path + ": mushroom labels must be 'e' and 'p'");
  }

  if (standardize) standardize_features(table->features, warmup);
  return table;
}

namespace {

class DatasetEnv : public Environment {
 public:
  DatasetEnv(std::shared_ptr<const DatasetTable> table, RngStream& rng)
      : table_(std::move(table)) {
    order_.resize(static_cast<std::size_t>(table_->rows()));
    for (std::size_t i = 0; i < order_.size(); ++i) order_[i] = static_cast<int>(i);
    rng.shuffle(order_);
  }

  int num_arms() const override { return table_->spec.arms; }
  int context_dim() const override { return static_cast<int>(table_->features.cols()); }
  long horizon_limit() const override { return table_->rows(); }
  std::string name() const override { return table_->spec.name; }

  Eigen::VectorXd next_context(RngStream&) override {
    if (cursor_ + 1 >= static_cast<long>(order_.size()))
      throw std::runtime_error("dataset env: rows exhausted");
    ++cursor_;
    return table_->features.row(order_[static_cast<std::size_t>(cursor_)]).transpose();
  }

  double reward(int arm, const Eigen::VectorXd&, RngStream& rng) override {
    check_arm(arm);
    long row = current_row();
    switch (table_->spec.kind) {
      case DatasetKind::classification:
        return table_->labels[static_cast<std::size_t>(row)] == arm ? 1.0 : 0.0;
      case DatasetKind::outputs:
        return table_->outputs(row, arm);
      case DatasetKind::mushroom: {
        if (arm == 1) return 0.0;  // pass
        bool edible = table_->labels[static_cast<std::size_t>(row)] == 0;
        if (edible) return 5.0;
        return rng.uniform01() < 0.5 ? 5.0 : -35.0;
      }
    }
    return 0.0;
  }

  double expected_reward(int arm, const Eigen::VectorXd&) const override {
    check_arm(arm);
    long row = current_row();
    switch (table_->spec.kind) {
      case DatasetKind::classification:
        return table_->labels[static_cast<std::size_t>(row)] == arm ? 1.0 : 0.0;
      case DatasetKind::outputs:
        return table_->outputs(row, arm);
      case DatasetKind::mushroom: {
        if (arm == 1) return 0.0;
        bool edible = table_->labels[static_cast<std::size_t>(row)] == 0;
        return edible ? 5.0 : 0.5 * 5.0 + 0.5 * -35.0;
      }
    }
    return 0.0;
  }

  double optimal_value(const Eigen::VectorXd&) const override {
    long row = current_row();
    switch (table_->spec.kind) {
      case DatasetKind::classification:
        return 1.0;
      case DatasetKind::outputs:
        return table_->outputs.row(row).maxCoeff();
      case DatasetKind::mushroom:
        return table_->labels[static_cast<std::size_t>(row)] == 0 ? 5.0 : 0.0;
    }
    return 0.0;
  }

 private:
  void check_arm(int arm) const {
    if (arm < 0 || arm >= num_arms())
      throw std::invalid_argument("dataset env: bad arm");
  }
  long current_row() const {
    if (cursor_ < 0)
      throw std::runtime_error("dataset env: no context requested yet");
    return order_[static_cast<std::size_t>(cursor_)];
  }

  std::shared_ptr<const DatasetTable> table_;
  std::vector<int> order_;
  long cursor_ = -1;
};

}  // namespace

std::unique_ptr<Environment> make_dataset_env(std::shared_ptr<const DatasetTable> table,
                                              RngStream& rng) {
  if (!table) throw std::invalid_argument("dataset env: null table");
  return std::make_unique<DatasetEnv>(std::move(table), rng);
}

}  // namespace sau
