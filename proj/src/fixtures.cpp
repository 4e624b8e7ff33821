#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "sau/dataset.hpp"
#include "sau/errors.hpp"
#include "sau/rng.hpp"

// Synthetic stand-ins shaped like the benchmark datasets: same column
// convention, dimensionality, and class structure, generated from a seed so
// tests and presets never depend on downloads. Classification features are
// class prototypes plus Gaussian noise; a deterministic coverage block makes
// sure every categorical level and every class appears at least once, which
// keeps the one-hot width and class count stable for any seed.

namespace sau {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return std::string(buf);
}

std::string level_name(int i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "l%02d", i);
  return std::string(buf);
}

std::string class_name(int i) {
  char buf[8];
  std::snprintf(buf, sizeof(buf), "c%02d", i);
  return std::string(buf);
}

int draw_class(const std::vector<double>& probs, RngStream& rng) {
  double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t c = 0; c < probs.size(); ++c) {
    acc += probs[c];
    if (u < acc) return static_cast<int>(c);
  }
  return static_cast<int>(probs.size()) - 1;
}

struct ClassificationShape {
  int numerics = 0;
  std::vector<int> arities;  // categorical column arities
  std::vector<double> class_probs;
  double proto_scale = 1.5;
  double noise_sd = 0.8;
};

void write_classification(std::ofstream& out, const ClassificationShape& shape,
                          long rows, RngStream& rng) {
  int classes = static_cast<int>(shape.class_probs.size());
  int max_arity = 0;
  for (int a : shape.arities) max_arity = std::max(max_arity, a);
  long coverage = std::max<long>(classes, max_arity);
  if (rows < coverage + 10)
    throw std::invalid_argument("fixture: too few rows to cover all levels");

  // class prototypes over the numeric block
  Eigen::MatrixXd proto = Eigen::MatrixXd::Zero(classes, shape.numerics);
  for (int c = 0; c < classes; ++c)
    for (int j = 0; j < shape.numerics; ++j)
      proto(c, j) = shape.proto_scale * rng.gaussian(0.0, 1.0);

  out << "label";
  for (int j = 0; j < shape.numerics; ++j) out << ",num_f" << j;
  for (std::size_t c = 0; c < shape.arities.size(); ++c) out << ",cat_a" << c;
  out << "\n";

  auto write_row = [&](int cls, bool noisy, long cover_i) {
    out << class_name(cls);
    for (int j = 0; j < shape.numerics; ++j) {
      double v = proto(cls, j) + (noisy ? rng.gaussian(0.0, shape.noise_sd * shape.noise_sd) : 0.0);
      out << "," << fmt(v);
    }
    for (std::size_t c = 0; c < shape.arities.size(); ++c) {
      int lvl = noisy ? rng.uniform_int(shape.arities[c])
                      : static_cast<int>(cover_i) % shape.arities[c];
      out << "," << level_name(lvl);
    }
    out << "\n";
  };

  for (long i = 0; i < rows - coverage; ++i)
    write_row(draw_class(shape.class_probs, rng), true, 0);
  for (long i = 0; i < coverage; ++i)
    write_row(static_cast<int>(i % classes), false, i);
}

// The statlog-style table keeps what makes the original benchmark a hard
// exploration problem: one action dominates (optimal for about 70% of
// contexts here), and each minority class lives in a single tight, pure
// pocket of feature space embedded in the majority cloud. Inside a pocket
// the majority action never pays, but a value model only discovers that
// through its own visits there; until then the smoothed majority estimate
// carries over from the surrounding cloud and a policy that never tries the
// other arms keeps preferring it. Each pocket is cleanly learnable from a
// handful of its own arm's in-pocket samples, so the benchmark rewards
// front-loaded exploration and punishes committing to the dominant action:
// occasional stray pulls spread over the run arrive too diluted in the
// replay buffer to map the pockets before most of the regret is paid.
void write_statlog_pockets(std::ofstream& out, long rows, RngStream& rng) {
  const int dim = 9;
  const int classes = 7;
  const int kSubPockets = 1;
  // row share of each minority class; the rest is the broad majority cloud
  const double mass[6] = {0.06, 0.055, 0.05, 0.05, 0.045, 0.04};
  const double split[kSubPockets] = {1.0};  // within a class
  const double kPocketLabelShare = 1.0;   // pockets are pure
  const double kMajorityVar = 4.0;        // broad cloud covering the pockets
  const double kPocketVar = 0.04;
  const double kRadiusLo = 1.8, kRadiusHi = 2.6;
  const double kMinSeparation = 1.5;  // between any two pocket centers

  long coverage = classes;
  if (rows < coverage + 10)
    throw std::invalid_argument("fixture: too few rows to cover all levels");

  // Pocket centers on random directions at moderate radius, kept apart so no
  // pocket shadows another. Rejection keeps the stream deterministic.
  std::vector<Eigen::VectorXd> centers;  // classes-1 x kSubPockets, row-major
  for (int c = 1; c < classes; ++c) {
    for (int s = 0; s < kSubPockets; ++s) {
      Eigen::VectorXd m(dim);
      for (int attempt = 0;; ++attempt) {
        for (int j = 0; j < dim; ++j) m[j] = rng.gaussian(0.0, 1.0);
        m *= rng.uniform(kRadiusLo, kRadiusHi) / m.norm();
        bool clear = true;
        for (const Eigen::VectorXd& other : centers)
          clear = clear && (m - other).norm() >= kMinSeparation;
        if (clear || attempt >= 200) break;
      }
      centers.push_back(m);
    }
  }

  out << "label";
  for (int j = 0; j < dim; ++j) out << ",num_f" << j;
  out << "\n";

  auto write_row = [&](int cls, const Eigen::VectorXd& x) {
    out << class_name(cls);
    for (int j = 0; j < dim; ++j) out << "," << fmt(x[j]);
    out << "\n";
  };

  Eigen::VectorXd x(dim);
  for (long i = 0; i < rows - coverage; ++i) {
    double u = rng.uniform01();
    int cls = 0;
    int pocket = -1;  // -1 = broad majority region
    double acc = 0.0;
    for (int k = 0; k < classes - 1 && pocket < 0; ++k) {
      for (int s = 0; s < kSubPockets; ++s) {
        acc += mass[k] * split[s];
        if (u < acc) {
          cls = k + 1;
          pocket = k * kSubPockets + s;
          break;
        }
      }
    }
    if (pocket < 0) {
      for (int j = 0; j < dim; ++j) x[j] = rng.gaussian(0.0, kMajorityVar);
      cls = 0;
    } else {
      const Eigen::VectorXd& m = centers[static_cast<std::size_t>(pocket)];
      for (int j = 0; j < dim; ++j)
        x[j] = m[j] + rng.gaussian(0.0, kPocketVar);
      if (rng.uniform01() >= kPocketLabelShare) cls = 0;
    }
    write_row(cls, x);
  }
  for (long i = 0; i < coverage; ++i) {
    if (i == 0) {
      write_row(0, Eigen::VectorXd::Zero(dim));
    } else {
      write_row(static_cast<int>(i),
                centers[static_cast<std::size_t>((i - 1) * kSubPockets)]);
    }
  }
}

void write_mushroom(std::ofstream& out, long rows, RngStream& rng) {
  const int cols = 22;
  std::vector<int> arities(cols, 5);
  arities[0] = 12;  // 12 + 21*5 = 117 one-hot features
  long coverage = 12;
  if (rows < coverage + 10)
    throw std::invalid_argument("fixture: too few rows to cover all levels");

  out << "label";
  for (int c = 0; c < cols; ++c) out << ",cat_a" << c;
  out << "\n";

  for (long i = 0; i < rows - coverage; ++i) {
    bool edible = rng.uniform01() < 0.53;
    out << (edible ? "e" : "p");
    for (int c = 0; c < cols; ++c) {
      int lvl;
      if (c == 0) {
        // strongly predictive column, halves swap with low probability
        bool flip = rng.uniform01() < 0.05;
        bool side = edible != flip;
        lvl = side ? rng.uniform_int(6) : 6 + rng.uniform_int(6);
      } else if (c <= 5) {
        bool flip = rng.uniform01() < 0.07;
        bool side = edible != flip;
        lvl = side ? rng.uniform_int(2) : 2 + rng.uniform_int(3);
      } else {
        lvl = rng.uniform_int(arities[c]);
      }
      out << "," << level_name(lvl);
    }
    out << "\n";
  }
  for (long i = 0; i < coverage; ++i) {
    out << (i % 2 == 0 ? "e" : "p");
    for (int c = 0; c < cols; ++c)
      out << "," << level_name(static_cast<int>(i) % arities[c]);
    out << "\n";
  }
}

void write_outputs_table(std::ofstream& out, int dim, int arms, long rows,
                         RngStream& rng, bool pure_linear) {
  out << "num_f0";
  for (int j = 1; j < dim; ++j) out << ",num_f" << j;
  for (int a = 0; a < arms; ++a) out << ",out_o" << a;
  out << "\n";

  if (pure_linear) {
    // arm payoffs are fixed linear combinations of the features
    Eigen::MatrixXd w(arms, dim);
    for (int a = 0; a < arms; ++a) {
      for (int j = 0; j < dim; ++j) w(a, j) = rng.gaussian(0.0, 1.0);
      w.row(a) /= w.row(a).norm();
    }
    for (long i = 0; i < rows; ++i) {
      Eigen::VectorXd x(dim);
      for (int j = 0; j < dim; ++j) x[j] = rng.gaussian(0.0, 1.0);
      Eigen::VectorXd o = w * x;
      for (int j = 0; j < dim; ++j) out << (j ? "," : "") << fmt(x[j]);
      for (int a = 0; a < arms; ++a) out << "," << fmt(o[a]);
      out << "\n";
    }
    return;
  }

  // low-rank latent structure with observation noise, ratings-style outputs
  const int latent = 5;
  Eigen::MatrixXd A(dim, latent), B(arms, latent);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < latent; ++j)
      A(i, j) = rng.gaussian(0.0, 1.0 / latent);
  for (int a = 0; a < arms; ++a) {
    for (int j = 0; j < latent; ++j) B(a, j) = rng.gaussian(0.0, 1.0);
    B.row(a) /= B.row(a).norm();
  }
  for (long i = 0; i < rows; ++i) {
    Eigen::VectorXd z(latent);
    for (int j = 0; j < latent; ++j) z[j] = rng.gaussian(0.0, 1.0);
    Eigen::VectorXd x = A * z;
    for (int j = 0; j < dim; ++j) x[j] += rng.gaussian(0.0, 0.15 * 0.15);
    Eigen::VectorXd o = 4.0 * (B * z);
    for (int a = 0; a < arms; ++a) o[a] += rng.gaussian(0.0, 0.5 * 0.5);
    for (int j = 0; j < dim; ++j) out << (j ? "," : "") << fmt(x[j]);
    for (int a = 0; a < arms; ++a) out << "," << fmt(o[a]);
    out << "\n";
  }
}

}  // namespace

long default_fixture_rows(const std::string& name) {
  if (name == "statlog") return 12000;
  if (name == "mushroom") return 2000;
  if (name == "covertype") return 3000;
  if (name == "adult") return 2000;
  if (name == "census") return 1200;
  if (name == "jester") return 2500;
  if (name == "financial") return 2000;
  throw ConfigError("unknown dataset '" + name + "'");
}

void write_fixture_csv(const std::string& name, const std::string& path,
                       long rows, std::uint64_t seed) {
  dataset_spec(name);  // validate the name early
  RngStream rng = RngStream::derive(seed, 0, StreamPurpose::fixture);
  std::filesystem::path target(path);
  if (target.has_parent_path())
    std::filesystem::create_directories(target.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);

  if (name == "statlog") {
    write_statlog_pockets(out, rows, rng);
  } else if (name == "covertype") {
    ClassificationShape s;
    s.numerics = 54;
    s.class_probs = {0.365, 0.488, 0.062, 0.005, 0.016, 0.030, 0.034};
    write_classification(out, s, rows, rng);
  } else if (name == "adult") {
    ClassificationShape s;
    s.numerics = 6;
    s.arities = {12, 15, 9, 10, 16, 7, 8, 9};  // 86 levels + 6 numerics = 92
    s.class_probs = {0.13, 0.125, 0.12, 0.11, 0.10, 0.09, 0.08,
                     0.07, 0.06, 0.05, 0.03, 0.02, 0.01, 0.005};
    write_classification(out, s, rows, rng);
  } else if (name == "census") {
    ClassificationShape s;
    s.numerics = 3;
    s.arities.assign(32, 12);  // 384 levels + 3 numerics = 387
    s.class_probs = {0.28, 0.18, 0.14, 0.11, 0.09, 0.08, 0.06, 0.04, 0.02};
    write_classification(out, s, rows, rng);
  } else if (name == "mushroom") {
    write_mushroom(out, rows, rng);
  } else if (name == "jester") {
    write_outputs_table(out, 32, 8, rows, rng, /*pure_linear=*/false);
  } else if (name == "financial") {
    write_outputs_table(out, 21, 8, rows, rng, /*pure_linear=*/true);
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace sau
