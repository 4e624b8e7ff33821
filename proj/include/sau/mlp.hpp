#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "sau/rng.hpp"

namespace sau {

struct MlpGrads;

// Two-hidden-layer ReLU network with one output head per arm.
struct Mlp {
  Eigen::MatrixXd w1, w2, w3;  // (h1 x in), (h2 x h1), (out x h2)
  Eigen::VectorXd b1, b2, b3;

  // Weights uniform in [-1/sqrt(fan_in), +1/sqrt(fan_in)], biases zero.
  static Mlp init(int in, int h1, int h2, int out, RngStream& rng);

  Eigen::VectorXd forward(const Eigen::VectorXd& x) const;
  int in_dim() const { return static_cast<int>(w1.cols()); }
  int out_dim() const { return static_cast<int>(w3.rows()); }

  void axpy(const MlpGrads& d, double scale);  // params += scale * d
};

struct MlpGrads {
  Eigen::MatrixXd w1, w2, w3;
  Eigen::VectorXd b1, b2, b3;

  static MlpGrads zeros_like(const Mlp& net);
  double dot(const MlpGrads& other) const;
  double norm() const;
};

struct Triplet {
  Eigen::VectorXd x;
  int arm = 0;
  double reward = 0.0;
};

struct LossGrad {
  double loss = 0.0;
  MlpGrads grads;
};

// loss = 1/2 (r - out_arm)^2; gradient flows only through the chosen arm's
// output head.
LossGrad loss_and_grad(const Mlp& net, const Eigen::VectorXd& x, int arm, double reward);

// Mean loss and mean gradient over the batch.
LossGrad batch_loss_and_grad(const Mlp& net, std::span<const Triplet> batch);
LossGrad batch_loss_and_grad(const Mlp& net, const std::vector<Triplet>& store,
                             std::span<const int> idx);

struct AdamState {
  double lr = 0.003, beta1 = 0.9, beta2 = 0.999, eps = 1e-8;
  long t = 0;
  MlpGrads m, v;

  static AdamState init_like(const Mlp& net, double lr = 0.003,
                             double beta1 = 0.9, double beta2 = 0.999,
                             double eps = 1e-8);
};

// One bias-corrected Adam step on every parameter block.
void adam_step(Mlp& net, AdamState& st, const MlpGrads& g);

// Unbounded replay store; insertion order preserved, sampling is uniform with
// replacement.
class ReplayBuffer {
 public:
  void push(Triplet t) { items_.push_back(std::move(t)); }
  std::size_t size() const { return items_.size(); }
  const Triplet& at(std::size_t i) const { return items_.at(i); }
  const std::vector<Triplet>& items() const { return items_; }
  std::vector<int> sample(int batch_size, RngStream& rng) const;

 private:
  std::vector<Triplet> items_;
};

// Run `batches` mini-batch Adam steps on uniformly resampled triplets.
// Returns the number of batches executed (0 when the buffer is empty).
int train_burst(Mlp& net, AdamState& st, const ReplayBuffer& buf, int batches,
                int batch_size, RngStream& rng);

}  // namespace sau
