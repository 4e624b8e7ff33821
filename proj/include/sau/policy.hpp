#pragma once

#include <Eigen/Dense>
#include <memory>
#include <string>
#include <vector>

#include "sau/baselines.hpp"
#include "sau/rng.hpp"
#include "sau/sau.hpp"

namespace sau {

// Every algorithm decomposes into predict (per-arm value estimates), act
// (choose an arm for the 1-based global step), and update (learn from the
// observed reward). Posterior-sampling policies draw inside predict;
// bonus/epsilon policies perturb inside act. Plain multi-armed policies
// ignore the context argument.
class Policy {
 public:
  virtual ~Policy() = default;
  virtual int num_arms() const = 0;
  virtual std::vector<double> predict(const Eigen::VectorXd& x) = 0;
  virtual int act(const std::vector<double>& values, long step) = 0;
  virtual void update(const Eigen::VectorXd& x, int arm, double reward) = 0;
  virtual std::string name() const = 0;
};

enum class SauMode { ucb, sampling };

struct NeuralOptions {
  int hidden1 = 100, hidden2 = 100;
  double lr = 0.003, adam_beta1 = 0.9, adam_beta2 = 0.999;
  int train_every = 20;   // steps between training bursts
  int train_batches = 10; // mini-batches per burst
  int batch_size = 64;
};

std::unique_ptr<Policy> make_uniform_policy(int arms, RngStream rng);
std::unique_ptr<Policy> make_beta_ts_policy(int arms, double a0, double b0, RngStream rng);
std::unique_ptr<Policy> make_ucb1_policy(int arms);
std::unique_ptr<Policy> make_eps_greedy_policy(int arms, EpsilonSchedule sched, RngStream rng);
std::unique_ptr<Policy> make_sau_mab_policy(int arms, SauMode mode, double prior_s2,
                                            UcbForm form, RngStream rng);
std::unique_ptr<Policy> make_linear_greedy_policy(int arms, int dim, double ridge,
                                                  EpsilonSchedule sched, RngStream rng);
std::unique_ptr<Policy> make_linear_sau_policy(int arms, int dim, double ridge,
                                               SauMode mode, double prior_s2,
                                               UcbForm form, RngStream rng);
std::unique_ptr<Policy> make_bayes_lin_ts_policy(int arms, int dim, double lambda,
                                                 double a0, double b0, bool diag,
                                                 RngStream rng);
std::unique_ptr<Policy> make_neural_greedy_policy(int arms, int dim, NeuralOptions opt,
                                                  EpsilonSchedule sched, RngStream rng);
std::unique_ptr<Policy> make_neural_sau_policy(int arms, int dim, NeuralOptions opt,
                                               SauMode mode, double prior_s2,
                                               UcbForm form, RngStream rng);

}  // namespace sau
