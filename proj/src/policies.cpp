#include "sau/policy.hpp"

#include <stdexcept>

#include "sau/linear_model.hpp"
#include "sau/mlp.hpp"

namespace sau {

namespace {

void check_arm(int arm, int arms) {
  if (arm < 0 || arm >= arms) throw std::invalid_argument("policy: bad arm index");
}

class UniformPolicy : public Policy {
 public:
  UniformPolicy(int arms, RngStream rng) : arms_(arms), rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
  }
  int num_arms() const override { return arms_; }
  std::vector<double> predict(const Eigen::VectorXd&) override {
    return std::vector<double>(static_cast<std::size_t>(arms_), 0.0);
  }
  int act(const std::vector<double>&, long) override { return uniform_act(arms_, rng_); }
  void update(const Eigen::VectorXd&, int, double) override {}
  std::string name() const override { return "uniform"; }

 private:
  int arms_;
  RngStream rng_;
};

class BetaTsPolicy : public Policy {
 public:
  BetaTsPolicy(int arms, double a0, double b0, RngStream rng) : rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
    arms_.assign(static_cast<std::size_t>(arms), BetaArm{a0, b0});
  }
  int num_arms() const override { return static_cast<int>(arms_.size()); }
  std::vector<double> predict(const Eigen::VectorXd&) override {
    std::vector<double> draws(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a)
      draws[a] = beta_ts_sample(arms_[a], rng_);
    return draws;
  }
  int act(const std::vector<double>& values, long) override {
    return argmax_lowest(values);
  }
  void update(const Eigen::VectorXd&, int arm, double r) override {
    check_arm(arm, num_arms());
    beta_ts_update(arms_[static_cast<std::size_t>(arm)], r);
  }
  std::string name() const override { return "beta-ts"; }

 private:
  std::vector<BetaArm> arms_;
  RngStream rng_;
};

// Running per-arm sample means, shared by the value-tracking MAB policies.
struct MeanTable {
  std::vector<double> mean;
  std::vector<long> count;

  explicit MeanTable(int arms)
      : mean(static_cast<std::size_t>(arms), 0.0),
        count(static_cast<std::size_t>(arms), 0) {}

  void observe(int a, double r) {
    auto i = static_cast<std::size_t>(a);
    count[i] += 1;
    mean[i] += (r - mean[i]) / static_cast<double>(count[i]);
  }
};

class Ucb1Policy : public Policy {
 public:
  explicit Ucb1Policy(int arms) : table_(arms) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
  }
  int num_arms() const override { return static_cast<int>(table_.mean.size()); }
  std::vector<double> predict(const Eigen::VectorXd&) override { return table_.mean; }
  int act(const std::vector<double>& values, long step) override {
    int K = num_arms();
    if (step <= K) return static_cast<int>(step - 1);
    std::vector<double> scores(values.size());
    for (std::size_t a = 0; a < values.size(); ++a)
      scores[a] = ucb1_score(values[a], table_.count[a], static_cast<double>(step));
    return argmax_lowest(scores);
  }
  void update(const Eigen::VectorXd&, int arm, double r) override {
    check_arm(arm, num_arms());
    table_.observe(arm, r);
  }
  std::string name() const override { return "ucb1"; }

 private:
  MeanTable table_;
};

class EpsGreedyPolicy : public Policy {
 public:
  EpsGreedyPolicy(int arms, EpsilonSchedule sched, RngStream rng)
      : table_(arms), sched_(sched), rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
  }
  int num_arms() const override { return static_cast<int>(table_.mean.size()); }
  std::vector<double> predict(const Eigen::VectorXd&) override { return table_.mean; }
  int act(const std::vector<double>& values, long step) override {
    return epsilon_greedy_act(values, sched_.eps(step), rng_);
  }
  void update(const Eigen::VectorXd&, int arm, double r) override {
    check_arm(arm, num_arms());
    table_.observe(arm, r);
  }
  std::string name() const override { return "eps-greedy"; }

 private:
  MeanTable table_;
  EpsilonSchedule sched_;
  RngStream rng_;
};

// Uncertainty bookkeeping shared by all sample-average-uncertainty policies:
// per-arm ArmState plus the score rule (optimistic bonus or Gaussian draw).
class SauSelector {
 public:
  SauSelector(int arms, SauMode mode, double prior_s2, UcbForm form)
      : mode_(mode), form_(form) {
    states_.assign(static_cast<std::size_t>(arms), make_arm_state(prior_s2));
  }

  int choose(const std::vector<double>& values, long step, RngStream& rng) const {
    int K = static_cast<int>(states_.size());
    if (step <= K) return static_cast<int>(step - 1);  // forced first pass
    std::vector<double> scores(values.size());
    for (std::size_t a = 0; a < values.size(); ++a) {
      scores[a] = mode_ == SauMode::ucb
                      ? ucb_score(values[a], states_[a], static_cast<double>(step), form_)
                      : sampling_score(values[a], states_[a], rng);
    }
    return select_action(scores, step, K);
  }

  void record(int arm, double e) { sau_update(states_[static_cast<std::size_t>(arm)], e); }
  const ArmState& state(int arm) const { return states_[static_cast<std::size_t>(arm)]; }
  SauMode mode() const { return mode_; }

 private:
  std::vector<ArmState> states_;
  SauMode mode_;
  UcbForm form_;
};

class SauMabPolicy : public Policy {
 public:
  SauMabPolicy(int arms, SauMode mode, double prior_s2, UcbForm form, RngStream rng)
      : table_(arms), sel_(arms, mode, prior_s2, form), rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
  }
  int num_arms() const override { return static_cast<int>(table_.mean.size()); }
  std::vector<double> predict(const Eigen::VectorXd&) override { return table_.mean; }
  int act(const std::vector<double>& values, long step) override {
    return sel_.choose(values, step, rng_);
  }
  void update(const Eigen::VectorXd&, int arm, double r) override {
    check_arm(arm, num_arms());
    double e = residual(r, table_.mean[static_cast<std::size_t>(arm)]);
    table_.observe(arm, r);
    sel_.record(arm, e);
  }
  std::string name() const override {
    return sel_.mode() == SauMode::ucb ? "sau-ucb" : "sau-sampling";
  }

 private:
  MeanTable table_;
  SauSelector sel_;
  RngStream rng_;
};

// Per-arm ridge regressions with either epsilon-greedy or SAU exploration.
class LinearValuePolicy : public Policy {
 public:
  LinearValuePolicy(int arms, int dim, double ridge, RngStream rng)
      : rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
    models_.reserve(static_cast<std::size_t>(arms));
    for (int a = 0; a < arms; ++a) models_.emplace_back(dim, ridge);
  }
  int num_arms() const override { return static_cast<int>(models_.size()); }
  std::vector<double> predict(const Eigen::VectorXd& x) override {
    std::vector<double> v(models_.size());
    for (std::size_t a = 0; a < models_.size(); ++a) v[a] = models_[a].predict(x);
    return v;
  }

 protected:
  std::vector<LinearArmModel> models_;
  RngStream rng_;
};

class LinearGreedyPolicy : public LinearValuePolicy {
 public:
  LinearGreedyPolicy(int arms, int dim, double ridge, EpsilonSchedule sched, RngStream rng)
      : LinearValuePolicy(arms, dim, ridge, std::move(rng)), sched_(sched) {}
  int act(const std::vector<double>& values, long step) override {
    return epsilon_greedy_act(values, sched_.eps(step), rng_);
  }
  void update(const Eigen::VectorXd& x, int arm, double r) override {
    check_arm(arm, num_arms());
    models_[static_cast<std::size_t>(arm)].update(x, r);
  }
  std::string name() const override { return "linear-greedy"; }

 private:
  EpsilonSchedule sched_;
};

class LinearSauPolicy : public LinearValuePolicy {
 public:
  LinearSauPolicy(int arms, int dim, double ridge, SauMode mode, double prior_s2,
                  UcbForm form, RngStream rng)
      : LinearValuePolicy(arms, dim, ridge, std::move(rng)),
        sel_(arms, mode, prior_s2, form) {}
  int act(const std::vector<double>& values, long step) override {
    return sel_.choose(values, step, rng_);
  }
  void update(const Eigen::VectorXd& x, int arm, double r) override {
    check_arm(arm, num_arms());
    auto& model = models_[static_cast<std::size_t>(arm)];
    double e = residual(r, model.predict(x));  // against the pre-update fit
    model.update(x, r);
    sel_.record(arm, e);
  }
  std::string name() const override {
    return sel_.mode() == SauMode::ucb ? "linear-sau-ucb" : "linear-sau-sampling";
  }

 private:
  SauSelector sel_;
};

class BayesLinTsPolicy : public Policy {
 public:
  BayesLinTsPolicy(int arms, int dim, double lambda, double a0, double b0, bool diag,
                   RngStream rng)
      : diag_(diag), rng_(std::move(rng)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
    arms_.reserve(static_cast<std::size_t>(arms));
    for (int a = 0; a < arms; ++a) arms_.emplace_back(dim, lambda, a0, b0);
  }
  int num_arms() const override { return static_cast<int>(arms_.size()); }
  std::vector<double> predict(const Eigen::VectorXd& x) override {
    std::vector<double> v(arms_.size());
    for (std::size_t a = 0; a < arms_.size(); ++a)
      v[a] = diag_ ? arms_[a].ts_sample_diag(x, rng_) : arms_[a].ts_sample(x, rng_);
    return v;
  }
  int act(const std::vector<double>& values, long) override {
    return argmax_lowest(values);
  }
  void update(const Eigen::VectorXd& x, int arm, double r) override {
    check_arm(arm, num_arms());
    arms_[static_cast<std::size_t>(arm)].update(x, r);
  }
  std::string name() const override { return diag_ ? "linear-ts-diag" : "linear-ts"; }

 private:
  std::vector<BayesLinearArm> arms_;
  bool diag_;
  RngStream rng_;
};

// Shared network plumbing for the deep policies: replay buffer plus periodic
// training bursts on the growing store (the network warm-starts, it is never
// re-initialized).
class NeuralValuePolicy : public Policy {
 public:
  NeuralValuePolicy(int arms, int dim, NeuralOptions opt, RngStream rng)
      : opt_(opt), rng_(std::move(rng)),
        net_(Mlp::init(dim, opt.hidden1, opt.hidden2, arms, rng_)),
        adam_(AdamState::init_like(net_, opt.lr, opt.adam_beta1, opt.adam_beta2)) {
    if (arms < 1) throw std::invalid_argument("policy: need at least one arm");
  }
  int num_arms() const override { return net_.out_dim(); }
  std::vector<double> predict(const Eigen::VectorXd& x) override {
    Eigen::VectorXd out = net_.forward(x);
    return std::vector<double>(out.data(), out.data() + out.size());
  }

 protected:
  void learn(const Eigen::VectorXd& x, int arm, double r) {
    buffer_.push(Triplet{x, arm, r});
    steps_ += 1;
    if (steps_ % opt_.train_every == 0)
      train_burst(net_, adam_, buffer_, opt_.train_batches, opt_.batch_size, rng_);
  }

  NeuralOptions opt_;
  RngStream rng_;
  Mlp net_;
  AdamState adam_;
  ReplayBuffer buffer_;
  long steps_ = 0;
};

class NeuralGreedyPolicy : public NeuralValuePolicy {
 public:
  NeuralGreedyPolicy(int arms, int dim, NeuralOptions opt, EpsilonSchedule sched,
                     RngStream rng)
      : NeuralValuePolicy(arms, dim, opt, std::move(rng)), sched_(sched) {}
  int act(const std::vector<double>& values, long step) override {
    return epsilon_greedy_act(values, sched_.eps(step), rng_);
  }
  void update(const Eigen::VectorXd& x, int arm, double r) override {
    check_arm(arm, num_arms());
    learn(x, arm, r);
  }
  std::string name() const override { return "neural-greedy"; }

 private:
  EpsilonSchedule sched_;
};

class NeuralSauPolicy : public NeuralValuePolicy {
 public:
  NeuralSauPolicy(int arms, int dim, NeuralOptions opt, SauMode mode, double prior_s2,
                  UcbForm form, RngStream rng)
      : NeuralValuePolicy(arms, dim, opt, std::move(rng)),
        sel_(arms, mode, prior_s2, form) {}
  int act(const std::vector<double>& values, long step) override {
    return sel_.choose(values, step, rng_);
  }
  void update(const Eigen::VectorXd& x, int arm, double r) override {
    check_arm(arm, num_arms());
    double e = residual(r, net_.forward(x)[arm]);  // before this step's training
    learn(x, arm, r);
    sel_.record(arm, e);
  }
  std::string name() const override {
    return sel_.mode() == SauMode::ucb ? "neural-sau-ucb" : "neural-sau-sampling";
  }

 private:
  SauSelector sel_;
};

}  // namespace

std::unique_ptr<Policy> make_uniform_policy(int arms, RngStream rng) {
  return std::make_unique<UniformPolicy>(arms, std::move(rng));
}
std::unique_ptr<Policy> make_beta_ts_policy(int arms, double a0, double b0, RngStream rng) {
  return std::make_unique<BetaTsPolicy>(arms, a0, b0, std::move(rng));
}
std::unique_ptr<Policy> make_ucb1_policy(int arms) {
  return std::make_unique<Ucb1Policy>(arms);
}
std::unique_ptr<Policy> make_eps_greedy_policy(int arms, EpsilonSchedule sched, RngStream rng) {
  return std::make_unique<EpsGreedyPolicy>(arms, sched, std::move(rng));
}
std::unique_ptr<Policy> make_sau_mab_policy(int arms, SauMode mode, double prior_s2,
                                            UcbForm form, RngStream rng) {
  return std::make_unique<SauMabPolicy>(arms, mode, prior_s2, form, std::move(rng));
}
std::unique_ptr<Policy> make_linear_greedy_policy(int arms, int dim, double ridge,
                                                  EpsilonSchedule sched, RngStream rng) {
  return std::make_unique<LinearGreedyPolicy>(arms, dim, ridge, sched, std::move(rng));
}
std::unique_ptr<Policy> make_linear_sau_policy(int arms, int dim, double ridge,
                                               SauMode mode, double prior_s2,
                                               UcbForm form, RngStream rng) {
  return std::make_unique<LinearSauPolicy>(arms, dim, ridge, mode, prior_s2, form,
                                           std::move(rng));
}
std::unique_ptr<Policy> make_bayes_lin_ts_policy(int arms, int dim, double lambda,
                                                 double a0, double b0, bool diag,
                                                 RngStream rng) {
  return std::make_unique<BayesLinTsPolicy>(arms, dim, lambda, a0, b0, diag, std::move(rng));
}
std::unique_ptr<Policy> make_neural_greedy_policy(int arms, int dim, NeuralOptions opt,
                                                  EpsilonSchedule sched, RngStream rng) {
  return std::make_unique<NeuralGreedyPolicy>(arms, dim, opt, sched, std::move(rng));
}
std::unique_ptr<Policy> make_neural_sau_policy(int arms, int dim, NeuralOptions opt,
                                               SauMode mode, double prior_s2,
                                               UcbForm form, RngStream rng) {
  return std::make_unique<NeuralSauPolicy>(arms, dim, opt, mode, prior_s2, form,
                                           std::move(rng));
}

}  // namespace sau
