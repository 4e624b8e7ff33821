#include "sau/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace sau {

static Eigen::MatrixXd uniform_fan_in(int rows, int cols, RngStream& rng) {
  double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.uniform(-bound, bound);
  return m;
}

Mlp Mlp::init(int in, int h1, int h2, int out, RngStream& rng) {
  if (in < 1 || h1 < 1 || h2 < 1 || out < 1)
    throw std::invalid_argument("mlp: all layer sizes must be >= 1");
  Mlp net;
  net.w1 = uniform_fan_in(h1, in, rng);
  net.w2 = uniform_fan_in(h2, h1, rng);
  net.w3 = uniform_fan_in(out, h2, rng);
  net.b1 = Eigen::VectorXd::Zero(h1);
  net.b2 = Eigen::VectorXd::Zero(h2);
  net.b3 = Eigen::VectorXd::Zero(out);
  return net;
}

Eigen::VectorXd Mlp::forward(const Eigen::VectorXd& x) const {
  Eigen::VectorXd h1 = ((w1 * x) + b1).cwiseMax(0.0);
  Eigen::VectorXd h2 = ((w2 * h1) + b2).cwiseMax(0.0);
  return (w3 * h2) + b3;
}

void Mlp::axpy(const MlpGrads& d, double scale) {
  w1 += scale * d.w1;
  w2 += scale * d.w2;
  w3 += scale * d.w3;
  b1 += scale * d.b1;
  b2 += scale * d.b2;
  b3 += scale * d.b3;
}

MlpGrads MlpGrads::zeros_like(const Mlp& net) {
  MlpGrads g;
  g.w1 = Eigen::MatrixXd::Zero(net.w1.rows(), net.w1.cols());
  g.w2 = Eigen::MatrixXd::Zero(net.w2.rows(), net.w2.cols());
  g.w3 = Eigen::MatrixXd::Zero(net.w3.rows(), net.w3.cols());
  g.b1 = Eigen::VectorXd::Zero(net.b1.size());
  g.b2 = Eigen::VectorXd::Zero(net.b2.size());
  g.b3 = Eigen::VectorXd::Zero(net.b3.size());
  return g;
}

double MlpGrads::dot(const MlpGrads& o) const {
  return w1.cwiseProduct(o.w1).sum() + w2.cwiseProduct(o.w2).sum() +
         w3.cwiseProduct(o.w3).sum() + b1.dot(o.b1) + b2.dot(o.b2) + b3.dot(o.b3);
}

double MlpGrads::norm() const { return std::sqrt(dot(*this)); }

// Shared dense backward pass. X is (B x in); each row is one triplet.
static LossGrad backward(const Mlp& net, const Eigen::MatrixXd& X,
                         const std::vector<int>& arms,
                         const std::vector<double>& rewards) {
  const long B = X.rows();
  Eigen::MatrixXd z1 = (X * net.w1.transpose()).rowwise() + net.b1.transpose();
  Eigen::MatrixXd h1 = z1.cwiseMax(0.0);
  Eigen::MatrixXd z2 = (h1 * net.w2.transpose()).rowwise() + net.b2.transpose();
  Eigen::MatrixXd h2 = z2.cwiseMax(0.0);
  Eigen::MatrixXd out = (h2 * net.w3.transpose()).rowwise() + net.b3.transpose();

  LossGrad res;
  res.grads = MlpGrads::zeros_like(net);
  Eigen::MatrixXd dout = Eigen::MatrixXd::Zero(B, net.w3.rows());
  double loss = 0.0;
  for (long i = 0; i < B; ++i) {
    int a = arms[static_cast<std::size_t>(i)];
    if (a < 0 || a >= net.out_dim())
      throw std::invalid_argument("mlp: arm index out of range");
    double e = out(i, a) - rewards[static_cast<std::size_t>(i)];
    loss += 0.5 * e * e;
    dout(i, a) = e / static_cast<double>(B);
  }
  res.loss = loss / static_cast<double>(B);

  res.grads.w3 = dout.transpose() * h2;
  res.grads.b3 = dout.colwise().sum();
  Eigen::MatrixXd dz2 =
      (dout * net.w3).cwiseProduct((z2.array() > 0.0).cast<double>().matrix());
  res.grads.w2 = dz2.transpose() * h1;
  res.grads.b2 = dz2.colwise().sum();
  Eigen::MatrixXd dz1 =
      (dz2 * net.w2).cwiseProduct((z1.array() > 0.0).cast<double>().matrix());
  res.grads.w1 = dz1.transpose() * X;
  res.grads.b1 = dz1.colwise().sum();
  return res;
}

LossGrad loss_and_grad(const Mlp& net, const Eigen::VectorXd& x, int arm, double reward) {
  Eigen::MatrixXd X = x.transpose();
  return backward(net, X, {arm}, {reward});
}

LossGrad batch_loss_and_grad(const Mlp& net, std::span<const Triplet> batch) {
  if (batch.empty()) throw std::invalid_argument("mlp: empty batch");
  Eigen::MatrixXd X(batch.size(), net.in_dim());
  std::vector<int> arms(batch.size());
  std::vector<double> rewards(batch.size());
  for (std::size_t i = 0; i < batch.size(); ++i) {
    X.row(static_cast<long>(i)) = batch[i].x.transpose();
    arms[i] = batch[i].arm;
    rewards[i] = batch[i].reward;
  }
  return backward(net, X, arms, rewards);
}

LossGrad batch_loss_and_grad(const Mlp& net, const std::vector<Triplet>& store,
                             std::span<const int> idx) {
  if (idx.empty()) throw std::invalid_argument("mlp: empty batch");
  Eigen::MatrixXd X(idx.size(), net.in_dim());
  std::vector<int> arms(idx.size());
  std::vector<double> rewards(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const Triplet& t = store[static_cast<std::size_t>(idx[i])];
    X.row(static_cast<long>(i)) = t.x.transpose();
    arms[i] = t.arm;
    rewards[i] = t.reward;
  }
  return backward(net, X, arms, rewards);
}

AdamState AdamState::init_like(const Mlp& net, double lr, double beta1,
                               double beta2, double eps) {
  AdamState st;
  st.lr = lr;
  st.beta1 = beta1;
  st.beta2 = beta2;
  st.eps = eps;
  st.m = MlpGrads::zeros_like(net);
  st.v = MlpGrads::zeros_like(net);
  return st;
}

namespace {

template <class Mat>
void adam_block(Mat& p, Mat& m, Mat& v, const Mat& g, const AdamState& st,
                double bc1, double bc2) {
  m = st.beta1 * m + (1.0 - st.beta1) * g;
  v = st.beta2 * v + (1.0 - st.beta2) * g.cwiseProduct(g);
  for (long j = 0; j < p.size(); ++j) {
    double mhat = m(j) / bc1;
    double vhat = v(j) / bc2;
    double denom = std::sqrt(vhat) + st.eps;
    if (denom > 0.0) p(j) -= st.lr * mhat / denom;
  }
}

}  // namespace

void adam_step(Mlp& net, AdamState& st, const MlpGrads& g) {
  st.t += 1;
  double bc1 = 1.0 - std::pow(st.beta1, static_cast<double>(st.t));
  double bc2 = 1.0 - std::pow(st.beta2, static_cast<double>(st.t));
  adam_block(net.w1, st.m.w1, st.v.w1, g.w1, st, bc1, bc2);
  adam_block(net.w2, st.m.w2, st.v.w2, g.w2, st, bc1, bc2);
  adam_block(net.w3, st.m.w3, st.v.w3, g.w3, st, bc1, bc2);
  adam_block(net.b1, st.m.b1, st.v.b1, g.b1, st, bc1, bc2);
  adam_block(net.b2, st.m.b2, st.v.b2, g.b2, st, bc1, bc2);
  adam_block(net.b3, st.m.b3, st.v.b3, g.b3, st, bc1, bc2);
}

std::vector<int> ReplayBuffer::sample(int batch_size, RngStream& rng) const {
  if (batch_size < 1) throw std::invalid_argument("replay: batch size must be >= 1");
  if (items_.empty()) throw std::invalid_argument("replay: buffer is empty");
  std::vector<int> idx(static_cast<std::size_t>(batch_size));
  for (auto& i : idx) i = rng.uniform_int(static_cast<int>(items_.size()));
  return idx;
}

int train_burst(Mlp& net, AdamState& st, const ReplayBuffer& buf, int batches,
                int batch_size, RngStream& rng) {
  if (buf.size() == 0) return 0;
  for (int b = 0; b < batches; ++b) {
    std::vector<int> idx = buf.sample(batch_size, rng);
    LossGrad lg = batch_loss_and_grad(net, buf.items(), idx);
    adam_step(net, st, lg.grads);
  }
  return batches;
}

}  // namespace sau
