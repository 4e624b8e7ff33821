#include "sau/sau.hpp"

#include <cmath>
#include <stdexcept>

namespace sau {

void sau_update(ArmState& st, double e) {
  st.s2 += e * e;
  st.n += 1;
}

static void require_initialized(const ArmState& st) {
  if (st.n < 1) throw std::invalid_argument("sau: arm has no pulls yet");
}

double ucb_score(double mu_hat, const ArmState& st, double step, UcbForm form) {
  require_initialized(st);
  if (!(step >= 1.0)) throw std::invalid_argument("ucb_score: step must be >= 1");
  double spread = form == UcbForm::tau2 ? st.tau2() : std::sqrt(st.tau2());
  return mu_hat + std::sqrt(spread * std::log(step) / static_cast<double>(st.n));
}

double sampling_score(double mu_hat, const ArmState& st, RngStream& rng) {
  require_initialized(st);
  return rng.gaussian(mu_hat, st.tau2() / static_cast<double>(st.n));
}

int argmax_lowest(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("argmax: empty value set");
  int best = 0;
  for (int i = 1; i < static_cast<int>(values.size()); ++i) {
    if (values[i] > values[best]) best = i;
  }
  return best;
}

int select_action(std::span<const double> scores, long step, int num_arms) {
  if (num_arms < 1) throw std::invalid_argument("select_action: no arms");
  if (static_cast<int>(scores.size()) != num_arms)
    throw std::invalid_argument("select_action: need one score per arm");
  if (step < 1) throw std::invalid_argument("select_action: step is 1-based");
  if (step <= num_arms) return static_cast<int>(step - 1);
  return argmax_lowest(scores);
}

}  // namespace sau
