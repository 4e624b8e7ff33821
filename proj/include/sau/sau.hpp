#pragma once

#include <span>

#include "sau/rng.hpp"

namespace sau {

// Per-arm sample-average-uncertainty bookkeeping. tau^2 = S^2 / n_a estimates
// the arm's reward variance from squared prediction errors. S^2 starts at a
// prior (1 by default) so tau^2 is defined and optimistic for fresh arms;
// prior 0 recovers the plain recursive average of squared errors.
struct ArmState {
  long n = 0;
  double s2 = 1.0;

  double tau2() const { return s2 / static_cast<double>(n); }
};

inline ArmState make_arm_state(double prior_s2) { return ArmState{0, prior_s2}; }

// e = r - mu_hat, the prediction residual.
inline double residual(double reward, double mu_hat) { return reward - mu_hat; }

// Record one residual: S^2 += e^2, n += 1.
void sau_update(ArmState& st, double e);

// Exploration bonus shape. tau2 puts the variance estimate under the root
// (the closed-form score); tau uses its square root instead (the pseudocode
// variant). Both are exposed so either can be reproduced.
enum class UcbForm { tau2, tau };

// mu_hat + sqrt(tau^2 * log(step) / n_a)   (UcbForm::tau2)
// mu_hat + sqrt(tau  * log(step) / n_a)    (UcbForm::tau)
// step is the global step count, >= 1; natural log. Requires n_a >= 1.
double ucb_score(double mu_hat, const ArmState& st, double step,
                 UcbForm form = UcbForm::tau2);

// One draw from N(mu_hat, tau^2 / n_a). Requires n_a >= 1.
double sampling_score(double mu_hat, const ArmState& st, RngStream& rng);

// Lowest-index argmax.
int argmax_lowest(std::span<const double> values);

// Forced initialization then greedy selection: step n <= num_arms plays arm
// n-1 (round-robin over all arms once), later steps take the argmax of the
// scores with lowest-index tie-breaking. step is 1-based.
int select_action(std::span<const double> scores, long step, int num_arms);

}  // namespace sau
