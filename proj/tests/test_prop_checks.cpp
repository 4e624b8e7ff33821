#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sau/errors.hpp"
#include "sau/prop_checks.hpp"

using namespace sau;

TEST_CASE("posterior-variance pairing holds at a reduced scale") {
  PropCheckResult r = check_ts_variance_match(0.5, 300, 3000, 7);
  CHECK(r.name == "sau-vs-ts-posterior-variance");
  CHECK(r.pass);
  CHECK(r.observed <= r.bound);
  CHECK(r.bound > 0.0);
}

TEST_CASE("residual mse tracks the sample-mean mse") {
  for (long n : {60L, 250L}) {
    PropCheckResult r = check_residual_mse(0.5, n, 3000, 11);
    INFO("n = ", n, " observed ", r.observed, " bound ", r.bound);
    CHECK(r.name == "residual-vs-mean-mse");
    CHECK(r.pass);
  }
}

TEST_CASE("skewed reward rates still pass the mse check") {
  PropCheckResult r = check_residual_mse(0.15, 120, 4000, 13);
  CHECK(r.pass);
}

TEST_CASE("in-sample residual variance matches the leverage prediction") {
  PropCheckResult r = check_leverage_residual(3, 40, 0.25, 2000, 17);
  CHECK(r.name == "residual-vs-leverage");
  CHECK(r.pass);
  CHECK(r.observed <= r.bound);
}

TEST_CASE("leverage check refuses a rank-deficient design") {
  CHECK_THROWS_AS((void)check_leverage_residual(5, 3, 0.25, 100, 19),
                  std::runtime_error);
}

TEST_CASE("tau^2 lands inside its logarithmic convergence band") {
  PropCheckResult r = check_tau_convergence(0.5, 2000, 150, 23);
  CHECK(r.name == "tau-convergence");
  CHECK(r.pass);
  // the band scales like sigma^2 (1 + log(1+n))/n and must stay positive
  CHECK(r.bound >= 0.25 * (1.0 + std::log(2001.0)) / 2000.0);
}

TEST_CASE("log-curve fitting recovers an exact logarithmic trace") {
  std::vector<double> cum;
  for (long t = 1; t <= 2000; ++t) cum.push_back(2.0 + 3.0 * std::log(double(t)));
  LogFit fit = fit_log_curve(cum, 100);
  CHECK(fit.slope == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(fit.r2 == doctest::Approx(1.0).epsilon(1e-12));
  PropCheckResult r = check_log_regret(cum, 100);
  CHECK(r.name == "log-regret-fit");
  CHECK(r.pass);
  CHECK(r.observed == doctest::Approx(fit.r2));
}

TEST_CASE("a linearly growing trace fails the log-shape test") {
  std::vector<double> cum;
  for (long t = 1; t <= 5000; ++t) cum.push_back(0.01 * double(t));
  PropCheckResult r = check_log_regret(cum, 50, 0.95);
  CHECK_FALSE(r.pass);
  CHECK(r.observed < 0.9);
}

TEST_CASE("log fits need a decade of data past the burn-in") {
  std::vector<double> cum(50, 1.0);
  CHECK_THROWS_AS((void)fit_log_curve(cum, 20), std::invalid_argument);
  CHECK_THROWS_AS((void)fit_log_curve(cum, 0), std::invalid_argument);
}

TEST_CASE("a flat trace counts as perfectly logarithmic") {
  std::vector<double> cum(400, 7.5);
  LogFit fit = fit_log_curve(cum, 10);
  CHECK(fit.slope == doctest::Approx(0.0));
  CHECK(fit.r2 == doctest::Approx(1.0));
}

TEST_CASE("the named batteries dispatch to their checks") {
  PropCheckParams quick;
  quick.reps = 400;
  quick.trials = 60;
  quick.n = 0;

  auto two = run_prop_checks("2", quick, 3);
  REQUIRE(two.size() == 2);  // default scales: n = 100 and n = 1000
  CHECK(two[0].name == "residual-vs-mean-mse");
  CHECK(two[1].name == "residual-vs-mean-mse");

  PropCheckParams pinned = quick;
  pinned.n = 120;
  CHECK(run_prop_checks("2", pinned, 3).size() == 1);
  CHECK(run_prop_checks("1", pinned, 3).size() == 1);
  CHECK(run_prop_checks("4", pinned, 3).at(0).name == "residual-vs-leverage");

  PropCheckParams tau = quick;
  tau.n = 500;
  auto tc = run_prop_checks("tau-convergence", tau, 3);
  CHECK(tc.at(0).name == "tau-convergence");

  CHECK_THROWS_AS((void)run_prop_checks("9", quick, 3), ConfigError);
  CHECK_THROWS_AS((void)run_prop_checks("", quick, 3), ConfigError);
}

TEST_CASE("every check carries a human-readable detail line") {
  PropCheckResult r = check_residual_mse(0.5, 80, 500, 31);
  CHECK_FALSE(r.details.empty());
}
