"""Smoke tests for the Python bindings: arithmetic oracles, determinism,
and a tiny end-to-end experiment driven by the text config format."""

import math

import pytest

import saubandits as sb

SMOKE_CONFIG = """
# five-arm Bernoulli task, deliberately tiny
[run]
horizon = 400
trials = 4
seed = 3

[env]
kind = bernoulli
arms = 5
mu_best = 0.7
gap = 0.2

[policy sau-ucb]
kind = sau-ucb

[policy random]
kind = uniform
"""


def test_version_string():
    assert isinstance(sb.__version__, str) and sb.__version__


def test_rng_known_vectors_and_determinism():
    assert sb.splitmix64(0) == 0xE220A8397B1DCDAF
    assert sb.fnv1a64("foobar") == 0x85944171F73967E8
    a, b = sb.RngStream(7), sb.RngStream(7)
    assert [a.uniform01() for _ in range(8)] == [b.uniform01() for _ in range(8)]
    derived = sb.RngStream.derive(1, 0, "env")
    assert derived.seed == sb.derive_seed(1, 0, "env")
    with pytest.raises(ValueError):
        sb.derive_seed(1, 0, "nonsense")


def test_arm_state_arithmetic():
    st = sb.make_arm_state(1.0)
    for _ in range(3):
        sb.sau_update(st, sb.residual(1.0, 0.0))
    assert st.n == 3 and st.s2 == 4.0
    assert math.isclose(st.tau2(), 4.0 / 3.0)
    # closed forms at step e: log(step) = 1
    assert math.isclose(sb.ucb_score(0.0, sb.ArmState(1, 1.0), math.e), 1.0)
    assert math.isclose(
        sb.ucb_score(0.0, sb.ArmState(1, 4.0), math.e, form="tau"), math.sqrt(2.0)
    )
    with pytest.raises(ValueError):
        sb.ucb_score(0.0, sb.ArmState(1, 1.0), math.e, form="bogus")


def test_sampling_score_matches_gaussian_draw():
    st = sb.ArmState(4, 1.0)  # tau2/n = 1/16
    draw = sb.sampling_score(2.0, st, sb.RngStream(11))
    ref = sb.RngStream(11).gaussian(2.0, 1.0 / 16.0)
    assert draw == ref


def test_select_action_round_robin_then_greedy():
    scores = [0.0, 5.0, 1.0]
    assert [sb.select_action(scores, s, 3) for s in (1, 2, 3)] == [0, 1, 2]
    assert sb.select_action(scores, 7, 3) == 1
    assert sb.argmax_lowest([1.0, 3.0, 3.0]) == 1


def test_run_config_end_to_end():
    out = sb.run_config(SMOKE_CONFIG)
    assert out["env"] == "bernoulli-k5"
    assert out["horizon"] == 400 and out["trials"] == 4 and out["seed"] == 3
    labels = [p["label"] for p in out["policies"]]
    assert labels == ["sau-ucb", "random"]
    for pol in out["policies"]:
        assert len(pol["finals"]) == 4
        assert pol["final_sem"] is None or pol["final_sem"] >= 0.0
        q = pol["final_quantiles"]
        assert q["min"] <= q["median"] <= q["max"]
    by_label = {p["label"]: p for p in out["policies"]}
    assert (
        by_label["sau-ucb"]["final_mean_cum_regret"]
        < by_label["random"]["final_mean_cum_regret"]
    )
    assert out["ranking"][0] == "sau-ucb"

    # byte-for-byte determinism, and worker count must not matter
    assert sb.run_config(SMOKE_CONFIG) == out
    assert sb.run_config(SMOKE_CONFIG, jobs=3) == out

    curves = sb.run_config(SMOKE_CONFIG, include_curves=True)
    trace = curves["policies"][0]["mean_cum_regret"]
    assert len(trace) == 400
    assert trace == sorted(trace)  # cumulative regret never decreases


def test_run_config_rejects_bad_config():
    with pytest.raises(sb.ConfigError):
        sb.run_config("[env]\nkind = bernoulli\n")  # no policies
    with pytest.raises(ValueError):
        sb.run_config("[env]\nkind = bernoulli\nbogus_key = 1\n")


def test_prop_check_battery():
    res = sb.run_prop_checks("2", n=250, reps=3000, seed=1)
    assert len(res) == 1
    assert res[0]["name"] == "residual-vs-mean-mse"
    assert res[0]["pass"] is True
    assert res[0]["observed"] <= res[0]["bound"]
    with pytest.raises(ValueError):
        sb.run_prop_checks("9")


def test_log_curve_fit_recovers_exact_log():
    curve = [2.0 + 3.0 * math.log(s) for s in range(1, 201)]
    fit = sb.fit_log_curve(curve, 10)
    assert math.isclose(fit["slope"], 3.0, abs_tol=1e-9)
    assert math.isclose(fit["intercept"], 2.0, abs_tol=1e-9)
    assert math.isclose(fit["r2"], 1.0, abs_tol=1e-12)
    assert sb.check_log_regret(curve, 10)["pass"] is True


def test_presets_are_pinned():
    names = sb.preset_names()
    assert names == [
        "appendixA-bernoulli",
        "figure1-a",
        "figure1-b",
        "figure1-c",
        "table1-statlog-desk",
    ]
    text = sb.preset_text("figure1-a")
    assert "[env]" in text and "[policy" in text
    with pytest.raises(ValueError):
        sb.preset_text("no-such-preset")


def test_cli_exit_codes():
    assert sb.cli(["reproduce", "--list"]) == 0
    assert sb.cli(["frobnicate"]) == 2
