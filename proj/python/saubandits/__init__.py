"""Variance-adaptive bandit policies and benchmark harness (C++ core).

The heavy lifting lives in the compiled ``_core`` extension; this package
re-exports its public surface.
"""

from ._core import (
    ArmState,
    ConfigError,
    IngestError,
    RngStream,
    __version__,
    argmax_lowest,
    check_log_regret,
    cli,
    derive_seed,
    fit_log_curve,
    fnv1a64,
    make_arm_state,
    preset_names,
    preset_text,
    residual,
    run_config,
    run_prop_checks,
    sampling_score,
    sau_update,
    select_action,
    splitmix64,
    ucb_score,
)

__all__ = [
    "ArmState",
    "ConfigError",
    "IngestError",
    "RngStream",
    "__version__",
    "argmax_lowest",
    "check_log_regret",
    "cli",
    "derive_seed",
    "fit_log_curve",
    "fnv1a64",
    "make_arm_state",
    "preset_names",
    "preset_text",
    "residual",
    "run_config",
    "run_prop_checks",
    "sampling_score",
    "sau_update",
    "select_action",
    "splitmix64",
    "ucb_score",
]
