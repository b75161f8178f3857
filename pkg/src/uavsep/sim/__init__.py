"""Scenario runner, presets, and executable property checks."""

from .checks import (
    InsufficientDataError,
    channel_consistency,
    equality_construction,
    ks_statistic,
    lambda_sweep,
    lemma2_sweep,
    necessity_construction,
    proposition2_report,
    verify_lemma2,
    verify_proposition2,
)
from .scenario import (
    ConfigError,
    ObstacleSpec,
    RunVerdict,
    ScenarioConfig,
    Trace,
    TraceRecord,
    run_multi_preset,
    run_scenario,
)

__all__ = [
    "ConfigError",
    "InsufficientDataError",
    "ObstacleSpec",
    "RunVerdict",
    "ScenarioConfig",
    "Trace",
    "TraceRecord",
    "channel_consistency",
    "equality_construction",
    "ks_statistic",
    "lambda_sweep",
    "lemma2_sweep",
    "necessity_construction",
    "proposition2_report",
    "run_multi_preset",
    "run_scenario",
    "verify_lemma2",
    "verify_proposition2",
]
