"""Slotted optical ring simulator with deterministic C-RAN scheduling."""

from cranring._core import (  # noqa: F401
    Assignment,
    CapacityError,
    CapacityParams,
    ConfigError,
    InfeasibleError,
    RingTopology,
    ScheduleFault,
    assignment_from_json,
    balance_period,
    balance_used_positions,
    check_validity,
    compact_positions,
    max_antennas_saturating,
    max_antennas_zero_latency,
    naive_assign,
    prop1_assign,
    reference_config_json,
    run_experiment,
    run_experiment_to_dir,
    saturate_positions,
    waste,
)

__version__ = "0.1.0"
