"""Discrete-time single-slit trajectory simulator."""

from ._tqs import (
    Config,
    ConfigError,
    ConfigParseError,
    PropagationError,
    __version__,
    classical_impact,
    compute_n0,
    contrast,
    deviation_origins,
    is_black_region,
    predict_minima,
    propagate,
    run_cli,
    simulate,
    sweep,
    trajectory,
)

__all__ = [
    "Config",
    "ConfigError",
    "ConfigParseError",
    "PropagationError",
    "__version__",
    "classical_impact",
    "compute_n0",
    "contrast",
    "deviation_origins",
    "is_black_region",
    "predict_minima",
    "propagate",
    "run_cli",
    "simulate",
    "sweep",
    "trajectory",
]
