"""Finite-machine swap-cycle engines on passive qutrits.

Core entry points: `engine.run_cycle` for a single (m, n) cycle,
`oracle.stationary_machine` for the brute-force fixed point,
`regions.classify` / `regions.coverage_fraction` for activation geometry,
`quasistatic.integrate_trajectory` for the infinite-machine limit,
`reduction.lifted_cycle` for qudit windows, and `activation` for
work-accounting reports.
"""

from . import activation, engine, oracle, quasistatic, reduction, regions, states
from ._kernels import backend
from .engine import CycleOutcome, machine_distribution, run_cycle
from .oracle import stationary_machine
from .quasistatic import integrate_trajectory, optimal_work
from .regions import approximate_gap_ratio, classify
from .states import (
    BETA_INF,
    entropy,
    ergotropy,
    is_passive,
    mean_energy,
    passify,
    thermal_state,
    virtual_temperatures,
)

__version__ = "0.1.0"

__all__ = [
    "BETA_INF",
    "CycleOutcome",
    "activation",
    "approximate_gap_ratio",
    "backend",
    "classify",
    "engine",
    "entropy",
    "ergotropy",
    "integrate_trajectory",
    "is_passive",
    "machine_distribution",
    "mean_energy",
    "optimal_work",
    "oracle",
    "passify",
    "quasistatic",
    "reduction",
    "regions",
    "run_cycle",
    "stationary_machine",
    "states",
    "thermal_state",
    "virtual_temperatures",
    "__version__",
]
