"""Hot numeric kernels: quasi-static trajectory stepping and coverage grids.

Both kernels exist in a numba-compiled flavour and a plain numpy/python
flavour. Selection is by the SWAPENGINE_BACKEND environment variable
("numba", the default when numba imports, or "numpy"); `backend()` reports
which one is active. benchmarks/bench_kernels.py compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

_BACKEND = os.environ.get("SWAPENGINE_BACKEND", "numba").lower()
if _BACKEND not in ("numba", "numpy"):
    raise RuntimeError(f"SWAPENGINE_BACKEND must be 'numba' or 'numpy', got {_BACKEND!r}")

if _BACKEND == "numba":
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        _BACKEND = "numpy"

ALPHA_CONSTANT = 0
ALPHA_ENTROPY = 1

STATUS_ON_MANIFOLD = 0
STATUS_MAX_STEPS = 1
STATUS_STALLED = 2


def backend() -> str:
    return _BACKEND


def _flow_rate(p0, p1, p2):
    return (p1 - p2) ** 2 * (p0 - p1) ** 2 / (p1 * (p0 - p2) ** 2)


def _alpha_value(mode, alpha_const, p0, p1, p2):
    if mode == ALPHA_ENTROPY:
        return math.log(p0 / p1) / math.log(p1 / p2)
    return alpha_const


def _r3_gap(p0, p1, p2, de10, de21):
    return de10 * math.log(p1 / p2) - de21 * math.log(p0 / p1)


def _trajectory_core(p0, p1, de10, de21, mode, alpha_const, step, max_steps, term_tol):
    """Adaptive RK4 flow of (p0, p1) toward the thermal manifold.

    Halves the step whenever it would leave the passive simplex or
    overshoot the manifold; terminates when the R3 log-gap drops below
    term_tol. Returns (t, states, n_samples, work, heat_hot, status).
    """
    ts = np.empty(max_steps + 1)
    ps = np.empty((max_steps + 1, 3))
    t = 0.0
    ts[0] = 0.0
    ps[0, 0] = p0
    ps[0, 1] = p1
    ps[0, 2] = 1.0 - p0 - p1
    work = 0.0
    heat = 0.0
    k = 0
    if _r3_gap(p0, p1, 1.0 - p0 - p1, de10, de21) <= term_tol:
        return ts, ps, 1, work, heat, STATUS_ON_MANIFOLD
    status = STATUS_MAX_STEPS
    while k < max_steps:
        h = step
        accepted = False
        while h >= step * 1e-14:
            y0, y1 = p0, p1
            # RK4 stages
            f = _flow_rate(y0, y1, 1.0 - y0 - y1)
            a = _alpha_value(mode, alpha_const, y0, y1, 1.0 - y0 - y1)
            k1_0, k1_1 = f, -(1.0 + a) * f
            y0b = y0 + 0.5 * h * k1_0
            y1b = y1 + 0.5 * h * k1_1
            f = _flow_rate(y0b, y1b, 1.0 - y0b - y1b)
            a = _alpha_value(mode, alpha_const, y0b, y1b, 1.0 - y0b - y1b)
            k2_0, k2_1 = f, -(1.0 + a) * f
            y0b = y0 + 0.5 * h * k2_0
            y1b = y1 + 0.5 * h * k2_1
            f = _flow_rate(y0b, y1b, 1.0 - y0b - y1b)
            a = _alpha_value(mode, alpha_const, y0b, y1b, 1.0 - y0b - y1b)
            k3_0, k3_1 = f, -(1.0 + a) * f
            y0b = y0 + h * k3_0
            y1b = y1 + h * k3_1
            f = _flow_rate(y0b, y1b, 1.0 - y0b - y1b)
            a = _alpha_value(mode, alpha_const, y0b, y1b, 1.0 - y0b - y1b)
            k4_0, k4_1 = f, -(1.0 + a) * f
            n0 = y0 + h / 6.0 * (k1_0 + 2.0 * k2_0 + 2.0 * k3_0 + k4_0)
            n1 = y1 + h / 6.0 * (k1_1 + 2.0 * k2_1 + 2.0 * k3_1 + k4_1)
            n2 = 1.0 - n0 - n1
            if n2 > 0.0 and n1 > n2 and n0 >= n1:
                if _r3_gap(n0, n1, n2, de10, de21) >= 0.0:
                    accepted = True
                    break
            h *= 0.5
        if not accepted:
            status = STATUS_STALLED
            break
        dp0 = n0 - p0
        dp2 = n2 - (1.0 - p0 - p1)
        # work == minus the mean-energy change, exactly, for every strategy
        work += de10 * dp0 - de21 * dp2
        heat += de10 * dp0
        p0, p1 = n0, n1
        t += h
        k += 1
        ts[k] = t
        ps[k, 0] = p0
        ps[k, 1] = p1
        ps[k, 2] = 1.0 - p0 - p1
        if _r3_gap(p0, p1, 1.0 - p0 - p1, de10, de21) <= term_tol:
            status = STATUS_ON_MANIFOLD
            break
    return ts, ps, k + 1, work, heat, status


def _coverage_counts_loop(grid, big_m, big_n, m, n, lever, eps_band):
    in_r1 = 0
    activated = 0
    for i in range(grid.shape[0]):
        l1 = math.log(grid[i, 0] / grid[i, 1])
        l2 = math.log(grid[i, 1] / grid[i, 2])
        if big_n * l2 - big_m * l1 <= eps_band:
            continue
        in_r1 += 1
        gap = n * l2 - m * l1
        if (lever > 0 and gap > 0.0) or (lever < 0 and gap < 0.0):
            activated += 1
    return in_r1, activated


def _coverage_counts_numpy(grid, big_m, big_n, m, n, lever, eps_band):
    l1 = np.log(grid[:, 0] / grid[:, 1])
    l2 = np.log(grid[:, 1] / grid[:, 2])
    r1_mask = big_n * l2 - big_m * l1 > eps_band
    gap = n * l2[r1_mask] - m * l1[r1_mask]
    if lever > 0:
        act = int(np.count_nonzero(gap > 0.0))
    elif lever < 0:
        act = int(np.count_nonzero(gap < 0.0))
    else:
        act = 0
    return int(np.count_nonzero(r1_mask)), act


if _BACKEND == "numba":
    _flow_rate = njit(cache=True)(_flow_rate)
    _alpha_value = njit(cache=True)(_alpha_value)
    _r3_gap = njit(cache=True)(_r3_gap)
    trajectory_core = njit(cache=True)(_trajectory_core)
    coverage_counts = njit(cache=True)(_coverage_counts_loop)
else:
    trajectory_core = _trajectory_core
    coverage_counts = _coverage_counts_numpy


def flow_rate(p) -> float:
    """dp0/dt of the quasi-static flow at state p (library-facing wrapper)."""
    return _flow_rate(p[0], p[1], p[2])
