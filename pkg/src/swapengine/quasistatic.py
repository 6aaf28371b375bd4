"""Large-machine limit: admissible swap ratios, the asymptotic machine
distribution, and quasi-static cooling trajectories.

In the limit of many swaps per cycle the ratio alpha = n/m becomes a
continuous control. Admissible values lie strictly between
ln(p0/p1)/ln(p1/p2) (entropy-conserving, Carnot-efficient) and
dE10/dE21 (energy-conserving, zero work). Any choice drives the state
along dp0/dt = (p1-p2)^2 (p0-p1)^2 / (p1 (p0-p2)^2),
dp1/dt = -(1+alpha) dp0/dt toward the thermal manifold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import states
from ._kernels import (
    ALPHA_CONSTANT,
    ALPHA_ENTROPY,
    STATUS_MAX_STEPS,
    STATUS_ON_MANIFOLD,
    flow_rate,
    trajectory_core,
)

# R3 log-gap below which a trajectory counts as thermal
TERMINATION_TOL = 1e-10


@dataclass(frozen=True)
class AlphaRange:
    lower: float
    upper: float

    def __contains__(self, alpha: float) -> bool:
        return self.lower < alpha < self.upper

    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)


def alpha_range(p, energies) -> AlphaRange:
    """Open interval of admissible swap ratios n/m; empty (error) unless
    the state lies strictly on the work-extracting side of thermal."""
    p = states.validate_state(p, 3)
    if np.any(p <= 0.0):
        raise ValueError("need strictly positive probabilities")
    de10, de21 = states.gaps(energies)
    lower = math.log(p[0] / p[1]) / math.log(p[1] / p[2])
    upper = de10 / de21
    if lower >= upper:
        raise ValueError(
            f"empty alpha range [{lower}, {upper}]: no ratio extracts work here"
        )
    return AlphaRange(lower=lower, upper=upper)


@dataclass(frozen=True)
class AsymptoticMachine:
    """Two geometric tails glued at level m: a hot tail on 0..m-1 with
    ratio p1/p0 and a cold tail on m..m+n-3 with ratio p2/p1, mixed with
    weight lam; the top two levels carry vanishing mass."""

    m: int
    n: int
    mixture_weight: float
    hot_ratio: float
    cold_ratio: float
    z_hot: float
    z_cold: float

    def distribution(self) -> np.ndarray:
        q = np.zeros(self.m + self.n)
        j = np.arange(self.m)
        q[: self.m] = self.mixture_weight * self.hot_ratio**j / self.z_hot
        j = np.arange(self.n - 2)
        q[self.m : self.m + self.n - 2] = (
            (1.0 - self.mixture_weight) * self.cold_ratio**j / self.z_cold
        )
        return q


def asymptotic_machine(p, energies, m: int, alpha: float) -> AsymptoticMachine:
    """Limit shape of the stationary machine for a large (m, ceil(alpha*m))
    cycle. alpha must lie inside alpha_range(p, energies)."""
    p = states.validate_state(p, 3)
    rng = alpha_range(p, energies)
    if alpha not in rng:
        raise ValueError(f"alpha={alpha} outside admissible range {rng}")
    if m < 3:
        raise ValueError("need m >= 3")
    n = math.ceil(alpha * m)
    rh = p[1] / p[0]  # e^{-beta_hot dE10}
    rc = p[2] / p[1]  # e^{-beta_cold dE21}
    lam = (1.0 - rc) / (1.0 - rh * rc)
    z_hot = (1.0 - rh**m) / (1.0 - rh)
    z_cold = (1.0 - rc ** (n - 2)) / (1.0 - rc)
    return AsymptoticMachine(
        m=m, n=n, mixture_weight=lam, hot_ratio=rh, cold_ratio=rc,
        z_hot=z_hot, z_cold=z_cold,
    )


def asymptotic_delta_p_prefactor(p) -> float:
    """c in the large-m law delta_p ~ c (p1/p0)^m."""
    p = states.validate_state(p, 3)
    if not (p[0] > p[1] > p[2] > 0.0):
        raise ValueError("need strictly ordered probabilities")
    return flow_rate(p)


@dataclass(frozen=True)
class Trajectory:
    samples: Sequence[tuple[float, np.ndarray, states.DiagramPoint]]
    accumulated_work: float
    accumulated_heat_hot: float
    endpoint_beta: float

    @property
    def final_state(self) -> np.ndarray:
        return self.samples[-1][1]


Strategy = Union[str, float, Callable[[np.ndarray], float]]


def _r3_log_gap(p, de10: float, de21: float) -> float:
    return de10 * math.log(p[1] / p[2]) - de21 * math.log(p[0] / p[1])


def integrate_trajectory(
    p,
    energies,
    strategy: Strategy,
    step: float = 0.05,
    max_steps: int = 200_000,
) -> Trajectory:
    """RK4 integration of the quasi-static flow until the thermal manifold.

    strategy: "energy" / "energy_conserving" (alpha pinned to dE10/dE21, no
    work, pure cooling), "entropy" / "entropy_conserving" (alpha tracks the
    lower bound, isentropic, maximal work), a float (constant alpha), or a
    callable p -> alpha evaluated along the way.

    Work increments are the exact mean-energy drops of each accepted step,
    so the energy-conserving strategy reports exactly zero work.
    """
    p = states.validate_state(p, 3)
    if np.any(p <= 0.0):
        raise ValueError("need strictly positive probabilities")
    de10, de21 = states.gaps(energies)
    if step <= 0.0:
        raise ValueError("step must be positive")
    gap = _r3_log_gap(p, de10, de21)
    if gap < -TERMINATION_TOL:
        raise ValueError("state is on the wrong side of the thermal manifold")

    if callable(strategy):
        ts, ps, count, work, heat, status = _integrate_callable(
            p, de10, de21, strategy, step, max_steps
        )
    else:
        if strategy in ("energy", "energy_conserving"):
            mode, const = ALPHA_CONSTANT, de10 / de21
        elif strategy in ("entropy", "entropy_conserving"):
            mode, const = ALPHA_ENTROPY, 0.0
        elif isinstance(strategy, float):
            mode, const = ALPHA_CONSTANT, strategy
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        ts, ps, count, work, heat, status = trajectory_core(
            p[0], p[1], de10, de21, mode, const, step, max_steps, TERMINATION_TOL
        )
    if status == STATUS_MAX_STEPS:
        raise RuntimeError(f"no convergence within {max_steps} steps")

    e = states.validate_hamiltonian(energies, 3)
    samples = [
        (float(ts[i]), ps[i].copy(), states.diagram_point(ps[i], e))
        for i in range(count)
    ]
    final = samples[-1][1]
    beta = math.log(final[0] / final[2]) / (e[2] - e[0])
    return Trajectory(
        samples=samples,
        accumulated_work=work,
        accumulated_heat_hot=heat,
        endpoint_beta=beta,
    )


def _integrate_callable(p, de10, de21, alpha_of, step, max_steps):
    """Python twin of the compiled stepping loop for user-supplied alpha."""
    ts = np.empty(max_steps + 1)
    ps = np.empty((max_steps + 1, 3))
    ts[0], ps[0] = 0.0, p
    work = heat = t = 0.0
    k = 0
    y = p.copy()
    if _r3_log_gap(y, de10, de21) <= TERMINATION_TOL:
        return ts, ps, 1, work, heat, STATUS_ON_MANIFOLD
    status = STATUS_MAX_STEPS

    def field(y):
        f = flow_rate(y)
        a = alpha_of(y)
        return np.array([f, -(1.0 + a) * f, a * f])

    while k < max_steps:
        h = step
        accepted = False
        while h >= step * 1e-14:
            k1 = field(y)
            k2 = field(y + 0.5 * h * k1)
            k3 = field(y + 0.5 * h * k2)
            k4 = field(y + h * k3)
            ynew = y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
            if (
                ynew[2] > 0.0
                and ynew[1] > ynew[2]
                and ynew[0] >= ynew[1]
                and _r3_log_gap(ynew, de10, de21) >= 0.0
            ):
                accepted = True
                break
            h *= 0.5
        if not accepted:
            status = 2
            break
        work += de10 * (ynew[0] - y[0]) - de21 * (ynew[2] - y[2])
        heat += de10 * (ynew[0] - y[0])
        y = ynew
        t += h
        k += 1
        ts[k], ps[k] = t, y
        if _r3_log_gap(y, de10, de21) <= TERMINATION_TOL:
            status = STATUS_ON_MANIFOLD
            break
    return ts, ps, k + 1, work, heat, status


def optimal_work(p, energies) -> float:
    """Maximum extractable work: energy above the thermal state of equal
    entropy (the isentropic endpoint)."""
    p = states.validate_state(p, 3)
    e = states.validate_hamiltonian(energies, 3)
    beta = states.beta_from_entropy(states.entropy(p), e)
    tau = states.thermal_state(beta, e)
    return states.mean_energy(p, e) - states.mean_energy(tau, e)


def carnot_check(p, energies) -> float:
    """Max deviation of the entropy-strategy instantaneous efficiency from
    the instantaneous Carnot value 1 - beta_hot/beta_cold along the flow.

    Zero up to roundoff: at the lower alpha bound the two expressions are
    algebraically identical.
    """
    de10, de21 = states.gaps(energies)
    traj = integrate_trajectory(p, energies, "entropy")
    worst = 0.0
    for _, y, _pt in traj.samples:
        l1 = math.log(y[0] / y[1])
        l2 = math.log(y[1] / y[2])
        if l2 <= 0.0:
            continue
        eta = 1.0 - (l1 / l2) * (de21 / de10)
        carnot = 1.0 - (l1 / de10) * (de21 / l2)
        worst = max(worst, abs(eta - carnot))
    return worst
