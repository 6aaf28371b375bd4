import functools

import numpy as np
import pytest


def random_passive_qutrits(rng, count: int, min_p: float = 1e-4) -> list[np.ndarray]:
    """Strictly positive passive qutrit probability vectors."""
    out = []
    while len(out) < count:
        p = np.sort(rng.dirichlet(np.ones(3)))[::-1]
        if p[2] >= min_p:
            out.append(p)
    return out


def tensor_power_ergotropy(p, energies, k: int) -> float:
    """Brute-force ergotropy of the k-fold tensor power (3**k levels)."""
    probs = functools.reduce(np.kron, [np.asarray(p, float)] * k)
    es = functools.reduce(
        lambda a, b: np.add.outer(a, b).ravel(), [np.asarray(energies, float)] * k
    )
    passified = np.sort(probs)[::-1] @ np.sort(es)
    return float(probs @ es - passified)


@pytest.fixture(scope="session")
def worked_example():
    return np.array([0.5, 0.35, 0.15]), np.array([0.0, 3.0, 4.0])
