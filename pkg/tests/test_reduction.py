import numpy as np
import pytest

from swapengine import engine, reduction, states


def random_passive_qudit(rng, d, min_p=1e-3):
    while True:
        p = np.sort(rng.dirichlet(np.ones(d)))[::-1]
        if p[-1] >= min_p:
            return p


class TestDecompose:
    def test_identity_reduction(self, worked_example):
        p, e = worked_example
        win = reduction.decompose(p, e, 0)
        assert win.weight == pytest.approx(1.0)
        assert np.allclose(win.reduced_state, p)
        assert np.allclose(win.reduced_h, e)

    def test_interior_window_arithmetic(self):
        p = np.array([0.4, 0.25, 0.15, 0.12, 0.08])
        win = reduction.decompose(p, np.arange(5.0), 1)
        assert win.weight == pytest.approx(0.52)
        assert np.allclose(win.reduced_state, np.array([0.25, 0.15, 0.12]) / 0.52)

    def test_uniform_window_weight(self):
        d = 6
        p = np.full(d, 1 / d)
        win = reduction.decompose(p, np.arange(float(d)), 2)
        assert win.weight == pytest.approx(3 / d)
        assert np.allclose(win.reduced_state, 1 / 3)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            reduction.decompose([0.5, 0.3, 0.2], [0, 1, 2], 1)


class TestLiftedCycle:
    def test_identity_matches_run_cycle(self, worked_example):
        p, e = worked_example
        lifted = reduction.lifted_cycle(p, e, 0, 1, 1)
        direct = engine.run_cycle(p, e, 1, 1)
        assert lifted.work == pytest.approx(direct.work, abs=1e-15)
        assert np.allclose(lifted.final_system, direct.final_system)

    def test_worked_example_scaled_by_window_mass(self):
        # engine worked example embedded at levels (0,1,2) with mass 0.8
        p = np.array([0.4, 0.28, 0.12, 0.12, 0.08])
        e = np.array([0.0, 3.0, 4.0, 9.0, 11.0])
        out = reduction.lifted_cycle(p, e, 0, 1, 1)
        assert out.work == pytest.approx(0.8 * 0.0703704, abs=1e-6)
        assert np.allclose(out.final_system[3:], [0.12, 0.08])

    def test_work_factorization_random(self):
        rng = np.random.default_rng(31)
        for d in (4, 6, 8, 10):
            p = random_passive_qudit(rng, d)
            e = np.cumsum(rng.uniform(0.5, 2.0, size=d))
            for k in range(d - 2):
                win = reduction.decompose(p, e, k)
                lifted = reduction.lifted_cycle(p, e, k, 2, 3)
                window = engine.run_cycle(win.reduced_state, win.reduced_h, 2, 3)
                assert lifted.work == pytest.approx(win.weight * window.work, abs=1e-12)
                assert lifted.delta_p == pytest.approx(
                    win.weight * window.delta_p, abs=1e-12
                )

    def test_thermal_window_extracts_nothing(self):
        e = np.array([0.0, 1.0, 2.0, 3.0])
        tau = states.thermal_state(0.9, e)
        out = reduction.lifted_cycle(tau, e, 0, 1, 1)  # resonant: lever = 0
        assert out.work == pytest.approx(0.0, abs=1e-15)


class TestBlockUnitaryOracle:
    def test_agrees_with_lifted_cycle(self):
        rng = np.random.default_rng(17)
        for d in (4, 5, 6):
            p = random_passive_qudit(rng, d)
            e = np.cumsum(rng.uniform(0.5, 2.0, size=d))
            for k in range(d - 2):
                for m, n in [(1, 1), (2, 3), (3, 3)]:
                    lifted = reduction.lifted_cycle(p, e, k, m, n)
                    sys_m, mach_m = reduction.block_joint_cycle(p, e, k, m, n)
                    assert np.max(np.abs(sys_m - lifted.final_system)) < 1e-12
                    assert np.max(np.abs(mach_m - lifted.machine)) < 1e-12


class TestBestWindow:
    def test_qutrit_returns_zero(self, worked_example):
        p, e = worked_example
        k, out = reduction.best_window(p, e, 1, 1)
        assert k == 0
        assert out.work == pytest.approx(0.0703704, abs=1e-6)

    def test_finds_the_active_window(self):
        # thermal on levels (0,1,2), athermal and activating on (1,2,3)
        e = np.array([0.0, 1.0, 4.0, 5.0])
        beta = 0.3
        a = 1.0
        b = a * np.exp(-beta * 1.0)
        c = b * np.exp(-beta * 3.0)
        d = 0.3 * c
        p = np.array([a, b, c, d])
        p /= p.sum()
        k, out = reduction.best_window(p, e, 1, 1)
        assert k == 1
        assert out.work > 0

    def test_resonant_thermal_qudit_all_zero(self):
        e = np.array([0.0, 1.0, 2.0, 3.0, 4.0])
        tau = states.thermal_state(0.7, e)
        k, out = reduction.best_window(tau, e, 2, 2)  # lever = 0 everywhere
        assert k == 0
        assert out.work == pytest.approx(0.0, abs=1e-15)
