import cmath

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from misiurewicz.dynamics import iterate_f
from misiurewicz.errors import NoConvergence, RangeExceeded
from misiurewicz.poincare import (OrbitSkeleton, PoincareEvaluator, Phi_k, cauchy_increments,
                                  disk_grid, disk_sample, functional_equation_residual,
                                  intersection_rows, phi, phi_k, sup_difference)

GRID = disk_grid(1.0, 33)


def cosh_oracle(w):
    # at c0 = -2, z = 2 cosh(t) conjugates z^2 - 2 to t -> 2t, so
    # phi(w) = 2 cosh(sqrt(w)) (even in sqrt(w), hence entire)
    return 2 * np.cosh(np.sqrt(np.asarray(w, dtype=complex)))


@pytest.fixture(scope="module")
def ev_m2(basilica_tip):
    return PoincareEvaluator.from_data(basilica_tip)


@pytest.fixture(scope="module")
def ev_i(dendrite_i):
    return PoincareEvaluator.from_data(dendrite_i)


def test_phi_at_origin(ev_m2, ev_i):
    assert phi(ev_m2, 0) == 2
    assert abs(phi(ev_i, 0) - (-1 + 1j)) < 1e-15


def test_phi_slope_at_origin(ev_i, ev_m2):
    h = 1e-5
    for ev in (ev_i, ev_m2):
        slope = (phi(ev, h) - phi(ev, -h)) / (2 * h)
        assert abs(slope - 1) < 1e-6


def test_phi_matches_closed_form_at_minus_two(ev_m2):
    w = disk_sample(200, 3.0)
    assert sup_difference(phi(ev_m2, w), cosh_oracle(w)) < 1e-9


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 1), st.floats(0, 2 * np.pi))
def test_phi_scalar_and_array_agree(r, t):
    from misiurewicz.rescale import compute_Q
    from misiurewicz.solver import solve_misiurewicz
    d = compute_Q(solve_misiurewicz(1, 1, -2))
    ev = PoincareEvaluator.from_data(d)
    w = r * cmath.exp(1j * t)
    assert abs(phi(ev, w) - cosh_oracle(w)) < 1e-9


def test_functional_equation_examples(ev_i, ev_m2):
    assert functional_equation_residual(ev_i, 0) < 1e-12
    assert functional_equation_residual(ev_i, disk_sample(100)).max() < 1e-8
    rng = np.random.default_rng(7)
    w = np.sqrt(rng.uniform(0, 1, 100)) * np.exp(2j * np.pi * rng.uniform(0, 1, 100))
    assert functional_equation_residual(ev_i, w).max() < 1e-8
    assert functional_equation_residual(ev_m2, 0.3) < 1e-8


def test_functional_equation_relative_for_weak_cycle(real_mj):
    # |lambda0| ~ 1.72 makes phi(lambda0 w) large, so compare relatively
    ev = PoincareEvaluator.from_data(real_mj)
    w = disk_sample(100)
    res = functional_equation_residual(ev, w)
    scale = np.maximum(1.0, np.abs(phi(ev, real_mj.lambda0 * w)))
    assert (res / scale).max() < 1e-8


@pytest.mark.parametrize("fixture,burn_in", [("basilica_tip", 3), ("dendrite_i", 3),
                                             ("real_mj", 8)])
def test_cauchy_rate(fixture, burn_in, request):
    # a weakly repelling cycle needs longer before w / lambda0^n is small
    d = request.getfixturevalue(fixture)
    ev = PoincareEvaluator.from_data(d)
    for w in (0.5, 0.9j, -0.7 + 0.3j, disk_sample(100)):
        incs = cauchy_increments(ev, w, 30)
        bound = 2 / abs(d.lambda0)
        for n in range(burn_in, len(incs)):
            if incs[n - 1] < 1e-11:
                break  # rounding floor
            assert incs[n] <= bound * incs[n - 1]


def test_phi_limits(ev_m2):
    with pytest.raises(ValueError):
        phi(ev_m2, 2e3)
    tight = PoincareEvaluator(ev_m2.c0, ev_m2.a0, ev_m2.lambda0, 1, n_cap=3)
    with pytest.raises(NoConvergence):
        phi(tight, 0.5)
    with pytest.raises(ValueError):
        PoincareEvaluator(0, 0, 0.5, 1)


def test_skeleton_land_is_direct_iteration_for_small_steps(dendrite_i):
    d = dendrite_i
    sk = OrbitSkeleton.build(d.c0, d.a0, d.l, d.p)
    delta = 1e-3 + 1e-3j
    direct = iterate_f(d.c0, d.c0 + delta, d.l + 3 * d.p)
    assert abs(sk.land(3, delta) - direct) < 1e-12


@pytest.mark.parametrize("fixture", ["basilica_tip", "dendrite_i", "real_mj", "tricorn_jt1"])
def test_zero_perturbation_lands_on_a0(fixture, request):
    d = request.getfixturevalue(fixture)
    for k in (0, 1, 3):
        assert phi_k(d, k, 0) == d.a0
        assert Phi_k(d, k, 0) == d.a0


def test_phi_k_converges_at_minus_two(basilica_tip, ev_m2):
    ref = phi(ev_m2, 1.0)
    assert abs(phi_k(basilica_tip, 3, 1.0) - ref) > abs(phi_k(basilica_tip, 6, 1.0) - ref)
    assert abs(Phi_k(basilica_tip, 10, 0.5) - phi(ev_m2, 0.5)) < 1e-2


def test_phi_k_close_to_phi_on_larger_disk(dendrite_i, ev_i):
    w = disk_grid(2.0, 33)
    assert sup_difference(phi_k(dendrite_i, 10, w), phi(ev_i, w)) < 1e-3


def test_Phi_k_improves_from_8_to_14(dendrite_i, ev_i):
    ref = phi(ev_i, GRID)
    e8 = sup_difference(Phi_k(dendrite_i, 8, GRID), ref)
    e14 = sup_difference(Phi_k(dendrite_i, 14, GRID), ref)
    assert e14 < e8


@pytest.mark.parametrize("fixture", ["basilica_tip", "dendrite_i"])
def test_sup_differences_strictly_decrease(fixture, request):
    d = request.getfixturevalue(fixture)
    rows = intersection_rows(d, range(5, 16), GRID)
    for col in (1, 2):
        seq = [r[col] for r in rows]
        assert all(b < a for a, b in zip(seq, seq[1:])), seq


def test_wrong_Q_breaks_convergence_at_i(dendrite_i, ev_i):
    from dataclasses import replace
    ref = phi(ev_i, GRID)
    bad = replace(dendrite_i, Q=1.1 * dendrite_i.Q)
    seq = [sup_difference(Phi_k(bad, k, GRID), ref) for k in range(5, 13)]
    assert not all(b < a for a, b in zip(seq, seq[1:]))
    # and the error stalls well away from zero
    assert seq[-1] > 1e-2


def test_wrong_Q_converges_elsewhere_at_minus_two(basilica_tip, ev_m2):
    # Phi_k with Q scaled by s tends to phi(s w), not phi(w)
    from dataclasses import replace
    bad = replace(basilica_tip, Q=1.1 * basilica_tip.Q)
    target = phi(ev_m2, 1.1 * GRID)
    assert sup_difference(Phi_k(bad, 12, GRID), target) < 1e-6
    assert sup_difference(Phi_k(bad, 12, GRID), phi(ev_m2, GRID)) > 0.1


def test_range_guard_applies(basilica_tip):
    with pytest.raises(RangeExceeded):
        phi_k(basilica_tip, 600, 0.1)


def test_disk_helpers():
    assert len(disk_sample(100)) == 100
    assert np.all(np.abs(disk_sample(100)) <= 1)
    assert np.all(np.abs(GRID) <= 1 + 1e-12)
    assert 0j in GRID and 1 + 0j in GRID
