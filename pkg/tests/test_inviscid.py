import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genburgers.inviscid import (
    ShockPointWarning,
    evaluate_inviscid,
    evaluate_inviscid_grid,
    minimize_variational,
    phi,
)
from genburgers.model import ProblemSpec, build_potential
from genburgers.viscous import ViscousConfig, evaluate_viscous

from conftest import specs


def brute_force_min(P, x, t, step=1e-4):
    lo, hi = P.sigma_profile.bounds()
    b = P.breakpoints
    W = max(abs(lo), abs(hi)) * t + max(abs(b[0]), abs(b[-1])) + 1.0
    ys = np.arange(x - W - abs(x), x + W + abs(x), step)
    vals = phi(P, x, t, ys)
    k = int(np.argmin(vals))
    return ys[k], vals[k]


def test_zero_potential_minimizer():
    P = build_potential(ProblemSpec.constant([1.0], [0.0]))
    r = minimize_variational(P, 1.7, 2.0)
    assert r.y_star == 1.7 and r.value == 0.0 and r.unique
    assert r.y_left == r.y_right == r.y_star


def test_box_minimizer_matches_scan(unit_box):
    P = build_potential(unit_box)
    r = minimize_variational(P, 0.0, 1.0)
    y, v = brute_force_min(P, 0.0, 1.0)
    assert r.value == pytest.approx(v, abs=1e-6)
    assert r.y_star == pytest.approx(y, abs=1e-3)


def test_shock_point_is_not_unique():
    spec = ProblemSpec.riemann([1.0], [1.0], [0.0])
    P = build_potential(spec)
    r = minimize_variational(P, 0.5, 1.0)
    assert not r.unique
    assert r.y_left < 0 < r.y_right
    assert phi(P, 0.5, 1.0, r.y_left) == pytest.approx(phi(P, 0.5, 1.0, r.y_right), abs=1e-12)


def test_t_must_be_positive(unit_box):
    with pytest.raises(ValueError):
        minimize_variational(build_potential(unit_box), 0.0, 0.0)


def test_zero_data():
    spec = ProblemSpec.constant([1.0, 2.0], [0.0, 0.0])
    np.testing.assert_array_equal(evaluate_inviscid(spec, None, 3.0, 1.0), [0.0, 0.0])


def test_rarefaction_midpoint():
    spec = ProblemSpec.riemann([1.0], [0.0], [1.0])
    assert evaluate_inviscid(spec, None, 1.0, 2.0)[0] == pytest.approx(0.5, abs=1e-14)


def test_box_fan_value(unit_box):
    assert evaluate_inviscid(unit_box, None, 0.0, 2.0)[0] == pytest.approx(0.5, abs=1e-14)


def test_side_selection_and_warning():
    spec = ProblemSpec.riemann([1.0], [1.0], [0.0])
    with pytest.warns(ShockPointWarning):
        auto = evaluate_inviscid(spec, None, 0.5, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        left = evaluate_inviscid(spec, None, 0.5, 1.0, side="left")
        right = evaluate_inviscid(spec, None, 0.5, 1.0, side="right")
    assert auto[0] == left[0] == 1.0
    assert right[0] == 0.0
    with pytest.raises(ValueError):
        evaluate_inviscid(spec, None, 0.5, 1.0, side="middle")


def test_grid_masks_shock_point(unit_box):
    sl = evaluate_inviscid_grid(unit_box, None, np.array([0.0, 2.0, 3.0]), 2.0)
    assert sl.nonunique.tolist() == [False, True, False]
    const = evaluate_inviscid_grid(ProblemSpec.constant([1.0], [0.4]), None, np.linspace(-1, 1, 5), 1.0)
    np.testing.assert_array_equal(const.u, 0.4)
    empty = evaluate_inviscid_grid(unit_box, None, [], 1.0)
    assert len(empty) == 0


@given(specs(), st.floats(-4, 4), st.floats(0.1, 3.0))
def test_minimum_matches_brute_force(spec, x, t):
    P = build_potential(spec)
    r = minimize_variational(P, x, t)
    _, v = brute_force_min(P, x, t, step=1e-3)
    # the scan can only be worse; a grid of step h misses at most O(h^2 / t) plus the corner slope
    assert r.value <= v + 1e-12
    assert r.value == pytest.approx(phi(P, x, t, r.y_star), abs=1e-12)


@given(specs(), st.floats(0.1, 3.0))
def test_minimizers_are_monotone(spec, t):
    P = build_potential(spec)
    xs = np.linspace(-6, 6, 241)
    ys = [minimize_variational(P, x, t) for x in xs]
    y = np.array([r.y_star for r in ys])
    keep = np.array([r.unique for r in ys])
    assert np.all(np.diff(y[keep]) >= -1e-12)


@given(specs(), st.floats(-4, 4), st.floats(0.1, 3.0))
def test_values_stay_in_data_range(spec, x, t):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShockPointWarning)
        u = evaluate_inviscid(spec, None, x, t)
    b = spec.bounds()
    assert np.all(u >= b[:, 0] - 1e-12) and np.all(u <= b[:, 1] + 1e-12)


def test_vanishing_viscosity_at_a_regular_point():
    spec = ProblemSpec.box([1.0, 1.0], [2.0, -0.5], 1.0)
    x, t = 0.3, 1.0
    u0 = evaluate_inviscid(spec, None, x, t)
    assert minimize_variational(build_potential(spec), x, t).unique
    gaps = [np.max(np.abs(evaluate_viscous(spec, ViscousConfig(nu), x, t) - u0)) for nu in (0.2, 0.1, 0.05, 0.025)]
    assert gaps[-1] < 0.05 * spec.data_range()
