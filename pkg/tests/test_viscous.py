import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from genburgers import kernels
from genburgers.closedform import BoxData, viscous_box_solution
from genburgers.model import PiecewiseProfile, ProblemSpec, build_potential
from genburgers.validation import hopf_reference
from genburgers.viscous import (
    QuadratureError,
    ViscousConfig,
    evaluate_viscous,
    evaluate_viscous_grid,
    measure_weights,
    phi,
)

from conftest import specs

GAUSS_MASS = math.erf(1 / math.sqrt(2))  # 0.6826894921...


def test_config_validation():
    for bad in (dict(nu=0.0), dict(nu=1.0, rel_tol=0.0), dict(nu=1.0, rel_tol=1e-2),
                dict(nu=1.0, truncation_sigmas=5.0), dict(nu=1.0, max_subdivisions=0)):
        with pytest.raises(ValueError):
            ViscousConfig(**bad)


def test_phi_values(unit_box):
    P0 = build_potential(ProblemSpec.constant([1.0], [0.0]))
    assert phi(P0, 0.0, 1.0, 2.0) == 2.0
    assert phi(P0, 1.3, 0.7, 1.3) == 0.0
    P = build_potential(unit_box)
    assert phi(P, 0.0, 1.0, 0.0) == 0.0
    with pytest.raises(ValueError):
        phi(P, 0.0, 0.0, 1.0)


def test_constant_data_is_exact():
    spec = ProblemSpec.constant([1.0, -2.0], [0.3, 1.7])
    for nu, x, t in ((1.0, 0.0, 1.0), (0.01, 5.0, 3.0), (3.0, -2.0, 0.1)):
        np.testing.assert_allclose(evaluate_viscous(spec, ViscousConfig(nu), x, t), [0.3, 1.7], rtol=1e-14)


def test_gaussian_average(heat_box):
    u = evaluate_viscous(heat_box, ViscousConfig(1.0), 0.0, 1.0)
    np.testing.assert_allclose(u, [GAUSS_MASS, -GAUSS_MASS], rtol=1e-12)


def test_matches_box_closed_form(unit_box):
    bd = BoxData(1.0, [1.0], [1.0])
    u = evaluate_viscous(unit_box, ViscousConfig(0.5), 0.0, 1.0)[0]
    assert u == pytest.approx(viscous_box_solution(bd, 0.5, 0.0, 1.0)[0], rel=1e-12)


def test_small_viscosity_is_stable(unit_box):
    for nu in (1e-3, 1e-4):
        u = evaluate_viscous(unit_box, ViscousConfig(nu), 1.5, 2.0)[0]
        assert u == pytest.approx(1.0, abs=1e-6)


def test_riemann_data_with_linear_potential():
    spec = ProblemSpec.riemann([1.0], [0.0], [1.0])
    # rarefaction: u -> x/t inside the fan as nu -> 0
    u = evaluate_viscous(spec, ViscousConfig(1e-3), 0.5, 1.0)[0]
    assert u == pytest.approx(0.5, abs=1e-3)


def test_grid_matches_pointwise(heat_box):
    xs = np.array([-1.0, 0.0, 2.5])
    sl = evaluate_viscous_grid(heat_box, ViscousConfig(1.0), xs, 1.0)
    for i, x in enumerate(xs):
        np.testing.assert_array_equal(sl.u[i], evaluate_viscous(heat_box, ViscousConfig(1.0), x, 1.0))
    assert sl.meta["nu"] == 1.0


def test_grid_threads_do_not_change_values(unit_box):
    xs = np.linspace(-3, 3, 25)
    a = evaluate_viscous_grid(unit_box, ViscousConfig(0.1), xs, 1.0, threads=1)
    b = evaluate_viscous_grid(unit_box, ViscousConfig(0.1), xs, 1.0, threads=4)
    np.testing.assert_array_equal(a.u, b.u)


def test_empty_and_unsorted_grid(unit_box):
    sl = evaluate_viscous_grid(unit_box, ViscousConfig(1.0), [], 1.0)
    assert len(sl) == 0 and sl.u.shape == (0, 1)
    with pytest.raises(ValueError):
        evaluate_viscous_grid(unit_box, ViscousConfig(1.0), [1.0, 0.0], 1.0)


def test_nonconvergence_names_the_point(unit_box):
    cfg = ViscousConfig(0.01, rel_tol=1e-12, max_subdivisions=1)
    with pytest.raises(QuadratureError, match="x=0.5"):
        evaluate_viscous_grid(unit_box, cfg, [0.5], 1.0)


def test_measure_weights():
    P0 = ProblemSpec.constant([1.0], [0.0])
    cfg = ViscousConfig(1.0)
    assert measure_weights(P0, cfg, 0.0, 1.0, [0.3]).weights.tolist() == [1.0]
    np.testing.assert_allclose(measure_weights(P0, cfg, 0.0, 1.0, [-1.0, 1.0]).weights, [0.5, 0.5])
    w = measure_weights(P0, cfg, 0.0, 1.0, [0.0, 1.0]).weights
    np.testing.assert_allclose(w, [1 / (1 + math.exp(-0.5)), math.exp(-0.5) / (1 + math.exp(-0.5))])
    assert w[0] == pytest.approx(0.6225, abs=1e-4)
    with pytest.raises(ValueError):
        measure_weights(P0, cfg, 0.0, 1.0, [1.0, 0.0])


def test_measure_weights_small_nu_do_not_underflow(unit_box):
    w = measure_weights(unit_box, ViscousConfig(1e-4), 0.0, 1.0, np.linspace(-5, 5, 101)).weights
    assert w.sum() == pytest.approx(1.0, abs=1e-14) and np.all(w >= 0)


settings_points = st.tuples(st.floats(0.05, 1.0), st.floats(0.2, 3.0), st.floats(-4.0, 4.0))


@given(specs(), settings_points)
def test_convex_combination_bounds(spec, ntx):
    nu, t, x = ntx
    u = evaluate_viscous(spec, ViscousConfig(nu), x, t)
    b = spec.bounds()
    assert np.all(u >= b[:, 0] - 1e-12) and np.all(u <= b[:, 1] + 1e-12)


@given(specs(), settings_points)
def test_sigma_compatibility(spec, ntx):
    nu, t, x = ntx
    u = evaluate_viscous(spec, ViscousConfig(nu), x, t)
    us = evaluate_viscous(spec.scalar(), ViscousConfig(nu), x, t)[0]
    assert float(spec.c @ u) == pytest.approx(us, abs=1e-8 * max(1.0, spec.scalar().data_range()))


@given(specs(max_n=1), settings_points)
def test_scalar_problem_matches_hopf_integral(spec, ntx):
    nu, t, x = ntx
    scalar = spec.scalar()
    u = evaluate_viscous(scalar, ViscousConfig(nu), x, t)[0]
    assert u == pytest.approx(hopf_reference(scalar, nu, x, t), abs=1e-7 * max(1.0, scalar.data_range()))


@given(specs(), settings_points, st.floats(-30.0, 30.0))
def test_stabilizing_shift_cancels(spec, ntx, shift):
    nu, t, x = ntx
    cfg = ViscousConfig(nu)
    a = evaluate_viscous(spec, cfg, x, t)
    b = evaluate_viscous(spec, cfg, x, t, shift=shift * nu)
    np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-12 * spec.data_range())


@given(specs(), settings_points, st.floats(-2.0, 2.0))
def test_translation_covariance(spec, ntx, delta):
    nu, t, x = ntx
    cfg = ViscousConfig(nu)
    a = evaluate_viscous(spec, cfg, x, t)
    b = evaluate_viscous(spec.shifted(delta), cfg, x + delta, t)
    np.testing.assert_allclose(b, a, atol=1e-8 * spec.data_range())


@pytest.mark.skipif("compiled" not in kernels.available_backends(), reason="extension not built")
def test_backends_agree_on_values(unit_box):
    xs = np.linspace(-3, 3, 13)
    cfg = ViscousConfig(0.05)
    before = kernels.BACKEND
    try:
        kernels.set_backend("python")
        a = evaluate_viscous_grid(unit_box, cfg, xs, 1.0).u
        kernels.set_backend("compiled")
        b = evaluate_viscous_grid(unit_box, cfg, xs, 1.0).u
    finally:
        kernels.set_backend(before)
    np.testing.assert_allclose(a, b, rtol=1e-13, atol=1e-15)
