import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from genburgers import kernels
from genburgers.closedform import BoxData, viscous_box_solution
from genburgers.field import FieldSlice
from genburgers.model import ProblemSpec
from genburgers.oracle import BoundaryContaminationError, CFLError, FDConfig, burgers_residual, solve_fd

from conftest import specs


def test_config_validation():
    for bad in (dict(x_min=1.0, x_max=0.0, nx=10, t_final=1.0), dict(x_min=0.0, x_max=1.0, nx=2, t_final=1.0),
                dict(x_min=0.0, x_max=1.0, nx=10, t_final=0.0),
                dict(x_min=0.0, x_max=1.0, nx=10, t_final=1.0, cfl_safety=1.5),
                dict(x_min=0.0, x_max=1.0, nx=10, t_final=1.0, boundary="periodic")):
        with pytest.raises(ValueError):
            FDConfig(**bad)


def test_constant_data_stays_constant():
    spec = ProblemSpec.constant([1.0, 2.0], [0.25, -1.5])
    sl = solve_fd(spec, 0.3, FDConfig(-2.0, 2.0, 101, 0.5))
    np.testing.assert_array_equal(sl.u, np.tile([0.25, -1.5], (101, 1)))


def test_heat_case(heat_box):
    sl = solve_fd(heat_box, 1.0, FDConfig(-20.0, 20.0, 4001, 1.0))
    i = int(np.argmin(np.abs(sl.x)))
    gauss = math.erf(1 / math.sqrt(2))
    assert sl.u[i, 0] == pytest.approx(gauss, abs=2e-3)
    assert sl.u[i, 1] == pytest.approx(-gauss, abs=2e-3)


def test_requested_nt_is_checked(unit_box):
    with pytest.raises(CFLError):
        solve_fd(unit_box, 0.1, FDConfig(-5.0, 5.0, 401, 1.0, nt=10))


def test_boundary_contamination_detected(unit_box):
    with pytest.raises(BoundaryContaminationError, match="widen"):
        solve_fd(unit_box, 1.0, FDConfig(-2.0, 2.0, 201, 1.0))


def test_maximum_principle():
    spec = ProblemSpec.box([1.0, -0.5], [1.5, 2.0], 1.0)
    sl = solve_fd(spec, 0.05, FDConfig(-10.0, 10.0, 801, 2.0))
    b = spec.bounds()
    assert np.all(sl.u >= b[:, 0] - 1e-12) and np.all(sl.u <= b[:, 1] + 1e-12)


@settings(max_examples=15)
@given(specs(max_breaks=4))
def test_sigma_evolves_like_scalar_problem(spec):
    cfg = FDConfig(-12.0, 12.0, 241, 0.5)
    nu = 0.3
    try:
        sys_ = solve_fd(spec, nu, cfg)
        sca = solve_fd(spec.scalar(), nu, cfg)
    except BoundaryContaminationError:
        return
    scale = max(1.0, float(np.max(np.abs(spec.bounds()))) * float(np.sum(np.abs(spec.c))))
    np.testing.assert_allclose(sys_.u @ spec.c, sca.u[:, 0], atol=1e-12 * scale)


def test_grid_convergence_on_smooth_data(unit_box):
    # smooth Gaussian-like viscous data: start from the exact solution at t=0.5
    nu = 0.2
    gaps = []
    for nx in (801, 1601):
        cfg = FDConfig(-10.0, 10.0, nx, 1.0)
        sl = solve_fd(unit_box, nu, cfg)
        exact = np.array([viscous_box_solution(BoxData(1.0, [1.0], [1.0]), nu, x, 1.0)[0] for x in sl.x])
        gaps.append(np.max(np.abs(sl.u[:, 0] - exact)))
    assert gaps[0] / gaps[1] >= 1.7


def _tanh_history(dx, dt, nu=0.2, sl=1.0, sr=-0.5):
    a, c = 0.5 * (sl - sr), 0.5 * (sl + sr)
    x = np.arange(-5.0, 5.0 + dx / 2, dx)
    out = []
    for k in range(3):
        t = 1.0 + k * dt
        s = c - a * np.tanh(a * (x - c * t) / nu)
        out.append(FieldSlice(x, s[:, None], t))
    return out


def test_residual_of_exact_profile_is_small_and_converges():
    r1 = burgers_residual(_tanh_history(0.02, 1e-4), [1.0], 0.2)
    r2 = burgers_residual(_tanh_history(0.01, 5e-5), [1.0], 0.2)
    assert r1 < 1e-2 and r2 < r1 / 3


def test_residual_constant_and_noise():
    x = np.linspace(0, 1, 51)
    const = [FieldSlice(x, np.full((51, 2), [0.5, 1.0]), t) for t in (0.0, 0.1, 0.2)]
    assert burgers_residual(const, [1.0, 2.0], 0.1) == 0.0
    rng = np.random.default_rng(3)
    noise = [FieldSlice(x, rng.normal(size=(51, 2)), t) for t in (0.0, 0.1, 0.2)]
    assert burgers_residual(noise, [1.0, 2.0], 0.1) > 10.0


def test_residual_input_checks():
    x = np.linspace(0, 1, 11)
    sl = FieldSlice(x, np.zeros((11, 1)), 0.0)
    with pytest.raises(ValueError):
        burgers_residual([sl, sl], [1.0], 0.1)
    other = FieldSlice(np.linspace(0, 2, 11), np.zeros((11, 1)), 1.0)
    with pytest.raises(ValueError):
        burgers_residual([sl, other, sl], [1.0], 0.1)


def test_history_output(unit_box):
    final, hist = solve_fd(unit_box, 0.5, FDConfig(-10.0, 10.0, 201, 0.2), history_every=50)
    assert hist[0].t == 0.0 and hist[-1].t == pytest.approx(0.2)
    np.testing.assert_array_equal(hist[-1].u, final.u)
    assert final.meta["backend"] == kernels.BACKEND
