import numpy as np
import pytest

from genburgers import _kernels_py, kernels
from genburgers.model import ProblemSpec
from genburgers.oracle import FDConfig, solve_fd

compiled = pytest.mark.skipif("compiled" not in kernels.available_backends(), reason="extension not built")


def test_gk15_rule_is_exact_on_polynomials():
    # Kronrod part integrates degree 22, Gauss part degree 13
    for deg in range(0, 23, 3):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert np.dot(_kernels_py.KWEIGHTS, _kernels_py.NODES**deg) == pytest.approx(exact, abs=1e-14)
    for deg in range(0, 14):
        exact = (1 - (-1) ** (deg + 1)) / (deg + 1)
        assert np.dot(_kernels_py.GWEIGHTS, _kernels_py.NODES**deg) == pytest.approx(exact, abs=1e-14)


def _gaussian_case():
    # one piece [-6, 6], q = w^2/2: integral sqrt(2 pi) * erf(6/sqrt2), moment of u = 1 + w
    return (np.array([0.0]), np.array([6.0]), np.array([0.0]), np.array([0.0]), np.array([0.5]),
            np.array([[1.0]]), np.array([[1.0]]), np.array([1.0]), 1.0, 1e-12, 200)


@pytest.mark.parametrize("name", kernels.available_backends())
def test_moments_on_gaussian(name):
    mod = kernels.get_backend(name)
    m, err, n, ok = mod.hopf_cole_moments(*_gaussian_case())
    assert ok and err <= 1e-12
    assert m[0] == pytest.approx(np.sqrt(2 * np.pi) * 0.9999999980268246, rel=1e-12)
    assert m[1] == pytest.approx(m[0], rel=1e-12)


@compiled
def test_backends_identical_subdivision():
    a = kernels.get_backend("python").hopf_cole_moments(*_gaussian_case()[:-3], 1e-3, 1e-13, 500)
    b = kernels.get_backend("compiled").hopf_cole_moments(*_gaussian_case()[:-3], 1e-3, 1e-13, 500)
    assert a[2] == b[2] and a[3] == b[3]
    np.testing.assert_allclose(a[0], b[0], rtol=1e-13)


@compiled
def test_backends_agree_on_fd():
    spec = ProblemSpec.box([1.0, -0.5], [1.0, 0.4], 1.0)
    cfg = FDConfig(-8.0, 8.0, 321, 1.0)
    before = kernels.BACKEND
    try:
        kernels.set_backend("python")
        a = solve_fd(spec, 0.1, cfg).u
        kernels.set_backend("compiled")
        b = solve_fd(spec, 0.1, cfg).u
    finally:
        kernels.set_backend(before)
    np.testing.assert_allclose(a, b, rtol=0, atol=1e-13)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("gpu")
