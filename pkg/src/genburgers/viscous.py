"""Exact viscous solution from the Hopf-Cole measure formula.

``u_j(x, t)`` is the average of ``u0_j`` under the probability density
proportional to ``exp(-phi(y) / nu)`` with ``phi(y) = I(y) + (x - y)**2 / (2t)``.
The exponent is shifted by the exact global minimum of ``phi`` so nothing
overflows or underflows, and the integration range is cut to the set where
``phi - min(phi) <= truncation_sigmas**2 / 2 * nu``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .field import FieldSlice
from .inviscid import minimize_grid, phi
from .model import PotentialFunction, ProblemSpec, build_potential

__all__ = [
    "ViscousConfig",
    "WeightedSample",
    "QuadratureError",
    "phi",
    "evaluate_viscous",
    "evaluate_viscous_grid",
    "measure_weights",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


@dataclass(frozen=True)
class ViscousConfig:
    nu: float
    rel_tol: float = 1e-9
    truncation_sigmas: float = 12.0
    max_subdivisions: int = 4000

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError(f"nu must be positive, got {self.nu}")
        if not 0 < self.rel_tol <= 1e-3:
            raise ValueError(f"rel_tol must lie in (0, 1e-3], got {self.rel_tol}")
        if not self.truncation_sigmas >= 6:
            raise ValueError("truncation_sigmas must be at least 6")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be positive")


@dataclass(frozen=True)
class WeightedSample:
    nodes: np.ndarray
    weights: np.ndarray


class _Prepared:
    """Per-segment coefficients shared by all evaluation points of one problem."""

    def __init__(self, spec: ProblemSpec, P: PotentialFunction):
        segs = P.segments()
        self.spec = spec
        self.P = P
        self.lo = np.array([s.lo for s in segs])
        self.hi = np.array([s.hi for s in segs])
        self.a = np.array([s.anchor for s in segs])
        self.Ia = np.array([s.I_anchor for s in segs])
        self.g = np.array([s.g for s in segs])
        self.s = np.array([s.s for s in segs])
        profs = [p.refine(P.breakpoints) for p in spec.profiles]
        ua, us = [], []
        for k in range(len(segs)):
            if k == 0:
                ua.append([p.left_tail for p in profs])
                us.append([0.0] * len(profs))
            elif k == len(segs) - 1:
                ua.append([p.right_tail for p in profs])
                us.append([0.0] * len(profs))
            else:
                ua.append([p.values[k - 1] for p in profs])
                us.append([p.slopes[k - 1] for p in profs])
        self.ua = np.array(ua)
        self.us = np.array(us)
        b = spec.bounds()
        self.scale = np.maximum(np.abs(b[:, 0]), np.abs(b[:, 1]))


def _pieces(prep: _Prepared, x: float, t: float, phimin: float, level: float):
    """Sub-intervals (in y) of every segment on which ``phi - phimin <= level``."""
    centers, halves, q0s, q1s, q2s, seg_idx = [], [], [], [], [], []
    for k in range(prep.a.size):
        a = prep.a[k]
        q2 = 0.5 * prep.s[k] + 0.5 / t
        q1 = prep.g[k] - (x - a) / t
        q0 = prep.Ia[k] + (x - a) ** 2 / (2.0 * t) - phimin
        zlo, zhi = prep.lo[k] - a, prep.hi[k] - a

        pts = []
        c0 = q0 - level
        if q2 != 0.0:
            disc = q1 * q1 - 4.0 * q2 * c0
            if disc >= 0.0:
                sq = math.sqrt(disc)
                # numerically stable roots
                qq = -0.5 * (q1 + math.copysign(sq, q1))
                r = [qq / q2, c0 / qq if qq != 0.0 else -q1 / (2 * q2)]
                pts.extend(r)
            pts.append(-q1 / (2.0 * q2))
        elif q1 != 0.0:
            pts.append(-c0 / q1)
        if not np.isfinite(zlo) or not np.isfinite(zhi):
            # tails are convex, so the kept set is bounded by the roots
            if q2 <= 0.0 or len(pts) < 3:
                continue
            zlo = max(zlo, min(pts[:2]))
            zhi = min(zhi, max(pts[:2]))
            if not zhi > zlo:
                continue
        pts = sorted({zlo, zhi, *(p for p in pts if zlo < p < zhi)})
        for z0, z1 in zip(pts[:-1], pts[1:]):
            if not z1 > z0:
                continue
            zm = 0.5 * (z0 + z1)
            qm = q0 + zm * (q1 + zm * q2)
            if qm > level:
                continue
            centers.append(a + zm)
            halves.append(0.5 * (z1 - z0))
            q0s.append(qm)
            q1s.append(q1 + 2.0 * q2 * zm)
            q2s.append(q2)
            seg_idx.append(k)
    idx = np.array(seg_idx, dtype=int)
    c = np.array(centers)
    uval = prep.ua[idx] + prep.us[idx] * (c - prep.a[idx])[:, None]
    return c, np.array(halves), np.array(q0s), np.array(q1s), np.array(q2s), uval, prep.us[idx]


def _evaluate_point(prep: _Prepared, cfg: ViscousConfig, x: float, t: float, shift: float = 0.0):
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    _, _, vmin = minimize_grid(prep.P, [x], t)
    phimin = float(vmin[0])
    level = 0.5 * cfg.truncation_sigmas**2 * cfg.nu
    c, h, q0, q1, q2, uval, uslope = _pieces(prep, x, t, phimin, level)
    if c.size == 0:
        raise QuadratureError(f"empty integration window at x={x}, t={t}")
    moments, err, nint, ok = kernels.hopf_cole_moments(
        c, h, q0 + shift, q1, q2, uval, uslope, prep.scale, 1.0 / cfg.nu, cfg.rel_tol,
        cfg.max_subdivisions,
    )
    if not ok:
        raise QuadratureError(
            f"quadrature did not converge at x={x}, t={t}, nu={cfg.nu}: "
            f"estimated relative error {err:.3g} after {nint} subintervals"
        )
    return moments[1:] / moments[0]


def evaluate_viscous(
    spec: ProblemSpec,
    config: ViscousConfig,
    x: float,
    t: float,
    potential: PotentialFunction | None = None,
    shift: float = 0.0,
) -> np.ndarray:
    """Viscous solution vector ``u^nu(x, t)``.

    ``shift`` is added to the stabilizing exponent offset; the result does not
    depend on it except through rounding (exposed for testing).
    """
    P = build_potential(spec) if potential is None else potential
    return _evaluate_point(_Prepared(spec, P), config, float(x), float(t), shift)


def _thread_count() -> int:
    try:
        return max(1, int(os.environ.get("GENBURGERS_THREADS", "1")))
    except ValueError:
        return 1


def evaluate_viscous_grid(
    spec: ProblemSpec,
    config: ViscousConfig,
    xs,
    t: float,
    potential: PotentialFunction | None = None,
    threads: int | None = None,
) -> FieldSlice:
    """Pointwise :func:`evaluate_viscous` over a sorted grid.

    Points are independent; ``threads`` (default from ``GENBURGERS_THREADS``)
    only changes wall time, never the values.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.size and np.any(np.diff(xs) < 0):
        raise ValueError("grid must be sorted")
    P = build_potential(spec) if potential is None else potential
    prep = _Prepared(spec, P)
    meta = {
        "evaluator": "viscous",
        "nu": config.nu,
        "rel_tol": config.rel_tol,
        "truncation_sigmas": config.truncation_sigmas,
        "max_subdivisions": config.max_subdivisions,
        "backend": kernels.BACKEND,
    }
    if xs.size == 0:
        return FieldSlice(xs, np.empty((0, spec.n)), t, None, meta)

    def one(x):
        try:
            return _evaluate_point(prep, config, float(x), float(t))
        except QuadratureError as exc:
            raise QuadratureError(f"grid point x={x}: {exc}") from exc

    threads = _thread_count() if threads is None else threads
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(one, xs))
    else:
        rows = [one(x) for x in xs]
    return FieldSlice(xs, np.array(rows), t, None, meta)


def measure_weights(
    spec: ProblemSpec,
    config: ViscousConfig,
    x: float,
    t: float,
    nodes,
    potential: PotentialFunction | None = None,
) -> WeightedSample:
    """Discrete Hopf-Cole weights ``exp(-phi(y_i)/nu)``, normalized to sum to one."""
    P = build_potential(spec) if potential is None else potential
    nodes = np.atleast_1d(np.asarray(nodes, dtype=float))
    if nodes.size == 0:
        raise ValueError("need at least one node")
    if np.any(np.diff(nodes) < 0):
        raise ValueError("nodes must be sorted")
    ph = phi(P, x, t, nodes)
    raw = np.exp(-(ph - ph.min()) / config.nu)
    total = raw.sum()
    assert total >= 1.0, "shifted weights cannot all underflow"
    return WeightedSample(nodes, raw / total)
