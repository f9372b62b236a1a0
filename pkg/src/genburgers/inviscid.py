"""Vanishing-viscosity solution through the variational formula.

The functional ``phi(y) = I(y) + (x - y)**2 / (2t)`` is piecewise quadratic,
so its global minimum is found exactly by enumerating the breakpoints and
the interior vertex of every convex piece.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .field import FieldSlice
from .model import PotentialFunction, ProblemSpec, build_potential

__all__ = [
    "MinimizerResult",
    "ShockPointWarning",
    "minimize_variational",
    "minimize_grid",
    "evaluate_inviscid",
    "evaluate_inviscid_grid",
    "phi",
]

DEFAULT_TIE_TOL = 1e-10


class ShockPointWarning(UserWarning):
    """The minimizer is not unique; the returned value depends on the side convention."""


def phi(P: PotentialFunction, x: float, t: float, y):
    """``I(y) + (x - y)**2 / (2t)``."""
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    y = np.asarray(y, dtype=float)
    out = P(y) + (x - y) ** 2 / (2.0 * t)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class MinimizerResult:
    y_star: float
    value: float
    unique: bool
    y_left: float
    y_right: float
    tie_tol: float


def _segment_arrays(P: PotentialFunction):
    segs = P.segments()
    return tuple(np.array([getattr(s, f) for s in segs]) for f in ("lo", "hi", "anchor", "I_anchor", "g", "s"))


def minimize_grid(P: PotentialFunction, xs, t: float, tie_tol: float = DEFAULT_TIE_TOL):
    """Global minimizers for every x in ``xs``.

    Returns ``(y_left, y_right, value)`` arrays: the extreme minimizers among
    candidates whose value is within ``tie_tol * (1 + |min|)`` of the minimum.
    """
    if not t > 0:
        raise ValueError(f"t must be positive, got {t}")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    b, Ib = P.breakpoints, P.I_at
    lo, hi, a, Ia, g, s = _segment_arrays(P)

    X = xs[:, None]
    Yb = np.broadcast_to(b[None, :], (xs.size, b.size))
    Vb = Ib[None, :] + (X - b[None, :]) ** 2 / (2.0 * t)

    q2 = 0.5 * s + 0.5 / t
    with np.errstate(divide="ignore", invalid="ignore"):
        q1 = g[None, :] - (X - a[None, :]) / t
        zv = -q1 / (2.0 * q2[None, :])
        yv = a[None, :] + zv
        ok = (q2[None, :] > 0) & (yv > lo[None, :]) & (yv < hi[None, :])
        Vv = Ia[None, :] + g[None, :] * zv + 0.5 * s[None, :] * zv * zv + (X - yv) ** 2 / (2.0 * t)
    Vv = np.where(ok, Vv, np.inf)
    Yv = np.where(ok, yv, np.nan)

    Y = np.concatenate([Yb, Yv], axis=1)
    V = np.concatenate([Vb, Vv], axis=1)
    vmin = V.min(axis=1)
    tie = V <= (vmin + tie_tol * (1.0 + np.abs(vmin)))[:, None]
    y_left = np.where(tie, Y, np.inf).min(axis=1)
    y_right = np.where(tie, Y, -np.inf).max(axis=1)
    return y_left, y_right, vmin


def minimize_variational(
    P: PotentialFunction, x: float, t: float, tie_tol: float = DEFAULT_TIE_TOL
) -> MinimizerResult:
    """Exact global minimizer of ``I(y) + (x - y)**2 / (2t)`` over the real line."""
    yl, yr, v = minimize_grid(P, [x], t, tie_tol)
    yl, yr, v = float(yl[0]), float(yr[0]), float(v[0])
    unique = yr - yl <= 4 * np.finfo(float).eps * (1.0 + abs(yl))
    if unique:
        yr = yl
    return MinimizerResult(yl, v, bool(unique), yl, yr, tie_tol)


def _values_at(spec: ProblemSpec, P: PotentialFunction, xs, y, t):
    """Limit of the Hopf-Cole average when the measure concentrates at ``y``.

    Away from breakpoints this is ``u0(y)``.  At a breakpoint where ``phi``
    has a corner, the two one-sided values are weighted by the inverse of the
    one-sided slopes of ``phi``; this produces the rarefaction fans.
    """
    u_right = spec.u0(y)
    at_bp = np.isin(y, P.breakpoints)
    if not np.any(at_bp):
        return u_right
    yb, xb = y[at_bp], xs[at_bp]
    sp = P.sigma_profile
    drift = (yb - xb) / t
    dL = np.minimum(sp.left_limit(yb) + drift, 0.0)
    dR = np.maximum(sp(yb) + drift, 0.0)
    uL, uR = spec.u0_left(yb), u_right[at_bp]
    span = dR - dL
    with np.errstate(invalid="ignore", divide="ignore"):
        w = np.where(span > 0, dR / span, 0.5)[:, None]
    out = u_right.copy()
    out[at_bp] = w * uL + (1.0 - w) * uR
    return out


def _inviscid(spec, P, xs, t, side, tie_tol):
    if side not in ("left", "right", "auto"):
        raise ValueError(f"side must be 'left', 'right' or 'auto', got {side!r}")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    yl, yr, _ = minimize_grid(P, xs, t, tie_tol)
    nonunique = yr - yl > 4 * np.finfo(float).eps * (1.0 + np.abs(yl))
    y = yr if side == "right" else yl
    return _values_at(spec, P, xs, y, t), nonunique


def evaluate_inviscid(
    spec: ProblemSpec,
    P: PotentialFunction | None,
    x: float,
    t: float,
    side: str = "auto",
    tie_tol: float = DEFAULT_TIE_TOL,
) -> np.ndarray:
    """Vanishing-viscosity solution vector at ``(x, t)``.

    ``side`` picks the smallest (``left``/``auto``) or largest (``right``)
    minimizer.  With ``auto`` a :class:`ShockPointWarning` is issued at
    points where the minimizer is not unique.
    """
    P = build_potential(spec) if P is None else P
    u, nonunique = _inviscid(spec, P, [x], t, side, tie_tol)
    if side == "auto" and nonunique[0]:
        warnings.warn(f"minimizer is not unique at x={x}, t={t}", ShockPointWarning, stacklevel=2)
    return u[0]


def evaluate_inviscid_grid(
    spec: ProblemSpec,
    P: PotentialFunction | None,
    xs,
    t: float,
    side: str = "auto",
    tie_tol: float = DEFAULT_TIE_TOL,
) -> FieldSlice:
    P = build_potential(spec) if P is None else P
    xs = np.asarray(xs, dtype=float)
    if xs.size and np.any(np.diff(xs) < 0):
        raise ValueError("grid must be sorted")
    if xs.size == 0:
        return FieldSlice(xs, np.empty((0, spec.n)), t, np.empty(0, bool),
                          {"evaluator": "inviscid", "side": side})
    u, nonunique = _inviscid(spec, P, xs, t, side, tie_tol)
    return FieldSlice(xs, u, t, nonunique, {"evaluator": "inviscid", "side": side, "tie_tol": tie_tol})
