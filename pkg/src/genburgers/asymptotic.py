"""Large-time behaviour: the self-similar viscous profile, support curves and decay fits."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import log_ndtr

from .field import FieldSlice
from .model import PotentialFunction, ProblemSpec, build_potential

__all__ = [
    "AsymptoticInputs",
    "SupportEstimate",
    "DecayFit",
    "similarity_variable",
    "asymptotic_profile",
    "support_curves",
    "sup_norm",
    "decay_rate_fit",
    "support_window",
]


@dataclass(frozen=True)
class AsymptoticInputs:
    I_plus: float
    I_minus: float
    u_plus: np.ndarray
    u_minus: np.ndarray
    nu: float

    def __post_init__(self):
        u_plus = np.atleast_1d(np.asarray(self.u_plus, dtype=float))
        u_minus = np.atleast_1d(np.asarray(self.u_minus, dtype=float))
        if not (math.isfinite(self.I_plus) and math.isfinite(self.I_minus)):
            raise ValueError("the potential must have finite limits at both ends")
        if not self.nu > 0:
            raise ValueError("nu must be positive")
        object.__setattr__(self, "u_plus", u_plus)
        object.__setattr__(self, "u_minus", u_minus)

    @classmethod
    def from_problem(cls, spec: ProblemSpec, nu: float, P: PotentialFunction | None = None):
        P = build_potential(spec) if P is None else P
        if P.divergent_minus or P.divergent_plus:
            raise ValueError(
                "sigma(c, u0) has a nonzero tail, so I(+-inf) diverges and the "
                "large-time profile does not apply"
            )
        u_minus = np.array([p.left_tail for p in spec.profiles])
        u_plus = np.array([p.right_tail for p in spec.profiles])
        return cls(P.I_plus_inf, P.I_minus_inf, u_plus, u_minus, nu)


def similarity_variable(x, t: float, nu: float):
    return np.asarray(x, dtype=float) / math.sqrt(t * nu)


def asymptotic_profile(ai: AsymptoticInputs, x, t: float) -> np.ndarray:
    """Self-similar large-time profile in ``xi = x / sqrt(t nu)``.

    A per-component convex combination of ``u_minus`` and ``u_plus`` with
    weights ``exp(-I(+-inf)/nu)`` times the Gaussian mass on either side of ``xi``.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    xa = np.asarray(x, dtype=float)
    xi = np.atleast_1d(similarity_variable(xa, t, ai.nu))
    lp = -ai.I_plus / ai.nu + log_ndtr(xi)
    lm = -ai.I_minus / ai.nu + log_ndtr(-xi)
    m = np.maximum(lp, lm)
    wp, wm = np.exp(lp - m), np.exp(lm - m)
    frac = (wp / (wp + wm))[:, None]
    out = frac * ai.u_plus[None, :] + (1.0 - frac) * ai.u_minus[None, :]
    return out[0] if xa.ndim == 0 else out


@dataclass(frozen=True)
class SupportEstimate:
    """Left/right support boundaries; both None when the slice is below threshold everywhere."""

    t: float
    s_minus: float | None
    s_plus: float | None
    threshold: float

    @property
    def empty(self) -> bool:
        return self.s_minus is None


def support_curves(slice: FieldSlice, threshold: float) -> SupportEstimate:
    if not threshold > 0:
        raise ValueError("threshold must be positive")
    if slice.x.size > 1 and np.any(np.diff(slice.x) < 0):
        raise ValueError("slice must be sorted in x")
    above = np.flatnonzero(np.any(np.abs(slice.u) > threshold, axis=1))
    if above.size == 0:
        return SupportEstimate(slice.t, None, None, threshold)
    return SupportEstimate(slice.t, float(slice.x[above[0]]), float(slice.x[above[-1]]), threshold)


def sup_norm(slice: FieldSlice) -> np.ndarray:
    if len(slice) == 0:
        raise ValueError("sup norm of an empty slice")
    return np.max(np.abs(slice.u), axis=0)


@dataclass(frozen=True)
class DecayFit:
    exponent: float
    log_intercept: float
    r_squared: float
    window: tuple[float, float]

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "log_intercept": self.log_intercept,
            "r_squared": self.r_squared,
            "window": list(self.window),
        }


def decay_rate_fit(series: Iterable[tuple[float, float]]) -> DecayFit:
    """Least-squares power law ``s ~ C t**exponent`` through ``(t, s)`` pairs."""
    pts = np.asarray(list(series), dtype=float)
    if pts.ndim != 2 or pts.shape[0] < 3:
        raise ValueError("need at least three (t, value) points")
    t, s = pts[:, 0], pts[:, 1]
    if np.any(t <= 0):
        raise ValueError("times must be positive")
    if np.any(s <= 0):
        raise ValueError("values must be positive; the field vanished at some time")
    lt, ls = np.log(t), np.log(s)
    slope, intercept = np.polyfit(lt, ls, 1)
    resid = ls - (slope * lt + intercept)
    ss_res = float(resid @ resid)
    ss_tot = float(((ls - ls.mean()) ** 2).sum())
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return DecayFit(float(slope), float(intercept), min(r2, 1.0), (float(t.min()), float(t.max())))


def support_window(P: PotentialFunction, t: float, nu: float = 0.0, margin: float = 1.0) -> tuple[float, float]:
    """Interval outside which the solution equals the constant tail data.

    For ``x`` beyond the breakpoints by more than ``sqrt(2 t range(I))`` the
    minimizer is ``y = x`` itself.  Needs ``sigma(c, u0)`` to vanish on both
    tails; viscous fields get ``12 sqrt(nu t)`` extra.
    """
    if P.divergent_minus or P.divergent_plus:
        raise ValueError("support window needs sigma(c, u0) to vanish in both tails")
    spread = math.sqrt(2.0 * t * P.range()) + margin + 12.0 * math.sqrt(max(nu, 0.0) * t)
    b = P.breakpoints
    return float(b[0] - spread), float(b[-1] + spread)


def sweep_rows(slices: Sequence[FieldSlice], threshold: float):
    """``(t, sup-norms, support)`` per slice, for the decay/support report."""
    rows = []
    for sl in slices:
        rows.append((sl.t, sup_norm(sl), support_curves(sl, threshold)))
    return rows
