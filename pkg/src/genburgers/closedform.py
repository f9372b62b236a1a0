"""Closed-form solutions for box and Riemann initial data.

``erfc_paper`` is the unnormalized tail integral ``int_y^inf exp(-s^2) ds``
(no ``2/sqrt(pi)`` factor).  The viscous box solution is carried in log
space because its exponential prefactors reach ``exp(sigma0**2 t / 2nu)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import erf, erfc, erfcx

__all__ = [
    "BoxData",
    "RiemannData",
    "LogValue",
    "erfc_paper",
    "log_erfc_paper",
    "log_erfc_diff",
    "erfc_expansion",
    "AB_functions",
    "AB_asymptotic",
    "viscous_box_solution",
    "inviscid_box_solution",
    "riemann_solution",
]

_HALF_SQRT_PI = 0.5 * math.sqrt(math.pi)
_LOG_HALF_SQRT_PI = math.log(_HALF_SQRT_PI)


@dataclass(frozen=True)
class BoxData:
    """Constant data ``u0`` on ``(-l, l)``, zero outside."""

    l: float
    u0: np.ndarray
    c: np.ndarray
    sigma0: float = field(init=False)

    def __post_init__(self):
        if not self.l > 0:
            raise ValueError("box half-width l must be positive")
        u0 = np.atleast_1d(np.asarray(self.u0, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if u0.shape != c.shape:
            raise ValueError("u0 and c must have the same length")
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "sigma0", float(c @ u0))


@dataclass(frozen=True)
class RiemannData:
    uL: np.ndarray
    uR: np.ndarray
    c: np.ndarray
    sigmaL: float = field(init=False)
    sigmaR: float = field(init=False)

    def __post_init__(self):
        uL = np.atleast_1d(np.asarray(self.uL, dtype=float))
        uR = np.atleast_1d(np.asarray(self.uR, dtype=float))
        c = np.atleast_1d(np.asarray(self.c, dtype=float))
        if not (uL.shape == uR.shape == c.shape):
            raise ValueError("uL, uR and c must have the same length")
        object.__setattr__(self, "uL", uL)
        object.__setattr__(self, "uR", uR)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "sigmaL", float(c @ uL))
        object.__setattr__(self, "sigmaR", float(c @ uR))


class LogValue(NamedTuple):
    """A real number stored as ``sign * exp(log)``."""

    sign: float
    log: float

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log) if self.sign else 0.0


def erfc_paper(y):
    """``int_y^inf exp(-s^2) ds``."""
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    out = np.where(y >= 0, _HALF_SQRT_PI * erfcx(pos) * np.exp(-pos * pos), _HALF_SQRT_PI * erfc(y))
    return out if out.ndim else float(out)


def log_erfc_paper(y):
    """``log(erfc_paper(y))``, accurate for large positive ``y``."""
    y = np.asarray(y, dtype=float)
    pos = np.maximum(y, 0.0)
    out = np.where(
        y >= 0,
        _LOG_HALF_SQRT_PI + np.log(erfcx(pos)) - pos * pos,
        np.log(_HALF_SQRT_PI * erfc(np.minimum(y, 0.0))),
    )
    return out if out.ndim else float(out)


def log_erfc_diff(a: float, b: float) -> float:
    """``log(int_a^b exp(-s^2) ds)`` for ``a < b``."""
    if not a < b:
        raise ValueError("need a < b")
    if a >= 0:
        la, lb = log_erfc_paper(a), log_erfc_paper(b)
        return la + math.log(-math.expm1(lb - la))
    if b <= 0:
        return log_erfc_diff(-b, -a)
    return math.log(_HALF_SQRT_PI * (erf(b) + erf(-a)))


def erfc_expansion(y: float, direction: str = "plus") -> float:
    """Two-term large-argument expansion of ``erfc_paper(y)`` (``plus``) or ``erfc_paper(-y)`` (``minus``)."""
    if not y > 0:
        raise ValueError("the expansion needs y > 0")
    tail = (1.0 / (2.0 * y) - 1.0 / (4.0 * y**3)) * math.exp(-y * y)
    if direction == "plus":
        return tail
    if direction == "minus":
        return math.sqrt(math.pi) - tail
    raise ValueError(f"direction must be 'plus' or 'minus', got {direction!r}")


def _prefactor_log(sigma0: float, nu: float, x: float, t: float) -> float:
    return sigma0 * sigma0 * t / (2.0 * nu) - sigma0 * x / nu


def AB_functions(l: float, sigma0: float, nu: float, x: float, t: float) -> tuple[LogValue, LogValue]:
    """``A`` and ``B`` as ``(sign, log|.|)`` pairs.

    ``A = sqrt(2 t nu) exp(sigma0^2 t/(2nu) - sigma0 x/nu) erfc_paper((t sigma0 - x - l)/sqrt(2 t nu))``;
    ``B`` is the same with ``+l``.  Both are positive.
    """
    if not (t > 0 and nu > 0):
        raise ValueError("t and nu must be positive")
    s = math.sqrt(2.0 * t * nu)
    base = math.log(s) + _prefactor_log(sigma0, nu, x, t)
    A = LogValue(1.0, base + log_erfc_paper((t * sigma0 - x - l) / s))
    B = LogValue(1.0, base + log_erfc_paper((t * sigma0 - x + l) / s))
    return A, B


def _asymptotic_one(edge: float, sigma0: float, nu: float, x: float, t: float) -> LogValue:
    d = t * sigma0 - x + edge
    E = _prefactor_log(sigma0, nu, x, t)
    # exp(E - z^2) written out; the Gaussian keeps its shift by the box edge
    gauss = -(sigma0 * edge + (x - edge) ** 2 / (2.0 * t)) / nu
    if d > 0:
        return LogValue(1.0, math.log(t * nu / d) + gauss)
    if d == 0:
        return LogValue(1.0, 0.5 * math.log(math.pi * t * nu / 2.0) + E)
    lead = 0.5 * math.log(2.0 * math.pi * t * nu) + E
    ratio = (t * nu / -d) * math.exp(gauss - lead)
    if ratio >= 1.0:
        return LogValue(-1.0, math.log(t * nu / -d) + gauss + math.log1p(-1.0 / ratio))
    return LogValue(1.0, lead + math.log1p(-ratio))


def AB_asymptotic(l: float, sigma0: float, nu: float, x: float, t: float) -> tuple[LogValue, LogValue]:
    """Leading small-``nu`` approximations of ``A`` and ``B``.

    Three branches according to the sign of ``t sigma0 - x -+ l``, obtained
    from the two-term tail expansion of ``erfc_paper``.
    """
    return _asymptotic_one(-l, sigma0, nu, x, t), _asymptotic_one(l, sigma0, nu, x, t)


def _logsumexp(vals: Sequence[float]) -> float:
    m = max(vals)
    return m + math.log(sum(math.exp(v - m) for v in vals))


def viscous_box_solution(bd: BoxData, nu: float, x: float, t: float) -> np.ndarray:
    """Viscous solution for box data, in closed form.

    ``u = u0 (A - B) / (exp(sigma0 l/nu) (sqrt(2 pi t nu) - A_0) + (A - B) + exp(-sigma0 l/nu) B_0)``
    where ``A_0, B_0`` are ``A, B`` with ``sigma0 = 0``.  The three
    denominator terms are the Gaussian masses left of, inside, and right of
    the box, each weighted by ``exp(-I/nu)``.
    """
    if not (t > 0 and nu > 0):
        raise ValueError("t and nu must be positive")
    l, s0 = bd.l, bd.sigma0
    s = math.sqrt(2.0 * t * nu)
    log_s = math.log(s)
    mid = log_s + _prefactor_log(s0, nu, x, t) + log_erfc_diff((t * s0 - x - l) / s, (t * s0 - x + l) / s)
    left = s0 * l / nu + log_s + log_erfc_paper((x + l) / s)
    right = -s0 * l / nu + log_s + log_erfc_paper((l - x) / s)
    frac = math.exp(mid - _logsumexp([left, mid, right]))
    return bd.u0 * frac


def _as_grid(x):
    xa = np.asarray(x, dtype=float)
    return xa, np.atleast_1d(xa)


def inviscid_box_solution(bd: BoxData, x, t: float) -> np.ndarray:
    """Vanishing-viscosity solution for box data.

    Regions are half-open ``[a, b)``, so boundary points take the value of
    the region to their right.  For ``sigma0 > 0`` a fan leaves ``-l`` and a
    shock leaves ``+l``; they meet at ``t = 4 l / sigma0``, after which the
    shock sits at ``-l + sqrt(4 l sigma0 t)``.  ``sigma0 < 0`` is the mirror image.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    xa, xs = _as_grid(x)
    l, s0 = bd.l, bd.sigma0
    frac = np.zeros(xs.shape)
    if s0 == 0:
        frac[(xs >= -l) & (xs < l)] = 1.0
    elif s0 > 0:
        fan = (xs + l) / (s0 * t)
        if t < 4 * l / s0:
            in_fan = (xs >= -l) & (xs < s0 * t - l)
            plateau = (xs >= s0 * t - l) & (xs < 0.5 * s0 * t + l)
            frac[plateau] = 1.0
        else:
            in_fan = (xs >= -l) & (xs < -l + math.sqrt(4 * l * s0 * t))
        frac[in_fan] = fan[in_fan]
    else:
        fan = (xs - l) / (s0 * t)
        if t < -4 * l / s0:
            in_fan = (xs >= s0 * t + l) & (xs < l)
            plateau = (xs >= 0.5 * s0 * t - l) & (xs < s0 * t + l)
            frac[plateau] = 1.0
        else:
            in_fan = (xs >= l - math.sqrt(-4 * l * s0 * t)) & (xs < l)
        frac[in_fan] = fan[in_fan]
    out = frac[:, None] * bd.u0[None, :]
    return out[0] if xa.ndim == 0 else out


def riemann_solution(rd: RiemannData, x, t: float) -> np.ndarray:
    """Vanishing-viscosity solution for a single jump at the origin.

    Rarefaction when ``sigmaL < sigmaR``, contact when equal, shock at speed
    ``(sigmaL + sigmaR)/2`` otherwise, with the mean state on the shock line.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    xa, xs = _as_grid(x)
    sL, sR = rd.sigmaL, rd.sigmaR
    uL, uR = rd.uL[None, :], rd.uR[None, :]
    X = xs[:, None]
    if sL < sR:
        fan = (uR - uL) / (sR - sL) * (X / t) + (uL * sR - uR * sL) / (sR - sL)
        out = np.where(X <= sL * t, uL, np.where(X >= sR * t, uR, fan))
    elif sL == sR:
        out = np.where(X < sL * t, uL, uR)
    else:
        shock = 0.5 * (sL + sR) * t
        out = np.where(X < shock, uL, np.where(X > shock, uR, 0.5 * (uL + uR)))
    out = np.asarray(out, dtype=float)
    return out[0] if xa.ndim == 0 else out
