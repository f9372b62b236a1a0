"""Problem data for the generalized Burgers system and its potential.

Initial profiles are piecewise affine with constant tails.  The advection
speed ``sigma(c, u0)`` is then piecewise affine as well, so its antiderivative
``I`` is an exact piecewise quadratic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

__all__ = [
    "SpecError",
    "PiecewiseProfile",
    "ProblemSpec",
    "PotentialFunction",
    "Segment",
    "as_coefficients",
    "sigma",
    "build_potential",
    "potential_value",
    "load_spec",
    "dump_spec",
]


class SpecError(ValueError):
    """Raised for malformed problem data."""


def _frozen(a: Any) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def as_coefficients(c: Sequence[float]) -> np.ndarray:
    """Validate a coefficient vector and return it as a read-only array."""
    arr = np.atleast_1d(np.asarray(c, dtype=float))
    if arr.ndim != 1 or arr.size < 1:
        raise SpecError("coefficient vector must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        raise SpecError("coefficient vector entries must be finite")
    return _frozen(arr)


def sigma(c: Sequence[float], u: Sequence[float]) -> float:
    """Advection speed ``sum_k c_k u_k``."""
    c = np.asarray(c, dtype=float)
    u = np.asarray(u, dtype=float)
    if c.shape != u.shape:
        raise SpecError(f"dimension mismatch: c has {c.size} entries, u has {u.size}")
    return float(np.dot(c, u))


@dataclass(frozen=True)
class PiecewiseProfile:
    """Piecewise-affine function of x with constant tails.

    ``values[i]`` and ``slopes[i]`` describe the interval
    ``[breakpoints[i], breakpoints[i+1])`` as ``values[i] + slopes[i]*(x - breakpoints[i])``.
    At a breakpoint the profile takes its right limit.
    """

    breakpoints: np.ndarray
    values: np.ndarray
    slopes: np.ndarray
    left_tail: float
    right_tail: float

    def __post_init__(self):
        b = _frozen(np.atleast_1d(self.breakpoints)) if np.size(self.breakpoints) else _frozen([])
        n_int = max(b.size - 1, 0)
        v = _frozen(np.atleast_1d(self.values)) if np.size(self.values) else _frozen([])
        s = self.slopes
        s = _frozen(np.zeros(n_int)) if s is None or np.size(s) == 0 else _frozen(np.atleast_1d(s))
        if v.size == 0 and n_int:
            raise SpecError("interior values are required between breakpoints")
        if v.size != n_int or s.size != n_int:
            raise SpecError(
                f"{b.size} breakpoints need {n_int} values/slopes, got {v.size}/{s.size}"
            )
        if b.size > 1 and not np.all(np.diff(b) > 0):
            raise SpecError("breakpoints must be strictly increasing")
        for arr in (b, v, s):
            if not np.all(np.isfinite(arr)):
                raise SpecError("profile entries must be finite")
        lt, rt = float(self.left_tail), float(self.right_tail)
        if not (np.isfinite(lt) and np.isfinite(rt)):
            raise SpecError("tail values must be finite")
        if b.size == 0 and lt != rt:
            raise SpecError("a profile without breakpoints must have equal tails")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "slopes", s)
        object.__setattr__(self, "left_tail", lt)
        object.__setattr__(self, "right_tail", rt)

    @classmethod
    def constant(cls, a: float) -> PiecewiseProfile:
        return cls(np.empty(0), np.empty(0), np.empty(0), a, a)

    def _eval(self, x: np.ndarray, side: str) -> np.ndarray:
        b = self.breakpoints
        out = np.full(x.shape, self.left_tail)
        if b.size == 0:
            return out
        idx = np.searchsorted(b, x, side=side) - 1
        out[idx >= b.size - 1] = self.right_tail
        inner = (idx >= 0) & (idx < b.size - 1)
        i = idx[inner]
        out[inner] = self.values[i] + self.slopes[i] * (x[inner] - b[i])
        return out

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        out = self._eval(np.atleast_1d(xa), "right")
        return out.reshape(xa.shape) if xa.ndim else float(out[0])

    def left_limit(self, x):
        """Limit from the left; differs from ``self(x)`` only at jumps."""
        xa = np.asarray(x, dtype=float)
        out = self._eval(np.atleast_1d(xa), "left")
        return out.reshape(xa.shape) if xa.ndim else float(out[0])

    def refine(self, breakpoints: Sequence[float]) -> PiecewiseProfile:
        """Same function on a superset of the breakpoints."""
        new = np.union1d(self.breakpoints, np.asarray(breakpoints, dtype=float))
        if new.size == self.breakpoints.size:
            return self
        if new.size < 2:
            return PiecewiseProfile(new, [], [], self.left_tail, self.right_tail)
        lefts = new[:-1]
        vals = self(lefts)
        b = self.breakpoints
        slopes = np.zeros(lefts.size)
        if b.size:
            idx = np.searchsorted(b, lefts, side="right") - 1
            inner = (idx >= 0) & (idx < b.size - 1)
            slopes[inner] = self.slopes[idx[inner]]
        return PiecewiseProfile(new, vals, slopes, self.left_tail, self.right_tail)

    def bounds(self) -> tuple[float, float]:
        """Infimum and supremum over the real line."""
        pts = [self.left_tail, self.right_tail]
        if self.values.size:
            h = np.diff(self.breakpoints)
            pts.extend(self.values)
            pts.extend(self.values + self.slopes * h)
        return float(min(pts)), float(max(pts))

    def to_dict(self) -> dict:
        return {
            "breakpoints": self.breakpoints.tolist(),
            "values": self.values.tolist(),
            "slopes": self.slopes.tolist(),
            "left_tail": self.left_tail,
            "right_tail": self.right_tail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> PiecewiseProfile:
        try:
            return cls(
                d.get("breakpoints", []),
                d.get("values", []),
                d.get("slopes", []),
                d["left_tail"],
                d["right_tail"],
            )
        except KeyError as exc:
            raise SpecError(f"profile is missing field {exc}") from None


def _combine(coeffs: np.ndarray, profiles: Sequence[PiecewiseProfile]) -> PiecewiseProfile:
    return PiecewiseProfile(
        profiles[0].breakpoints,
        sum(ck * p.values for ck, p in zip(coeffs, profiles)),
        sum(ck * p.slopes for ck, p in zip(coeffs, profiles)),
        sum(ck * p.left_tail for ck, p in zip(coeffs, profiles)),
        sum(ck * p.right_tail for ck, p in zip(coeffs, profiles)),
    )


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficient vector ``c`` and one initial profile per component.

    After construction all profiles share the merged breakpoint set and
    ``sigma_profile`` holds the pointwise inner product ``c . u0``.
    """

    c: np.ndarray
    profiles: tuple[PiecewiseProfile, ...]
    sigma_profile: PiecewiseProfile = field(init=False)

    def __post_init__(self):
        c = as_coefficients(self.c)
        profiles = tuple(self.profiles)
        if len(profiles) != c.size:
            raise SpecError(f"{c.size} coefficients but {len(profiles)} profiles")
        merged = np.unique(np.concatenate([p.breakpoints for p in profiles]))
        profiles = tuple(p.refine(merged) for p in profiles)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "profiles", profiles)
        object.__setattr__(self, "sigma_profile", _combine(c, profiles))

    @property
    def n(self) -> int:
        return self.c.size

    @property
    def breakpoints(self) -> np.ndarray:
        return self.sigma_profile.breakpoints

    def u0(self, x) -> np.ndarray:
        """Initial data, shape ``x.shape + (N,)``."""
        return np.stack([p(np.asarray(x, dtype=float)) for p in self.profiles], axis=-1)

    def u0_left(self, x) -> np.ndarray:
        return np.stack([p.left_limit(np.asarray(x, dtype=float)) for p in self.profiles], axis=-1)

    def bounds(self) -> np.ndarray:
        """Per-component ``(min, max)`` of the initial data, shape ``(N, 2)``."""
        return np.array([p.bounds() for p in self.profiles])

    def data_range(self) -> float:
        """Largest per-component oscillation; 1 for constant data."""
        b = self.bounds()
        r = float(np.max(b[:, 1] - b[:, 0]))
        return r if r > 0 else 1.0

    def shifted(self, delta: float) -> ProblemSpec:
        """Data translated by ``delta`` in x."""
        out = []
        for p in self.profiles:
            out.append(
                PiecewiseProfile(
                    p.breakpoints + delta, p.values, p.slopes, p.left_tail, p.right_tail
                )
            )
        return ProblemSpec(self.c, tuple(out))

    def scalar(self) -> ProblemSpec:
        """The N=1 problem whose data is ``sigma(c, u0)``."""
        return ProblemSpec(np.ones(1), (self.sigma_profile,))

    # shapes used by the closed forms

    @classmethod
    def box(cls, c: Sequence[float], u0: Sequence[float], l: float) -> ProblemSpec:
        if not l > 0:
            raise SpecError("box half-width must be positive")
        u0 = np.atleast_1d(np.asarray(u0, dtype=float))
        profs = tuple(PiecewiseProfile([-l, l], [v], [0.0], 0.0, 0.0) for v in u0)
        return cls(c, profs)

    @classmethod
    def riemann(cls, c: Sequence[float], uL: Sequence[float], uR: Sequence[float]) -> ProblemSpec:
        uL = np.atleast_1d(np.asarray(uL, dtype=float))
        uR = np.atleast_1d(np.asarray(uR, dtype=float))
        if uL.shape != uR.shape:
            raise SpecError("uL and uR must have the same length")
        profs = tuple(PiecewiseProfile([0.0], [], [], a, b) for a, b in zip(uL, uR))
        return cls(c, profs)

    @classmethod
    def constant(cls, c: Sequence[float], a: Sequence[float]) -> ProblemSpec:
        a = np.atleast_1d(np.asarray(a, dtype=float))
        return cls(c, tuple(PiecewiseProfile.constant(v) for v in a))

    def as_box(self) -> tuple[float, np.ndarray] | None:
        """``(l, u0)`` if the data is a centred box with zero tails, else None."""
        b = self.breakpoints
        if b.size != 2 or b[0] != -b[1] or b[1] <= 0:
            return None
        u0 = []
        for p in self.profiles:
            if p.left_tail != 0 or p.right_tail != 0 or p.slopes[0] != 0:
                return None
            u0.append(p.values[0])
        return float(b[1]), np.array(u0)

    def as_riemann(self) -> tuple[np.ndarray, np.ndarray] | None:
        """``(uL, uR)`` if the data is a single jump at x=0, else None."""
        b = self.breakpoints
        if b.size > 1 or (b.size == 1 and b[0] != 0.0):
            return None
        uL = np.array([p.left_tail for p in self.profiles])
        uR = np.array([p.right_tail for p in self.profiles])
        return uL, uR

    def to_dict(self) -> dict:
        return {"c": self.c.tolist(), "profiles": [p.to_dict() for p in self.profiles]}

    @classmethod
    def from_dict(cls, d: dict) -> ProblemSpec:
        if "c" not in d:
            raise SpecError("spec is missing field 'c'")
        if "box" in d:
            box = d["box"]
            return cls.box(d["c"], box["u0"], box["l"])
        if "riemann" in d:
            r = d["riemann"]
            return cls.riemann(d["c"], r["uL"], r["uR"])
        if "profiles" not in d:
            raise SpecError("spec needs one of 'profiles', 'box' or 'riemann'")
        return cls(d["c"], tuple(PiecewiseProfile.from_dict(p) for p in d["profiles"]))


def load_spec(path: str | Path) -> ProblemSpec:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecError(f"{path}: invalid JSON ({exc})") from None
    return ProblemSpec.from_dict(data)


def dump_spec(spec: ProblemSpec, path: str | Path) -> None:
    Path(path).write_text(json.dumps(spec.to_dict(), indent=2) + "\n")


@dataclass(frozen=True)
class Segment:
    """One piece of the potential: ``I(y) = I_a + g*(y-a) + 0.5*s*(y-a)**2`` on ``[lo, hi]``."""

    lo: float
    hi: float
    anchor: float
    I_anchor: float
    g: float
    s: float


@dataclass(frozen=True)
class PotentialFunction:
    """Exact piecewise-quadratic antiderivative of the sigma profile, with ``I(0) = 0``.

    ``breakpoints`` always contains 0 and equals ``sigma_profile.breakpoints``.
    ``I_at`` holds the potential at each
    breakpoint.  A limit at infinity is finite only when the corresponding
    tail of the sigma profile vanishes; otherwise it is stored as a signed
    infinity and the ``divergent_*`` flag is set.
    """

    sigma_profile: PiecewiseProfile
    breakpoints: np.ndarray
    I_at: np.ndarray
    I_minus_inf: float
    I_plus_inf: float
    divergent_minus: bool
    divergent_plus: bool

    def __call__(self, y):
        ya = np.asarray(y, dtype=float)
        yy = np.atleast_1d(ya)
        b, Ib = self.breakpoints, self.I_at
        sp = self.sigma_profile
        out = np.empty(yy.shape)
        left = yy < b[0]
        out[left] = Ib[0] + sp.left_tail * (yy[left] - b[0])
        right = yy >= b[-1]
        out[right] = Ib[-1] + sp.right_tail * (yy[right] - b[-1])
        mid = ~(left | right)
        if np.any(mid):
            i = np.searchsorted(b, yy[mid], side="right") - 1
            z = yy[mid] - b[i]
            v, s = sp.values[i], sp.slopes[i]
            out[mid] = Ib[i] + v * z + 0.5 * s * z * z
        return out.reshape(ya.shape) if ya.ndim else float(out[0])

    def segments(self) -> list[Segment]:
        """Pieces in increasing order, tails included (with infinite ends)."""
        b, Ib = self.breakpoints, self.I_at
        sp = self.sigma_profile
        segs = [Segment(-np.inf, b[0], b[0], Ib[0], sp.left_tail, 0.0)]
        for i in range(b.size - 1):
            segs.append(Segment(b[i], b[i + 1], b[i], Ib[i], sp.values[i], sp.slopes[i]))
        segs.append(Segment(b[-1], np.inf, b[-1], Ib[-1], sp.right_tail, 0.0))
        return segs

    def range(self) -> float:
        """``max I - min I`` over the breakpoint hull (excludes the tails)."""
        b = self.breakpoints
        ys = [b]
        for seg in self.segments()[1:-1]:
            if seg.s != 0:
                zv = -seg.g / seg.s
                if 0 < zv < seg.hi - seg.lo:
                    ys.append(np.array([seg.anchor + zv]))
        vals = self(np.concatenate(ys))
        return float(np.max(vals) - np.min(vals))


def build_potential(spec: ProblemSpec) -> PotentialFunction:
    """Antiderivative of ``sigma(c, u0)`` anchored at ``I(0) = 0``."""
    sp = spec.sigma_profile.refine([0.0])
    b = sp.breakpoints
    h = np.diff(b)
    incr = sp.values * h + 0.5 * sp.slopes * h * h
    k0 = int(np.searchsorted(b, 0.0))
    I_at = np.zeros(b.size)
    # accumulate outward from the anchor so that I(0) is exactly zero
    I_at[k0 + 1 :] = np.cumsum(incr[k0:])
    I_at[:k0] = -np.cumsum(incr[:k0][::-1])[::-1]

    div_minus = sp.left_tail != 0.0
    div_plus = sp.right_tail != 0.0
    # I -> -inf*left_tail as y -> -inf
    I_minus = -np.sign(sp.left_tail) * np.inf if div_minus else float(I_at[0])
    I_plus = np.sign(sp.right_tail) * np.inf if div_plus else float(I_at[-1])
    return PotentialFunction(
        sigma_profile=sp,
        breakpoints=_frozen(b),
        I_at=_frozen(I_at),
        I_minus_inf=float(I_minus),
        I_plus_inf=float(I_plus),
        divergent_minus=bool(div_minus),
        divergent_plus=bool(div_plus),
    )


def potential_value(P: PotentialFunction, y: float) -> float:
    return P(float(y))
