"""Evaluator dispatch, slice comparison and time sweeps shared by the CLI and the checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .asymptotic import (
    AsymptoticInputs,
    DecayFit,
    SupportEstimate,
    asymptotic_profile,
    decay_rate_fit,
    support_curves,
    support_window,
    sup_norm,
)
from .closedform import BoxData, RiemannData, inviscid_box_solution, riemann_solution, viscous_box_solution
from .field import FieldSlice
from .inviscid import DEFAULT_TIE_TOL, evaluate_inviscid_grid
from .model import ProblemSpec, build_potential
from .oracle import FDConfig, solve_fd
from .viscous import ViscousConfig, evaluate_viscous_grid

__all__ = [
    "EVALUATORS",
    "UsageError",
    "parse_grid",
    "evaluate_field",
    "compare_slices",
    "SweepResult",
    "run_sweep",
]

EVALUATORS = ("viscous", "inviscid", "box", "riemann", "profile", "fd")


class UsageError(ValueError):
    """Inputs that do not fit the chosen evaluator (missing nu, wrong data shape, ...)."""


def parse_grid(text: str) -> np.ndarray:
    """Parse ``min:max:step``; ``max`` is included when it lies within half a step of the last point."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must look like min:max:step, got {text!r}")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise UsageError(f"grid entries must be numbers, got {text!r}") from None
    if not (math.isfinite(lo) and math.isfinite(hi) and math.isfinite(step)):
        raise UsageError("grid entries must be finite")
    if not step > 0:
        raise UsageError("grid step must be positive")
    if hi < lo:
        raise UsageError("grid max must not be below grid min")
    n = int(math.floor((hi - lo) / step + 0.5 + 1e-9))
    return lo + step * np.arange(n + 1)


def _box_data(spec: ProblemSpec) -> BoxData:
    box = spec.as_box()
    if box is None:
        raise UsageError("the box evaluator needs constant data on a centred interval (-l, l)")
    return BoxData(box[0], box[1], spec.c)


def _riemann_data(spec: ProblemSpec) -> RiemannData:
    r = spec.as_riemann()
    if r is None:
        raise UsageError("the riemann evaluator needs a single jump at x = 0")
    return RiemannData(r[0], r[1], spec.c)


def _uniform(xs: np.ndarray) -> bool:
    if xs.size < 3:
        return False
    d = np.diff(xs)
    return bool(np.allclose(d, d[0], rtol=1e-9, atol=0))


def evaluate_field(
    spec: ProblemSpec,
    evaluator: str,
    xs,
    t: float,
    nu: float | None = None,
    *,
    side: str = "auto",
    tie_tol: float = DEFAULT_TIE_TOL,
    rel_tol: float = 1e-9,
) -> FieldSlice:
    """Sample one evaluator on the grid ``xs`` at time ``t``.

    ``box`` uses the viscous closed form when ``nu`` is given and the
    inviscid one otherwise.  ``fd`` needs a uniform grid and runs the
    finite-difference solver on exactly that grid.
    """
    if evaluator not in EVALUATORS:
        raise UsageError(f"unknown evaluator {evaluator!r}; choose from {', '.join(EVALUATORS)}")
    if not t > 0:
        raise UsageError("t must be positive")
    xs = np.asarray(xs, dtype=float)
    needs_nu = evaluator in ("viscous", "profile", "fd")
    if needs_nu and nu is None:
        raise UsageError(f"the {evaluator} evaluator needs --nu")
    if nu is not None and not nu > 0:
        raise UsageError("nu must be positive")
    if evaluator == "riemann" and nu is not None:
        raise UsageError("the riemann evaluator is inviscid; drop --nu")
    if evaluator == "inviscid" and nu is not None:
        raise UsageError("the inviscid evaluator takes no --nu")

    if evaluator == "viscous":
        return evaluate_viscous_grid(spec, ViscousConfig(nu, rel_tol=rel_tol), xs, t)
    if evaluator == "inviscid":
        return evaluate_inviscid_grid(spec, None, xs, t, side=side, tie_tol=tie_tol)
    if evaluator == "box":
        bd = _box_data(spec)
        if nu is None:
            return FieldSlice(xs, inviscid_box_solution(bd, xs, t).reshape(xs.size, -1), t, None,
                              {"evaluator": "box"})
        rows = [viscous_box_solution(bd, nu, float(x), t) for x in xs]
        u = np.array(rows).reshape(xs.size, spec.n)
        return FieldSlice(xs, u, t, None, {"evaluator": "box", "nu": nu})
    if evaluator == "riemann":
        rd = _riemann_data(spec)
        return FieldSlice(xs, riemann_solution(rd, xs, t).reshape(xs.size, -1), t, None,
                          {"evaluator": "riemann"})
    if evaluator == "profile":
        ai = AsymptoticInputs.from_problem(spec, nu)
        return FieldSlice(xs, asymptotic_profile(ai, xs, t).reshape(xs.size, -1), t, None,
                          {"evaluator": "profile", "nu": nu})
    # fd
    if not _uniform(xs):
        raise UsageError("the fd evaluator needs a uniform grid with at least 3 points")
    return solve_fd(spec, nu, FDConfig(float(xs[0]), float(xs[-1]), xs.size, t))


def _trapezoid_weights(x: np.ndarray) -> np.ndarray:
    w = np.zeros(x.size)
    if x.size > 1:
        d = np.diff(x)
        w[:-1] += 0.5 * d
        w[1:] += 0.5 * d
    return w


def compare_slices(a: FieldSlice, b: FieldSlice) -> dict:
    """Per-component L-inf and dx-weighted L1 gaps plus the location of the largest gap."""
    if a.x.shape != b.x.shape:
        raise ValueError(f"grid mismatch: {a.x.size} vs {b.x.size} points")
    scale = max(1.0, float(np.max(np.abs(a.x))) if a.x.size else 1.0)
    if a.x.size and np.max(np.abs(a.x - b.x)) > 1e-12 * scale:
        raise ValueError("grid mismatch: x coordinates differ")
    if a.n != b.n:
        raise ValueError(f"component mismatch: {a.n} vs {b.n}")
    if a.x.size == 0:
        raise ValueError("cannot compare empty slices")
    gap = np.abs(a.u - b.u)
    w = _trapezoid_weights(a.x)
    i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
    return {
        "n_points": int(a.x.size),
        "linf": gap.max(axis=0).tolist(),
        "l1": (w @ gap).tolist(),
        "max_gap": float(gap[i, j]),
        "max_gap_x": float(a.x[i]),
        "max_gap_component": int(j + 1),
    }


@dataclass
class SweepResult:
    times: list[float]
    sup: np.ndarray
    support: list[SupportEstimate]
    decay: list[DecayFit | None]
    spread: DecayFit | None
    width: DecayFit | None
    notes: list[str] = field(default_factory=list)

    def to_csv(self) -> str:
        from .field import format_number

        n = self.sup.shape[1]
        lines = [",".join(["t"] + [f"sup_u{j + 1}" for j in range(n)] + ["s_minus", "s_plus"])]
        for k, t in enumerate(self.times):
            s = self.support[k]
            row = [format_number(t)] + [format_number(v) for v in self.sup[k]]
            row += ["" if s.empty else format_number(s.s_minus), "" if s.empty else format_number(s.s_plus)]
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def summary(self) -> dict:
        def fit(f):
            return None if f is None else f.to_dict()

        return {
            "times": self.times,
            "decay": [fit(f) for f in self.decay],
            "spread": fit(self.spread),
            "support_width": fit(self.width),
            "notes": self.notes,
        }


def _try_fit(pairs, label: str, notes: list[str]) -> DecayFit | None:
    try:
        return decay_rate_fit(pairs)
    except ValueError as exc:
        notes.append(f"{label}: {exc}")
        return None


def run_sweep(
    spec: ProblemSpec,
    evaluator: str,
    times: Sequence[float],
    nu: float | None = None,
    xs=None,
    dx: float = 1e-2,
    threshold: float | None = None,
) -> SweepResult:
    """Sup norms and support edges over a list of times, with power-law fits.

    Without ``xs`` each time gets its own grid of step ``dx`` covering the
    region where the field can differ from its tail values.  The spread fit
    uses ``s_plus - b`` with ``b`` the rightmost breakpoint; the width fit
    uses ``s_plus - s_minus``.
    """
    times = [float(t) for t in times]
    if len(times) == 0:
        raise UsageError("need at least one time")
    if any(b <= a for a, b in zip(times, times[1:])):
        raise UsageError("times must be strictly increasing")
    threshold = 1e-9 * spec.data_range() if threshold is None else threshold
    P = build_potential(spec) if xs is None else None
    sups, supports = [], []
    for t in times:
        if xs is None:
            lo, hi = support_window(P, t, nu or 0.0)
            grid = lo + dx * np.arange(int(math.ceil((hi - lo) / dx)) + 1)
        else:
            grid = np.asarray(xs, dtype=float)
        sl = evaluate_field(spec, evaluator, grid, t, nu)
        sups.append(sup_norm(sl))
        supports.append(support_curves(sl, threshold))
    sup = np.array(sups)
    notes: list[str] = []
    decay = [_try_fit(zip(times, sup[:, j]), f"decay u{j + 1}", notes) for j in range(sup.shape[1])]
    spread = width = None
    if len(times) >= 3:
        if any(s.empty for s in supports):
            notes.append("support empty at some time; no spread fit")
        else:
            edge = float(spec.breakpoints[-1]) if spec.breakpoints.size else 0.0
            spread = _try_fit([(t, s.s_plus - edge) for t, s in zip(times, supports)], "spread", notes)
            width = _try_fit([(t, s.s_plus - s.s_minus) for t, s in zip(times, supports)], "width", notes)
    else:
        notes.append("fewer than three times; no fits")
    return SweepResult(times, sup, supports, decay, spread, width, notes)
