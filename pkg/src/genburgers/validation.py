"""End-to-end numerical checks of the evaluators against each other.

Each ``check_*`` function runs one study at a fixed tolerance and returns a
:class:`CheckResult`; ``run_all`` runs every check.  The CLI ``report``
subcommand and the acceptance tests both call these.
"""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .asymptotic import AsymptoticInputs, asymptotic_profile, decay_rate_fit, support_curves, support_window, sup_norm
from .closedform import BoxData, RiemannData, inviscid_box_solution, riemann_solution, viscous_box_solution
from .inviscid import ShockPointWarning, evaluate_inviscid, evaluate_inviscid_grid, minimize_grid, phi
from .model import PiecewiseProfile, ProblemSpec, build_potential
from .oracle import FDConfig, burgers_residual, solve_fd
from .studies import run_sweep
from .viscous import ViscousConfig, evaluate_viscous, evaluate_viscous_grid, measure_weights

__all__ = ["CheckResult", "CHECKS", "run_all", "random_spec"]


@dataclass
class CheckResult:
    key: str
    title: str
    passed: bool
    summary: str
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.key} {self.title}: {self.summary}"

    def to_dict(self) -> dict:
        return {
            "key": self.key,
            "title": self.title,
            "passed": self.passed,
            "summary": self.summary,
            "values": self.values,
            "seconds": self.seconds,
        }


def _decreasing(vals) -> bool:
    return all(b < a for a, b in zip(vals, vals[1:]))


def _unit_box() -> ProblemSpec:
    return ProblemSpec.box([1.0], [1.0], 1.0)


def check_box_formula() -> CheckResult:
    """Adaptive quadrature of the measure formula vs the box closed form."""
    spec = _unit_box()
    bd = BoxData(1.0, [1.0], [1.0])
    xs = np.linspace(-5.0, 5.0, 201)
    worst = 0.0
    gaps = {}
    for nu in (1.0, 0.5, 0.1):
        for t in (0.5, 2.0):
            quadr = evaluate_viscous_grid(spec, ViscousConfig(nu), xs, t).u[:, 0]
            closed = np.array([viscous_box_solution(bd, nu, x, t)[0] for x in xs])
            g = float(np.max(np.abs(quadr - closed)) / np.max(np.abs(closed)))
            gaps[f"nu={nu},t={t}"] = g
            worst = max(worst, g)
    return CheckResult("1", "box closed form vs measure quadrature", worst <= 1e-6,
                       f"max relative L-inf gap {worst:.3g} (tol 1e-06)", {"gaps": gaps, "worst": worst})


def fd_gap(nx: int, nu: float = 0.1, t: float = 1.0) -> float:
    spec = _unit_box()
    fd = solve_fd(spec, nu, FDConfig(-20.0, 20.0, nx, t))
    exact = evaluate_viscous_grid(spec, ViscousConfig(nu), fd.x, t)
    return float(np.max(np.abs(fd.u - exact.u)))


def check_fd_oracle() -> CheckResult:
    """Finite differences vs the exact viscous solution, and first-order convergence."""
    g1 = fd_gap(4001)
    g2 = fd_gap(8001)
    ratio = g1 / g2
    ok_gap = g1 <= 1e-2
    ok_ratio = ratio >= 1.7
    return CheckResult(
        "2", "finite-difference cross-check", ok_gap and ok_ratio,
        f"L-inf gap {g1:.4g} at nx=4001 (tol 1e-02: {'ok' if ok_gap else 'FAIL'}); "
        f"halving dx ratio {ratio:.3f} (need >= 1.7: {'ok' if ok_ratio else 'FAIL'})",
        {"gap_4001": g1, "gap_8001": g2, "ratio": ratio, "gap_ok": ok_gap, "ratio_ok": ok_ratio},
    )


def _box_cases():
    # (c, u0, l, t): both signs of sigma0, before and after the fan meets the shock
    return [
        ([1.0], [1.0], 1.0, 2.0),
        ([1.0], [1.0], 1.0, 9.0),
        ([1.0], [-1.0], 1.0, 2.0),
        ([1.0], [-1.0], 1.0, 9.0),
        ([1.0, 1.0], [1.0, -1.0], 1.0, 3.0),
        ([0.5, -1.0], [2.0, 0.25], 0.7, 1.3),
        ([0.5, -1.0], [-2.0, 0.75], 1.5, 20.0),
    ]


def _box_jumps(bd: BoxData, t: float) -> list[float]:
    l, s0 = bd.l, bd.sigma0
    if s0 == 0:
        return [-l, l]
    if s0 > 0:
        return [0.5 * s0 * t + l] if t < 4 * l / s0 else [-l + math.sqrt(4 * l * s0 * t)]
    return [0.5 * s0 * t - l] if t < -4 * l / s0 else [l - math.sqrt(-4 * l * s0 * t)]


def _riemann_cases():
    return [
        ([1.0], [0.0], [1.0], 1.0),
        ([1.0], [1.0], [0.0], 2.0),
        ([1.0, 2.0], [1.0, -0.5], [-1.0, 1.5], 1.5),
        ([1.0, 2.0], [-1.0, 1.5], [1.0, -0.5], 0.8),
        ([1.0, -1.0], [1.0, 1.0], [2.0, 2.0], 1.0),
    ]


def _random_continuity_points(rng, n, lo, hi, jumps, gap=1e-6):
    out = []
    while len(out) < n:
        x = rng.uniform(lo, hi)
        if all(abs(x - j) > gap for j in jumps):
            out.append(x)
    return np.array(out)


def check_variational_closed_forms(n_points: int = 1000, seed: int = 7) -> CheckResult:
    """Exact minimization vs the box and Riemann piecewise formulas."""
    rng = np.random.default_rng(seed)
    worst = {"box": 0.0, "riemann": 0.0}
    box_cases, riem_cases = _box_cases(), _riemann_cases()
    per_box = np.full(len(box_cases), n_points // len(box_cases))
    per_box[: n_points % len(box_cases)] += 1
    for (c, u0, l, t), k in zip(box_cases, per_box):
        spec = ProblemSpec.box(c, u0, l)
        P = build_potential(spec)
        bd = BoxData(l, u0, c)
        reach = abs(bd.sigma0) * t + 2 * l + math.sqrt(4 * l * abs(bd.sigma0) * t) + 1
        xs = _random_continuity_points(rng, k, -reach, reach, _box_jumps(bd, t))
        ref = inviscid_box_solution(bd, xs, t)
        got = np.array([evaluate_inviscid(spec, P, x, t) for x in xs])
        worst["box"] = max(worst["box"], float(np.max(np.abs(got - ref))))
    per_r = np.full(len(riem_cases), n_points // len(riem_cases))
    per_r[: n_points % len(riem_cases)] += 1
    for (c, uL, uR, t), k in zip(riem_cases, per_r):
        spec = ProblemSpec.riemann(c, uL, uR)
        P = build_potential(spec)
        rd = RiemannData(uL, uR, c)
        if rd.sigmaL > rd.sigmaR:
            jumps = [0.5 * (rd.sigmaL + rd.sigmaR) * t]
        elif rd.sigmaL == rd.sigmaR:
            jumps = [rd.sigmaL * t]
        else:
            jumps = []
        reach = max(abs(rd.sigmaL), abs(rd.sigmaR)) * t + 1
        xs = _random_continuity_points(rng, k, -reach, reach, jumps)
        ref = riemann_solution(rd, xs, t)
        got = np.array([evaluate_inviscid(spec, P, x, t) for x in xs])
        worst["riemann"] = max(worst["riemann"], float(np.max(np.abs(got - ref))))
    ok = max(worst.values()) <= 1e-8
    return CheckResult("3", "variational formula vs closed forms", ok,
                       f"max gap box {worst['box']:.3g}, riemann {worst['riemann']:.3g} "
                       f"over {n_points} points each (tol 1e-08)", worst)


def limit_points() -> np.ndarray:
    """50 points of [-3, 4] at least 0.3 away from where the t=2 unit-box solution is not smooth."""
    cand = np.linspace(-3.0, 4.0, 701)
    rough = np.array([-1.0, 1.0, 2.0])
    keep = cand[np.min(np.abs(cand[:, None] - rough[None, :]), axis=1) >= 0.3]
    return keep[np.linspace(0, keep.size - 1, 50).round().astype(int)]


def check_vanishing_viscosity() -> CheckResult:
    spec = _unit_box()
    P = build_potential(spec)
    xs = limit_points()
    t = 2.0
    u0 = evaluate_inviscid_grid(spec, P, xs, t).u
    gaps = []
    for nu in (0.2, 0.1, 0.05, 0.025):
        v = evaluate_viscous_grid(spec, ViscousConfig(nu), xs, t, P).u
        gaps.append(float(np.max(np.abs(v - u0))))
    ok = _decreasing(gaps) and gaps[-1] <= 0.05
    return CheckResult("4", "vanishing-viscosity limit", ok,
                       "max gap over nu=0.2,0.1,0.05,0.025: " + ", ".join(f"{g:.4f}" for g in gaps)
                       + " (decreasing, last <= 0.05)", {"gaps": gaps})


def two_state_spec() -> ProblemSpec:
    """N=2, c=(1,1): u1 = 1_{x>0} + 1_{(-1,1)}, u2 = -1_{x>0}; sigma is the unit box."""
    p1 = PiecewiseProfile([-1.0, 0.0, 1.0], [1.0, 2.0], [0.0, 0.0], 0.0, 1.0)
    p2 = PiecewiseProfile([0.0], [], [], 0.0, -1.0)
    return ProblemSpec([1.0, 1.0], (p1, p2))


def check_large_time_profile() -> CheckResult:
    spec = two_state_spec()
    nu = 1.0
    P = build_potential(spec)
    ai = AsymptoticInputs.from_problem(spec, nu, P)
    xi = np.linspace(-20.0, 20.0, 801)
    gaps = []
    for t in (1e2, 1e3, 1e4):
        x = xi * math.sqrt(t * nu)
        v = evaluate_viscous_grid(spec, ViscousConfig(nu), x, t, P).u
        gaps.append(float(np.max(np.abs(v - asymptotic_profile(ai, x, t)))))
    ok = _decreasing(gaps) and gaps[-1] <= 0.01
    return CheckResult("5", "large-time self-similar profile", ok,
                       "sup gap at t=1e2,1e3,1e4: " + ", ".join(f"{g:.4g}" for g in gaps)
                       + " (decreasing, last <= 0.01)", {"gaps": gaps})


def check_decay() -> CheckResult:
    flat = ProblemSpec.box([1.0, 1.0], [1.0, -1.0], 1.0)
    ts_flat = [1.0, 10.0, 100.0, 1000.0, 10000.0]
    sw = run_sweep(flat, "inviscid", ts_flat)
    dev = float(np.max(np.abs(sw.sup - np.array([1.0, 1.0])[None, :])))
    decaying = run_sweep(_unit_box(), "inviscid", [100.0, 200.0, 500.0, 1000.0, 2000.0, 5000.0, 10000.0])
    expo = decaying.decay[0].exponent
    ok_flat = dev <= 1e-6
    ok_exp = abs(expo + 0.5) <= 0.02
    return CheckResult("6", "decay dichotomy", ok_flat and ok_exp,
                       f"sigma0=0 sup-norm deviation {dev:.3g} (tol 1e-06); "
                       f"sigma0=1 fitted exponent {expo:.4f} (-0.5 +- 0.02)",
                       {"flat_deviation": dev, "exponent": expo})


def check_support_spread(h: float = 1e-3) -> CheckResult:
    """Measured right support edge of the inviscid unit box against ``l + sqrt(4 l sigma0 t)``."""
    spec = _unit_box()
    P = build_potential(spec)
    l = s0 = 1.0
    times = [9.0, 100.0, 900.0]
    s_plus, offsets, offsets_alt = [], [], []
    for t in times:
        lo, hi = support_window(P, t)
        xs = lo + h * np.arange(int(math.ceil((hi - lo) / h)) + 1)
        est = support_curves(evaluate_inviscid_grid(spec, P, xs, t), 1e-9)
        s_plus.append(est.s_plus)
        offsets.append(abs(est.s_plus - (l + math.sqrt(4 * l * s0 * t))))
        offsets_alt.append(abs(est.s_plus - (-l + math.sqrt(4 * l * s0 * t))))
    fit = decay_rate_fit([(t, s - l) for t, s in zip(times, s_plus)])
    ok_edge = max(offsets) <= 2 * h
    ok_fit = abs(fit.exponent - 0.5) <= 0.02
    return CheckResult(
        "7", "support spread", ok_edge and ok_fit,
        f"s_plus at t=9,100,900: {', '.join(f'{s:.4f}' for s in s_plus)}; "
        f"max offset from l+sqrt(4 l s0 t) {max(offsets):.4g} (tol {2 * h:g}); "
        f"fit of log(s_plus - l) exponent {fit.exponent:.4f} (0.5 +- 0.02); "
        f"offset from -l+sqrt(4 l s0 t) {max(offsets_alt):.2g}",
        {"s_plus": s_plus, "offsets": offsets, "offsets_from_minus_l": offsets_alt,
         "exponent": fit.exponent, "edge_ok": ok_edge, "fit_ok": ok_fit},
    )


# randomized property suite


def random_spec(rng: np.random.Generator, max_n: int = 3, max_breaks: int = 6) -> ProblemSpec:
    """Random piecewise-affine data with 1..max_n components and 1..max_breaks breakpoints."""
    n = int(rng.integers(1, max_n + 1))
    nb = int(rng.integers(1, max_breaks + 1))
    while True:
        b = np.sort(rng.uniform(-3.0, 3.0, nb))
        if nb == 1 or np.min(np.diff(b)) > 0.05:
            break
    c = rng.uniform(-1.0, 1.0, n)
    profiles = []
    for _ in range(n):
        vals = rng.uniform(-1.5, 1.5, nb - 1)
        slopes = rng.uniform(-1.0, 1.0, nb - 1) * (rng.random(nb - 1) < 0.5)
        tails = rng.uniform(-1.5, 1.5, 2) * (rng.random(2) < 0.7)
        profiles.append(PiecewiseProfile(b, vals, slopes, tails[0], tails[1]))
    return ProblemSpec(c, tuple(profiles))


def hopf_reference(spec: ProblemSpec, nu: float, x: float, t: float) -> float:
    """Scalar Hopf-Cole average by scipy ``quad`` on each piece of the data."""
    assert spec.n == 1
    P = build_potential(spec)
    _, _, vmin = minimize_grid(P, np.array([x]), t)
    pm = float(vmin[0])
    prof = spec.profiles[0]

    def w(y):
        return math.exp(-(phi(P, x, t, y) - pm) / nu)

    def wu(y):
        return w(y) * float(prof(y))

    edges = [-math.inf, *P.breakpoints.tolist(), math.inf]
    den = num = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        den += quad(w, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
        num += quad(wu, a, b, epsabs=0, epsrel=1e-12, limit=200)[0]
    return num / den


def _property_failures(spec: ProblemSpec, rng: np.random.Generator) -> dict[str, str]:
    """Run every property on one spec; returns ``{property: message}`` for failures."""
    fails = {}
    nu = float(rng.uniform(0.05, 1.0))
    t = float(rng.uniform(0.2, 3.0))
    x = float(rng.uniform(-4.0, 4.0))
    cfg = ViscousConfig(nu)
    P = build_potential(spec)
    scale = spec.data_range()
    bounds = spec.bounds()
    u = evaluate_viscous(spec, cfg, x, t, P)

    # convex-combination bounds (viscous and inviscid)
    slack = 1e-12 * max(1.0, float(np.max(np.abs(bounds))))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShockPointWarning)
        ui = evaluate_inviscid(spec, P, x, t)
    for name, val in (("viscous", u), ("inviscid", ui)):
        if np.any(val < bounds[:, 0] - slack) or np.any(val > bounds[:, 1] + slack):
            fails["bounds"] = f"{name} value {val} outside {bounds.tolist()} at x={x}, t={t}"

    # measure normalization: a passive constant component averages to exactly 1
    ext = ProblemSpec(np.append(spec.c, 0.0), spec.profiles + (PiecewiseProfile.constant(1.0),))
    ue = evaluate_viscous(ext, cfg, x, t)
    if abs(ue[-1] - 1.0) > 1e-12 or np.max(np.abs(ue[:-1] - u)) > 1e-9 * scale:
        fails["normalization"] = f"passive unit component gave {ue[-1]!r}"
    nodes = np.linspace(x - 5.0, x + 5.0, 401)
    ws = measure_weights(spec, cfg, x, t, nodes, P)
    if np.any(ws.weights < 0) or abs(ws.weights.sum() - 1.0) > 1e-12:
        fails["normalization"] = "discrete weights are not a probability vector"

    # N=1 Hopf reduction and sigma-compatibility
    scalar = spec.scalar()
    us = evaluate_viscous(scalar, cfg, x, t)[0]
    sscale = max(1.0, scalar.data_range())
    ref = hopf_reference(scalar, nu, x, t)
    if abs(us - ref) > 1e-7 * sscale:
        fails["hopf"] = f"scalar value {us!r} vs scipy quad {ref!r}"
    if abs(float(spec.c @ u) - us) > 1e-8 * sscale:
        fails["sigma"] = f"c.u = {float(spec.c @ u)!r} but scalar solution is {us!r}"
    xs = np.linspace(x - 1.0, x + 1.0, 41)
    dt = 1e-3
    hist = [evaluate_viscous_grid(spec, cfg, xs, t + k * dt, P) for k in range(3)]
    hist_s = [evaluate_viscous_grid(scalar, cfg, xs, t + k * dt) for k in range(3)]
    r_sys = burgers_residual(hist, spec.c, nu)
    r_scalar = burgers_residual(hist_s, [1.0], nu)
    if r_sys > 10.0 * max(r_scalar, 1e-12):
        fails["sigma"] = f"Burgers residual {r_sys:.3g} vs scalar baseline {r_scalar:.3g}"

    # shift invariance of the stabilizing offset
    for shift in (-20.0 * nu, 20.0 * nu):
        us_ = evaluate_viscous(spec, cfg, x, t, P, shift=shift)
        if np.max(np.abs(us_ - u)) > 1e-10 * scale:
            fails["shift"] = f"offset {shift} changed the value by {np.max(np.abs(us_ - u)):.3g}"

    # translation covariance
    delta = float(rng.uniform(-2.0, 2.0))
    moved = spec.shifted(delta)
    um = evaluate_viscous(moved, cfg, x + delta, t)
    if np.max(np.abs(um - u)) > 1e-8 * scale:
        fails["translation"] = f"shift by {delta} changed the value by {np.max(np.abs(um - u)):.3g}"
    return fails


PROPERTIES = ("bounds", "normalization", "hopf", "sigma", "shift", "translation")


def check_properties(n_specs: int = 200, seed: int = 2024) -> CheckResult:
    rng = np.random.default_rng(seed)
    counts = {p: 0 for p in PROPERTIES}
    examples = {}
    for _ in range(n_specs):
        spec = random_spec(rng)
        for prop, msg in _property_failures(spec, rng).items():
            counts[prop] += 1
            examples.setdefault(prop, msg)
    ok = not any(counts.values())
    detail = ", ".join(f"{p} {n_specs - k}/{n_specs}" for p, k in counts.items())
    return CheckResult("8", "randomized property suite", ok, detail,
                       {"failures": counts, "examples": examples, "n_specs": n_specs})


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "1": check_box_formula,
    "2": check_fd_oracle,
    "3": check_variational_closed_forms,
    "4": check_vanishing_viscosity,
    "5": check_large_time_profile,
    "6": check_decay,
    "7": check_support_spread,
    "8": check_properties,
}


def run_check(key: str) -> CheckResult:
    start = time.perf_counter()
    res = CHECKS[key]()
    res.seconds = time.perf_counter() - start
    return res


def run_all(keys=None) -> list[CheckResult]:
    return [run_check(k) for k in (keys or CHECKS)]
