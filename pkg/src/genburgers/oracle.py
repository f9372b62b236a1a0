"""Finite-difference reference solver for the viscous system.

Independent of the exact formulas; used only to cross-check them at
moderate viscosity.  First-order upwinding on the shared speed
``sigma = c . u`` (nonconservative form, speed averaged to cell interfaces)
plus central diffusion ``nu/2 u_xx``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .field import FieldSlice
from .model import ProblemSpec

__all__ = [
    "FDConfig",
    "CFLError",
    "BoundaryContaminationError",
    "solve_fd",
    "burgers_residual",
]


class CFLError(ValueError):
    """The requested number of time steps violates the stability bound."""


class BoundaryContaminationError(RuntimeError):
    """The solution reached the Dirichlet boundary; widen the domain."""


@dataclass(frozen=True)
class FDConfig:
    x_min: float
    x_max: float
    nx: int
    t_final: float
    cfl_safety: float = 0.9
    boundary: str = "dirichlet-from-data"
    nt: int | None = None
    boundary_tol: float = 1e-8

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError("need x_min < x_max")
        if self.nx < 3:
            raise ValueError("need at least 3 grid points")
        if not self.t_final > 0:
            raise ValueError("t_final must be positive")
        if not 0 < self.cfl_safety <= 1:
            raise ValueError("cfl_safety must lie in (0, 1]")
        if self.boundary != "dirichlet-from-data":
            raise ValueError(f"unsupported boundary condition {self.boundary!r}")

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / (self.nx - 1)

    def grid(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)


def _stability_rate(spec: ProblemSpec, nu: float, dx: float) -> float:
    lo, hi = spec.sigma_profile.bounds()
    smax = max(abs(lo), abs(hi))
    # a cell can be upwinded from both sides at a compression
    return 2.0 * smax / dx + nu / (dx * dx)


def solve_fd(spec: ProblemSpec, nu: float, cfg: FDConfig, history_every: int | None = None):
    """Integrate to ``cfg.t_final`` and return the final :class:`FieldSlice`.

    With ``history_every=k`` also returns the list of slices saved every ``k``
    steps (first and last included).
    """
    if not nu > 0:
        raise ValueError("nu must be positive")
    x = cfg.grid()
    dx = cfg.dx
    rate = _stability_rate(spec, nu, dx)
    if cfg.nt is not None:
        nt = int(cfg.nt)
        dt = cfg.t_final / nt
        if dt * rate > 1.0:
            raise CFLError(
                f"nt={nt} gives dt={dt:.3g} but stability needs dt <= {1.0 / rate:.3g}"
            )
    else:
        nt = max(1, math.ceil(cfg.t_final * rate / cfg.cfl_safety))
        dt = cfg.t_final / nt

    u = np.ascontiguousarray(spec.u0(x).T)
    edge = u[:, [0, -1]].copy()
    meta = {"evaluator": "fd", "nu": nu, "dx": dx, "dt": dt, "nt": nt, "backend": kernels.BACKEND}

    history = []
    done = 0
    chunk = nt if not history_every else int(history_every)
    if history_every:
        history.append(FieldSlice(x, u.T.copy(), 0.0, None, dict(meta)))
    while done < nt:
        k = min(chunk, nt - done)
        kernels.fd_advance(u, spec.c, dt, dx, nu, k)
        done += k
        if history_every:
            history.append(FieldSlice(x, u.T.copy(), done * dt, None, dict(meta)))

    drift = np.max(np.abs(u[:, [1, -2]] - edge))
    if drift > cfg.boundary_tol:
        raise BoundaryContaminationError(
            f"cells next to the boundary moved by {drift:.3g} (> {cfg.boundary_tol:g}); "
            f"widen [x_min, x_max]"
        )
    final = FieldSlice(x, u.T.copy(), cfg.t_final, None, meta)
    return (final, history) if history_every else final


def burgers_residual(history: Sequence[FieldSlice], c, nu: float) -> float:
    """Max-norm residual of ``s_t + s s_x - nu/2 s_xx`` for ``s = c . u``.

    Centred differences in x and t on the interior of consecutive slices.
    """
    if len(history) < 3:
        raise ValueError("need at least three time slices")
    x = history[0].x
    for sl in history[1:]:
        if sl.x.shape != x.shape or not np.array_equal(sl.x, x):
            raise ValueError("slices must share the same grid")
    if x.size < 3:
        raise ValueError("need at least three grid points")
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=0):
        raise ValueError("grid must be uniform")
    dx = dx[0]
    c = np.asarray(c, dtype=float)
    s = np.array([sl.u @ c for sl in history])
    ts = np.array([sl.t for sl in history])
    worst = 0.0
    for k in range(1, len(history) - 1):
        st = (s[k + 1, 1:-1] - s[k - 1, 1:-1]) / (ts[k + 1] - ts[k - 1])
        sk = s[k]
        sx = (sk[2:] - sk[:-2]) / (2 * dx)
        sxx = (sk[2:] - 2 * sk[1:-1] + sk[:-2]) / (dx * dx)
        r = st + sk[1:-1] * sx - 0.5 * nu * sxx
        worst = max(worst, float(np.max(np.abs(r))))
    return worst
