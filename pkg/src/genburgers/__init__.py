"""Exact viscous and inviscid solutions of the generalized Burgers system.

``(u_j)_t + sigma(c, u) (u_j)_x = nu/2 (u_j)_xx`` with ``sigma(c, u) = c . u``.
"""

__version__ = "0.1.0"

from .model import PiecewiseProfile, PotentialFunction, ProblemSpec, SpecError, build_potential, load_spec, sigma
from .field import FieldSlice, read_slice_csv
from .viscous import ViscousConfig, evaluate_viscous, evaluate_viscous_grid, measure_weights
from .inviscid import evaluate_inviscid, evaluate_inviscid_grid, minimize_variational
from .closedform import BoxData, RiemannData, inviscid_box_solution, riemann_solution, viscous_box_solution
from .asymptotic import AsymptoticInputs, asymptotic_profile, decay_rate_fit, support_curves, sup_norm
from .oracle import FDConfig, burgers_residual, solve_fd

__all__ = [
    "__version__",
    "PiecewiseProfile",
    "PotentialFunction",
    "ProblemSpec",
    "SpecError",
    "build_potential",
    "load_spec",
    "sigma",
    "FieldSlice",
    "read_slice_csv",
    "ViscousConfig",
    "evaluate_viscous",
    "evaluate_viscous_grid",
    "measure_weights",
    "evaluate_inviscid",
    "evaluate_inviscid_grid",
    "minimize_variational",
    "BoxData",
    "RiemannData",
    "inviscid_box_solution",
    "riemann_solution",
    "viscous_box_solution",
    "AsymptoticInputs",
    "asymptotic_profile",
    "decay_rate_fit",
    "support_curves",
    "sup_norm",
    "FDConfig",
    "burgers_residual",
    "solve_fd",
]
