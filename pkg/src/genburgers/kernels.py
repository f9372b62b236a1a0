"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise, or when
``GENBURGERS_PURE_PYTHON=1`` is set, the numpy implementation is used.
"""

import os
from types import ModuleType

from . import _kernels_py

__all__ = ["BACKEND", "available_backends", "get_backend", "set_backend",
           "hopf_cole_moments", "fd_advance"]


def _load_compiled() -> ModuleType | None:
    try:
        from . import _kernels
    except ImportError:
        return None
    return _kernels


_compiled = _load_compiled()
_modules = {"python": _kernels_py}
if _compiled is not None:
    _modules["compiled"] = _compiled

_pure = os.environ.get("GENBURGERS_PURE_PYTHON", "").lower() in ("1", "true", "yes")
BACKEND = "compiled" if (_compiled is not None and not _pure) else "python"
_active = _modules[BACKEND]


def available_backends() -> list[str]:
    return sorted(_modules)


def get_backend(name: str) -> ModuleType:
    try:
        return _modules[name]
    except KeyError:
        raise ValueError(f"backend {name!r} is not available; have {available_backends()}") from None


def set_backend(name: str) -> None:
    """Switch the process-wide backend (used by tests and the benchmark)."""
    global BACKEND, _active
    _active = get_backend(name)
    BACKEND = name


def hopf_cole_moments(*args):
    return _active.hopf_cole_moments(*args)


def fd_advance(*args):
    return _active.fd_advance(*args)
