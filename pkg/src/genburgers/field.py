"""Sampled solution slices and their CSV/JSON representation."""

from __future__ import annotations

import json
import os
import tempfile
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

__all__ = ["FieldSlice", "write_text_atomic", "format_number", "read_slice_csv"]


def format_number(v: float) -> str:
    return f"{v:.17g}"


def write_text_atomic(path: str | Path, text: str) -> None:
    """Write through a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class FieldSlice:
    """Solution vector sampled on an x-grid at a fixed time.

    ``u`` has shape ``(len(x), N)``.  ``nonunique`` marks grid points where
    the variational minimizer is not unique (inviscid slices only).
    """

    x: np.ndarray
    u: np.ndarray
    t: float
    nonunique: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.x = np.asarray(self.x, dtype=float)
        u = np.asarray(self.u, dtype=float)
        self.u = u.reshape(self.x.size, u.shape[-1] if u.ndim == 2 else -1)
        if self.nonunique is not None:
            self.nonunique = np.asarray(self.nonunique, dtype=bool)

    @property
    def n(self) -> int:
        return self.u.shape[1]

    def __len__(self) -> int:
        return self.x.size

    def to_csv(self) -> str:
        cols = ["x"] + [f"u{j + 1}" for j in range(self.n)]
        if self.nonunique is not None:
            cols.append("nonunique")
        lines = [",".join(cols)]
        for i in range(self.x.size):
            row = [format_number(self.x[i])] + [format_number(v) for v in self.u[i]]
            if self.nonunique is not None:
                row.append("1" if self.nonunique[i] else "0")
            lines.append(",".join(row))
        return "\n".join(lines) + "\n"

    def write(self, path: str | Path, manifest: dict | None = None) -> Path:
        """Write the CSV and its JSON sidecar (``<path>.json``); returns the sidecar path."""
        path = Path(path)
        write_text_atomic(path, self.to_csv())
        sidecar = path.with_name(path.name + ".json")
        meta = {"t": self.t, **self.meta}
        if manifest is not None:
            meta["manifest"] = manifest
        write_text_atomic(sidecar, json.dumps(meta, indent=2, sort_keys=True, default=float) + "\n")
        return sidecar


def read_slice_csv(path: str | Path) -> FieldSlice:
    path = Path(path)
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    if not header or header[0] != "x":
        raise ValueError(f"{path}: expected a header starting with 'x'")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)  # header-only file
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if data.size == 0:
        data = np.empty((0, len(header)))
    if data.shape[1] != len(header):
        raise ValueError(f"{path}: rows have {data.shape[1]} columns, header has {len(header)}")
    ucols = [i for i, h in enumerate(header) if h.startswith("u")]
    nonunique = None
    if "nonunique" in header:
        nonunique = data[:, header.index("nonunique")].astype(bool)
    t = float("nan")
    sidecar = path.with_name(path.name + ".json")
    meta = {}
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        t = float(meta.get("t", t))
    return FieldSlice(data[:, 0], data[:, ucols], t, nonunique, meta)
