"""Localization diagnostics and result serialization.

The localization factor of a normalized state is its inverse
participation ratio minus the extended-state baseline ``1/dim``: zero
for a uniform state, ``1 - 1/dim`` for a state on a single site.
Result files are written atomically (temp file + rename); CSV floats use
fixed 17-significant-digit scientific notation so a read-back reproduces
the values bit for bit, JSON uses the shortest round-trip repr.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError

__all__ = [
    "LocalizationReport",
    "localization_factor",
    "format_float",
    "write_csv",
    "read_csv",
    "write_json",
    "read_json",
]


@dataclass(frozen=True)
class LocalizationReport:
    """Per-state localization factors and inverse participation ratios."""

    factors: np.ndarray
    ipr: np.ndarray
    dimension: int
    metadata: dict = field(default_factory=dict)


def localization_factor(states: np.ndarray) -> LocalizationReport:
    """Localization factor of each eigenvector column.

    ``I_j = sum_m |psi_j(m)|^4 - (1/dim) (sum_m |psi_j(m)|^2)^2``;
    columns are normalized to unit 2-norm first (recorded in metadata
    when any column needed rescaling).  State order follows the input.
    """
    states = np.asarray(states, dtype=complex)
    if states.ndim != 2:
        raise ConfigError("states must be a 2-d eigenvector matrix")
    norms = np.linalg.norm(states, axis=0)
    if np.any(norms == 0.0) or not np.all(np.isfinite(norms)):
        raise ConfigError("invalid state: zero or non-finite eigenvector column")
    normalized = bool(np.allclose(norms, 1.0, atol=1e-12))
    psi2 = np.abs(states / norms) ** 2
    dim = states.shape[0]
    ipr = (psi2**2).sum(axis=0)
    factors = ipr - (psi2.sum(axis=0) ** 2) / dim
    return LocalizationReport(factors=factors, ipr=ipr, dimension=dim,
                              metadata={"normalization_applied": not normalized})


def format_float(x: float) -> str:
    """Fixed scientific form with 17 significant digits (CSV convention)."""
    return f"{x:.16e}"


def _atomic_write(path, text: str):
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or Path("."), prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(path, columns: list[str], rows):
    """Write a per-state table; cells may be str, int, or float."""
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for value in row:
            if isinstance(value, str):
                cells.append(value)
            elif isinstance(value, (bool, np.bool_)):
                cells.append(str(int(value)))
            elif isinstance(value, (int, np.integer)):
                cells.append(str(int(value)))
            else:
                cells.append(format_float(float(value)))
        lines.append(",".join(cells))
    _atomic_write(path, "\n".join(lines) + "\n")


def read_csv(path):
    """Read back a table written by write_csv: (columns, rows of floats/str)."""
    text = Path(path).read_text().splitlines()
    columns = text[0].split(",")
    rows = []
    for line in text[1:]:
        row = []
        for cell in line.split(","):
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(row)
    return columns, rows


def write_json(path, obj):
    """Write a scalar report; keys sorted for byte determinism."""
    _atomic_write(path, json.dumps(obj, sort_keys=True, indent=2) + "\n")


def read_json(path):
    return json.loads(Path(path).read_text())
