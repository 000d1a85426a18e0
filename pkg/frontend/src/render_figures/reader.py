"""CSV reading for scan artifacts.

Scan files carry `# key = value` metadata lines, then one header row, then
numeric rows.  The reader returns the metadata mapping and a column table;
it never writes to the input.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

__all__ = ["RenderError", "MissingColumnError", "EmptyTableError",
           "read_scan_csv", "require_columns"]


class RenderError(Exception):
    """Base class for rendering failures."""


class MissingColumnError(RenderError):
    def __init__(self, path, column):
        super().__init__(f"{path}: missing required column {column!r}")
        self.column = column


class EmptyTableError(RenderError):
    def __init__(self, path):
        super().__init__(f"{path}: no data rows")


def read_scan_csv(path):
    """Parse a scan CSV into (metadata dict, {column: float array})."""
    path = Path(path)
    if not path.exists():
        raise RenderError(f"input CSV not found: {path}")
    metadata = {}
    header = None
    rows = []
    for line in path.read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                key, val = body.split("=", 1)
                metadata[key.strip()] = val.strip()
            continue
        if header is None:
            header = [name.strip() for name in line.split(",")]
            continue
        rows.append([float(x) for x in line.split(",")])
    if header is None or not rows:
        raise EmptyTableError(path)
    data = np.asarray(rows, dtype=float)
    if data.shape[1] != len(header):
        raise RenderError(f"{path}: row width does not match header")
    return metadata, {name: data[:, i] for i, name in enumerate(header)}


def require_columns(path, columns, required):
    for name in required:
        if name not in columns:
            raise MissingColumnError(path, name)
