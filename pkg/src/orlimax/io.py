"""Field CSV and JSON emission with deterministic formatting.

Field CSV layout: a descriptor comment line embedding the grid, a header
row naming the coordinate columns plus ``value``, then one row per node in
lexicographic node order. Floats are written with ``repr`` (shortest
round-trip), so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .fields import GridSpec, SampledField
from .groups import euclidean, heisenberg1

__all__ = [
    "CorruptFieldError",
    "write_field_csv",
    "read_field_csv",
    "write_json",
    "write_csv",
]

_MAGIC = "# orlimax-field "


class CorruptFieldError(ValueError):
    def __init__(self, path, row: int | None, message: str):
        where = f"{path}" if row is None else f"{path}, row {row}"
        super().__init__(f"corrupt field file ({where}): {message}")
        self.path = str(path)
        self.row = row


def write_field_csv(field: SampledField, path) -> None:
    grid = field.grid
    names = [f"x{i}" for i in range(grid.ndim)]
    lines = [_MAGIC + grid.descriptor(), ",".join(names + ["value"])]
    nodes = grid.nodes
    for i in range(grid.n_nodes):
        coords = ",".join(repr(c) for c in nodes[i])
        lines.append(f"{coords},{repr(float(field.values[i]))}")
    Path(path).write_text("\n".join(lines) + "\n")


def _grid_from_descriptor(desc: str, path) -> GridSpec:
    try:
        fields = dict(part.split("=", 1) for part in desc.split(";"))
        kind = fields["group"]
        dim = int(fields["dim"])
        lo = tuple(float(v) for v in fields["lo"].split(","))
        hi = tuple(float(v) for v in fields["hi"].split(","))
        shape = tuple(int(v) for v in fields["shape"].split(","))
    except (KeyError, ValueError) as exc:
        raise CorruptFieldError(path, 1, f"bad grid descriptor: {exc}") from exc
    if kind == "euclidean":
        group = euclidean(dim)
    elif kind == "heisenberg1":
        group = heisenberg1()
    else:
        raise CorruptFieldError(path, 1, f"unknown group kind {kind!r}")
    return GridSpec(group, lo, hi, shape)


def read_field_csv(path, expected_grid: GridSpec | None = None) -> SampledField:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith(_MAGIC):
        raise CorruptFieldError(path, 1, "missing field descriptor line")
    grid = _grid_from_descriptor(lines[0][len(_MAGIC):], path)
    if expected_grid is not None and grid != expected_grid:
        raise CorruptFieldError(path, 1, "grid does not match the run config")
    if len(lines) < 2:
        raise CorruptFieldError(path, 2, "missing header row")
    data_rows = lines[2:]
    if len(data_rows) != grid.n_nodes:
        raise CorruptFieldError(
            path, len(lines), f"expected {grid.n_nodes} rows, found {len(data_rows)}"
        )
    values = np.empty(grid.n_nodes)
    for i, line in enumerate(data_rows):
        rownum = i + 3
        parts = line.split(",")
        if len(parts) != grid.ndim + 1:
            raise CorruptFieldError(path, rownum, f"expected {grid.ndim + 1} columns")
        try:
            vals = [float(p) for p in parts]
        except ValueError as exc:
            raise CorruptFieldError(path, rownum, str(exc)) from exc
        node = grid.nodes[i]
        if any(abs(v - c) > 1e-9 * (1 + abs(c)) for v, c in zip(vals, node)):
            raise CorruptFieldError(
                path, rownum, f"coordinates {vals[:-1]} do not match node {tuple(node)}"
            )
        if not np.isfinite(vals[-1]):
            raise CorruptFieldError(path, rownum, "non-finite value")
        values[i] = vals[-1]
    return SampledField(grid, values)


def write_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def write_csv(header: list[str], rows: list[list], path) -> None:
    def fmt(v) -> str:
        if isinstance(v, float):
            return repr(v)
        if isinstance(v, (tuple, list, np.ndarray)):
            return " ".join(repr(float(x)) for x in v)
        return str(v)

    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    Path(path).write_text("\n".join(lines) + "\n")
