"""Legacy ASCII VTK (version 3.0) unstructured-grid writer.

Splines are sampled on a uniform parametric grid.  Curves become lines,
surfaces quads and volumes hexahedra; several splines in one file share a
single point/cell list.  Control-point data is interpolated to the sample
points with the spline basis, element data becomes cell data taken from the
element that contains each cell's parametric center.

There is deliberately no reader: :func:`inspect_vtk` only verifies the
structure of a written file.
"""

from __future__ import annotations

import itertools
import os
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from ..errors import FormatError, SplineError
from ..spline import Spline
from .model import SplineFile, check_resolution

VTK_LINE, VTK_QUAD, VTK_HEXAHEDRON = 3, 9, 12
_CELL_TYPE = {1: VTK_LINE, 2: VTK_QUAD, 3: VTK_HEXAHEDRON}
_CELL_SIZE = {VTK_LINE: 2, VTK_QUAD: 4, VTK_HEXAHEDRON: 8}
# corner offsets in VTK's node order for each cell type
_CORNERS = {
    1: [(0,), (1,)],
    2: [(0, 0), (1, 0), (1, 1), (0, 1)],
    3: [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0), (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)],
}


def _sample_params(spline: Spline, resolution: Sequence[int]) -> list[np.ndarray]:
    return [
        np.linspace(kv.first, kv.last, r) for kv, r in zip(spline.knot_vectors, resolution)
    ]


def _cells(resolution: Sequence[int], offset: int) -> np.ndarray:
    dim = len(resolution)
    strides = np.cumprod((1,) + tuple(resolution[:-1]))
    out = []
    for base in itertools.product(*[range(r - 1) for r in reversed(resolution)]):
        base = base[::-1]
        out.append(
            [offset + int(np.dot(np.add(base, c), strides)) for c in _CORNERS[dim]]
        )
    return np.array(out, dtype=int)


def _cell_centers(params: list[np.ndarray]) -> list[np.ndarray]:
    return [0.5 * (p[:-1] + p[1:]) for p in params]


def _element_values(spline: Spline, params: list[np.ndarray], values: np.ndarray) -> np.ndarray:
    ps = spline.parameter_space
    counts = ps.element_counts()
    per_dir = [
        np.array([ps.element_index(d, c) for c in centers])
        for d, centers in enumerate(_cell_centers(params))
    ]
    mesh = np.meshgrid(*per_dir, indexing="ij")
    linear = np.zeros(mesh[0].shape, dtype=int)
    stride = 1
    for d, idx in enumerate(mesh):
        linear += idx * stride
        stride *= counts[d]
    return values[linear.reshape(-1, order="F")]


def to_vtk_string(sf: SplineFile, resolutions: Sequence[Sequence[int]], title: str = "splinekit") -> str:
    if len(resolutions) != len(sf.entries):
        raise FormatError(f"{len(resolutions)} resolutions for {len(sf.entries)} splines")
    point_blocks, cell_blocks, types = [], [], []
    point_fields: dict[str, list[np.ndarray]] = {}
    cell_fields: dict[str, list[np.ndarray]] = {}
    names_cp = sorted({f.name for e in sf.entries for f in e.fields.values() if f.kind == "control_point"})
    names_el = sorted({f.name for e in sf.entries for f in e.fields.values() if f.kind == "element"})
    offset = 0
    for idx, (entry, res) in enumerate(zip(sf.entries, resolutions)):
        s = entry.spline
        if s.dim not in _CELL_TYPE:
            raise FormatError(f"spline {idx}: VTK output supports parametric dimension 1..3, got {s.dim}")
        if s.space_dim > 3:
            raise FormatError(f"spline {idx}: VTK points have at most 3 coordinates, got {s.space_dim}")
        try:
            res = check_resolution(res, s.dim)
        except SplineError as exc:
            raise FormatError(f"spline {idx}: {exc}") from None
        params = _sample_params(s, res)
        cp_names = [n for n in names_cp if n in entry.fields]
        extra = np.column_stack([entry.fields[n].values for n in cp_names]) if cp_names else None
        sampled = s.sample(params, extra)
        coords = np.zeros((len(sampled), 3))
        coords[:, : s.space_dim] = sampled[:, : s.space_dim]
        point_blocks.append(coords)
        for n in names_cp:
            if n in entry.fields:
                col = s.space_dim + cp_names.index(n)
                point_fields.setdefault(n, []).append(sampled[:, col])
            else:
                point_fields.setdefault(n, []).append(np.zeros(len(sampled)))
        cells = _cells(res, offset)
        cell_blocks.append(cells)
        types += [_CELL_TYPE[s.dim]] * len(cells)
        for n in names_el:
            if n in entry.fields:
                cell_fields.setdefault(n, []).append(_element_values(s, params, entry.fields[n].values))
            else:
                cell_fields.setdefault(n, []).append(np.zeros(len(cells)))
        offset += len(coords)

    points = np.vstack(point_blocks) if point_blocks else np.zeros((0, 3))
    lines = ["# vtk DataFile Version 3.0", title.replace("\n", " ")[:255], "ASCII", "DATASET UNSTRUCTURED_GRID"]
    lines.append(f"POINTS {len(points)} double")
    lines += [" ".join(repr(float(v)) for v in p) for p in points]
    n_cells = sum(len(c) for c in cell_blocks)
    size = sum(len(c) * (c.shape[1] + 1) for c in cell_blocks)
    lines.append(f"CELLS {n_cells} {size}")
    for block in cell_blocks:
        lines += [f"{block.shape[1]} " + " ".join(str(i) for i in row) for row in block]
    lines.append(f"CELL_TYPES {n_cells}")
    lines += [str(t) for t in types]
    if cell_fields:
        lines.append(f"CELL_DATA {n_cells}")
        for n in names_el:
            lines += [f"SCALARS {n} double 1", "LOOKUP_TABLE default"]
            lines += [repr(float(v)) for v in np.concatenate(cell_fields[n])]
    if point_fields:
        lines.append(f"POINT_DATA {len(points)}")
        for n in names_cp:
            lines += [f"SCALARS {n} double 1", "LOOKUP_TABLE default"]
            lines += [repr(float(v)) for v in np.concatenate(point_fields[n])]
    return "\n".join(lines) + "\n"


def write_vtk(sf: SplineFile, resolutions: Sequence[Sequence[int]], path: str | os.PathLike) -> None:
    """Sample every spline of ``sf`` and write one legacy VTK file."""
    text = to_vtk_string(sf, resolutions)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(text)


@dataclass
class VtkSummary:
    n_points: int
    n_cells: int
    cell_types: list[int]
    points: np.ndarray
    point_data: dict[str, np.ndarray]
    cell_data: dict[str, np.ndarray]


def inspect_vtk(path: str | os.PathLike) -> VtkSummary:
    """Parse a legacy unstructured-grid file and check its internal consistency.

    Raises :class:`FormatError` when declared counts do not match the data,
    connectivity indices are out of range or cell sizes disagree with types.
    """
    with open(path, encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh]
    if not lines or not lines[0].startswith("# vtk DataFile Version"):
        raise FormatError(f"{path}: missing VTK header line")
    if len(lines) < 4 or lines[2] != "ASCII" or lines[3] != "DATASET UNSTRUCTURED_GRID":
        raise FormatError(f"{path}: not an ASCII unstructured grid")
    pos = 4

    def header(keyword: str) -> list[str]:
        nonlocal pos
        if pos >= len(lines) or not lines[pos].startswith(keyword + " "):
            raise FormatError(f"{path}: expected {keyword} at line {pos + 1}")
        parts = lines[pos].split()
        pos += 1
        return parts

    def rows(count: int) -> list[list[str]]:
        nonlocal pos
        if pos + count > len(lines):
            raise FormatError(f"{path}: file ends inside a block at line {pos + 1}")
        out = [lines[i].split() for i in range(pos, pos + count)]
        pos += count
        return out

    n_points = int(header("POINTS")[1])
    pts = np.array(rows(n_points), dtype=float).reshape(n_points, -1)
    if n_points and pts.shape[1] != 3:
        raise FormatError(f"{path}: points must have 3 coordinates")
    _, n_cells, size = header("CELLS")
    n_cells, size = int(n_cells), int(size)
    conn = rows(n_cells)
    if sum(len(c) for c in conn) != size:
        raise FormatError(f"{path}: CELLS size {size} does not match connectivity data")
    types = [int(r[0]) for r in rows(int(header("CELL_TYPES")[1]))]
    if len(types) != n_cells:
        raise FormatError(f"{path}: CELL_TYPES count differs from CELLS count")
    for c, t in zip(conn, types):
        if int(c[0]) != len(c) - 1 or _CELL_SIZE.get(t) != len(c) - 1:
            raise FormatError(f"{path}: cell {c} inconsistent with type {t}")
        if any(not 0 <= int(i) < n_points for i in c[1:]):
            raise FormatError(f"{path}: cell {c} references a missing point")
    data: dict[str, dict[str, np.ndarray]] = {"POINT_DATA": {}, "CELL_DATA": {}}
    while pos < len(lines) and lines[pos]:
        kind, count = lines[pos].split()[:2]
        if kind not in data:
            raise FormatError(f"{path}: unexpected section {kind!r}")
        expected = n_points if kind == "POINT_DATA" else n_cells
        if int(count) != expected:
            raise FormatError(f"{path}: {kind} declares {count}, expected {expected}")
        pos += 1
        while pos < len(lines) and lines[pos].startswith("SCALARS"):
            name = lines[pos].split()[1]
            pos += 1
            if pos < len(lines) and lines[pos].startswith("LOOKUP_TABLE"):
                pos += 1
            data[kind][name] = np.array([r[0] for r in rows(expected)], dtype=float)
    return VtkSummary(n_points, n_cells, types, pts, data["POINT_DATA"], data["CELL_DATA"])
