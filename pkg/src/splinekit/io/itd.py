"""IRIT ``.itd`` text format: B-spline curves, surfaces and trivariates.

Recognized objects::

    [CURVE BSPLINE <len> <order> <ptype> [KV ...] [pt] ...]
    [SURFACE BSPLINE <ulen> <vlen> <uorder> <vorder> <ptype> [KV ...] [KV ...] [pt] ...]
    [TRIVAR BSPLINE <ulen> <vlen> <wlen> <uorder> <vorder> <worder> <ptype> [KV ...] x3 [pt] ...]

``ptype`` is ``E<N>`` (Euclidean, N coordinates per point) or ``P<N>``
(rational, ``[w w*x1 ... w*xN]``).  Order is degree + 1.  Points are listed
with the first direction running fastest.  Other geometry (polygons, Bezier
forms, periodic knot vectors, ...) is skipped and reported in
``SplineFile.warnings``.
"""

from __future__ import annotations

import os
import re

import numpy as np

from ..errors import FormatError, SplineError
from ..spline import make_spline
from .model import SplineEntry, SplineFile, format_real

_TOKEN = re.compile(r'\[|\]|"[^"]*"|[^\s\[\]"]+')
_KINDS = {"CURVE": 1, "SURFACE": 2, "TRIVAR": 3}
_GEOMETRY_HEADS = {
    "CURVE", "SURFACE", "TRIVAR", "MULTIVAR", "POLYGON", "POLYLINE", "POINTLIST",
    "POLYSTRIP", "TRIMSRF", "TRISRF", "MODEL", "INSTANCE", "MATRIX", "VECTOR", "POINT",
    "CTLPT", "STRING", "NUMBER", "PLANE",
}


def _strip_comments(text: str) -> str:
    return "\n".join(line.split("#", 1)[0] for line in text.splitlines())


def _parse_brackets(text: str) -> list:
    """Nested lists of tokens from bracketed text."""
    stack: list[list] = [[]]
    for tok in _TOKEN.findall(_strip_comments(text)):
        if tok == "[":
            stack.append([])
        elif tok == "]":
            if len(stack) == 1:
                raise FormatError("unbalanced ']' in ITD data")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1:
        raise FormatError("unterminated '[' in ITD data")
    return stack[0]


def _is_number(tok) -> bool:
    if not isinstance(tok, str):
        return False
    try:
        float(tok)
    except ValueError:
        return False
    return True


def _head(node) -> str:
    return node[0].upper() if node and isinstance(node[0], str) else ""


def _spline_from_node(node: list) -> SplineEntry:
    kind = _head(node)
    dim = _KINDS[kind]
    header = node[2 : 2 + 2 * dim + 1]
    if len(header) != 2 * dim + 1 or any(not isinstance(t, str) for t in header):
        raise FormatError(f"{kind} BSPLINE: incomplete header")
    try:
        lengths = [int(t) for t in header[:dim]]
        orders = [int(t) for t in header[dim : 2 * dim]]
    except ValueError:
        raise FormatError(f"{kind} BSPLINE: non-integer length/order in {header}") from None
    ptype = header[-1].upper()
    m = re.fullmatch(r"([EP])(\d)", ptype)
    if not m:
        raise FormatError(f"{kind} BSPLINE: unknown point type {header[-1]!r}")
    rational = m.group(1) == "P"
    n = int(m.group(2))
    if n < 1:
        raise FormatError(f"{kind} BSPLINE: point type {ptype} has no coordinates")
    kvs, pts = [], []
    for child in node[2 + 2 * dim + 1 :]:
        if not isinstance(child, list):
            raise FormatError(f"{kind} BSPLINE: unexpected token {child!r}")
        head = _head(child)
        if head == "KV":
            kvs.append([float(t) for t in child[1:]])
        elif head == "KVP":
            raise FormatError(f"{kind} BSPLINE: periodic knot vectors are not supported")
        elif child and all(_is_number(t) for t in child):
            pts.append([float(t) for t in child])
    if len(kvs) != dim:
        raise FormatError(f"{kind} BSPLINE: {len(kvs)} knot vectors for {dim} directions")
    width = n + 1 if rational else n
    if any(len(p) != width for p in pts):
        raise FormatError(f"{kind} BSPLINE: points must have {width} values for type {ptype}")
    if len(pts) != int(np.prod(lengths)):
        raise FormatError(f"{kind} BSPLINE: expected {int(np.prod(lengths))} points, got {len(pts)}")
    for d, (kv, length, order) in enumerate(zip(kvs, lengths, orders)):
        if len(kv) != length + order:
            raise FormatError(
                f"{kind} BSPLINE: knot vector {d} has {len(kv)} knots, expected {length + order}"
            )
    arr = np.array(pts, dtype=float)
    degrees = [o - 1 for o in orders]
    try:
        if rational:
            w = arr[:, 0]
            if np.any(w <= 0):
                raise FormatError(f"{kind} BSPLINE: non-positive weight")
            spline = make_spline(kvs, degrees, arr[:, 1:] / w[:, None], w)
        else:
            spline = make_spline(kvs, degrees, arr)
    except FormatError:
        raise
    except SplineError as exc:
        raise FormatError(f"{kind} BSPLINE: {exc}") from None
    return SplineEntry(spline)


def _walk(nodes: list, entries: list, warnings: list, context: str) -> None:
    for node in nodes:
        if not isinstance(node, list):
            continue
        head = _head(node)
        if head == "OBJECT":
            name = node[1] if len(node) > 1 and isinstance(node[1], str) else "?"
            _walk(node[2:], entries, warnings, f"object {name}")
        elif head in _KINDS and len(node) > 1 and _head(node[1:]) == "BSPLINE":
            entries.append(_spline_from_node(node))
        elif head in _GEOMETRY_HEADS:
            sub = f" {node[1]}" if len(node) > 1 and isinstance(node[1], str) else ""
            warnings.append(f"{context}: skipped unsupported {head}{sub}")
        # anything else is an attribute list


def parse_itd(text: str) -> SplineFile:
    entries: list[SplineEntry] = []
    warnings: list[str] = []
    _walk(_parse_brackets(text), entries, warnings, "top level")
    return SplineFile(entries, warnings)


def read_itd(path: str | os.PathLike) -> SplineFile:
    with open(path, encoding="utf-8") as fh:
        return parse_itd(fh.read())


def to_itd_string(sf: SplineFile) -> str:
    out = []
    for idx, entry in enumerate(sf.entries):
        s = entry.spline
        if s.dim > 3:
            raise FormatError(f"spline {idx}: ITD supports parametric dimension 1..3, got {s.dim}")
        if s.space_dim > 9:
            raise FormatError(f"spline {idx}: ITD point types allow at most 9 coordinates")
        kind = {1: "CURVE", 2: "SURFACE", 3: "TRIVAR"}[s.dim]
        ptype = f"{'P' if s.rational else 'E'}{s.space_dim}"
        header = " ".join(str(n) for n in s.sizes) + " " + " ".join(str(p + 1) for p in s.degrees)
        out.append(f"[OBJECT SPLINE{idx}")
        out.append(f"    [{kind} BSPLINE {header} {ptype}")
        for kv in s.knot_vectors:
            out.append("        [KV " + " ".join(format_real(k) for k in kv.knots) + "]")
        points = s.control_points_linear()
        if s.rational:
            w = s.weights_linear()[:, None]
            points = np.hstack([w, points * w])
        for row in points:
            out.append("        [" + " ".join(format_real(v) for v in row) + "]")
        out.append("    ]")
        out.append("]")
    return "\n".join(out) + "\n"


def write_itd(sf: SplineFile, path: str | os.PathLike) -> None:
    text = to_itd_string(sf)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
