"""IGES reader/writer for rational B-spline curves (126) and surfaces (128).

Only these two entity types are read; every other entity in the directory
is skipped.  Files are fixed 80-column records: data in columns 1-72, the
section letter (S, G, D, P, T) in column 73 and a 7-digit sequence number in
columns 74-80.  In the parameter section columns 66-72 hold the pointer back
to the directory entry.

IGES coordinates are always three-dimensional.  Planar curves in two
dimensions are written with z = 0, the planar flag and the normal (0, 0, 1);
the reader turns such curves back into two-dimensional ones.  Surfaces are
always read as three-dimensional.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from ..errors import FormatError, SplineError
from ..spline import Spline, make_spline
from .model import SplineEntry, SplineFile

SUPPORTED_ENTITIES = (126, 128)
_HOLLERITH = re.compile(r"\s*(\d+)H")
# fixed so that identical input produces byte-identical files
_TIMESTAMP = "20200101.000000"


@dataclass
class _Directory:
    entity_type: int
    parameter_pointer: int
    transform: int
    line_count: int
    form: int
    sequence: int


# -- reading -------------------------------------------------------------


def _split_records(text: str) -> dict[str, list[tuple[str, int]]]:
    sections: dict[str, list[tuple[str, int]]] = {k: [] for k in "SGDPT"}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            continue
        if len(line) < 73:
            raise FormatError(f"line {lineno}: truncated record ({len(line)} columns, need 73+)")
        letter = line[72]
        if letter not in sections:
            if letter == "C" or letter == "B":
                raise FormatError(f"line {lineno}: compressed/binary IGES is not supported")
            raise FormatError(f"line {lineno}: unknown section letter {letter!r} in column 73")
        seq_text = line[73:80].strip()
        try:
            seq = int(seq_text) if seq_text else 0
        except ValueError:
            raise FormatError(f"line {lineno}: bad sequence number {seq_text!r}") from None
        sections[letter].append((line[:72], seq))
    for letter, name in zip("GDPT", ("global", "directory", "parameter", "terminate")):
        if not sections[letter]:
            raise FormatError(f"missing {name} ({letter}) section")
    return sections


def _global_delimiters(text: str) -> tuple[str, str]:
    """Parameter and record delimiters from the start of the global section."""
    pdelim, rdelim = ",", ";"
    m = re.match(r"\s*1H(.)", text)
    rest = text
    if m:
        pdelim = m.group(1)
        rest = text[m.end():]
    rest = rest.lstrip()
    if rest.startswith(pdelim):
        rest = rest[1:]
    m = re.match(r"\s*1H(.)", rest)
    if m:
        rdelim = m.group(1)
    return pdelim, rdelim


def _tokenize(data: str, pdelim: str, rdelim: str) -> list[str]:
    """Split free-format parameter data into fields; Hollerith strings kept whole."""
    tokens: list[str] = []
    pos = 0
    n = len(data)
    while pos < n:
        m = _HOLLERITH.match(data, pos)
        if m:
            count = int(m.group(1))
            start = m.end()
            tokens.append(data[start : start + count])
            pos = start + count
            while pos < n and data[pos] == " ":
                pos += 1
        else:
            end = pos
            while end < n and data[end] not in (pdelim, rdelim):
                end += 1
            tokens.append(data[pos:end].strip())
            pos = end
        if pos >= n:
            break
        if data[pos] == rdelim:
            return tokens
        pos += 1
    return tokens


def _real(tok: str) -> float:
    tok = tok.strip()
    if not tok:
        return 0.0
    return float(tok.replace("D", "E").replace("d", "e"))


def _int(tok: str) -> int:
    tok = tok.strip()
    if not tok:
        return 0
    value = _real(tok)
    if value != int(value):
        raise ValueError(f"expected an integer, got {tok!r}")
    return int(value)


def _field(line: str, i: int) -> str:
    return line[8 * i : 8 * i + 8]


def _directory(sections) -> list[_Directory]:
    lines = sections["D"]
    if len(lines) % 2:
        raise FormatError("directory section has an odd number of lines (truncated entry)")
    out = []
    for k in range(0, len(lines), 2):
        (l1, seq), (l2, _) = lines[k], lines[k + 1]
        try:
            out.append(
                _Directory(
                    entity_type=_int(_field(l1, 0)),
                    parameter_pointer=_int(_field(l1, 1)),
                    transform=_int(_field(l1, 6)),
                    line_count=_int(_field(l2, 3)),
                    form=_int(_field(l2, 4)),
                    sequence=seq,
                )
            )
        except ValueError as exc:
            raise FormatError(f"directory entry D{seq}: {exc}") from None
    return out


def _parameter_text(sections, entry: _Directory) -> str:
    by_seq = {seq: line for line, seq in sections["P"]}
    parts = []
    for seq in range(entry.parameter_pointer, entry.parameter_pointer + entry.line_count):
        line = by_seq.get(seq)
        if line is None:
            raise FormatError(
                f"entity D{entry.sequence}: parameter line P{seq} missing (truncated file?)"
            )
        parts.append(line[:64])
    return "".join(parts)


def _take(values: list[str], start: int, count: int, what: str, entry: _Directory) -> list[float]:
    if start + count > len(values):
        raise FormatError(
            f"entity {entry.entity_type} (D{entry.sequence}): expected {count} {what}, "
            f"parameter data ends early"
        )
    return [_real(v) for v in values[start : start + count]]


def _curve_126(params: list[str], entry: _Directory) -> Spline:
    k, m = _int(params[1]), _int(params[2])
    if k < 0 or m < 0 or k < m:
        raise FormatError(f"entity 126 (D{entry.sequence}): invalid K={k}, M={m}")
    planar, _closed, polynomial, _periodic = (_int(params[i]) for i in range(3, 7))
    pos = 7
    n_knots = k + m + 2
    knots = _take(params, pos, n_knots, "knots", entry)
    pos += n_knots
    weights = _take(params, pos, k + 1, "weights", entry)
    pos += k + 1
    coords = np.array(_take(params, pos, 3 * (k + 1), "control point coordinates", entry))
    pos += 3 * (k + 1)
    _take(params, pos, 2, "parameter range values", entry)
    pos += 2
    normal = [_real(v) for v in params[pos : pos + 3]]
    points = coords.reshape(k + 1, 3)
    if planar == 1 and normal == [0.0, 0.0, 1.0] and np.all(points[:, 2] == 0.0):
        points = points[:, :2]
    return make_spline([knots], [m], points, None if polynomial == 1 else weights)


def _surface_128(params: list[str], entry: _Directory) -> Spline:
    k1, k2, m1, m2 = (_int(params[i]) for i in range(1, 5))
    if min(k1, k2, m1, m2) < 0 or k1 < m1 or k2 < m2:
        raise FormatError(f"entity 128 (D{entry.sequence}): invalid K1={k1}, K2={k2}, M1={m1}, M2={m2}")
    polynomial = _int(params[7])
    pos = 10
    s_knots = _take(params, pos, k1 + m1 + 2, "first-direction knots", entry)
    pos += k1 + m1 + 2
    t_knots = _take(params, pos, k2 + m2 + 2, "second-direction knots", entry)
    pos += k2 + m2 + 2
    count = (k1 + 1) * (k2 + 1)
    weights = _take(params, pos, count, "weights", entry)
    pos += count
    coords = np.array(_take(params, pos, 3 * count, "control point coordinates", entry))
    pos += 3 * count
    _take(params, pos, 4, "parameter range values", entry)
    return make_spline(
        [s_knots, t_knots], [m1, m2], coords.reshape(count, 3), None if polynomial == 1 else weights
    )


def parse_iges(text: str) -> SplineFile:
    sections = _split_records(text)
    pdelim, rdelim = _global_delimiters("".join(line for line, _ in sections["G"]))
    entries: list[SplineEntry] = []
    warnings: list[str] = []
    skipped: dict[int, int] = {}
    for entry in _directory(sections):
        if entry.entity_type not in SUPPORTED_ENTITIES:
            skipped[entry.entity_type] = skipped.get(entry.entity_type, 0) + 1
            continue
        params = _tokenize(_parameter_text(sections, entry), pdelim, rdelim)
        try:
            if not params or _int(params[0]) != entry.entity_type:
                raise FormatError(
                    f"entity D{entry.sequence}: parameter data does not start with type {entry.entity_type}"
                )
            if len(params) < 10:
                raise FormatError(f"entity {entry.entity_type} (D{entry.sequence}): too few parameters")
            reader = _curve_126 if entry.entity_type == 126 else _surface_128
            spline = reader(params, entry)
        except FormatError:
            raise
        except (SplineError, ValueError) as exc:
            raise FormatError(f"entity {entry.entity_type} (D{entry.sequence}): {exc}") from None
        if entry.transform:
            warnings.append(
                f"entity {entry.entity_type} (D{entry.sequence}): transformation matrix ignored"
            )
        entries.append(SplineEntry(spline))
    for etype, count in sorted(skipped.items()):
        warnings.append(f"ignored {count} entity(ies) of type {etype}")
    return SplineFile(entries, warnings)


def read_iges(path: str | os.PathLike) -> SplineFile:
    with open(path, encoding="latin-1") as fh:
        return parse_iges(fh.read())


# -- writing -------------------------------------------------------------


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.16E}"


def _hollerith(s: str) -> str:
    return f"{len(s)}H{s}"


def _records(text: str, letter: str, width: int = 72) -> list[str]:
    chunks = [text[i : i + width] for i in range(0, len(text), width)] or [""]
    return [f"{c:<72}{letter}{n:7d}" for n, c in enumerate(chunks, start=1)]


def _wrap_parameters(tokens: list[str], de_pointer: int, first_seq: int) -> list[str]:
    lines, current = [], ""
    for i, tok in enumerate(tokens):
        piece = tok + (";" if i == len(tokens) - 1 else ",")
        if len(current) + len(piece) > 64:
            lines.append(current)
            current = ""
        current += piece
    lines.append(current)
    return [
        f"{line:<64} {de_pointer:7d}P{first_seq + k:7d}" for k, line in enumerate(lines)
    ]


def _spline_parameters(spline: Spline) -> tuple[int, list[str]]:
    pts = spline.control_points_linear()
    n = spline.space_dim
    if n == 2:
        pts = np.hstack([pts, np.zeros((len(pts), 1))])
    weights = spline.weights_linear() if spline.rational else np.ones(len(pts))
    polynomial = 0 if spline.rational else 1
    flat_pts = [_fmt(v) for v in pts.reshape(-1)]
    if spline.dim == 1:
        kv = spline.knot_vectors[0]
        k = spline.sizes[0] - 1
        normal = [0.0, 0.0, 1.0] if n == 2 else [0.0, 0.0, 0.0]
        tokens = ["126", _fmt(k), _fmt(spline.degrees[0]), _fmt(int(n == 2)), "0", _fmt(polynomial), "0"]
        tokens += [_fmt(u) for u in kv.knots] + [_fmt(w) for w in weights] + flat_pts
        tokens += [_fmt(kv.first), _fmt(kv.last)] + [_fmt(c) for c in normal]
        return 126, tokens
    kv1, kv2 = spline.knot_vectors
    tokens = ["128", _fmt(spline.sizes[0] - 1), _fmt(spline.sizes[1] - 1)]
    tokens += [_fmt(spline.degrees[0]), _fmt(spline.degrees[1]), "0", "0", _fmt(polynomial), "0", "0"]
    tokens += [_fmt(u) for u in kv1.knots] + [_fmt(u) for u in kv2.knots]
    tokens += [_fmt(w) for w in weights] + flat_pts
    tokens += [_fmt(kv1.first), _fmt(kv1.last), _fmt(kv2.first), _fmt(kv2.last)]
    return 128, tokens


def _check_writable(sf: SplineFile) -> None:
    for i, s in enumerate(sf.splines):
        if s.dim not in (1, 2):
            raise FormatError(
                f"spline {i}: IGES stores only curves and surfaces, got parametric dimension {s.dim}"
            )
        if s.space_dim not in (2, 3):
            raise FormatError(f"spline {i}: IGES needs 2 or 3 physical coordinates, got {s.space_dim}")


def to_iges_string(sf: SplineFile, filename: str = "splines.igs") -> str:
    _check_writable(sf)
    start = _records("splinekit IGES export: rational B-spline curves and surfaces", "S")
    max_coord = max((float(np.max(np.abs(s.control_points))) for s in sf.splines), default=0.0)
    glob = [
        _hollerith(","), _hollerith(";"), _hollerith("splinekit"), _hollerith(filename),
        _hollerith("splinekit"), _hollerith("0.1"), "32", "38", "6", "308", "15",
        _hollerith("splinekit"), "1.0", "6", _hollerith("M"), "1", "1.0",
        _hollerith(_TIMESTAMP), "1.0E-9", _fmt(max_coord), _hollerith(""), _hollerith(""),
        "11", "0", _hollerith(_TIMESTAMP),
    ]
    glob_text = ",".join(t if t != "0H" else "" for t in glob) + ";"
    global_lines = _records(glob_text, "G")
    directory, parameters = [], []
    for idx, spline in enumerate(sf.splines):
        etype, tokens = _spline_parameters(spline)
        de_seq = 2 * idx + 1
        plines = _wrap_parameters(tokens, de_seq, len(parameters) + 1)
        pointer = len(parameters) + 1
        parameters += plines
        label = f"SPLINE{idx}"[:8]
        l1 = f"{etype:8d}{pointer:8d}{0:8d}{0:8d}{0:8d}{0:8d}{0:8d}{0:8d}{'00000000':>8}D{de_seq:7d}"
        l2 = f"{etype:8d}{0:8d}{0:8d}{len(plines):8d}{0:8d}{'':8}{'':8}{label:>8}{0:8d}D{de_seq + 1:7d}"
        directory += [l1, l2]
    term = f"S{len(start):7d}G{len(global_lines):7d}D{len(directory):7d}P{len(parameters):7d}"
    terminate = [f"{term:<72}T{1:7d}"]
    return "\n".join(start + global_lines + directory + parameters + terminate) + "\n"


def write_iges(sf: SplineFile, path: str | os.PathLike) -> None:
    text = to_iges_string(sf, os.path.basename(os.fspath(path)))
    with open(path, "w", encoding="latin-1") as fh:
        fh.write(text)
