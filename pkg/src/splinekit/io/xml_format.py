"""XML spline format (grammar in ``docs/xml_format.md``).

Example::

    <SplineList count="1">
      <SplineEntry parametricDimension="1" spaceDimension="2" numberOfControlPoints="3">
        <degrees>2</degrees>
        <knotVectors>
          <knotVector>0 0 0 1 1 1</knotVector>
        </knotVectors>
        <controlPoints>-1 0 0 0 1 0</controlPoints>
        <weights>1 0.7 1</weights>
        <data name="temperature" kind="controlPoint">0 1 0</data>
      </SplineEntry>
    </SplineList>
"""

from __future__ import annotations

import os
import xml.etree.ElementTree as ET

import numpy as np

from ..errors import FormatError, SplineError
from ..spline import MAX_PARAMETRIC_DIM, make_spline
from .model import SplineEntry, SplineFile, format_reals

_KIND_TO_XML = {"control_point": "controlPoint", "element": "element"}
_XML_TO_KIND = {v: k for k, v in _KIND_TO_XML.items()}


def _floats(text: str | None, what: str) -> list[float]:
    try:
        return [float(t) for t in (text or "").split()]
    except ValueError as exc:
        raise FormatError(f"{what}: {exc}") from None


def _int_attr(elem: ET.Element, name: str) -> int:
    value = elem.get(name)
    if value is None:
        raise FormatError(f"<{elem.tag}> lacks attribute {name!r}")
    try:
        return int(value)
    except ValueError:
        raise FormatError(f"<{elem.tag}> attribute {name}={value!r} is not an integer") from None


def _child(elem: ET.Element, tag: str, required: bool = True) -> ET.Element | None:
    found = elem.find(tag)
    if found is None and required:
        raise FormatError(f"<{elem.tag}> lacks <{tag}>")
    return found


def _read_entry(elem: ET.Element, index: int) -> SplineEntry:
    where = f"SplineEntry {index}"
    dim = _int_attr(elem, "parametricDimension")
    space_dim = _int_attr(elem, "spaceDimension")
    n_cp = _int_attr(elem, "numberOfControlPoints")
    if not 1 <= dim <= MAX_PARAMETRIC_DIM:
        raise FormatError(f"{where}: parametric dimension {dim} not in 1..{MAX_PARAMETRIC_DIM}")
    if space_dim < 1:
        raise FormatError(f"{where}: space dimension must be positive")
    try:
        degrees = [int(d) for d in (_child(elem, "degrees").text or "").split()]
    except ValueError:
        raise FormatError(f"{where}: degrees must be integers") from None
    if len(degrees) != dim:
        raise FormatError(f"{where}: {len(degrees)} degrees for parametric dimension {dim}")
    kv_elems = _child(elem, "knotVectors").findall("knotVector")
    if len(kv_elems) != dim:
        raise FormatError(f"{where}: {len(kv_elems)} knot vectors for parametric dimension {dim}")
    kvs = [_floats(k.text, f"{where} knotVector") for k in kv_elems]
    coords = _floats(_child(elem, "controlPoints").text, f"{where} controlPoints")
    if len(coords) != n_cp * space_dim:
        raise FormatError(
            f"{where}: expected {n_cp}x{space_dim} control point coordinates, got {len(coords)}"
        )
    points = np.array(coords).reshape(n_cp, space_dim)
    weights = None
    w_elem = _child(elem, "weights", required=False)
    if w_elem is not None:
        weights = _floats(w_elem.text, f"{where} weights")
        if len(weights) != n_cp:
            raise FormatError(f"{where}: expected {n_cp} weights, got {len(weights)}")
    try:
        spline = make_spline(kvs, degrees, points, weights)
        if spline.n_control_points != n_cp:
            raise FormatError(f"{where}: numberOfControlPoints={n_cp} does not match knot vectors")
        entry = SplineEntry(spline)
        for d in elem.findall("data"):
            name = d.get("name")
            kind = _XML_TO_KIND.get(d.get("kind", ""))
            if not name or kind is None:
                raise FormatError(f"{where}: <data> needs a name and kind controlPoint|element")
            entry.add_field(name, kind, _floats(d.text, f"{where} data {name!r}"))
    except FormatError:
        raise
    except SplineError as exc:
        raise FormatError(f"{where}: {exc}") from None
    return entry


def read_xml(path: str | os.PathLike) -> SplineFile:
    try:
        root = ET.parse(path).getroot()
    except ET.ParseError as exc:
        raise FormatError(f"{path}: malformed XML: {exc}") from None
    if root.tag != "SplineList":
        raise FormatError(f"{path}: root element is <{root.tag}>, expected <SplineList>")
    entries = [_read_entry(e, i) for i, e in enumerate(root.findall("SplineEntry"))]
    count = root.get("count")
    if count is not None and count.strip() != str(len(entries)):
        raise FormatError(f"{path}: count={count} but {len(entries)} SplineEntry elements")
    return SplineFile(entries)


def _text_block(values, per_line: int) -> str:
    values = list(values)
    if not values:
        return ""
    lines = [format_reals(values[i : i + per_line]) for i in range(0, len(values), per_line)]
    return "\n" + "\n".join("        " + line for line in lines) + "\n      "


def to_xml_string(sf: SplineFile) -> str:
    root = ET.Element("SplineList", count=str(len(sf.entries)))
    for entry in sf.entries:
        s = entry.spline
        if s.dim > MAX_PARAMETRIC_DIM:
            raise FormatError(f"parametric dimension {s.dim} exceeds {MAX_PARAMETRIC_DIM}")
        e = ET.SubElement(
            root,
            "SplineEntry",
            parametricDimension=str(s.dim),
            spaceDimension=str(s.space_dim),
            numberOfControlPoints=str(s.n_control_points),
        )
        ET.SubElement(e, "degrees").text = " ".join(str(p) for p in s.degrees)
        kvs = ET.SubElement(e, "knotVectors")
        for kv in s.knot_vectors:
            ET.SubElement(kvs, "knotVector").text = format_reals(kv.knots)
        ET.SubElement(e, "controlPoints").text = _text_block(
            s.control_points_linear().reshape(-1), s.space_dim
        )
        if s.rational:
            ET.SubElement(e, "weights").text = _text_block(s.weights_linear(), 8)
        for f in entry.fields.values():
            ET.SubElement(e, "data", name=f.name, kind=_KIND_TO_XML[f.kind]).text = _text_block(
                f.values, 8
            )
    ET.indent(root, space="  ")
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def write_xml(sf: SplineFile, path: str | os.PathLike) -> None:
    text = to_xml_string(sf)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)

