"""Conversion between the supported file formats, dispatched on extension."""

from __future__ import annotations

import os
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import FormatError
from .iges import read_iges, write_iges
from .itd import read_itd, write_itd
from .model import SplineFile
from .vtk import write_vtk
from .xml_format import read_xml, write_xml

READERS = {"itd": read_itd, "xml": read_xml, "iges": read_iges}
WRITERS = {"itd": write_itd, "xml": write_xml, "iges": write_iges}
_ALIASES = {"igs": "iges"}


def file_format(path: str | os.PathLike) -> str:
    ext = Path(path).suffix.lower().lstrip(".")
    return _ALIASES.get(ext, ext)


def read_any(path: str | os.PathLike) -> SplineFile:
    fmt = file_format(path)
    if fmt == "vtk":
        raise FormatError("VTK files cannot be read back into splines")
    if fmt not in READERS:
        raise FormatError(f"unknown input format {fmt!r} (expected itd, xml, igs/iges)")
    return READERS[fmt](path)


@dataclass
class ConversionSummary:
    input_format: str
    output_format: str
    spline_count: int
    warnings: list[str] = field(default_factory=list)


def write_any(sf: SplineFile, path: str | os.PathLike, resolution: Sequence[int] | None = None) -> list[str]:
    """Write ``sf`` in the format implied by ``path``; returns notes about dropped data."""
    fmt = file_format(path)
    notes = []
    if fmt == "vtk":
        if resolution is None:
            raise FormatError("VTK output needs a sampling resolution")
        write_vtk(sf, [resolution] * len(sf.entries), path)
        return notes
    if fmt not in WRITERS:
        raise FormatError(f"unknown output format {fmt!r} (expected itd, xml, igs/iges, vtk)")
    if fmt != "xml" and sf.has_data():
        notes.append(f"attached data is not representable in {fmt.upper()} and was dropped")
    WRITERS[fmt](sf, path)
    return notes


def convert(
    in_path: str | os.PathLike,
    out_path: str | os.PathLike,
    resolution: Sequence[int] | None = None,
) -> ConversionSummary:
    """Read ``in_path`` and write it to ``out_path``.

    Writers validate everything before opening the output, so a failed
    conversion leaves no file behind.
    """
    sf = read_any(in_path)
    notes = write_any(sf, out_path, resolution)
    return ConversionSummary(file_format(in_path), file_format(out_path), len(sf), sf.warnings + notes)
