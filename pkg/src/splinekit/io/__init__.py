from .convert import ConversionSummary, convert, file_format, read_any, write_any
from .iges import read_iges, write_iges
from .itd import read_itd, write_itd
from .model import DataField, SplineEntry, SplineFile, check_resolution
from .vtk import VtkSummary, inspect_vtk, write_vtk
from .xml_format import read_xml, write_xml

__all__ = [
    "ConversionSummary",
    "DataField",
    "SplineEntry",
    "SplineFile",
    "VtkSummary",
    "check_resolution",
    "convert",
    "file_format",
    "inspect_vtk",
    "read_any",
    "read_iges",
    "read_itd",
    "read_xml",
    "write_any",
    "write_iges",
    "write_itd",
    "write_vtk",
    "write_xml",
]
