"""Format-neutral in-memory model shared by all codecs."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from ..errors import SplineError
from ..spline import Spline

DataKind = Literal["control_point", "element"]


@dataclass
class DataField:
    """Named scalar field attached to a spline.

    ``control_point`` fields hold one value per control point (linear
    order), ``element`` fields one value per element (tensor product of
    non-zero knot spans, first direction fastest).
    """

    name: str
    kind: DataKind
    values: np.ndarray

    def __post_init__(self):
        if self.kind not in ("control_point", "element"):
            raise SplineError(f"unknown data kind {self.kind!r}")
        self.values = np.asarray(self.values, dtype=float).reshape(-1)


@dataclass
class SplineEntry:
    spline: Spline
    fields: dict[str, DataField] = field(default_factory=dict)

    def __post_init__(self):
        for name, f in self.fields.items():
            expected = (
                self.spline.n_control_points if f.kind == "control_point" else self.spline.n_elements
            )
            if f.values.size != expected:
                raise SplineError(
                    f"field {name!r}: {f.kind} data needs {expected} values, got {f.values.size}"
                )

    def add_field(self, name: str, kind: DataKind, values) -> None:
        self.fields[name] = DataField(name, kind, values)
        self.__post_init__()


@dataclass
class SplineFile:
    """Ordered splines with optional attached data and reader warnings."""

    entries: list[SplineEntry] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @classmethod
    def of(cls, *splines: Spline) -> SplineFile:
        return cls([SplineEntry(s) for s in splines])

    @property
    def splines(self) -> list[Spline]:
        return [e.spline for e in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    def has_data(self) -> bool:
        return any(e.fields for e in self.entries)


def check_resolution(resolution: Iterable[int], dim: int) -> tuple[int, ...]:
    """Validate per-direction sample counts (each at least 2)."""
    res = tuple(int(r) for r in resolution)
    if len(res) != dim:
        raise SplineError(f"resolution has {len(res)} entries but the spline has {dim} parametric directions")
    if any(r < 2 for r in res):
        raise SplineError(f"resolution entries must be at least 2, got {res}")
    return res


def format_real(x: float) -> str:
    """Decimal text with 17 significant digits (round-trips a double)."""
    return f"{x:.17g}"


def format_reals(values: Sequence[float]) -> str:
    return " ".join(format_real(float(v)) for v in values)
