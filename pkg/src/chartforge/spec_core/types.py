"""Typed intermediate representation of a single chart.

A ``ChartSpec`` is the symbolic form the whole pipeline reasons over: axes,
series, data points, plus a handful of structural flags (stacking, smoothing,
ring/rose layout, ...) that the subtype classifier needs. Values are immutable
after construction, so specs are safe to share across threads.

Invariant checking deliberately lives in :mod:`chartforge.spec_core.validate`
rather than ``__post_init__``: the validator must be able to *report* on a
broken spec instead of never seeing one.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Union


class AxisKind(str, Enum):
    CATEGORY = "category"
    VALUE = "value"
    TIME = "time"


class SeriesKind(str, Enum):
    BAR = "bar"
    LINE = "line"
    PIE = "pie"
    SCATTER = "scatter"
    RADAR = "radar"
    HEATMAP = "heatmap"
    BOXPLOT = "boxplot"
    CANDLESTICK = "candlestick"
    FUNNEL = "funnel"
    OTHER = "other"


def canonical_label(label: str) -> str:
    """Canonical form used for label comparisons: trim + case-fold."""
    return label.strip().casefold()


@dataclass(frozen=True)
class Axis:
    kind: AxisKind
    labels: tuple[str, ...] | None = None  # category axes only
    name: str | None = None
    unit: str | None = None

    def structural_key(self):
        return (self.kind.value, self.labels, self.name, self.unit)


@dataclass(frozen=True)
class DataPoint:
    """One datum: ``values`` arity depends on the owning series kind.

    1 for bar/line/pie/funnel, 2 (or 3 with a size channel) for scatter,
    3 for heatmap cells (x index, y index, value), 4 for candlestick OHLC,
    5 for a boxplot five-number summary. Radar points carry one value per
    indicator.
    """

    values: tuple[float, ...]
    label: str | None = None

    def structural_key(self):
        return (self.label, self.values)


@dataclass(frozen=True)
class Series:
    name: str
    kind: SeriesKind
    data: tuple[DataPoint, ...]
    # Structural flags recognized from the option document. They drive
    # subtype classification and survive serialization round-trips.
    stacked: bool = False
    smooth: bool = False
    step: bool = False
    area: bool = False
    ring: bool = False
    rose: bool = False
    other_kind: str | None = None  # original type string when kind == OTHER

    def structural_key(self):
        return (
            self.name,
            self.kind.value,
            self.other_kind,
            self.stacked,
            self.smooth,
            self.step,
            self.area,
            self.ring,
            self.rose,
            tuple(p.structural_key() for p in self.data),
        )


@dataclass(frozen=True)
class ChartSpec:
    id: str
    category: str
    subtype: str
    series: tuple[Series, ...]
    title: str | None = None
    x_axis: Axis | None = None
    y_axis: Axis | None = None
    topic: str | None = None
    source_text: str = field(default="", compare=False)

    def structural_key(self):
        """Equality key for round-trip checks.

        ``id`` derives from this key, and ``source_text``/``topic`` are
        provenance rather than chart structure, so neither participates.
        """
        return (
            self.category,
            self.subtype,
            self.title,
            self.x_axis.structural_key() if self.x_axis else None,
            self.y_axis.structural_key() if self.y_axis else None,
            tuple(s.structural_key() for s in self.series),
        )

    def structurally_equal(self, other: "ChartSpec") -> bool:
        return self.structural_key() == other.structural_key()

    def with_topic(self, topic: str | None) -> "ChartSpec":
        return replace(self, topic=topic)

    def with_id(self, new_id: str) -> "ChartSpec":
        return replace(self, id=new_id)


def structural_id(key) -> str:
    """Deterministic spec id: hash of the structural key."""
    blob = json.dumps(key, sort_keys=True, default=str).encode("utf-8")
    return "c" + hashlib.sha1(blob).hexdigest()[:12]


ErrorItem = dict  # {code, path, message}


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    errors: tuple[ErrorItem, ...] = ()
    warnings: tuple[ErrorItem, ...] = ()

    @staticmethod
    def build(errors: list[ErrorItem], warnings: list[ErrorItem]) -> "ValidationReport":
        return ValidationReport(valid=not errors, errors=tuple(errors), warnings=tuple(warnings))


# Arity expected of ``DataPoint.values`` for fixed-arity kinds. Scatter and
# radar are context dependent and handled separately by the validator.
FIXED_ARITY: dict[SeriesKind, int] = {
    SeriesKind.BAR: 1,
    SeriesKind.LINE: 1,
    SeriesKind.PIE: 1,
    SeriesKind.FUNNEL: 1,
    SeriesKind.HEATMAP: 3,
    SeriesKind.CANDLESTICK: 4,
    SeriesKind.BOXPLOT: 5,
}

NumberLike = Union[int, float]
