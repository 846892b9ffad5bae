"""Deterministic question answering over the chart IR.

Because the IR preserves the chart's data exactly, questions are answered
with exact arithmetic and an auditable derivation. This oracle supplies the
ground truth that the reasoning-trace retention filter checks against.

Per-kind scalar projections (what "the value" means):
bar/line use the point value, candlestick uses the close, boxplot uses the
median, pie/funnel use the slice value, heatmap uses the cell value. Radar
questions address one polygon and range over its indicator values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import UnknownLabel, UnknownSeries, UnsupportedKindForChartType
from ..spec_core import Axis, AxisKind, ChartSpec, Series, SeriesKind, canonical_label
from .matching import payload_text

QUESTION_KINDS = ("retrieve_value", "extremum", "aggregate", "compare", "count", "trend")

AGGREGATE_OPS = ("sum", "mean", "min", "max", "difference", "ratio")

FLAT_EPSILON = 1e-9


@dataclass(frozen=True)
class Question:
    text: str
    kind: str
    slots: dict = field(default_factory=dict)


@dataclass(frozen=True)
class Answer:
    payload: object  # number, label string, or bool
    unit: str | None = None
    derivation: tuple[tuple[str, str], ...] = ()

    @property
    def text(self) -> str:
        return payload_text(self.payload)


def _value_axis(spec: ChartSpec) -> Axis | None:
    for axis in (spec.y_axis, spec.x_axis):
        if axis is not None and axis.kind is AxisKind.VALUE:
            return axis
    return None


def supported_kinds(spec: ChartSpec) -> tuple[str, ...]:
    """Question kinds answerable on this chart's structure."""
    kind = spec.series[0].kind
    if kind in (SeriesKind.BAR, SeriesKind.LINE, SeriesKind.BOXPLOT, SeriesKind.CANDLESTICK):
        return ("retrieve_value", "extremum", "aggregate", "compare", "count", "trend")
    if kind in (SeriesKind.PIE, SeriesKind.FUNNEL):
        return ("retrieve_value", "extremum", "aggregate", "compare", "count")
    if kind is SeriesKind.SCATTER:
        x = spec.x_axis.kind if spec.x_axis else None
        base = ("extremum", "aggregate", "count")
        return base + (("trend",) if x in (AxisKind.TIME, AxisKind.CATEGORY) else ())
    if kind is SeriesKind.RADAR:
        return ("extremum", "aggregate", "count")
    if kind is SeriesKind.HEATMAP:
        return ("extremum", "aggregate", "count")
    return ("count",)


_PROJECTION_INDEX = {
    SeriesKind.CANDLESTICK: 1,  # close
    SeriesKind.BOXPLOT: 2,  # median
}


def _category_labels(spec: ChartSpec) -> tuple[str, ...] | None:
    for axis in (spec.x_axis, spec.y_axis):
        if axis is not None and axis.kind is AxisKind.CATEGORY and axis.labels:
            return axis.labels
    return None


def series_view(spec: ChartSpec, series: Series) -> list[tuple[str | None, float]]:
    """Flatten a series to (label, scalar value) pairs in data order."""
    kind = series.kind
    if kind is SeriesKind.HEATMAP:
        xl = spec.x_axis.labels if spec.x_axis else ()
        yl = spec.y_axis.labels if spec.y_axis else ()
        out = []
        for p in series.data:
            xi, yi, v = int(p.values[0]), int(p.values[1]), p.values[2]
            out.append((f"{xl[xi]} / {yl[yi]}", v))
        return out
    if kind in (SeriesKind.PIE, SeriesKind.FUNNEL):
        return [(p.label, p.values[0]) for p in series.data]
    if kind is SeriesKind.SCATTER:
        x = spec.x_axis.kind if spec.x_axis else None
        if x is AxisKind.VALUE or x is None:
            return [(None, p.values[1]) for p in series.data]  # y channel
        if x is AxisKind.TIME:
            return [(p.label, p.values[0]) for p in series.data]
        labels = _category_labels(spec) or ()
        return [(labels[i] if i < len(labels) else None, p.values[0]) for i, p in enumerate(series.data)]
    idx = _PROJECTION_INDEX.get(kind, 0)
    if spec.x_axis is not None and spec.x_axis.kind is AxisKind.TIME:
        return [(p.label, p.values[idx]) for p in series.data]
    labels = _category_labels(spec)
    if labels:
        return [(labels[i] if i < len(labels) else p.label, p.values[idx]) for i, p in enumerate(series.data)]
    return [(p.label, p.values[idx]) for p in series.data]


def _find_series(spec: ChartSpec, name: str) -> Series:
    canon = canonical_label(name)
    for s in spec.series:
        if canonical_label(s.name) == canon:
            return s
    raise UnknownSeries(f"series {name!r} not in chart (have {[s.name for s in spec.series]})")


def _radar_view(series: Series, spec: ChartSpec, polygon: str) -> list[tuple[str, float]]:
    canon = canonical_label(polygon)
    indicators = spec.x_axis.labels if spec.x_axis else ()
    for p in series.data:
        if p.label and canonical_label(p.label) == canon:
            return list(zip(indicators, p.values))
    raise UnknownLabel(f"polygon {polygon!r} not in series {series.name!r}")


def _lookup(view: list[tuple[str | None, float]], label: str) -> tuple[int, float]:
    canon = canonical_label(label)
    for i, (l, v) in enumerate(view):
        if l is not None and canonical_label(l) == canon:
            return i, v
    raise UnknownLabel(f"label {label!r} not found")


def _fmt(v: float) -> str:
    return payload_text(v)


def answer(spec: ChartSpec, q: Question) -> Answer:
    """Answer a structured question with exact arithmetic and a derivation.

    Extremum ties break to the first occurrence in data order and the tie is
    recorded in the derivation.
    """
    if q.kind not in supported_kinds(spec):
        raise UnsupportedKindForChartType(
            f"{q.kind} not supported on {spec.category} charts"
        )
    slots = q.slots
    series = _find_series(spec, slots["series"]) if "series" in slots else spec.series[0]
    unit = None
    axis = _value_axis(spec)
    if axis is not None:
        unit = axis.unit

    if spec.series[0].kind is SeriesKind.RADAR and q.kind in ("extremum", "aggregate"):
        view: list[tuple[str | None, float]] = list(_radar_view(series, spec, slots["label"]))
    else:
        view = series_view(spec, series)

    if q.kind == "retrieve_value":
        _, value = _lookup(view, slots["label"])
        return Answer(
            payload=value,
            unit=unit,
            derivation=((f"read {series.name} at {slots['label']}", _fmt(value)),),
        )

    if q.kind == "count":
        n = len(series.data)
        return Answer(
            payload=n,
            derivation=((f"count data points of {series.name}", str(n)),),
        )

    if q.kind == "extremum":
        return _extremum(series.name, view, slots.get("op", "max"), unit)

    if q.kind == "aggregate":
        return _aggregate(series.name, view, slots, unit)

    if q.kind == "compare":
        return _compare(spec, series, view, slots)

    if q.kind == "trend":
        return _trend(series.name, view)

    raise UnsupportedKindForChartType(f"unknown question kind {q.kind!r}")


def _extremum(series_name: str, view, op: str, unit: str | None) -> Answer:
    values = [v for _, v in view]
    best = max(values) if op == "max" else min(values)
    indices = [i for i, v in enumerate(values) if v == best]
    first = indices[0]
    label = view[first][0]
    steps = [
        (f"scan {len(values)} values of {series_name}", ", ".join(_fmt(v) for v in values)),
        (f"{op}imum value", _fmt(best)),
    ]
    if len(indices) > 1:
        tied = [view[i][0] or f"#{i + 1}" for i in indices]
        steps.append(("tie between " + ", ".join(tied), "first occurrence kept"))
    if label is not None:
        steps.append((f"label at first {op}imum", label))
        return Answer(payload=label, derivation=tuple(steps))
    return Answer(payload=best, unit=unit, derivation=tuple(steps))


def _aggregate(series_name: str, view, slots: dict, unit: str | None) -> Answer:
    op = slots["op"]
    values = [v for _, v in view]
    if op in ("difference", "ratio"):
        _, a = _lookup(view, slots["label"])
        _, b = _lookup(view, slots["label2"])
        if op == "difference":
            result = a - b
        else:
            if b == 0:
                raise ValueError(f"ratio denominator {slots['label2']!r} is zero")
            result = a / b
        steps = (
            (f"{series_name} at {slots['label']}", _fmt(a)),
            (f"{series_name} at {slots['label2']}", _fmt(b)),
            (op, _fmt(result)),
        )
        return Answer(payload=result, unit=unit if op == "difference" else None, derivation=steps)
    if op == "sum":
        result = sum(values)
    elif op == "mean":
        result = sum(values) / len(values)
    elif op == "min":
        result = min(values)
    elif op == "max":
        result = max(values)
    else:
        raise ValueError(f"unknown aggregate op {op!r}")
    steps = (
        (f"values of {series_name}", ", ".join(_fmt(v) for v in values)),
        (f"{op} of {len(values)} values", _fmt(result)),
    )
    return Answer(payload=result, unit=unit, derivation=steps)


def _compare(spec: ChartSpec, series: Series, view, slots: dict) -> Answer:
    comparator = slots.get("comparator", "greater")
    if "series2" in slots:
        other = _find_series(spec, slots["series2"])
        other_view = series_view(spec, other)
        _, a = _lookup(view, slots["label"])
        _, b = _lookup(other_view, slots["label"])
        left = f"{series.name} at {slots['label']}"
        right = f"{slots['series2']} at {slots['label']}"
    else:
        _, a = _lookup(view, slots["label"])
        _, b = _lookup(view, slots["label2"])
        left = f"{series.name} at {slots['label']}"
        right = f"{series.name} at {slots['label2']}"
    result = a > b if comparator == "greater" else a < b
    steps = [(left, _fmt(a)), (right, _fmt(b))]
    if a == b:
        steps.append(("values tie", "comparison is false"))
    steps.append((f"{_fmt(a)} {comparator} than {_fmt(b)}?", "true" if result else "false"))
    return Answer(payload=result, derivation=tuple(steps))


def _trend(series_name: str, view) -> Answer:
    first, last = view[0][1], view[-1][1]
    delta = last - first
    if abs(delta) <= FLAT_EPSILON:
        verdict = "flat"
    elif delta > 0:
        verdict = "increasing"
    else:
        verdict = "decreasing"
    steps = (
        (f"first value of {series_name}", _fmt(first)),
        (f"last value of {series_name}", _fmt(last)),
        ("change", _fmt(delta)),
        ("trend", verdict),
    )
    return Answer(payload=verdict, derivation=steps)
