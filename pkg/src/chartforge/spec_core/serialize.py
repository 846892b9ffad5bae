"""Serialize a ChartSpec back to a canonical option document.

The output is deterministic (fixed key order, compact separators, integral
floats emitted as ints) so that identical specs produce byte-identical
documents, and it re-parses to a structurally equal spec.
"""

from __future__ import annotations

import json

from .types import Axis, AxisKind, ChartSpec, DataPoint, Series, SeriesKind


def _num(v: float):
    return int(v) if float(v).is_integer() and abs(v) < 2**53 else v


def _axis_doc(axis: Axis) -> dict:
    doc: dict = {"type": axis.kind.value}
    if axis.labels is not None:
        doc["data"] = list(axis.labels)
    if axis.name:
        doc["name"] = f"{axis.name} ({axis.unit})" if axis.unit else axis.name
    return doc


def _point_entry(point: DataPoint, kind: SeriesKind) -> object:
    if kind in (SeriesKind.PIE, SeriesKind.FUNNEL, SeriesKind.RADAR):
        value: object = (
            _num(point.values[0]) if len(point.values) == 1 else [_num(v) for v in point.values]
        )
        entry: dict = {"value": value}
        if point.label is not None:
            entry["name"] = point.label
        return entry
    if point.label is not None:
        return [point.label, *(_num(v) for v in point.values)]
    if len(point.values) == 1:
        return _num(point.values[0])
    return [_num(v) for v in point.values]


def _series_doc(series: Series) -> dict:
    doc: dict = {
        "type": series.other_kind if series.kind is SeriesKind.OTHER else series.kind.value,
        "name": series.name,
    }
    if series.stacked:
        doc["stack"] = "total"
    if series.smooth:
        doc["smooth"] = True
    if series.step:
        doc["step"] = "middle"
    if series.area:
        doc["areaStyle"] = {}
    if series.ring:
        doc["radius"] = ["40%", "70%"]
    if series.rose:
        doc["roseType"] = "radius"
    if series.kind is SeriesKind.FUNNEL:
        vals = [p.values[0] for p in series.data]
        doc["sort"] = "descending" if all(a >= b for a, b in zip(vals, vals[1:])) else "ascending"
    doc["data"] = [_point_entry(p, series.kind) for p in series.data]
    return doc


def serialize_spec(spec: ChartSpec) -> str:
    doc: dict = {}
    if spec.title:
        doc["title"] = {"text": spec.title}
    if spec.series and spec.series[0].kind is SeriesKind.RADAR:
        labels = spec.x_axis.labels if spec.x_axis else ()
        doc["radar"] = {"indicator": [{"name": l} for l in labels or ()]}
    else:
        if spec.x_axis is not None:
            doc["xAxis"] = _axis_doc(spec.x_axis)
        if spec.y_axis is not None:
            doc["yAxis"] = _axis_doc(spec.y_axis)
    if any(s.kind is SeriesKind.HEATMAP for s in spec.series):
        # the chart engine refuses heatmaps without a visualMap component
        cells = [p.values[2] for s in spec.series if s.kind is SeriesKind.HEATMAP for p in s.data]
        lo, hi = min(cells), max(cells)
        if lo == hi:
            hi = lo + 1
        doc["visualMap"] = {"min": _num(lo), "max": _num(hi)}
    doc["series"] = [_series_doc(s) for s in spec.series]
    return json.dumps(doc, ensure_ascii=True, separators=(",", ":"))
