"""Parse ECharts option documents into the typed IR.

Accepts either a bare option document (strict JSON) or an HTML page that
contains one ``option = {...}`` assignment; the assignment is extracted with
a bracket-balanced scan, never by executing the page.

Supported option subset: title, xAxis/yAxis, radar indicators, and series of
the nine taxonomy kinds with their structural flags (stack, smooth, step,
areaStyle, radius rings, roseType). Anything else in the document is ignored
by the IR but survives verbatim in ``source_text``.
"""

from __future__ import annotations

import json
import math
import re

from ..errors import ParseError, StructuralError, UnclassifiableSpec, UnsupportedChart
from .taxonomy import Taxonomy, classify_spec, default_taxonomy
from .types import (
    Axis,
    AxisKind,
    ChartSpec,
    DataPoint,
    Series,
    SeriesKind,
    structural_id,
)
from .validate import validate_spec

_UNIT_RE = re.compile(r"^(?P<name>.*\S)\s+\((?P<unit>[^()]+)\)$")
_OPTION_RE = re.compile(r"\boption\s*=\s*", re.ASCII)


def _extract_option_from_html(text: str) -> str:
    """Return the first balanced ``{...}`` following an ``option =`` token."""
    m = _OPTION_RE.search(text)
    if not m:
        raise ParseError("no option assignment found in HTML document")
    i = text.find("{", m.end())
    if i < 0:
        raise ParseError("option assignment is not an object literal")
    depth = 0
    in_str: str | None = None
    escaped = False
    for j in range(i, len(text)):
        ch = text[j]
        if in_str:
            if escaped:
                escaped = False
            elif ch == "\\":
                escaped = True
            elif ch == in_str:
                in_str = None
            continue
        if ch in "\"'":
            in_str = ch
        elif ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
            if depth == 0:
                return text[i : j + 1]
    raise ParseError("unbalanced braces in option assignment")


def _load_document(document: str) -> dict:
    body = document.strip()
    if not body:
        raise ParseError("empty document")
    if not body.startswith("{"):
        body = _extract_option_from_html(document)

    def _bad_constant(token: str):
        raise StructuralError(f"non-finite constant {token!r} in document")

    try:
        raw = json.loads(body, parse_constant=_bad_constant)
    except json.JSONDecodeError as exc:
        raise ParseError(f"document is not well-formed: {exc}") from exc
    if not isinstance(raw, dict):
        raise ParseError("option document must be an object")
    return raw


def _as_number(value, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise StructuralError(f"expected a number at {where}, got {value!r}")
    v = float(value)
    if not math.isfinite(v):
        raise StructuralError(f"non-finite value at {where}")
    return v


def _parse_axis(raw, where: str) -> Axis | None:
    if raw is None:
        return None
    if isinstance(raw, list):
        if not raw:
            return None
        raw = raw[0]  # multi-axis grids are outside the supported subset
    if not isinstance(raw, dict):
        raise StructuralError(f"{where} must be an object")
    data = raw.get("data")
    kind_str = raw.get("type") or ("category" if data is not None else "value")
    try:
        kind = AxisKind(kind_str)
    except ValueError as exc:
        raise StructuralError(f"unsupported axis type {kind_str!r} at {where}") from exc
    labels = None
    if kind is AxisKind.CATEGORY:
        if not isinstance(data, list) or not data:
            raise StructuralError(f"category {where} requires a non-empty data list")
        labels = tuple(str(x) for x in data)
    name, unit = _split_unit(raw.get("name"))
    return Axis(kind=kind, labels=labels, name=name, unit=unit)


def _split_unit(name) -> tuple[str | None, str | None]:
    if not name:
        return None, None
    m = _UNIT_RE.match(str(name))
    if m:
        return m.group("name"), m.group("unit")
    return str(name), None


def _parse_title(raw) -> str | None:
    if raw is None:
        return None
    if isinstance(raw, str):
        return raw or None
    if isinstance(raw, dict):
        text = raw.get("text")
        return str(text) if text else None
    return None


_FLAG_KINDS = {
    "bar",
    "line",
    "pie",
    "scatter",
    "radar",
    "heatmap",
    "boxplot",
    "candlestick",
    "funnel",
}


def _point_from_entry(entry, kind: SeriesKind, x_kind: AxisKind | None, where: str) -> DataPoint:
    label = None
    if isinstance(entry, dict):
        label = entry.get("name")
        label = str(label) if label is not None else None
        entry = entry.get("value")
    if isinstance(entry, (int, float)) and not isinstance(entry, bool):
        return DataPoint(values=(_as_number(entry, where),), label=label)
    if isinstance(entry, list):
        vals = list(entry)
        # Time-axis points lead with a date string: ["2024-01-01", ...values].
        if vals and isinstance(vals[0], str):
            label = vals[0]
            vals = vals[1:]
        if not vals:
            raise StructuralError(f"empty data entry at {where}")
        return DataPoint(
            values=tuple(_as_number(v, where) for v in vals),
            label=label,
        )
    raise StructuralError(f"unsupported data entry {entry!r} at {where}")


def _parse_series(raw, index: int, x_axis: Axis | None) -> Series:
    if not isinstance(raw, dict):
        raise StructuralError(f"series[{index}] must be an object")
    type_str = raw.get("type")
    if not type_str:
        raise StructuralError(f"series[{index}] missing type")
    if type_str in _FLAG_KINDS:
        kind = SeriesKind(type_str)
        other_kind = None
    else:
        kind = SeriesKind.OTHER
        other_kind = str(type_str)
    data_raw = raw.get("data")
    if not isinstance(data_raw, list) or not data_raw:
        raise StructuralError(f"series[{index}] has no data")
    where = f"series[{index}].data"
    x_kind = x_axis.kind if x_axis else None
    try:
        points = tuple(
            _point_from_entry(entry, kind, x_kind, f"{where}[{i}]")
            for i, entry in enumerate(data_raw)
        )
    except StructuralError:
        if kind is SeriesKind.OTHER:
            raise UnsupportedChart(
                f"series[{index}] type {type_str!r} has data this IR cannot represent"
            ) from None
        raise
    radius = raw.get("radius")
    ring = (
        isinstance(radius, list)
        and len(radius) == 2
        and str(radius[0]).rstrip("%") not in ("", "0")
    )
    return Series(
        name=str(raw.get("name") or f"series_{index + 1}"),
        kind=kind,
        other_kind=other_kind,
        data=points,
        stacked=bool(raw.get("stack")),
        smooth=bool(raw.get("smooth")),
        step=bool(raw.get("step")),
        area=raw.get("areaStyle") is not None,
        ring=bool(ring),
        rose=bool(raw.get("roseType")),
    )


def parse_spec(document: str, taxonomy: Taxonomy | None = None) -> ChartSpec:
    """Parse an option document (or HTML wrapper) into a validated ChartSpec.

    Raises ``ParseError`` for malformed documents, ``UnsupportedChart`` for
    series outside the taxonomy, and ``StructuralError`` when the parsed
    structure violates an IR invariant.
    """
    taxonomy = taxonomy or default_taxonomy()
    raw = _load_document(document)

    series_raw = raw.get("series")
    if isinstance(series_raw, dict):
        series_raw = [series_raw]
    if not isinstance(series_raw, list) or not series_raw:
        raise StructuralError("document has no series")

    radar_raw = raw.get("radar")
    if radar_raw is not None:
        # Radar indicators are modeled as a category axis: one label per spoke.
        if isinstance(radar_raw, list):
            radar_raw = radar_raw[0] if radar_raw else {}
        indicators = radar_raw.get("indicator") if isinstance(radar_raw, dict) else None
        if not isinstance(indicators, list) or not indicators:
            raise StructuralError("radar chart requires an indicator list")
        labels = tuple(
            str(ind.get("name", f"dim_{i + 1}")) if isinstance(ind, dict) else str(ind)
            for i, ind in enumerate(indicators)
        )
        x_axis: Axis | None = Axis(kind=AxisKind.CATEGORY, labels=labels)
        y_axis: Axis | None = None
    else:
        x_axis = _parse_axis(raw.get("xAxis"), "xAxis")
        y_axis = _parse_axis(raw.get("yAxis"), "yAxis")

    series = tuple(_parse_series(s, i, x_axis) for i, s in enumerate(series_raw))

    draft = ChartSpec(
        id="",
        category="",
        subtype="",
        title=_parse_title(raw.get("title")),
        x_axis=x_axis,
        y_axis=y_axis,
        series=series,
        source_text=document,
    )

    report = validate_spec(draft, taxonomy, check_subtype=False)
    if not report.valid:
        first = report.errors[0]
        raise StructuralError(
            f"{first['code']} at {first['path']}: {first['message']}",
            errors=list(report.errors),
        )

    try:
        category, subtype = classify_spec(draft, taxonomy)
    except UnclassifiableSpec:
        if any(s.kind is SeriesKind.OTHER for s in series):
            raise UnsupportedChart(
                "series kind outside taxonomy: "
                + ", ".join(s.other_kind or "?" for s in series if s.kind is SeriesKind.OTHER)
            ) from None
        raise

    spec = ChartSpec(
        id="",
        category=category,
        subtype=subtype,
        title=draft.title,
        x_axis=x_axis,
        y_axis=y_axis,
        series=series,
        source_text=document,
    )
    return spec.with_id(structural_id(spec.structural_key()))
