"""Non-throwing invariant checker for ChartSpec values.

``validate_spec`` reports every violated invariant rather than stopping at
the first, and never raises: broken specs are data to report on. The parser
reuses it to enforce its own postconditions.
"""

from __future__ import annotations

import math

from .taxonomy import Taxonomy, default_taxonomy
from .types import AxisKind, ChartSpec, Series, SeriesKind, ValidationReport, canonical_label

# Kinds whose series ride a single category axis and must match its length.
_CATEGORY_ALIGNED = {
    SeriesKind.BAR,
    SeriesKind.LINE,
    SeriesKind.BOXPLOT,
    SeriesKind.CANDLESTICK,
    SeriesKind.SCATTER,
}

_NON_NEGATIVE = {SeriesKind.PIE, SeriesKind.FUNNEL}


def _err(code: str, path: str, message: str) -> dict:
    return {"code": code, "path": path, "message": message}


def _expected_arity(series: Series, spec: ChartSpec) -> tuple[int, ...] | None:
    """Allowed ``values`` lengths for points of this series, or None for any."""
    kind = series.kind
    if kind is SeriesKind.SCATTER:
        x = spec.x_axis.kind if spec.x_axis else None
        if x is AxisKind.VALUE or x is None:
            return (2, 3)
        return (1,)  # category or time axis: the axis carries the x channel
    if kind is SeriesKind.RADAR:
        if spec.x_axis and spec.x_axis.labels:
            return (len(spec.x_axis.labels),)
        return None
    if kind is SeriesKind.OTHER:
        return None
    from .types import FIXED_ARITY

    return (FIXED_ARITY[kind],)


def _category_axis(spec: ChartSpec) -> tuple[str, tuple[str, ...]] | None:
    """The single category axis (x or y) for length checks, if any."""
    x, y = spec.x_axis, spec.y_axis
    x_cat = x is not None and x.kind is AxisKind.CATEGORY
    y_cat = y is not None and y.kind is AxisKind.CATEGORY
    if x_cat and y_cat:
        return None  # heatmap grids: both axes are categorical
    if x_cat:
        return "x_axis", x.labels or ()
    if y_cat:
        return "y_axis", y.labels or ()
    return None


def validate_spec(
    spec: ChartSpec,
    taxonomy: Taxonomy | None = None,
    *,
    check_subtype: bool = True,
) -> ValidationReport:
    taxonomy = taxonomy or default_taxonomy()
    errors: list[dict] = []
    warnings: list[dict] = []

    if not spec.series:
        errors.append(_err("EMPTY_SERIES", "series", "chart has no series"))
        return ValidationReport.build(errors, warnings)

    for axis_name in ("x_axis", "y_axis"):
        axis = getattr(spec, axis_name)
        if axis is None:
            continue
        if axis.kind is AxisKind.CATEGORY:
            if not axis.labels:
                errors.append(_err("AXIS_LABELS", axis_name, "category axis has no labels"))
            else:
                canon = [canonical_label(l) for l in axis.labels]
                if len(set(canon)) != len(canon):
                    errors.append(
                        _err("DUPLICATE_LABELS", axis_name, "labels collide after canonicalization")
                    )
        elif axis.labels is not None:
            errors.append(_err("AXIS_LABELS", axis_name, f"{axis.kind.value} axis carries labels"))

    is_radar = spec.series[0].kind is SeriesKind.RADAR
    cat_axis = None if is_radar else _category_axis(spec)

    for si, series in enumerate(spec.series):
        path = f"series[{si}]"
        if not series.data:
            errors.append(_err("EMPTY_DATA", path, "series has no data points"))
            continue
        allowed = _expected_arity(series, spec)
        for pi, point in enumerate(series.data):
            ppath = f"{path}.data[{pi}]"
            if allowed is not None and len(point.values) not in allowed:
                errors.append(
                    _err(
                        "ARITY_MISMATCH",
                        ppath,
                        f"{series.kind.value} point has {len(point.values)} values, "
                        f"expected {' or '.join(map(str, allowed))}",
                    )
                )
            for v in point.values:
                if not math.isfinite(v):
                    errors.append(_err("NONFINITE_VALUE", ppath, "value is not finite"))
            if series.kind in _NON_NEGATIVE and point.values and point.values[0] < 0:
                errors.append(
                    _err(
                        "NEGATIVE_VALUE",
                        ppath,
                        f"{series.kind.value} values must be non-negative",
                    )
                )
        if cat_axis is not None and series.kind in _CATEGORY_ALIGNED:
            axis_name, labels = cat_axis
            if len(series.data) != len(labels):
                errors.append(
                    _err(
                        "LENGTH_MISMATCH",
                        path,
                        f"{len(series.data)} points vs {len(labels)} {axis_name} labels",
                    )
                )
        if series.kind is SeriesKind.HEATMAP and spec.x_axis and spec.y_axis:
            nx = len(spec.x_axis.labels or ())
            ny = len(spec.y_axis.labels or ())
            for pi, point in enumerate(series.data):
                if len(point.values) == 3:
                    xi, yi = point.values[0], point.values[1]
                    if not (xi.is_integer() and yi.is_integer() and 0 <= xi < nx and 0 <= yi < ny):
                        errors.append(
                            _err(
                                "INDEX_RANGE",
                                f"{path}.data[{pi}]",
                                f"cell index ({xi}, {yi}) outside {nx}x{ny} grid",
                            )
                        )

    if check_subtype and not taxonomy.contains(spec.category, spec.subtype):
        errors.append(
            _err(
                "UNKNOWN_SUBTYPE",
                "subtype",
                f"({spec.category!r}, {spec.subtype!r}) not in taxonomy",
            )
        )

    if not spec.title:
        warnings.append(_err("MISSING_TITLE", "title", "chart has no title"))

    return ValidationReport.build(errors, warnings)
