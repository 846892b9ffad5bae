"""Independent exhaustive question evaluator used as the oracle's oracle.

Deliberately separate from chartforge.oracle: it re-derives every answer by
walking the spec dataclasses directly with plain loops, so a bug in the
oracle's lookup, tie-breaking, or aggregation logic cannot hide in a shared
helper. Accumulation happens in data order with the same primitive float
operations, which keeps results bit-identical where both are correct.
"""

from __future__ import annotations

from chartforge.spec_core import AxisKind, ChartSpec, SeriesKind


def _casefold(s: str) -> str:
    return s.strip().casefold()


def _scalar_index(kind: SeriesKind) -> int:
    if kind is SeriesKind.CANDLESTICK:
        return 1
    if kind is SeriesKind.BOXPLOT:
        return 2
    return 0


def _pairs(spec: ChartSpec, series) -> list[tuple[str | None, float]]:
    kind = series.kind
    if kind is SeriesKind.HEATMAP:
        xl, yl = spec.x_axis.labels, spec.y_axis.labels
        return [(f"{xl[int(p.values[0])]} / {yl[int(p.values[1])]}", p.values[2]) for p in series.data]
    if kind in (SeriesKind.PIE, SeriesKind.FUNNEL):
        return [(p.label, p.values[0]) for p in series.data]
    if kind is SeriesKind.SCATTER:
        xk = spec.x_axis.kind if spec.x_axis else None
        if xk is AxisKind.VALUE or xk is None:
            return [(None, p.values[1]) for p in series.data]
        if xk is AxisKind.TIME:
            return [(p.label, p.values[0]) for p in series.data]
        labels = spec.x_axis.labels or ()
        return [(labels[i], p.values[0]) for i, p in enumerate(series.data)]
    idx = _scalar_index(kind)
    if spec.x_axis is not None and spec.x_axis.kind is AxisKind.TIME:
        return [(p.label, p.values[idx]) for p in series.data]
    labels = None
    for axis in (spec.x_axis, spec.y_axis):
        if axis is not None and axis.kind is AxisKind.CATEGORY and axis.labels:
            labels = axis.labels
            break
    if labels:
        return [(labels[i], p.values[idx]) for i, p in enumerate(series.data)]
    return [(p.label, p.values[idx]) for p in series.data]


def _series_by_name(spec: ChartSpec, name: str):
    for s in spec.series:
        if _casefold(s.name) == _casefold(name):
            return s
    raise LookupError(name)


def _value_at(pairs: list, label: str) -> float:
    for l, v in pairs:
        if l is not None and _casefold(l) == _casefold(label):
            return v
    raise LookupError(label)


def brute_answer(spec: ChartSpec, question):
    """Exhaustively evaluate one structured question; returns the payload."""
    slots = question.slots
    series = _series_by_name(spec, slots["series"])

    if spec.series[0].kind is SeriesKind.RADAR and question.kind in ("extremum", "aggregate"):
        indicators = spec.x_axis.labels
        polygon = None
        for p in series.data:
            if p.label is not None and _casefold(p.label) == _casefold(slots["label"]):
                polygon = p
                break
        if polygon is None:
            raise LookupError(slots["label"])
        pairs = [(indicators[i], polygon.values[i]) for i in range(len(polygon.values))]
    else:
        pairs = _pairs(spec, series)

    kind = question.kind
    if kind == "retrieve_value":
        return _value_at(pairs, slots["label"])

    if kind == "count":
        n = 0
        for _ in series.data:
            n += 1
        return n

    if kind == "extremum":
        want_max = slots.get("op", "max") == "max"
        best_i = 0
        for i in range(1, len(pairs)):
            if (pairs[i][1] > pairs[best_i][1]) if want_max else (pairs[i][1] < pairs[best_i][1]):
                best_i = i
        label, value = pairs[best_i]
        return label if label is not None else value

    if kind == "aggregate":
        op = slots["op"]
        if op == "difference":
            return _value_at(pairs, slots["label"]) - _value_at(pairs, slots["label2"])
        if op == "ratio":
            return _value_at(pairs, slots["label"]) / _value_at(pairs, slots["label2"])
        total = 0.0
        lo = hi = pairs[0][1]
        for _, v in pairs:
            total += v
            lo = v if v < lo else lo
            hi = v if v > hi else hi
        if op == "sum":
            return total
        if op == "mean":
            return total / len(pairs)
        return lo if op == "min" else hi

    if kind == "compare":
        a = _value_at(pairs, slots["label"])
        if "series2" in slots:
            other = _pairs(spec, _series_by_name(spec, slots["series2"]))
            b = _value_at(other, slots["label"])
        else:
            b = _value_at(pairs, slots["label2"])
        return a > b if slots.get("comparator", "greater") == "greater" else a < b

    if kind == "trend":
        delta = pairs[-1][1] - pairs[0][1]
        if -1e-9 <= delta <= 1e-9:
            return "flat"
        return "increasing" if delta > 0 else "decreasing"

    raise ValueError(kind)
