#!/usr/bin/env python3
"""Regenerate src/chartforge/data/templates.json (the 49-subtype template library).

The skeletons share a lot of structure, so they are assembled here instead of
being hand-maintained JSON. Run from the repo root after editing:

    python3 scripts/build_templates.py

Every placeholder in a skeleton must have a matching slot_schema entry and
vice versa; the template loader enforces that bijection.
"""

import json
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src/chartforge/data/templates.json"


def ph(name: str) -> str:
    return "{{" + name + "}}"


def slot(name, kind, **constraints):
    return {"slot": name, "kind": kind, "constraints": constraints}


def base_slots():
    return [slot("title", "title"), slot("palette", "palette")]


def name_slot(i):
    # Series names come from a per-fill permutation of the shared name pool,
    # indexed so that sibling series never collide.
    return slot(f"name_{i + 1}", "labels", structure="series_name", index=i)


def axis(kind, labels_slot=None):
    doc = {"type": kind}
    if labels_slot:
        doc["data"] = ph(labels_slot)
    return doc


def series(kind, name_ref, data_slot, **extra):
    doc = {"type": kind, "name": name_ref}
    doc.update(extra)
    doc["data"] = ph(data_slot)
    return doc


def make(subtype, skeleton_doc, slots):
    return {
        "subtype": subtype,
        "skeleton": json.dumps(skeleton_doc, separators=(",", ": "), indent=1),
        "slot_schema": slots,
    }


def cartesian(n_series, *, horizontal=False, stacked=False, value_range=(0, 100),
              ensure_negative=False, series_kinds=None, label_count=(4, 8),
              series_extra=None, label_theme=None):
    """Bar/line-family template on one category axis + one value axis."""
    series_kinds = series_kinds or ["bar"] * n_series
    series_extra = series_extra or [{}] * n_series
    theme = {"theme": label_theme} if label_theme else {}
    slots = base_slots() + [slot("labels", "labels", count=list(label_count), **theme)]
    ser = []
    for i, kind in enumerate(series_kinds):
        constraints = {"structure": "values", "count_from": "labels", "range": list(value_range), "decimals": 1}
        if ensure_negative and i == 0:
            constraints["ensure_negative"] = True
        slots.append(slot(f"values_{i + 1}", "numeric-series", **constraints))
        slots.append(name_slot(i))
        extra = dict(series_extra[i])
        if stacked and kind in ("bar", "line"):
            extra["stack"] = "total"
        ser.append(series(kind, ph(f"name_{i + 1}"), f"values_{i + 1}", **extra))
    cat, val = axis("category", "labels"), axis("value")
    doc = {
        "title": {"text": ph("title")},
        "color": ph("palette"),
        "xAxis": val if horizontal else cat,
        "yAxis": cat if horizontal else val,
        "series": ser,
    }
    return doc, slots


def write_templates():
    templates = []

    # ---- bar ----
    doc, slots = cartesian(1)
    templates.append(make("basic_bar", doc, slots))
    doc, slots = cartesian(3)
    templates.append(make("grouped_bar", doc, slots))
    doc, slots = cartesian(3, stacked=True)
    templates.append(make("stacked_bar", doc, slots))
    doc, slots = cartesian(1, horizontal=True)
    templates.append(make("horizontal_bar", doc, slots))
    doc, slots = cartesian(2, horizontal=True)
    templates.append(make("horizontal_grouped_bar", doc, slots))
    doc, slots = cartesian(3, horizontal=True, stacked=True)
    templates.append(make("horizontal_stacked_bar", doc, slots))
    doc, slots = cartesian(1, value_range=(-50, 80), ensure_negative=True)
    templates.append(make("negative_bar", doc, slots))
    doc, slots = cartesian(2, stacked=True, value_range=(-60, 60), ensure_negative=True)
    templates.append(make("diverging_bar", doc, slots))
    doc, slots = cartesian(2, series_kinds=["bar", "line"])
    templates.append(make("bar_line_combo", doc, slots))

    # ---- line ----
    doc, slots = cartesian(1, series_kinds=["line"], label_count=(5, 10))
    templates.append(make("basic_line", doc, slots))
    doc, slots = cartesian(3, series_kinds=["line"] * 3, label_count=(5, 10))
    templates.append(make("multi_line", doc, slots))
    doc, slots = cartesian(1, series_kinds=["line"], label_count=(5, 10),
                           series_extra=[{"smooth": True}])
    templates.append(make("smooth_line", doc, slots))
    doc, slots = cartesian(1, series_kinds=["line"], label_count=(5, 10),
                           series_extra=[{"step": "middle"}])
    templates.append(make("step_line", doc, slots))
    doc, slots = cartesian(1, series_kinds=["line"], label_count=(5, 10),
                           series_extra=[{"areaStyle": {}}])
    templates.append(make("area_line", doc, slots))
    doc, slots = cartesian(3, series_kinds=["line"] * 3, stacked=True,
                           label_count=(5, 10), series_extra=[{"areaStyle": {}}] * 3)
    templates.append(make("stacked_area_line", doc, slots))
    doc, slots = cartesian(2, series_kinds=["line"] * 2, stacked=True, label_count=(5, 10))
    templates.append(make("stacked_line", doc, slots))
    # time_line: continuous time axis, points are [date, value] pairs
    slots = base_slots() + [
        name_slot(0),
        slot("points_1", "numeric-series", structure="timeseries", count=[6, 12], range=[0, 100], decimals=1),
    ]
    doc = {
        "title": {"text": ph("title")},
        "color": ph("palette"),
        "xAxis": {"type": "time"},
        "yAxis": {"type": "value"},
        "series": [series("line", ph("name_1"), "points_1")],
    }
    templates.append(make("time_line", doc, slots))
    doc, slots = cartesian(1, series_kinds=["line"], label_count=(5, 10),
                           value_range=(-40, 60), ensure_negative=True)
    templates.append(make("negative_line", doc, slots))

    # ---- pie ----
    def pie_template(subtype, n_series, label_counts, extra_by_series=None, theme=None):
        extra_by_series = extra_by_series or [{}] * n_series
        slots = base_slots()
        ser = []
        for i in range(n_series):
            lo, hi = label_counts[i]
            kwargs = {"structure": "named", "count": [lo, hi], "range": [10, 100], "decimals": 1}
            if theme:
                kwargs["theme"] = theme
            slots.append(slot(f"slices_{i + 1}", "numeric-series", **kwargs))
            slots.append(name_slot(i))
            ser.append(series("pie", ph(f"name_{i + 1}"), f"slices_{i + 1}", **extra_by_series[i]))
        doc = {"title": {"text": ph("title")}, "color": ph("palette"), "series": ser}
        return make(subtype, doc, slots)

    templates.append(pie_template("basic_pie", 1, [(3, 6)]))
    templates.append(pie_template("binary_pie", 1, [(2, 2)]))
    templates.append(pie_template("doughnut_pie", 1, [(3, 6)], [{"radius": ["40%", "70%"]}]))
    templates.append(pie_template("rose_pie", 1, [(4, 7)], [{"roseType": "radius"}]))
    templates.append(pie_template("nested_pie", 2, [(3, 4), (4, 6)],
                                  [{"radius": ["0%", "35%"]}, {"radius": ["45%", "70%"]}]))
    templates.append(pie_template("multi_level_pie", 3, [(2, 3), (3, 4), (4, 5)],
                                  [{"radius": ["0%", "25%"]}, {"radius": ["30%", "50%"]}, {"radius": ["55%", "75%"]}]))

    # ---- scatter ----
    def xy_template(subtype, n_series, structure, count, rng, extra=None, x_type="value"):
        slots = base_slots()
        ser = []
        for i in range(n_series):
            kwargs = {"structure": structure, "count": list(count), "range": list(rng), "decimals": 1}
            if extra:
                kwargs.update(extra)
            slots.append(slot(f"points_{i + 1}", "numeric-series", **kwargs))
            slots.append(name_slot(i))
            ser.append(series("scatter", ph(f"name_{i + 1}"), f"points_{i + 1}"))
        doc = {
            "title": {"text": ph("title")},
            "color": ph("palette"),
            "xAxis": {"type": x_type},
            "yAxis": {"type": "value"},
            "series": ser,
        }
        return make(subtype, doc, slots)

    templates.append(xy_template("basic_scatter", 1, "pairs", (8, 15), (0, 100)))
    templates.append(xy_template("multi_scatter", 2, "pairs", (8, 12), (0, 100)))
    templates.append(xy_template("bubble_scatter", 1, "triples", (8, 12), (0, 100), {"size_range": [5, 40]}))
    templates.append(xy_template("quadrant_scatter", 1, "pairs", (8, 15), (-50, 50), {"ensure_negative": True}))
    templates.append(xy_template("time_scatter", 1, "timeseries", (8, 14), (0, 100), x_type="time"))
    doc, slots = cartesian(1, series_kinds=["scatter"], label_count=(5, 8))
    templates.append(make("category_scatter", doc, slots))

    # ---- radar ----
    def radar_template(subtype, n_polygons, filled=False):
        slots = base_slots() + [
            slot("indicators", "labels", structure="indicator_spec", count=[4, 6], theme="metrics"),
            name_slot(0),
            slot("polygons", "numeric-series", structure="radar_polygons",
                 count=[n_polygons, n_polygons], dims_from="indicators", range=[0, 100], decimals=1),
        ]
        extra = {"areaStyle": {}} if filled else {}
        doc = {
            "title": {"text": ph("title")},
            "color": ph("palette"),
            "radar": {"indicator": ph("indicators")},
            "series": [series("radar", ph("name_1"), "polygons", **extra)],
        }
        return make(subtype, doc, slots)

    templates.append(radar_template("basic_radar", 1))
    templates.append(radar_template("comparison_radar", 2))
    templates.append(radar_template("multi_radar", 3))
    templates.append(radar_template("filled_radar", 2, filled=True))

    # ---- heatmap ----
    def heatmap_template(subtype, x_count, y_count, rng, structure="grid", square=False,
                         ensure_negative=False, decimals=1):
        slots = base_slots() + [slot("x_labels", "labels", count=list(x_count))]
        y_slot = "x_labels" if square else "y_labels"
        if not square:
            slots.append(slot("y_labels", "labels", count=list(y_count)))
        cell_kwargs = {"structure": structure, "grid_from": ["x_labels", y_slot],
                       "range": list(rng), "decimals": decimals}
        if ensure_negative:
            cell_kwargs["ensure_negative"] = True
        slots.append(slot("cells", "numeric-series", **cell_kwargs))
        slots.append(name_slot(0))
        doc = {
            "title": {"text": ph("title")},
            "color": ph("palette"),
            "xAxis": {"type": "category", "data": ph("x_labels")},
            "yAxis": {"type": "category", "data": ph(y_slot)},
            "series": [series("heatmap", ph("name_1"), "cells")],
        }
        return make(subtype, doc, slots)

    templates.append(heatmap_template("basic_heatmap", (4, 7), (3, 6), (0, 100)))
    templates.append(heatmap_template("dense_heatmap", (8, 10), (8, 10), (0, 100)))
    templates.append(heatmap_template("correlation_heatmap", (4, 6), None, (-1, 1), square=True,
                                      ensure_negative=True, decimals=2))
    templates.append(heatmap_template("sparse_heatmap", (5, 8), (4, 6), (0, 100), structure="grid_sparse"))

    # ---- boxplot ----
    def box_template(subtype, n_series, horizontal=False, rng=(0, 100), ensure_negative=False):
        slots = base_slots() + [slot("labels", "labels", count=[4, 6])]
        ser = []
        for i in range(n_series):
            kwargs = {"structure": "five_number", "count_from": "labels", "range": list(rng), "decimals": 1}
            if ensure_negative and i == 0:
                kwargs["ensure_negative"] = True
            slots.append(slot(f"boxes_{i + 1}", "numeric-series", **kwargs))
            slots.append(name_slot(i))
            ser.append(series("boxplot", ph(f"name_{i + 1}"), f"boxes_{i + 1}"))
        cat, val = axis("category", "labels"), axis("value")
        doc = {
            "title": {"text": ph("title")},
            "color": ph("palette"),
            "xAxis": val if horizontal else cat,
            "yAxis": cat if horizontal else val,
            "series": ser,
        }
        return make(subtype, doc, slots)

    templates.append(box_template("basic_boxplot", 1))
    templates.append(box_template("grouped_boxplot", 2))
    templates.append(box_template("horizontal_boxplot", 1, horizontal=True))
    templates.append(box_template("negative_boxplot", 1, rng=(-50, 50), ensure_negative=True))

    # ---- candlestick ----
    def candle_template(subtype, n_series, time_axis=False, volume=False):
        slots = base_slots()
        ser = []
        if time_axis:
            slots.append(slot("points_1", "numeric-series", structure="time_ohlc",
                              count=[6, 10], range=[20, 100], decimals=2))
            slots.append(name_slot(0))
            ser.append(series("candlestick", ph("name_1"), "points_1"))
            xaxis = {"type": "time"}
        else:
            slots.append(slot("labels", "labels", count=[6, 10], theme="dates"))
            for i in range(n_series):
                slots.append(slot(f"ohlc_{i + 1}", "numeric-series", structure="ohlc",
                                  count_from="labels", range=[20, 100], decimals=2))
                slots.append(name_slot(i))
                ser.append(series("candlestick", ph(f"name_{i + 1}"), f"ohlc_{i + 1}"))
            xaxis = {"type": "category", "data": ph("labels")}
        if volume:
            i = n_series
            slots.append(slot("volumes", "numeric-series", structure="values", count_from="labels",
                              range=[100, 1000], decimals=0))
            slots.append(name_slot(i))
            ser.append(series("bar", ph(f"name_{i + 1}"), "volumes"))
        doc = {
            "title": {"text": ph("title")},
            "color": ph("palette"),
            "xAxis": xaxis,
            "yAxis": {"type": "value"},
            "series": ser,
        }
        return make(subtype, doc, slots)

    templates.append(candle_template("basic_candlestick", 1))
    templates.append(candle_template("multi_candlestick", 2))
    templates.append(candle_template("time_candlestick", 1, time_axis=True))
    templates.append(candle_template("candlestick_volume", 1, volume=True))

    # ---- funnel ----
    def funnel_template(subtype, n_series, sort):
        slots = base_slots()
        ser = []
        for i in range(n_series):
            kwargs = {"structure": "named", "count": [4, 6], "theme": "stages",
                      "range": [10, 100], "decimals": 0, "sort": sort, "distinct": True}
            slots.append(slot(f"stages_{i + 1}", "numeric-series", **kwargs))
            slots.append(name_slot(i))
            extra = {"sort": "ascending"} if sort == "asc" else {}
            ser.append(series("funnel", ph(f"name_{i + 1}"), f"stages_{i + 1}", **extra))
        doc = {"title": {"text": ph("title")}, "color": ph("palette"), "series": ser}
        return make(subtype, doc, slots)

    templates.append(funnel_template("basic_funnel", 1, sort="desc"))
    templates.append(funnel_template("pyramid_funnel", 1, sort="asc"))
    templates.append(funnel_template("comparison_funnel", 2, sort="desc"))

    assert len(templates) == 49, len(templates)
    assert len({t["subtype"] for t in templates}) == 49
    OUT.write_text(json.dumps({"templates": templates}, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {OUT} ({len(templates)} templates)")


if __name__ == "__main__":
    write_templates()
