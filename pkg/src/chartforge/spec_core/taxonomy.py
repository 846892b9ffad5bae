"""Chart-type taxonomy: load, check, and classify.

The default taxonomy ships 9 major categories and 49 subtypes, each defined
by declarative constraints over a spec's structural feature vector. The
constraint table is data, not code, so users can substitute their own
taxonomy file.

Constraint semantics: a subtype matches when every constraint key holds on
the feature vector; keys absent from a subtype's constraints are wildcards.
Scalar constraints are equality checks; ``{"min": a, "max": b}`` objects are
inclusive range checks; the ``kinds`` constraint compares against the sorted
set of series kinds in the chart.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import AmbiguousSubtype, ConfigError, UnclassifiableSpec
from .types import AxisKind, ChartSpec, SeriesKind

DEFAULT_CATEGORY_COUNT = 9
DEFAULT_SUBTYPE_COUNT = 49


@dataclass(frozen=True)
class SubtypeDescriptor:
    name: str
    category: str
    series_kind: str
    constraints: dict


@dataclass(frozen=True)
class Taxonomy:
    categories: dict[str, tuple[SubtypeDescriptor, ...]]

    @property
    def subtypes(self) -> tuple[SubtypeDescriptor, ...]:
        return tuple(d for descs in self.categories.values() for d in descs)

    def subtype(self, name: str) -> SubtypeDescriptor:
        for d in self.subtypes:
            if d.name == name:
                return d
        raise KeyError(name)

    def contains(self, category: str, subtype: str) -> bool:
        return any(d.name == subtype for d in self.categories.get(category, ()))

    @property
    def category_count(self) -> int:
        return len(self.categories)

    @property
    def subtype_count(self) -> int:
        return len(self.subtypes)


def _check(tax: Taxonomy) -> Taxonomy:
    names = [d.name for d in tax.subtypes]
    if len(names) != len(set(names)):
        dupes = sorted({n for n in names if names.count(n) > 1})
        raise ConfigError(f"duplicate subtype names in taxonomy: {dupes}")
    return tax


def load_taxonomy(path: str | Path) -> Taxonomy:
    """Load a taxonomy config file ({categories: {name: [descriptor...]}})."""
    raw = json.loads(Path(path).read_text(encoding="utf-8"))
    return _from_dict(raw)


def _from_dict(raw: dict) -> Taxonomy:
    if "categories" not in raw or not isinstance(raw["categories"], dict):
        raise ConfigError("taxonomy file must contain a 'categories' mapping")
    cats: dict[str, tuple[SubtypeDescriptor, ...]] = {}
    for cat, entries in raw["categories"].items():
        descs = []
        for e in entries:
            try:
                descs.append(
                    SubtypeDescriptor(
                        name=e["name"],
                        category=cat,
                        series_kind=e["series_kind"],
                        constraints=dict(e.get("constraints", {})),
                    )
                )
            except KeyError as exc:
                raise ConfigError(f"subtype entry under {cat!r} missing {exc}") from exc
        cats[cat] = tuple(descs)
    return _check(Taxonomy(categories=cats))


_default: Taxonomy | None = None


def default_taxonomy() -> Taxonomy:
    """The packaged 9-category / 49-subtype taxonomy (counts asserted)."""
    global _default
    if _default is None:
        text = resources.files("chartforge.data").joinpath("taxonomy.json").read_text("utf-8")
        tax = _from_dict(json.loads(text))
        if tax.category_count != DEFAULT_CATEGORY_COUNT or tax.subtype_count != DEFAULT_SUBTYPE_COUNT:
            raise ConfigError(
                f"packaged taxonomy must have {DEFAULT_CATEGORY_COUNT} categories / "
                f"{DEFAULT_SUBTYPE_COUNT} subtypes, found "
                f"{tax.category_count}/{tax.subtype_count}"
            )
        _default = tax
    return _default


def _is_non_increasing(values: tuple[float, ...]) -> bool:
    return all(a >= b for a, b in zip(values, values[1:]))


def features(spec: ChartSpec) -> dict:
    """Structural feature vector that classification constraints test."""
    kind_names = sorted(
        {s.other_kind if s.kind is SeriesKind.OTHER else s.kind.value for s in spec.series}
    )
    first = spec.series[0]
    all_points = [p for s in spec.series for p in s.data]
    arity = max((len(p.values) for p in all_points), default=0)
    feats: dict = {
        "kinds": kind_names,
        "n_series": len(spec.series),
        "x_kind": spec.x_axis.kind.value if spec.x_axis else "none",
        "y_kind": spec.y_axis.kind.value if spec.y_axis else "none",
        "arity": arity,
        "has_negative": any(v < 0 for p in all_points for v in p.values),
        "stacked": len(spec.series) >= 2 and all(s.stacked for s in spec.series),
        "smooth": all(s.smooth for s in spec.series),
        "step": all(s.step for s in spec.series),
        "area": all(s.area for s in spec.series),
        "ring": any(s.ring for s in spec.series),
        "rose": any(s.rose for s in spec.series),
        "n_points": len(first.data),
        "total_points": len(all_points),
        "monotone_non_increasing": _is_non_increasing(tuple(p.values[0] for p in first.data))
        if first.data and first.data[0].values
        else True,
    }
    # Heatmap grids: completeness relative to the label cross product.
    if (
        spec.x_axis is not None
        and spec.y_axis is not None
        and spec.x_axis.kind is AxisKind.CATEGORY
        and spec.y_axis.kind is AxisKind.CATEGORY
        and spec.x_axis.labels
        and spec.y_axis.labels
    ):
        cells = len(spec.x_axis.labels) * len(spec.y_axis.labels)
        feats["cells"] = cells
        feats["grid_full"] = len(all_points) == cells
    else:
        feats["cells"] = 0
        feats["grid_full"] = False
    return feats


def _constraint_holds(value, constraint) -> bool:
    if isinstance(constraint, dict):
        lo = constraint.get("min")
        hi = constraint.get("max")
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            return False
        return (lo is None or value >= lo) and (hi is None or value <= hi)
    if isinstance(constraint, list):
        return list(value) == constraint
    return value == constraint


def matches(desc: SubtypeDescriptor, feats: dict) -> bool:
    return all(_constraint_holds(feats.get(key), want) for key, want in desc.constraints.items())


def classify_spec(spec: ChartSpec, taxonomy: Taxonomy | None = None) -> tuple[str, str]:
    """Return the unique ``(category, subtype)`` whose constraints match.

    Raises ``UnclassifiableSpec`` when nothing matches and ``AmbiguousSubtype``
    when several do (the latter indicates a broken taxonomy config, not a
    broken spec).
    """
    taxonomy = taxonomy or default_taxonomy()
    feats = features(spec)
    hits = [d for d in taxonomy.subtypes if matches(d, feats)]
    if not hits:
        raise UnclassifiableSpec(
            f"no subtype matches features {feats['kinds']}/{feats['x_kind']}x{feats['y_kind']}"
            f" with {feats['n_series']} series"
        )
    if len(hits) > 1:
        raise AmbiguousSubtype(
            "taxonomy constraints overlap: " + ", ".join(d.name for d in hits)
        )
    return hits[0].category, hits[0].name
