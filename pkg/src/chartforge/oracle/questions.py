"""Question/answer pair synthesis for generated chart specs.

Questions are structured (kind + slots); the text field is rendered from
fixed templates, so no natural-language parsing ever happens. Every emitted
sample's gold answer comes from the oracle itself, which keeps the dataset
self-consistent by construction.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from ..spec_core import ChartSpec, SeriesKind, canonical_label
from .answering import Answer, Question, answer, series_view, supported_kinds

# Oracle kinds grouped into the four stratification categories.
DEFAULT_REASONING_MAP = {
    "retrieve_value": "value_retrieval",
    "extremum": "comparison",
    "compare": "comparison",
    "count": "comparison",
    "aggregate": "arithmetic",
    "trend": "trend",
}


@dataclass(frozen=True)
class QASample:
    id: str
    image_ref: str
    spec_ref: str
    question: Question
    gold: Answer
    reasoning_type: str
    chart_type: str

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "image": self.image_ref,
            "spec_id": self.spec_ref,
            "question": self.question.text,
            "kind": self.question.kind,
            "reasoning_type": self.reasoning_type,
            "chart_type": self.chart_type,
            "answer": self.gold.payload,
            "derivation": [list(step) for step in self.gold.derivation],
        }


def _stable_rng(spec_id: str, seed: int) -> random.Random:
    blob = f"{spec_id}|{seed}".encode("utf-8")
    return random.Random(int.from_bytes(hashlib.sha256(blob).digest()[:8], "big"))


def _render(kind: str, slots: dict, chart_kind: str) -> str:
    series = slots.get("series", "")
    if kind == "retrieve_value":
        return f"What is the value of {series} at {slots['label']}?"
    if kind == "extremum":
        which = "highest" if slots.get("op", "max") == "max" else "lowest"
        if slots.get("label"):
            return f"Which dimension of {slots['label']} in {series} has the {which} value?"
        return f"Which entry has the {which} value in {series}?"
    if kind == "aggregate":
        op = slots["op"]
        if op == "difference":
            return f"What is the difference between {slots['label']} and {slots['label2']} in {series}?"
        if op == "ratio":
            return f"What is the ratio of {slots['label']} to {slots['label2']} in {series}?"
        if slots.get("label"):
            return f"What is the {op} of the {slots['label']} values in {series}?"
        return f"What is the {op} of the values in {series}?"
    if kind == "compare":
        cmp_word = slots.get("comparator", "greater")
        if "series2" in slots:
            return f"Is {series} {cmp_word} than {slots['series2']} at {slots['label']}?"
        return f"Is {slots['label']} {cmp_word} than {slots['label2']} in {series}?"
    if kind == "count":
        return f"How many data points does {series} have?"
    if kind == "trend":
        return f"What is the overall trend of {series}?"
    raise ValueError(kind)


def _labeled(view) -> list[tuple[str, float]]:
    return [(l, v) for l, v in view if l is not None]


def _shared_labels(spec: ChartSpec) -> list[str]:
    sets = []
    for s in spec.series:
        labels = {canonical_label(l) for l, _ in _labeled(series_view(spec, s))}
        sets.append(labels)
    shared = set.intersection(*sets) if sets else set()
    first_view = _labeled(series_view(spec, spec.series[0]))
    return [l for l, _ in first_view if canonical_label(l) in shared]


def _make_slots(spec: ChartSpec, kind: str, rng: random.Random) -> dict:
    is_radar = spec.series[0].kind is SeriesKind.RADAR
    series = rng.choice(spec.series)
    slots: dict = {"series": series.name}

    if is_radar and kind in ("extremum", "aggregate"):
        polygons = [p.label for p in series.data if p.label]
        slots["label"] = rng.choice(polygons)
        view = [(l, v) for l, v in zip(spec.x_axis.labels if spec.x_axis else (), series.data[0].values)]
        labeled = [(str(l), v) for l, v in view]
    else:
        labeled = _labeled(series_view(spec, series))

    if kind == "retrieve_value":
        slots["label"] = rng.choice(labeled)[0]
    elif kind == "extremum":
        slots["op"] = rng.choice(["max", "min"])
    elif kind == "aggregate":
        ops = ["sum", "mean", "min", "max"]
        if not is_radar and len(labeled) >= 2:
            ops += ["difference", "ratio"]
        op = rng.choice(ops)
        if op in ("difference", "ratio"):
            a, b = rng.sample(labeled, 2)
            if op == "ratio" and b[1] == 0:
                nonzero = [x for x in labeled if x[1] != 0 and x[0] != a[0]]
                if nonzero:
                    b = rng.choice(nonzero)
                else:
                    op = "difference"
            slots["label"], slots["label2"] = a[0], b[0]
        slots["op"] = op
    elif kind == "compare":
        slots["comparator"] = rng.choice(["greater", "less"])
        shared = _shared_labels(spec) if len(spec.series) >= 2 else []
        if shared and rng.random() < 0.5:
            others = [s.name for s in spec.series if s.name != series.name]
            slots["series2"] = rng.choice(others)
            slots["label"] = rng.choice(shared)
        else:
            a, b = rng.sample(labeled, 2)
            slots["label"], slots["label2"] = a[0], b[0]
    return slots


def generate_questions(
    spec: ChartSpec,
    k: int,
    seed: int,
    image_ref: str | None = None,
    reasoning_map: dict | None = None,
) -> list[QASample]:
    """Deterministically synthesize k QA samples for one spec.

    Kinds rotate round-robin over those the chart type supports; slot
    choices are drawn from the seeded generator. Gold answers are computed
    by the oracle, never invented.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    reasoning_map = reasoning_map or DEFAULT_REASONING_MAP
    rng = _stable_rng(spec.id, seed)
    kinds = supported_kinds(spec)
    image = image_ref or f"images/{spec.id}.png"
    samples = []
    for i in range(k):
        kind = kinds[i % len(kinds)]
        slots = _make_slots(spec, kind, rng)
        q = Question(text=_render(kind, slots, spec.category), kind=kind, slots=slots)
        gold = answer(spec, q)
        samples.append(
            QASample(
                id=f"{spec.id}-q{i}",
                image_ref=image,
                spec_ref=spec.id,
                question=q,
                gold=gold,
                reasoning_type=reasoning_map[kind],
                chart_type=spec.category,
            )
        )
    return samples
