"""Deterministic procedural chart generation.

Fills a template's slots with seeded pseudo-random content so that corpora
can be built offline and reproducibly: the output is a pure function of
(template, topic, seed). Ten percent of plain value series get a near-tie
injected (two values within 2% of each other) to keep downstream answer
matching honest about close calls.
"""

from __future__ import annotations

import hashlib
import json
import random

from ..spec_core import ChartSpec, Taxonomy, parse_spec
from .templates import ChartTemplate, SlotSpec, load_wordlists

NEAR_TIE_PROBABILITY = 0.10


def _stable_seed(subtype: str, domain: str, subtopic: str, seed: int) -> int:
    blob = f"{subtype}|{domain}|{subtopic}|{seed}".encode("utf-8")
    return int.from_bytes(hashlib.sha256(blob).digest()[:8], "big")


def _round(v: float, decimals: int) -> float:
    return round(v, decimals) if decimals > 0 else float(round(v))


class _Filler:
    def __init__(self, template: ChartTemplate, domain: str, subtopic: str, seed: int, wordlists: dict):
        self.template = template
        self.domain = domain
        self.subtopic = subtopic
        self.rng = random.Random(_stable_seed(template.subtype, domain, subtopic, seed))
        self.words = wordlists
        self.filled: dict[str, object] = {}
        pool = list(wordlists["series_names"])
        self.names = self.rng.sample(pool, len(pool))

    # -- label helpers ---------------------------------------------------

    def _theme_labels(self, count_range: list, theme: str | None) -> list[str]:
        lo, hi = count_range
        k = self.rng.randint(lo, hi)
        if theme == "dates":
            return list(self.words["dates"][:k])
        themes = self.words["label_themes"]
        if theme:
            return list(themes[theme][:k])
        eligible = [name for name, words in themes.items() if len(words) >= k]
        return list(themes[self.rng.choice(eligible)][:k])

    # -- numeric helpers ---------------------------------------------------

    def _draw(self, rng_range: list, decimals: int) -> float:
        lo, hi = rng_range
        return _round(self.rng.uniform(lo, hi), decimals)

    def _values(self, n: int, c: dict) -> list[float]:
        decimals = c.get("decimals", 1)
        if c.get("distinct"):
            lo, hi = c["range"]
            span = max(1, int(hi - lo))
            picks = self.rng.sample(range(span + 1), min(n, span + 1))
            vals = [float(lo + p) for p in picks]
        else:
            vals = [self._draw(c["range"], decimals) for _ in range(n)]
        if c.get("sort") is None and n >= 2 and self.rng.random() < NEAR_TIE_PROBABILITY:
            i, j = self.rng.sample(range(n), 2)
            tied = vals[i] * (1 + self.rng.uniform(-0.02, 0.02))
            lo, hi = c["range"]
            vals[j] = _round(min(max(tied, lo), hi), decimals)
        # the forced negative must come after tie injection so it can never
        # be overwritten; sorting below only reorders it
        if c.get("ensure_negative") and not any(v < 0 for v in vals):
            lo = c["range"][0]
            vals[0] = _round(self.rng.uniform(lo, min(-0.01, lo / 10)), decimals)
        if c.get("sort") == "desc":
            vals.sort(reverse=True)
        elif c.get("sort") == "asc":
            vals.sort()
        return vals

    def _count(self, c: dict) -> int:
        if "count_from" in c:
            ref = self.filled[c["count_from"]]
            return len(ref)  # type: ignore[arg-type]
        lo, hi = c["count"]
        return self.rng.randint(lo, hi)

    # -- slot dispatch -----------------------------------------------------

    def fill_slot(self, s: SlotSpec) -> object:
        c = s.constraints
        if s.kind == "title":
            return f"{self.subtopic.title()} ({self.domain.title()})"
        if s.kind == "palette":
            return self.rng.choice(self.words["palettes"])
        if s.kind == "labels":
            structure = c.get("structure", "categories")
            if structure == "series_name":
                return self.names[c["index"] % len(self.names)]
            if structure == "indicator_spec":
                labels = self._theme_labels(c["count"], c.get("theme"))
                return [{"name": l} for l in labels]
            return self._theme_labels(c["count"], c.get("theme"))
        return self._numeric_series(c)

    def _numeric_series(self, c: dict) -> object:
        structure = c.get("structure", "values")
        decimals = c.get("decimals", 1)
        if structure == "values":
            return self._values(self._count(c), c)
        if structure == "named":
            labels = self._theme_labels(c["count"], c.get("theme"))
            vals = self._values(len(labels), c)
            return [{"value": v, "name": l} for v, l in zip(vals, labels)]
        if structure == "pairs":
            n = self._count(c)
            pairs = [[self._draw(c["range"], decimals), self._draw(c["range"], decimals)] for _ in range(n)]
            if c.get("ensure_negative") and not any(v < 0 for p in pairs for v in p):
                lo = c["range"][0]
                pairs[0][0] = _round(self.rng.uniform(lo, min(-0.01, lo / 10)), decimals)
            return pairs
        if structure == "triples":
            n = self._count(c)
            size = c.get("size_range", [5, 40])
            return [
                [self._draw(c["range"], decimals), self._draw(c["range"], decimals), self._draw(size, decimals)]
                for _ in range(n)
            ]
        if structure == "timeseries":
            n = self._count(c)
            dates = self.words["dates"][:n]
            return [[d, self._draw(c["range"], decimals)] for d in dates]
        if structure == "ohlc":
            return [self._ohlc(c, decimals) for _ in range(self._count(c))]
        if structure == "time_ohlc":
            n = self._count(c)
            return [[d, *self._ohlc(c, decimals)] for d in self.words["dates"][:n]]
        if structure == "five_number":
            return [self._five_number(c, decimals) for _ in range(self._count(c))]
        if structure in ("grid", "grid_sparse"):
            return self._grid(c, decimals, sparse=structure == "grid_sparse")
        if structure == "radar_polygons":
            dims = len(self.filled[c["dims_from"]])  # type: ignore[arg-type]
            n = self._count(c)
            return [
                {
                    "value": [self._draw(c["range"], decimals) for _ in range(dims)],
                    "name": self.names[(j + 1) % len(self.names)],
                }
                for j in range(n)
            ]
        raise ValueError(f"unknown numeric structure {structure!r}")

    def _ohlc(self, c: dict, decimals: int) -> list[float]:
        o = self._draw(c["range"], decimals)
        close = self._draw(c["range"], decimals)
        low = _round(min(o, close) - self.rng.uniform(0, 5), decimals)
        high = _round(max(o, close) + self.rng.uniform(0, 5), decimals)
        return [o, close, low, high]

    def _five_number(self, c: dict, decimals: int) -> list[float]:
        vals = [self._draw(c["range"], decimals) for _ in range(5)]
        if c.get("ensure_negative") and not any(v < 0 for v in vals):
            vals[0] = _round(self.rng.uniform(c["range"][0], -1), decimals)
        return sorted(vals)

    def _grid(self, c: dict, decimals: int, *, sparse: bool) -> list:
        xs, ys = (self.filled[name] for name in c["grid_from"])
        cells = [
            [xi, yi, self._draw(c["range"], decimals)]
            for yi in range(len(ys))  # type: ignore[arg-type]
            for xi in range(len(xs))  # type: ignore[arg-type]
        ]
        if c.get("ensure_negative") and not any(cell[2] < 0 for cell in cells):
            cells[0][2] = _round(self.rng.uniform(c["range"][0], -0.01), decimals)
        if sparse:
            drop = max(1, int(len(cells) * 0.25))
            dropped = set(self.rng.sample(range(len(cells)), drop))
            cells = [cell for i, cell in enumerate(cells) if i not in dropped]
        return cells

    def run(self) -> str:
        text = self.template.skeleton
        for s in self.template.slot_schema:
            value = self.fill_slot(s)
            self.filled[s.slot] = value
            text = text.replace(f'"{{{{{s.slot}}}}}"', json.dumps(value))
        return text


_wordlists_cache: dict | None = None


def generate_spec_procedural(
    template: ChartTemplate,
    topic: tuple[str, str],
    seed: int,
    taxonomy: Taxonomy | None = None,
) -> ChartSpec:
    """Generate one valid ChartSpec deterministically from (template, topic, seed)."""
    global _wordlists_cache
    if _wordlists_cache is None:
        _wordlists_cache = load_wordlists()
    domain, subtopic = topic
    document = _Filler(template, domain, subtopic, seed, _wordlists_cache).run()
    spec = parse_spec(document, taxonomy)
    if spec.subtype != template.subtype:
        raise RuntimeError(
            f"template {template.subtype!r} generated a spec classified as "
            f"{spec.subtype!r}; template and taxonomy disagree"
        )
    return spec.with_topic(f"{domain}/{subtopic}")
