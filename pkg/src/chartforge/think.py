"""Verified reasoning-dataset construction.

Three steps: stratified sampling over reasoning-type x chart-type, trace
generation through a pluggable reasoner (the chart's code plus the question
go into the prompt), and retention of only those traces whose predicted
answer matches the gold answer under the exact protocol. What survives is
the reasoning dataset.
"""

from __future__ import annotations

import base64
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from random import Random
from typing import Mapping, Protocol, Sequence

from .errors import InsufficientData, MissingStratumLabel, TemplateViolation
from .generator.llm import HttpTextClient
from .oracle import QASample, match_answer, payload_text
from .spec_core import ChartSpec, parse_spec, serialize_spec
from .tracefmt import DEFAULT_TEMPLATE, OutputTemplate, extract_answer, extract_think


@dataclass(frozen=True)
class ThinkSample:
    id: str
    image_ref: str
    question: str
    reasoning: str
    answer: str
    source: str
    reasoning_type: str
    chart_type: str

    def to_record(self) -> dict:
        return {
            "id": self.id,
            "image": self.image_ref,
            "question": self.question,
            "reasoning": self.reasoning,
            "answer": self.answer,
            "reasoning_type": self.reasoning_type,
            "chart_type": self.chart_type,
            "source": self.source,
        }


@dataclass(frozen=True)
class StrataPlan:
    dims: tuple[tuple[str, ...], tuple[str, ...]]  # (reasoning types, chart types)
    allocation: dict[tuple[str, str], int]
    mode: str

    @property
    def total(self) -> int:
        return sum(self.allocation.values())


def _stratum(sample) -> tuple[str, str]:
    if isinstance(sample, Mapping):
        rt, ct = sample.get("reasoning_type"), sample.get("chart_type")
    else:
        rt = getattr(sample, "reasoning_type", None)
        ct = getattr(sample, "chart_type", None)
    if not rt or not ct:
        raise MissingStratumLabel(f"sample {sample!r:.80} lacks stratum labels")
    return str(rt), str(ct)


def make_plan(dataset: Sequence, n: int, mode: str = "balanced") -> StrataPlan:
    """Allocate n picks across the strata present in the dataset.

    Balanced mode targets equal quotas (largest-remainder rounding, deficits
    redistributed to the strata with the most remaining capacity);
    proportional mode sizes quotas by stratum population.
    """
    if mode not in ("balanced", "proportional"):
        raise ValueError(f"unknown mode {mode!r}")
    if n > len(dataset):
        raise InsufficientData(f"requested {n} of {len(dataset)} samples")
    populations: Counter = Counter(_stratum(s) for s in dataset)
    strata = sorted(populations)
    alloc: dict[tuple[str, str], int] = {}

    if mode == "proportional":
        total = len(dataset)
        shares = [(s, n * populations[s] / total) for s in strata]
        for s, share in shares:
            alloc[s] = int(share)
        remainder = n - sum(alloc.values())
        by_fraction = sorted(
            shares, key=lambda kv: (-(kv[1] - int(kv[1])), -populations[kv[0]], kv[0])
        )
        for s, _ in by_fraction[:remainder]:
            alloc[s] += 1
    else:
        base, rem = divmod(n, len(strata))
        for i, s in enumerate(strata):
            alloc[s] = min(base + (1 if i < rem else 0), populations[s])
        deficit = n - sum(alloc.values())
        while deficit > 0:
            candidates = [s for s in strata if populations[s] > alloc[s]]
            s = max(candidates, key=lambda s: (populations[s] - alloc[s], s))
            alloc[s] += 1
            deficit -= 1

    rts = tuple(sorted({rt for rt, _ in strata}))
    cts = tuple(sorted({ct for _, ct in strata}))
    return StrataPlan(dims=(rts, cts), allocation=alloc, mode=mode)


def stratified_sample(dataset: Sequence, n: int, mode: str = "balanced", seed: int = 0) -> list:
    """Deterministic stratified subset of the dataset, in input order."""
    plan = make_plan(dataset, n, mode)
    by_stratum: dict[tuple[str, str], list[int]] = defaultdict(list)
    for i, sample in enumerate(dataset):
        by_stratum[_stratum(sample)].append(i)
    rng = Random(seed)
    chosen: set[int] = set()
    for stratum in sorted(plan.allocation):
        quota = plan.allocation[stratum]
        members = by_stratum[stratum]
        chosen.update(rng.sample(members, quota))
    return [dataset[i] for i in sorted(chosen)]


# --- trace generation -----------------------------------------------------


class ReasonerClient(Protocol):
    def reason(self, prompt: str, max_tokens: int) -> str: ...


class VisionClient(Protocol):
    def chart_to_code(self, image_base64: str, instruction: str) -> str: ...


class HttpReasonerClient(HttpTextClient):
    def reason(self, prompt: str, max_tokens: int) -> str:
        return self.post({"prompt": prompt, "max_tokens": max_tokens})


class HttpVisionClient(HttpTextClient):
    def chart_to_code(self, image_base64: str, instruction: str) -> str:
        return self.post({"image_base64": image_base64, "instruction": instruction})


REASONING_PROMPT = (
    "You are reasoning over a chart given as structured chart code.\n"
    "Chart code:\n{code}\n\n"
    "Question: {question}\n"
    "Work through the problem step by step inside {think_open}{think_close} "
    "tags, then give only the final answer inside {answer_open}{answer_close} tags."
)

C2C_INSTRUCTION = "Convert this chart image into its structured chart code."


def build_trace(
    spec: ChartSpec,
    question: str,
    reasoner: ReasonerClient,
    max_tokens: int = 2048,
    template: OutputTemplate = DEFAULT_TEMPLATE,
    prompt_template: str | None = None,
) -> tuple[str, str]:
    """Ask the reasoner for (reasoning path, predicted answer) on one question.

    The chart's serialized code and the question are composed into a single
    prompt (overridable via ``prompt_template``, same placeholders as
    ``REASONING_PROMPT``). Raises ``TemplateViolation`` when the completion
    has no parseable final answer block.
    """
    prompt = (prompt_template or REASONING_PROMPT).format(
        code=serialize_spec(spec),
        question=question,
        think_open=template.think_open,
        think_close=template.think_close,
        answer_open=template.answer_open,
        answer_close=template.answer_close,
    )
    completion = reasoner.reason(prompt, max_tokens)
    predicted = extract_answer(completion, template)
    if predicted is None:
        raise TemplateViolation("completion lacks an answer block")
    reasoning = extract_think(completion, template) or ""
    return reasoning.strip(), predicted.strip()


def spec_for_image(
    image_ref: str,
    chart2code: VisionClient | Mapping[str, ChartSpec],
) -> ChartSpec:
    """Recover the chart spec behind an image.

    With a bypass table (synthetic data, ground truth known) this is a plain
    lookup; otherwise the image goes through the vision client and its reply
    is parsed. A ``ParseError`` from an unparseable reply propagates so the
    caller can drop and count the sample.
    """
    if isinstance(chart2code, Mapping):
        return chart2code[image_ref]
    data = Path(image_ref).read_bytes()
    text = chart2code.chart_to_code(base64.b64encode(data).decode("ascii"), C2C_INSTRUCTION)
    return parse_spec(text)


# --- retention --------------------------------------------------------------


@dataclass
class RetentionReport:
    total: int = 0
    kept: int = 0
    per_stratum: dict = field(default_factory=dict)

    @property
    def rate(self) -> float | None:
        return None if self.total == 0 else self.kept / self.total

    def record(self, stratum: tuple[str, str], kept: bool):
        self.total += 1
        key = f"{stratum[0]}|{stratum[1]}"
        bucket = self.per_stratum.setdefault(key, {"total": 0, "kept": 0})
        bucket["total"] += 1
        if kept:
            self.kept += 1
            bucket["kept"] += 1

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "kept": self.kept,
            "rate": self.rate,
            "per_stratum": self.per_stratum,
        }


def _as_fields(sample) -> dict:
    if isinstance(sample, QASample):
        return {
            "id": sample.id,
            "image": sample.image_ref,
            "question": sample.question.text,
            "answer": sample.gold.payload,
            "reasoning_type": sample.reasoning_type,
            "chart_type": sample.chart_type,
        }
    return dict(sample)


def verify_and_retain(
    traces: Sequence[tuple[object, str, str]],
    source: str = "synthetic",
    protocol: str = "exact",
) -> tuple[list[ThinkSample], RetentionReport]:
    """Keep traces whose predicted answer matches gold; report per stratum.

    ``traces`` holds (qa sample, reasoning, predicted) triples; qa samples
    may be QASample objects or dataset records. Empty reasoning never
    survives (the dataset's samples must carry an actual reasoning path).
    """
    report = RetentionReport()
    kept: list[ThinkSample] = []
    for sample, reasoning, predicted in traces:
        fields = _as_fields(sample)
        stratum = (fields["reasoning_type"], fields["chart_type"])
        ok = bool(reasoning.strip()) and match_answer(predicted, fields["answer"], protocol)
        report.record(stratum, ok)
        if ok:
            kept.append(
                ThinkSample(
                    id=fields["id"],
                    image_ref=fields["image"],
                    question=fields["question"],
                    reasoning=reasoning,
                    answer=predicted,
                    source=source,
                    reasoning_type=stratum[0],
                    chart_type=stratum[1],
                )
            )
    return kept, report


# --- deterministic mock reasoner ------------------------------------------------


class MockReasoner:
    """Scripted reasoner with programmed accuracy for hermetic runs.

    Given gold answers keyed by call order, answers correctly except on a
    fixed index pattern: call i is wrong iff ``i % denominator >=
    numerator``. Accuracy (k, m) over n calls (m | n) retains exactly
    k * n / m samples downstream.
    """

    def __init__(self, golds: Sequence[object], accuracy: tuple[int, int] = (1, 1),
                 template: OutputTemplate = DEFAULT_TEMPLATE):
        self._golds = [payload_text(g) for g in golds]
        self._numerator, self._denominator = accuracy
        self._template = template
        self._calls = 0

    def _perturb(self, gold: str) -> str:
        if gold == "true":
            return "false"
        if gold == "false":
            return "true"
        try:
            return payload_text(float(gold) + 1.0)
        except ValueError:
            return gold + "_x"

    def reason(self, prompt: str, max_tokens: int) -> str:
        i = self._calls
        self._calls += 1
        gold = self._golds[i % len(self._golds)]
        correct = (i % self._denominator) < self._numerator
        answer = gold if correct else self._perturb(gold)
        t = self._template
        return (
            f"{t.think_open}Reading the chart code and comparing the relevant "
            f"values step by step leads to {answer}.{t.think_close}"
            f"{t.answer_open}{answer}{t.answer_close}"
        )
