"""Rule-based reward functions, group-normalized advantages, and evaluation.

Rewards score one candidate completion on three axes: factual accuracy of
the final answer (binary), structural format compliance (binary), and think
length suitability (ramped 0..1). Group advantage normalization turns a
group of composite rewards into zero-mean unit-variance learning signals;
only the reward math lives here, never a policy update.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Mapping, Protocol, Sequence

from .errors import OutOfRange, UnparseableVerdict
from .generator.llm import HttpTextClient
from .oracle import match_answer
from .tracefmt import DEFAULT_TEMPLATE, OutputTemplate, extract_answer, extract_think, is_canonical

DEFAULT_WEIGHTS = {"accuracy": 1.0, "format": 0.5, "length": 0.25}
DEFAULT_LENGTH_BOUNDS = (32, 2048)
ADVANTAGE_STD_FLOOR = 1e-6


@dataclass(frozen=True)
class RewardBreakdown:
    accuracy: float
    format: float
    length: float
    composite: float
    weights: dict

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "format": self.format,
            "length": self.length,
            "composite": self.composite,
            "weights": dict(self.weights),
        }


@dataclass(frozen=True)
class GroupScores:
    rewards: tuple[float, ...]
    advantages: tuple[float, ...]


@dataclass(frozen=True)
class JudgeScore:
    score: int
    criteria_echo: str | None = None


def accuracy_reward(
    completion: str,
    gold,
    protocol: str = "exact",
    template: OutputTemplate = DEFAULT_TEMPLATE,
) -> float:
    """1.0 iff an answer block exists and matches gold; extraction comes first."""
    extracted = extract_answer(completion, template)
    if extracted is None:
        return 0.0
    return 1.0 if match_answer(extracted.strip(), gold, protocol) else 0.0


def format_reward(completion: str, template: OutputTemplate = DEFAULT_TEMPLATE) -> float:
    return 1.0 if is_canonical(completion, template) else 0.0


def length_reward(
    completion: str,
    bounds: tuple[int, int] = DEFAULT_LENGTH_BOUNDS,
    template: OutputTemplate = DEFAULT_TEMPLATE,
) -> float:
    """Think-block length suitability on a 0..1 ramp.

    t = whitespace token count of the think block. Inside [L_min, L_max]
    scores 1; below ramps up as t/L_min; above decays as 1 - (t-L_max)/L_max
    floored at 0, so runaway reasoning chains lose their length credit.
    """
    l_min, l_max = bounds
    if not l_min < l_max:
        raise ValueError("bounds must satisfy L_min < L_max")
    think = extract_think(completion, template)
    t = len(think.split()) if think else 0
    if t < l_min:
        return t / l_min
    if t <= l_max:
        return 1.0
    return max(0.0, 1.0 - (t - l_max) / l_max)


def composite_reward(
    completion: str,
    gold,
    weights: Mapping[str, float] | None = None,
    bounds: tuple[int, int] = DEFAULT_LENGTH_BOUNDS,
    protocol: str = "exact",
    template: OutputTemplate = DEFAULT_TEMPLATE,
) -> RewardBreakdown:
    w = dict(DEFAULT_WEIGHTS if weights is None else weights)
    if any(v < 0 for v in w.values()):
        raise ValueError("reward weights must be non-negative")
    a = accuracy_reward(completion, gold, protocol, template)
    f = format_reward(completion, template)
    l = length_reward(completion, bounds, template)
    composite = w["accuracy"] * a + w["format"] * f + w["length"] * l
    return RewardBreakdown(accuracy=a, format=f, length=l, composite=composite, weights=w)


def grpo_advantages(rewards: Sequence[float], eps: float = ADVANTAGE_STD_FLOOR) -> list[float]:
    """Intra-group advantage normalization: (r - mean) / max(pop std, eps).

    An all-equal group yields all-zero advantages; otherwise the output has
    mean 0 and population std 1 (up to the floor).
    """
    if not rewards:
        raise ValueError("reward group must be non-empty")
    n = len(rewards)
    mean = sum(rewards) / n
    var = sum((r - mean) ** 2 for r in rewards) / n
    denom = max(math.sqrt(var), eps)
    return [(r - mean) / denom for r in rewards]


def score_group(
    completions: Sequence[str],
    gold,
    weights: Mapping[str, float] | None = None,
    bounds: tuple[int, int] = DEFAULT_LENGTH_BOUNDS,
    protocol: str = "exact",
    eps: float = ADVANTAGE_STD_FLOOR,
    template: OutputTemplate = DEFAULT_TEMPLATE,
) -> GroupScores:
    """Composite rewards + advantages for one input's candidate completions."""
    rewards = tuple(
        composite_reward(c, gold, weights, bounds, protocol, template).composite
        for c in completions
    )
    return GroupScores(rewards=rewards, advantages=tuple(grpo_advantages(rewards, eps)))


def pass_rate(results: Sequence) -> float | None:
    """Fraction of successful render results; None for an empty input (0 of 0).

    Accepts booleans or status strings ("ok" counts as success).
    """
    total = len(results)
    if total == 0:
        return None
    ok = sum(1 for r in results if r is True or r == "ok")
    return ok / total


# --- judge-based visual similarity -------------------------------------------


class JudgeClient(Protocol):
    def judge(self, prompt: str, images: Sequence[str]) -> str: ...


class HttpJudgeClient(HttpTextClient):
    def judge(self, prompt: str, images: Sequence[str]) -> str:
        return self.post({"prompt": prompt, "images": list(images)})


JUDGE_PROMPT = (
    "Compare the first (generated) chart image with the second (reference) "
    "chart image and assign a similarity score ranging from 1 to 10.\n"
    "Judge on four criteria:\n"
    "- Colors: accuracy of the color schemes\n"
    "- Axes & Scale: consistency of axis ranges and units\n"
    "- Data Points Position: placement and alignment of bars, lines, or markers\n"
    "- Overall Layout: correctness of titles, labels, and legends\n"
    "Reply with the score."
)

_INT_RE = re.compile(r"\b\d+\b")


def parse_judge_reply(text: str) -> int:
    m = _INT_RE.search(text)
    if not m:
        raise UnparseableVerdict(f"no integer score in reply: {text[:80]!r}")
    score = int(m.group(0))
    if not 1 <= score <= 10:
        raise OutOfRange(f"score {score} outside 1-10")
    return score


def similarity_judge(
    pair: tuple[str, str],
    judge: JudgeClient,
) -> JudgeScore:
    """Score (candidate, reference) base64 PNG pair via the judge endpoint."""
    candidate_b64, reference_b64 = pair
    reply = judge.judge(JUDGE_PROMPT, [candidate_b64, reference_b64])
    return JudgeScore(score=parse_judge_reply(reply), criteria_echo=reply.strip() or None)


# --- dataset-level evaluation -----------------------------------------------------


@dataclass
class EvalReport:
    accuracy: float
    n: int
    protocol: str
    per_reasoning_type: dict = field(default_factory=dict)
    per_chart_type: dict = field(default_factory=dict)
    missing: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "n": self.n,
            "protocol": self.protocol,
            "per_stratum": {
                "reasoning_type": self.per_reasoning_type,
                "chart_type": self.per_chart_type,
            },
            "missing": self.missing,
        }


def _gold_fields(sample) -> dict:
    if isinstance(sample, Mapping):
        return dict(sample)
    return {
        "id": sample.id,
        "answer": sample.gold.payload,
        "reasoning_type": sample.reasoning_type,
        "chart_type": sample.chart_type,
    }


def evaluate_qa(
    predictions: Sequence[tuple[str, str]] | Mapping[str, str],
    gold: Sequence,
    protocol: str = "exact",
) -> EvalReport:
    """Mean answer-match over aligned (id, prediction) pairs.

    Gold samples without a prediction score 0 and are listed in
    ``missing``; breakdowns are reported per reasoning type and chart type.
    """
    preds = dict(predictions) if not isinstance(predictions, Mapping) else dict(predictions)
    buckets_rt: dict[str, list[float]] = {}
    buckets_ct: dict[str, list[float]] = {}
    scores: list[float] = []
    missing: list[str] = []
    for sample in gold:
        fields = _gold_fields(sample)
        sid = fields["id"]
        if sid not in preds:
            missing.append(sid)
            score = 0.0
        else:
            score = 1.0 if match_answer(str(preds[sid]), fields["answer"], protocol) else 0.0
        scores.append(score)
        buckets_rt.setdefault(fields.get("reasoning_type", "?"), []).append(score)
        buckets_ct.setdefault(fields.get("chart_type", "?"), []).append(score)
    n = len(scores)
    return EvalReport(
        accuracy=sum(scores) / n if n else 0.0,
        n=n,
        protocol=protocol,
        per_reasoning_type={k: sum(v) / len(v) for k, v in sorted(buckets_rt.items())},
        per_chart_type={k: sum(v) / len(v) for k, v in sorted(buckets_ct.items())},
        missing=missing,
    )
