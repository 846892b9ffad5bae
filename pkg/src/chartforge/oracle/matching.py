"""Answer matching protocols.

``exact`` compares canonicalized forms: trimmed, case-folded, numbers
compared as values after stripping %, currency symbols, and thousands
separators (so "7.0" matches 7 and "$1,200" matches 1200). ``relaxed``
additionally tolerates a 5% relative error on numeric answers, the
convention used by chart-QA benchmarks; a gold value of exactly 0 still
requires an exact 0.
"""

from __future__ import annotations

import re
from typing import Union

RELAXED_TOLERANCE = 0.05

_CURRENCY = "$€£¥"
_THOUSANDS_RE = re.compile(r"(?<=\d),(?=\d{3}(\D|$))")

Payload = Union[float, int, str, bool]


def to_number(text: str) -> float | None:
    """Parse a numeric answer out of its presentation form, or None."""
    t = text.strip()
    if not t:
        return None
    t = t.strip("%")
    t = t.strip()
    while t and t[0] in _CURRENCY:
        t = t[1:].strip()
    while t and t[-1] in _CURRENCY:
        t = t[:-1].strip()
    t = _THOUSANDS_RE.sub("", t)
    try:
        return float(t)
    except ValueError:
        return None


def canonical_text(text: str) -> str:
    return text.strip().casefold()


def payload_text(payload: Payload) -> str:
    """Canonical display string for a gold payload."""
    if isinstance(payload, bool):
        return "true" if payload else "false"
    if isinstance(payload, (int, float)):
        v = float(payload)
        return str(int(v)) if v.is_integer() and abs(v) < 2**53 else repr(v)
    return str(payload)


def _payload_number(payload: Payload) -> float | None:
    if isinstance(payload, bool):
        return None
    if isinstance(payload, (int, float)):
        return float(payload)
    return to_number(str(payload))


def match_answer(pred: str, gold, protocol: str = "exact") -> bool:
    """Does a predicted answer string match the gold answer?

    ``gold`` may be an Answer, a raw payload, or a string. Numeric golds
    accept numeric predictions (value comparison); everything else falls
    back to canonical string equality.
    """
    if protocol not in ("exact", "relaxed"):
        raise ValueError(f"unknown protocol {protocol!r}")
    payload = getattr(gold, "payload", gold)
    gold_num = _payload_number(payload)
    pred_num = to_number(pred)
    if gold_num is not None and pred_num is not None:
        if protocol == "relaxed":
            if gold_num == 0:
                return pred_num == 0
            return abs(pred_num - gold_num) <= RELAXED_TOLERANCE * abs(gold_num)
        return pred_num == gold_num
    return canonical_text(pred) == canonical_text(payload_text(payload))
