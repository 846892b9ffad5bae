"""Reasoning-trace output template: a think block followed by an answer block.

The tag strings are configurable; the default is `<think>...</think>` then
`<answer>...</answer>`. Both the trace builder (splitting completions) and
the reward functions (format checking) share this parser so they can never
disagree about what a well-formed completion is.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class OutputTemplate:
    think_open: str = "<think>"
    think_close: str = "</think>"
    answer_open: str = "<answer>"
    answer_close: str = "</answer>"


DEFAULT_TEMPLATE = OutputTemplate()


def _first_block(text: str, open_tag: str, close_tag: str) -> str | None:
    start = text.find(open_tag)
    if start < 0:
        return None
    end = text.find(close_tag, start + len(open_tag))
    if end < 0:
        return None
    return text[start + len(open_tag) : end]


def extract_think(text: str, template: OutputTemplate = DEFAULT_TEMPLATE) -> str | None:
    return _first_block(text, template.think_open, template.think_close)


def extract_answer(text: str, template: OutputTemplate = DEFAULT_TEMPLATE) -> str | None:
    return _first_block(text, template.answer_open, template.answer_close)


def is_canonical(text: str, template: OutputTemplate = DEFAULT_TEMPLATE) -> bool:
    """Exactly one think block, then one answer block, only whitespace outside."""
    t = template
    if any(text.count(tag) != 1 for tag in (t.think_open, t.think_close, t.answer_open, t.answer_close)):
        return False
    i0 = text.find(t.think_open)
    i1 = text.find(t.think_close)
    i2 = text.find(t.answer_open)
    i3 = text.find(t.answer_close)
    if not (i0 < i1 < i2 < i3):
        return False
    outside = (
        text[:i0]
        + text[i1 + len(t.think_close) : i2]
        + text[i3 + len(t.answer_close) :]
    )
    return outside.strip() == ""


def render(reasoning: str, answer: str, template: OutputTemplate = DEFAULT_TEMPLATE) -> str:
    t = template
    return f"{t.think_open}{reasoning}{t.think_close}{t.answer_open}{answer}{t.answer_close}"
