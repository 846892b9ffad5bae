"""Chart question answering against the spec IR, plus QA pair synthesis."""

from .answering import (
    AGGREGATE_OPS,
    FLAT_EPSILON,
    QUESTION_KINDS,
    Answer,
    Question,
    answer,
    series_view,
    supported_kinds,
)
from .matching import RELAXED_TOLERANCE, canonical_text, match_answer, payload_text, to_number
from .questions import DEFAULT_REASONING_MAP, QASample, generate_questions

__all__ = [
    "AGGREGATE_OPS",
    "Answer",
    "DEFAULT_REASONING_MAP",
    "FLAT_EPSILON",
    "QASample",
    "QUESTION_KINDS",
    "Question",
    "RELAXED_TOLERANCE",
    "answer",
    "canonical_text",
    "generate_questions",
    "match_answer",
    "payload_text",
    "series_view",
    "supported_kinds",
    "to_number",
]
