"""Chart specification IR: parse, validate, classify, serialize."""

from .parse import parse_spec
from .serialize import serialize_spec
from .taxonomy import (
    SubtypeDescriptor,
    Taxonomy,
    classify_spec,
    default_taxonomy,
    features,
    load_taxonomy,
)
from .types import (
    Axis,
    AxisKind,
    ChartSpec,
    DataPoint,
    Series,
    SeriesKind,
    ValidationReport,
    canonical_label,
    structural_id,
)
from .validate import validate_spec

__all__ = [
    "Axis",
    "AxisKind",
    "ChartSpec",
    "DataPoint",
    "Series",
    "SeriesKind",
    "SubtypeDescriptor",
    "Taxonomy",
    "ValidationReport",
    "canonical_label",
    "classify_spec",
    "default_taxonomy",
    "features",
    "load_taxonomy",
    "parse_spec",
    "serialize_spec",
    "structural_id",
    "validate_spec",
]
