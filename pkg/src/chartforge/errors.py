"""Exception hierarchy shared across the pipeline stages."""

from __future__ import annotations


class ForgeError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(ForgeError):
    """Invalid or incomplete pipeline configuration."""


# --- chart-spec parsing / classification -----------------------------------

class ParseError(ForgeError):
    """Malformed option document (bad syntax, no option found in HTML)."""


class UnsupportedChart(ForgeError):
    """Series kind outside the taxonomy and not representable as ``other``."""


class StructuralError(ForgeError):
    """Document parsed but violates an IR invariant (arity, lengths, ...)."""

    def __init__(self, message: str, errors: list | None = None):
        super().__init__(message)
        self.errors = errors or []


class UnclassifiableSpec(ForgeError):
    """No taxonomy subtype matches the spec's structural features."""


class AmbiguousSubtype(ForgeError):
    """More than one subtype matched: a taxonomy configuration error."""


# --- generation --------------------------------------------------------------

class UnknownTopic(ForgeError):
    """Domain/subtopic pair missing from the topic catalog."""


class ClientError(ForgeError):
    """Transport or HTTP failure talking to an external endpoint."""


class EmptyCompletion(ForgeError):
    """The generation endpoint returned no usable text."""


# --- QA oracle ----------------------------------------------------------------

class UnknownSeries(ForgeError):
    """Question references a series name absent from the spec."""


class UnknownLabel(ForgeError):
    """Question references a label absent from the spec."""


class UnsupportedKindForChartType(ForgeError):
    """Question kind is not answerable on this chart type (e.g. trend on pie)."""


# --- think-builder --------------------------------------------------------------

class TemplateViolation(ForgeError):
    """Reasoner completion lacks a parseable final answer block."""


class InsufficientData(ForgeError):
    """Requested sample size exceeds the dataset size."""


class MissingStratumLabel(ForgeError):
    """A sample lacks one of the stratification labels."""


# --- evaluation -----------------------------------------------------------------

class UnparseableVerdict(ForgeError):
    """Judge reply contained no integer score."""


class OutOfRange(ForgeError):
    """Judge score fell outside the 1-10 scale."""


class MissingPrediction(ForgeError):
    """A gold sample had no aligned prediction."""


# --- pipeline orchestration -------------------------------------------------------

class StaleManifest(ForgeError):
    """Manifest was produced under a different config fingerprint."""


class RendererUnavailable(ForgeError):
    """Renderer worker could not be spawned."""
