"""Topic catalog (thematic domains and subtopics) and prompt construction."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import ConfigError, UnknownTopic
from .templates import ChartTemplate

DEFAULT_DOMAIN_COUNT = 18
DEFAULT_SUBTOPIC_COUNT = 111


@dataclass(frozen=True)
class TopicCatalog:
    domains: dict[str, tuple[str, ...]]

    @property
    def domain_count(self) -> int:
        return len(self.domains)

    @property
    def subtopic_count(self) -> int:
        return sum(len(v) for v in self.domains.values())

    def contains(self, domain: str, subtopic: str) -> bool:
        return subtopic in self.domains.get(domain, ())

    def pairs(self) -> tuple[tuple[str, str], ...]:
        return tuple((d, s) for d, subs in self.domains.items() for s in subs)


def _from_dict(raw: dict) -> TopicCatalog:
    if "domains" not in raw or not isinstance(raw["domains"], dict):
        raise ConfigError("topic catalog must contain a 'domains' mapping")
    domains = {d: tuple(subs) for d, subs in raw["domains"].items()}
    all_subs = [s for subs in domains.values() for s in subs]
    if len(all_subs) != len(set(all_subs)):
        raise ConfigError("subtopic names must be unique across domains")
    return TopicCatalog(domains=domains)


def load_topics(path: str | Path) -> TopicCatalog:
    return _from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


_default: TopicCatalog | None = None


def default_topics() -> TopicCatalog:
    """Packaged catalog; its 18-domain / 111-subtopic shape is asserted."""
    global _default
    if _default is None:
        text = resources.files("chartforge.data").joinpath("topics.json").read_text("utf-8")
        cat = _from_dict(json.loads(text))
        if cat.domain_count != DEFAULT_DOMAIN_COUNT or cat.subtopic_count != DEFAULT_SUBTOPIC_COUNT:
            raise ConfigError(
                f"packaged topic catalog must have {DEFAULT_DOMAIN_COUNT} domains / "
                f"{DEFAULT_SUBTOPIC_COUNT} subtopics, found "
                f"{cat.domain_count}/{cat.subtopic_count}"
            )
        _default = cat
    return _default


@dataclass(frozen=True)
class GenerationPrompt:
    template_ref: str
    domain: str
    subtopic: str
    rendered_text: str


_KIND_RE = re.compile(r'"type":\s*"(bar|line|pie|scatter|radar|heatmap|boxplot|candlestick|funnel)"')


def _skeleton_kind(template: ChartTemplate) -> str:
    m = _KIND_RE.search(template.skeleton)
    return m.group(1) if m else template.subtype


_PROMPT_TEMPLATE = (
    "You are generating a chart specification.\n"
    "Produce exactly one ECharts option document in strict JSON (no comments, "
    "no trailing commas) describing a {series_kind} chart of subtype "
    "\"{subtype}\".\n"
    "Topic: {subtopic} (domain: {domain}).\n"
    "Requirements: give the chart a descriptive title, realistic category or "
    "axis labels for the topic, and numeric data consistent with the chart "
    "form. Output only the JSON object, nothing else."
)


def build_prompt(
    template: ChartTemplate,
    domain: str,
    subtopic: str,
    catalog: TopicCatalog | None = None,
) -> GenerationPrompt:
    """Render the generation prompt for one (subtype, topic) cell.

    Deterministic; raises ``UnknownTopic`` when the pair is not in the catalog.
    """
    catalog = catalog or default_topics()
    if not catalog.contains(domain, subtopic):
        raise UnknownTopic(f"({domain!r}, {subtopic!r}) not in topic catalog")
    text = _PROMPT_TEMPLATE.format(
        series_kind=_skeleton_kind(template),
        subtype=template.subtype,
        subtopic=subtopic,
        domain=domain,
    )
    return GenerationPrompt(
        template_ref=template.subtype,
        domain=domain,
        subtopic=subtopic,
        rendered_text=text,
    )
