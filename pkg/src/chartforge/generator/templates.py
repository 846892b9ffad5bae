"""Chart template library: skeleton documents with typed fill slots."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from ..errors import ConfigError

_TOKEN_RE = re.compile(r'"\{\{(\w+)\}\}"')

SLOT_KINDS = {"labels", "numeric-series", "title", "palette"}


@dataclass(frozen=True)
class SlotSpec:
    slot: str
    kind: str
    constraints: dict


@dataclass(frozen=True)
class ChartTemplate:
    subtype: str
    skeleton: str
    slot_schema: tuple[SlotSpec, ...]

    def slot(self, name: str) -> SlotSpec:
        for s in self.slot_schema:
            if s.slot == name:
                return s
        raise KeyError(name)


@dataclass(frozen=True)
class TemplateLibrary:
    templates: tuple[ChartTemplate, ...]

    def __len__(self) -> int:
        return len(self.templates)

    def subtypes(self) -> tuple[str, ...]:
        return tuple(t.subtype for t in self.templates)

    def get(self, subtype: str) -> ChartTemplate:
        for t in self.templates:
            if t.subtype == subtype:
                return t
        raise KeyError(subtype)


def _check_template(t: ChartTemplate) -> ChartTemplate:
    in_skeleton = set(_TOKEN_RE.findall(t.skeleton))
    in_schema = {s.slot for s in t.slot_schema}
    if in_skeleton != in_schema:
        raise ConfigError(
            f"template {t.subtype!r}: skeleton slots {sorted(in_skeleton)} "
            f"!= schema slots {sorted(in_schema)}"
        )
    for s in t.slot_schema:
        if s.kind not in SLOT_KINDS:
            raise ConfigError(f"template {t.subtype!r}: unknown slot kind {s.kind!r}")
    return t


def _from_dict(raw: dict) -> TemplateLibrary:
    entries = raw.get("templates")
    if not isinstance(entries, list) or not entries:
        raise ConfigError("template file must contain a non-empty 'templates' list")
    templates = []
    for e in entries:
        t = ChartTemplate(
            subtype=e["subtype"],
            skeleton=e["skeleton"],
            slot_schema=tuple(SlotSpec(s["slot"], s["kind"], dict(s.get("constraints", {}))) for s in e["slot_schema"]),
        )
        templates.append(_check_template(t))
    names = [t.subtype for t in templates]
    if len(names) != len(set(names)):
        raise ConfigError("duplicate template subtypes")
    return TemplateLibrary(templates=tuple(templates))


def load_templates(path: str | Path) -> TemplateLibrary:
    return _from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


_default: TemplateLibrary | None = None


def default_templates() -> TemplateLibrary:
    global _default
    if _default is None:
        text = resources.files("chartforge.data").joinpath("templates.json").read_text("utf-8")
        _default = _from_dict(json.loads(text))
    return _default


def load_wordlists() -> dict:
    text = resources.files("chartforge.data").joinpath("wordlists.json").read_text("utf-8")
    return json.loads(text)
