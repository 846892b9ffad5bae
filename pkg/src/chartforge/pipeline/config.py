"""Pipeline configuration: one versioned file, environment overrides, and a
content fingerprint that stamps every manifest for lineage checks."""

from __future__ import annotations

import hashlib
import json
import os
import shlex
import sys
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import ConfigError
from ..quality import FilterParams

ENV_OVERRIDES = {
    "llm_url": "FORGE_LLM_URL",
    "llm_token": "FORGE_LLM_TOKEN",
    "reasoner_url": "FORGE_REASONER_URL",
    "c2c_url": "FORGE_C2C_URL",
    "judge_url": "FORGE_JUDGE_URL",
    "renderer_cmd": "FORGE_RENDERER_CMD",
}


@dataclass(frozen=True)
class PipelineConfig:
    seed: int
    out_dir: str
    taxonomy_path: str | None = None
    topics_path: str | None = None
    templates_path: str | None = None
    filter_params: FilterParams = field(default_factory=FilterParams)
    llm_url: str | None = None
    llm_token: str | None = None
    reasoner_url: str | None = None
    c2c_url: str | None = None
    judge_url: str | None = None
    renderer_cmd: str | None = None  # None selects the built-in stub worker
    think_accuracy: tuple[int, int] = (1, 1)
    think_protocol: str = "exact"
    think_max_tokens: int = 2048
    think_tags: tuple[str, str, str, str] = ("<think>", "</think>", "<answer>", "</answer>")
    think_prompt: str | None = None  # None selects the built-in template
    reward_weights: dict = field(
        default_factory=lambda: {"accuracy": 1.0, "format": 0.5, "length": 0.25}
    )
    length_bounds: tuple[int, int] = (32, 2048)
    concurrency: int = 4
    render_width: int = 512
    render_height: int = 512

    def renderer_argv(self) -> list[str]:
        if self.renderer_cmd:
            return shlex.split(self.renderer_cmd)
        return [sys.executable, "-m", "chartforge.pipeline.stub_renderer"]

    def output_template(self):
        from ..tracefmt import OutputTemplate

        return OutputTemplate(*self.think_tags)

    def with_out_dir(self, out_dir: str | None) -> "PipelineConfig":
        import dataclasses

        return dataclasses.replace(self, out_dir=out_dir) if out_dir else self

    def resolved(self) -> dict:
        """Canonical dict for fingerprinting (env already applied)."""
        return {
            "seed": self.seed,
            "out_dir": self.out_dir,
            "taxonomy_path": self.taxonomy_path,
            "topics_path": self.topics_path,
            "templates_path": self.templates_path,
            "filter": self.filter_params.to_dict(),
            "llm_url": self.llm_url,
            "reasoner_url": self.reasoner_url,
            "c2c_url": self.c2c_url,
            "judge_url": self.judge_url,
            "renderer_cmd": self.renderer_cmd,
            "think_accuracy": list(self.think_accuracy),
            "think_protocol": self.think_protocol,
            "think_max_tokens": self.think_max_tokens,
            "think_tags": list(self.think_tags),
            "think_prompt": self.think_prompt,
            "reward_weights": self.reward_weights,
            "length_bounds": list(self.length_bounds),
            "render_width": self.render_width,
            "render_height": self.render_height,
        }

    def fingerprint(self) -> str:
        blob = json.dumps(self.resolved(), sort_keys=True).encode("utf-8")
        return hashlib.sha256(blob).hexdigest()[:16]


def _require_file(path: str | None, what: str):
    if path is not None and not Path(path).is_file():
        raise ConfigError(f"{what} file does not exist: {path}")


def load_config(path: str | Path, seed_override: int | None = None) -> PipelineConfig:
    """Load and resolve a config file; env vars override endpoint settings.

    Seeds must be explicit: a config without a seed (and no --seed flag) is
    an error, never a wall-clock default.
    """
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file does not exist: {path}")
    try:
        raw = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return config_from_dict(raw, seed_override=seed_override, base_dir=p.parent)


def config_from_dict(
    raw: dict,
    seed_override: int | None = None,
    base_dir: Path | None = None,
) -> PipelineConfig:
    seed = seed_override if seed_override is not None else raw.get("seed")
    if seed is None:
        raise ConfigError("seed must be explicit (config 'seed' or --seed)")
    out_dir = raw.get("out_dir")
    if not out_dir:
        raise ConfigError("config must set out_dir")

    def resolve(key):
        value = raw.get(key)
        if value and base_dir is not None and not Path(value).is_absolute():
            value = str(base_dir / value)
        return value

    filter_raw = raw.get("filter", {})
    try:
        params = FilterParams(**filter_raw)
    except TypeError as exc:
        raise ConfigError(f"bad filter params: {exc}") from exc

    values = {
        "llm_url": raw.get("llm_url"),
        "llm_token": raw.get("llm_token"),
        "reasoner_url": raw.get("reasoner_url"),
        "c2c_url": raw.get("c2c_url"),
        "judge_url": raw.get("judge_url"),
        "renderer_cmd": raw.get("renderer_cmd"),
    }
    for key, env in ENV_OVERRIDES.items():
        if os.environ.get(env):
            values[key] = os.environ[env]

    think = raw.get("think", {})
    accuracy = tuple(think.get("accuracy", (1, 1)))
    if len(accuracy) != 2 or accuracy[0] > accuracy[1] or accuracy[1] < 1:
        raise ConfigError(f"think accuracy must be (correct, per) with correct <= per, got {accuracy}")
    tags = tuple(think.get("tags", ("<think>", "</think>", "<answer>", "</answer>")))
    if len(tags) != 4 or not all(isinstance(t, str) and t for t in tags):
        raise ConfigError("think tags must be four non-empty strings")

    rewards = raw.get("rewards", {})
    cfg = PipelineConfig(
        seed=int(seed),
        out_dir=str(out_dir),
        taxonomy_path=resolve("taxonomy"),
        topics_path=resolve("topics"),
        templates_path=resolve("templates"),
        filter_params=params,
        think_accuracy=(int(accuracy[0]), int(accuracy[1])),
        think_protocol=think.get("protocol", "exact"),
        think_max_tokens=int(think.get("max_tokens", 2048)),
        think_tags=tags,
        think_prompt=think.get("prompt_template"),
        reward_weights=rewards.get("weights", {"accuracy": 1.0, "format": 0.5, "length": 0.25}),
        length_bounds=tuple(rewards.get("length_bounds", (32, 2048))),
        concurrency=int(raw.get("concurrency", 4)),
        render_width=int(raw.get("render_width", 512)),
        render_height=int(raw.get("render_height", 512)),
        **values,
    )
    _require_file(cfg.taxonomy_path, "taxonomy")
    _require_file(cfg.topics_path, "topic catalog")
    _require_file(cfg.templates_path, "template library")
    return cfg


def load_assets(cfg: PipelineConfig):
    """(taxonomy, topic catalog, template library) per the config paths."""
    from ..generator import default_templates, default_topics, load_templates, load_topics
    from ..spec_core import default_taxonomy, load_taxonomy

    taxonomy = load_taxonomy(cfg.taxonomy_path) if cfg.taxonomy_path else default_taxonomy()
    topics = load_topics(cfg.topics_path) if cfg.topics_path else default_topics()
    templates = load_templates(cfg.templates_path) if cfg.templates_path else default_templates()
    return taxonomy, topics, templates
