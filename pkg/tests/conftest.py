from __future__ import annotations

import json
from pathlib import Path

import pytest

from chartforge.generator import default_templates, default_topics, generate_spec_procedural
from chartforge.pipeline.config import config_from_dict
from chartforge.spec_core import default_taxonomy


@pytest.fixture(scope="session")
def taxonomy():
    return default_taxonomy()


@pytest.fixture(scope="session")
def templates():
    return default_templates()


@pytest.fixture(scope="session")
def topics():
    return default_topics()


@pytest.fixture(scope="session")
def topic_pairs(topics):
    return topics.pairs()


@pytest.fixture
def sample_spec(templates, topic_pairs):
    return generate_spec_procedural(templates.get("basic_bar"), topic_pairs[0], seed=3)


def spec_stream(templates, topic_pairs, seeds, max_points=None):
    """Deterministic generator of specs cycling templates x topics x seeds."""
    for seed in seeds:
        for i, template in enumerate(templates.templates):
            topic = topic_pairs[(i * 3 + seed * 17) % len(topic_pairs)]
            spec = generate_spec_procedural(template, topic, seed=seed)
            if max_points is not None:
                total = sum(len(s.data) for s in spec.series)
                if total > max_points:
                    continue
            yield spec


@pytest.fixture
def make_config(tmp_path):
    def _make(seed=42, out_name="run", **overrides):
        raw = {"seed": seed, "out_dir": str(tmp_path / out_name)}
        raw.update(overrides)
        return config_from_dict(raw)

    return _make


@pytest.fixture(scope="session")
def fixture_docs():
    base = Path(__file__).resolve().parents[1] / "src/chartforge/data/fixtures"
    docs = {}
    for path in sorted(base.glob("*.json")):
        if path.name == "index.json":
            continue
        docs[path.stem] = path.read_text(encoding="utf-8")
    return docs
