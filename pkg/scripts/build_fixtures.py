#!/usr/bin/env python3
"""Regenerate the 49 subtype exemplar documents (one per template).

    PYTHONPATH=src python3 scripts/build_fixtures.py

Each fixture is the serialized option document of a procedurally generated
spec at a fixed topic and seed, so the set is stable across runs. The
fixtures anchor the classification tests and the render harness sweep.
"""

import json
from pathlib import Path

from chartforge.generator import default_templates, default_topics, generate_spec_procedural
from chartforge.spec_core import serialize_spec

OUT = Path(__file__).resolve().parents[1] / "src/chartforge/data/fixtures"

FIXTURE_SEED = 7


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    pairs = default_topics().pairs()
    index = {}
    for i, template in enumerate(default_templates().templates):
        topic = pairs[(i * 5) % len(pairs)]
        spec = generate_spec_procedural(template, topic, FIXTURE_SEED)
        doc = serialize_spec(spec)
        (OUT / f"{template.subtype}.json").write_text(doc + "\n", encoding="utf-8")
        index[template.subtype] = {"category": spec.category, "topic": spec.topic}
    (OUT / "index.json").write_text(json.dumps(index, indent=1, sort_keys=True) + "\n", encoding="utf-8")
    print(f"wrote {len(index)} fixtures to {OUT}")


if __name__ == "__main__":
    main()
