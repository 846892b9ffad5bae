"""Stage manifests: JSONL record lists plus a sidecar summary.

Every stage writes ``<stage>.manifest.jsonl`` (one record per sample: id,
paths, status, stratum labels) and ``<stage>.manifest.json`` (counts, the
config fingerprint, and the stage parameters). Downstream stages refuse to
consume manifests stamped with a different config fingerprint, and
re-running a stage whose summary already matches is a no-op.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from ..errors import StaleManifest


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=True, separators=(",", ":"))


def write_jsonl(path: str | Path, records: Iterable[dict]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for record in records:
            fh.write(dump_json(record) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out


@dataclass
class Manifest:
    stage: str
    records: list[dict]
    config_fingerprint: str
    params: dict = field(default_factory=dict)
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        ids = [r["id"] for r in self.records]
        if len(ids) != len(set(ids)):
            raise ValueError(f"{self.stage} manifest has duplicate ids")

    def summary(self) -> dict:
        return {
            "stage": self.stage,
            "n_records": len(self.records),
            "counts": self.counts,
            "config_fingerprint": self.config_fingerprint,
            "params": self.params,
        }

    def write(self, out_dir: str | Path):
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        write_jsonl(out / f"{self.stage}.manifest.jsonl", self.records)
        (out / f"{self.stage}.manifest.json").write_text(
            json.dumps(self.summary(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
        )


def read_manifest(out_dir: str | Path, stage: str, expect_fingerprint: str | None = None) -> Manifest:
    out = Path(out_dir)
    summary_path = out / f"{stage}.manifest.json"
    if not summary_path.is_file():
        raise FileNotFoundError(f"no {stage} manifest under {out_dir}; run 'forge {stage}' first")
    summary = json.loads(summary_path.read_text(encoding="utf-8"))
    if expect_fingerprint is not None and summary.get("config_fingerprint") != expect_fingerprint:
        raise StaleManifest(
            f"{stage} manifest was built with config {summary.get('config_fingerprint')}, "
            f"current config is {expect_fingerprint}; re-run 'forge {stage}'"
        )
    records = read_jsonl(out / f"{stage}.manifest.jsonl")
    return Manifest(
        stage=stage,
        records=records,
        config_fingerprint=summary.get("config_fingerprint", ""),
        params=summary.get("params", {}),
        counts=summary.get("counts", {}),
    )


def stage_is_current(
    out_dir: str | Path,
    stage: str,
    fingerprint: str,
    params: dict,
    outputs: Sequence[str | Path] = (),
) -> bool:
    """True when the stage's summary matches and its outputs exist (no-op rerun)."""
    summary_path = Path(out_dir) / f"{stage}.manifest.json"
    if not summary_path.is_file():
        return False
    try:
        summary = json.loads(summary_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError:
        return False
    if summary.get("config_fingerprint") != fingerprint or summary.get("params") != params:
        return False
    return all(Path(p).exists() for p in outputs)
