"""File-based manual review loop for borderline images.

The automated filter exports borderline cases (content fraction near the
blank threshold) to a review directory together with a decision list that a
human edits in place; ``apply_review`` re-ingests the decisions.

Review list format: one ``<id> keep|drop`` per line, ``#`` comments allowed.
"""

from __future__ import annotations

import shutil
from pathlib import Path
from typing import Mapping, Sequence

from . import FilterParams, iter_borderline

REVIEW_LIST_NAME = "review_list.txt"


def export_borderline(
    assessed: Sequence[Mapping],
    params: FilterParams,
    review_dir: str | Path,
    margin: float = 0.20,
) -> list[str]:
    """Copy borderline images into review_dir and write the decision list.

    Each exported record starts with its current verdict as the suggested
    decision (accept -> keep, reject -> drop). Returns the exported ids.
    """
    review_dir = Path(review_dir)
    review_dir.mkdir(parents=True, exist_ok=True)
    borderline = iter_borderline(assessed, params, margin)
    lines = []
    for record in borderline:
        src = Path(record["path"])
        if src.exists():
            shutil.copy2(src, review_dir / src.name)
        suggested = "keep" if record.get("quality", {}).get("verdict") == "accept" else "drop"
        lines.append(f"{record['id']} {suggested}")
    (review_dir / REVIEW_LIST_NAME).write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    return [r["id"] for r in borderline]


def read_review_list(path: str | Path) -> dict[str, str]:
    decisions: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1] not in ("keep", "drop"):
            raise ValueError(f"{path}:{lineno}: expected '<id> keep|drop', got {line!r}")
        decisions[parts[0]] = parts[1]
    return decisions


def apply_review(
    kept: Sequence[Mapping],
    rejected: Sequence[Mapping],
    review_file: str | Path,
) -> list[dict]:
    """Apply keep/drop overrides to the filter output."""
    decisions = read_review_list(review_file)
    out = [dict(r) for r in kept if decisions.get(r["id"]) != "drop"]
    out.extend(dict(r) for r in rejected if decisions.get(r["id"]) == "keep")
    return out
