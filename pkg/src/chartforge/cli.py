"""`forge` command line: the pipeline stages as composable commands.

Exit codes: 0 success, 1 configuration error, 2 stage failure.
"""

from __future__ import annotations

import json
import sys

import click

from .errors import ConfigError, ForgeError
from .pipeline import stages
from .pipeline.config import load_config


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(config_path: str, seed: int | None, out_dir: str | None = None):
    try:
        return load_config(config_path, seed_override=seed).with_out_dir(out_dir)
    except ConfigError as exc:
        _fail(1, str(exc))


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except ConfigError as exc:
        _fail(1, str(exc))
    except ForgeError as exc:
        _fail(2, str(exc))
    except FileNotFoundError as exc:
        _fail(2, str(exc))


config_option = click.option("--config", "config_path", required=True, type=click.Path(), help="Pipeline config file (JSON).")
seed_option = click.option("--seed", type=int, default=None, help="Override the config seed.")
out_option = click.option("--out", "out_dir", type=click.Path(), default=None, help="Override the config output directory.")
manifest_option = click.option("--manifest", "manifest_dir", type=click.Path(), default=None, help="Directory for stage manifests (default: output directory).")


def stage_options(fn):
    for deco in (manifest_option, out_option, seed_option, config_option):
        fn = deco(fn)
    return fn


@click.group()
def main():
    """Chart corpus forging pipeline."""


@main.command()
@stage_options
@click.option("--count", type=int, required=True, help="Number of specs to generate.")
@click.option("--mode", type=click.Choice(["procedural", "llm"]), default="procedural")
def generate(config_path, seed, out_dir, manifest_dir, count, mode):
    """Generate the chart-spec corpus (balanced across subtypes)."""
    cfg = _load(config_path, seed, out_dir)
    manifest = _run(stages.cmd_generate, cfg, count, mode, manifest_dir)
    click.echo(f"generate: {manifest.counts.get('ok', 0)} specs -> {cfg.out_dir}")


@main.command()
@stage_options
def render(config_path, seed, out_dir, manifest_dir):
    """Render specs to PNG images via the configured worker."""
    cfg = _load(config_path, seed, out_dir)
    manifest = _run(stages.cmd_render, cfg, manifest_dir)
    counts = manifest.counts
    click.echo(f"render: {counts.get('ok', 0)} ok / {counts.get('error', 0)} failed "
               f"(pass rate {counts.get('pass_rate')})")


@main.command("filter")
@stage_options
@click.option("--review-dir", type=click.Path(), default=None, help="Export borderline images here.")
@click.option("--review-file", type=click.Path(), default=None, help="Apply a keep/drop review list.")
def filter_cmd(config_path, seed, out_dir, manifest_dir, review_dir, review_file):
    """Quality-filter rendered images (blank / noise rejection)."""
    cfg = _load(config_path, seed, out_dir)
    manifest = _run(stages.cmd_filter, cfg, review_dir, review_file, manifest_dir)
    click.echo(f"filter: {manifest.counts}")


@main.command()
@stage_options
@click.option("-k", "--per-chart", "k", type=int, default=5, show_default=True, help="QA samples per chart.")
def qa(config_path, seed, out_dir, manifest_dir, k):
    """Generate oracle-verified question/answer pairs."""
    cfg = _load(config_path, seed, out_dir)
    manifest = _run(stages.cmd_qa, cfg, k, manifest_dir)
    click.echo(f"qa: {manifest.counts.get('samples', 0)} samples")


@main.command()
@stage_options
@click.option("-n", "--samples", "n", type=int, default=None, help="Stratified subset size (default: all).")
@click.option("--mode", type=click.Choice(["balanced", "proportional"]), default="balanced")
def think(config_path, seed, out_dir, manifest_dir, n, mode):
    """Build verified reasoning traces (retention-filtered)."""
    cfg = _load(config_path, seed, out_dir)
    manifest = _run(stages.cmd_think, cfg, n, mode, manifest_dir)
    click.echo(f"think: kept {manifest.counts.get('kept')} of {manifest.counts.get('total')} "
               f"(rate {manifest.counts.get('retention_rate')})")


@main.command("eval")
@stage_options
@click.option("--predictions", type=click.Path(), required=True, help="JSONL {id, completion}.")
@click.option("--protocol", type=click.Choice(["exact", "relaxed"]), default="exact", show_default=True)
def eval_cmd(config_path, seed, out_dir, manifest_dir, predictions, protocol):
    """Score predictions against the QA gold dataset."""
    cfg = _load(config_path, seed, out_dir)
    report = _run(stages.cmd_eval, cfg, predictions, protocol, manifest_dir)
    click.echo(json.dumps(report, sort_keys=True))


@main.command()
@stage_options
@click.option("--completions", type=click.Path(), required=True, help="JSONL {id, gold?, completions: [..]}.")
def reward(config_path, seed, out_dir, manifest_dir, completions):
    """Compute rule-based rewards and group advantages for completions."""
    cfg = _load(config_path, seed, out_dir)
    rows = _run(stages.cmd_reward, cfg, completions)
    click.echo(f"reward: scored {len(rows)} groups -> rewards.jsonl")


@main.command()
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Pipeline output directory.")
@click.option("--manifest", "manifest_dir", type=click.Path(), default=None, help="Directory holding the manifests (default: --out).")
def report(out_dir, manifest_dir):
    """Aggregate stage summaries into report.json."""
    data = _run(stages.cmd_report, out_dir, manifest_dir)
    for stage, info in data.get("stages", {}).items():
        click.echo(f"{stage}: {info['counts']}")


if __name__ == "__main__":
    main()
