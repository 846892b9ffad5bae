"""Pipeline stages behind the CLI commands.

Each stage reads the previous stage's manifest, writes its own datasets plus
a manifest stamped with the config fingerprint, and is a no-op when re-run
with unchanged config and parameters. All outputs are deterministic given
(config, seed): JSON is dumped with sorted keys and records are ordered by
id, so byte-identical reruns are an invariant, not an accident.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from random import Random

from ..errors import ClientError, EmptyCompletion, ForgeError, TemplateViolation
from ..generator import HttpTextClient, build_prompt, generate_spec_llm, generate_spec_procedural
from ..oracle import generate_questions
from ..quality import filter_corpus
from ..quality.review import apply_review, export_borderline
from ..rewards import evaluate_qa, score_group
from ..spec_core import parse_spec, serialize_spec, validate_spec
from ..think import HttpReasonerClient, MockReasoner, build_trace, stratified_sample, verify_and_retain
from ..tracefmt import extract_answer
from .config import PipelineConfig, load_assets
from .manifest import Manifest, read_jsonl, read_manifest, stage_is_current, write_jsonl
from .renderer import render_all

SPECS_FILE = "specs.jsonl"
QA_FILE = "qa.jsonl"
THINK_FILE = "think.jsonl"


def _out(cfg: PipelineConfig) -> Path:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _mdir(cfg: PipelineConfig, manifest_dir: str | None) -> Path:
    """Manifests default to the output directory but may live elsewhere."""
    if manifest_dir is None:
        return _out(cfg)
    path = Path(manifest_dir)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _allocation(total: int, buckets: int) -> list[int]:
    """Balanced split: every bucket gets floor(total/buckets), the first
    total % buckets get one extra."""
    base, rem = divmod(total, buckets)
    return [base + (1 if i < rem else 0) for i in range(buckets)]


def cmd_generate(
    cfg: PipelineConfig,
    count: int,
    mode: str = "procedural",
    manifest_dir: str | None = None,
) -> Manifest:
    """Produce the spec corpus with balanced allocation across subtypes."""
    out = _out(cfg)
    mdir = _mdir(cfg, manifest_dir)
    params = {"count": count, "mode": mode}
    if stage_is_current(mdir, "generate", cfg.fingerprint(), params, [out / SPECS_FILE]):
        return read_manifest(mdir, "generate")

    taxonomy, topics, templates = load_assets(cfg)
    pairs = list(topics.pairs())
    Random(cfg.seed).shuffle(pairs)

    # one work item per spec, ordered by global index
    plan: list[tuple[object, str, str, int, str]] = []
    global_idx = 0
    for template, quota in zip(templates.templates, _allocation(count, len(templates))):
        for _ in range(quota):
            domain, subtopic = pairs[global_idx % len(pairs)]
            item_seed = cfg.seed * 1_000_003 + global_idx
            plan.append((template, domain, subtopic, item_seed, f"s{global_idx:05d}"))
            global_idx += 1

    if mode == "llm":
        if not cfg.llm_url:
            raise ForgeError("llm generation mode requires llm_url (or FORGE_LLM_URL)")
        client = HttpTextClient(cfg.llm_url, cfg.llm_token)

        def produce(item):
            template, domain, subtopic, _seed, _rid = item
            prompt = build_prompt(template, domain, subtopic, topics)
            document = generate_spec_llm(prompt, client)
            return parse_spec(document, taxonomy)

        # bounded in-flight requests; results keep plan order
        with ThreadPoolExecutor(max_workers=max(1, cfg.concurrency)) as pool:
            outcomes = list(pool.map(lambda item: _try(produce, item), plan))
    else:
        outcomes = [
            _try(
                lambda item: generate_spec_procedural(item[0], (item[1], item[2]), item[3], taxonomy),
                item,
            )
            for item in plan
        ]

    records: list[dict] = []
    manifest_records: list[dict] = []
    counts: dict[str, int] = {}
    dropped = 0
    for (template, domain, subtopic, item_seed, rid), (spec, error) in zip(plan, outcomes):
        if spec is None or not validate_spec(spec, taxonomy).valid:
            dropped += 1
            manifest_records.append(
                {
                    "id": rid,
                    "status": "error",
                    "paths": {},
                    "strata": {"subtype": template.subtype},
                    "error": error or "generated spec failed validation",
                }
            )
            continue
        records.append(
            {
                "id": rid,
                "category": spec.category,
                "subtype": spec.subtype,
                "domain": domain,
                "subtopic": subtopic,
                "seed": item_seed,
                "option": serialize_spec(spec),
            }
        )
        counts[spec.subtype] = counts.get(spec.subtype, 0) + 1
        manifest_records.append(
            {
                "id": rid,
                "status": "ok",
                "paths": {"specs": SPECS_FILE},
                "strata": {"chart_type": spec.category, "subtype": spec.subtype},
            }
        )

    write_jsonl(out / SPECS_FILE, records)
    manifest = Manifest(
        stage="generate",
        records=manifest_records,
        config_fingerprint=cfg.fingerprint(),
        params=params,
        counts={"ok": len(records), "dropped": dropped, "per_subtype": counts},
    )
    manifest.write(mdir)
    return manifest


def _try(fn, item):
    try:
        return fn(item), None
    except (ForgeError, EmptyCompletion) as exc:
        return None, str(exc)


def cmd_render(cfg: PipelineConfig, manifest_dir: str | None = None) -> Manifest:
    """Render every spec in the corpus through the configured worker."""
    out = _out(cfg)
    mdir = _mdir(cfg, manifest_dir)
    params = {"width": cfg.render_width, "height": cfg.render_height}
    images_dir = out / "images"
    if stage_is_current(mdir, "render", cfg.fingerprint(), params, [images_dir]):
        return read_manifest(mdir, "render")
    read_manifest(mdir, "generate", expect_fingerprint=cfg.fingerprint())

    specs = read_jsonl(out / SPECS_FILE)
    requests = [
        {"id": r["id"], "option": r["option"], "width": cfg.render_width, "height": cfg.render_height}
        for r in specs
    ]
    results = render_all(cfg.renderer_argv(), requests, workers=cfg.concurrency)

    images_dir.mkdir(parents=True, exist_ok=True)
    manifest_records = []
    ok = err = 0
    for r in specs:
        result = results.get(r["id"])
        if result is not None and result.status == "ok":
            path = images_dir / f"{r['id']}.png"
            path.write_bytes(result.png)
            ok += 1
            manifest_records.append(
                {
                    "id": r["id"],
                    "status": "ok",
                    "paths": {"image": str(path.relative_to(out))},
                    "strata": {"chart_type": r["category"], "subtype": r["subtype"]},
                }
            )
        else:
            err += 1
            manifest_records.append(
                {
                    "id": r["id"],
                    "status": "error",
                    "paths": {},
                    "strata": {"chart_type": r["category"], "subtype": r["subtype"]},
                    "error": {
                        "kind": result.error_kind if result else "runtime",
                        "message": result.error_message if result else "no response",
                    },
                }
            )
    total = ok + err
    manifest = Manifest(
        stage="render",
        records=manifest_records,
        config_fingerprint=cfg.fingerprint(),
        params=params,
        counts={"ok": ok, "error": err, "pass_rate": ok / total if total else None},
    )
    manifest.write(mdir)
    return manifest


def cmd_filter(
    cfg: PipelineConfig,
    review_dir: str | None = None,
    review_file: str | None = None,
    manifest_dir: str | None = None,
) -> Manifest:
    """Apply the pixel-level quality filter to rendered images."""
    out = _out(cfg)
    mdir = _mdir(cfg, manifest_dir)
    params = {"review": bool(review_dir or review_file)}
    report_path = out / "filter_report.json"
    if stage_is_current(mdir, "filter", cfg.fingerprint(), params, [report_path]):
        return read_manifest(mdir, "filter")
    render = read_manifest(mdir, "render", expect_fingerprint=cfg.fingerprint())

    entries = [
        {
            "id": r["id"],
            "path": str(out / r["paths"]["image"]),
            "subtype": r["strata"].get("subtype"),
            "strata": r["strata"],
        }
        for r in render.records
        if r["status"] == "ok"
    ]
    kept, report = filter_corpus(entries, cfg.filter_params)
    kept_ids = {r["id"] for r in kept}
    assessed = report.assessed

    if review_dir:
        export_borderline(assessed, cfg.filter_params, review_dir)
    if review_file:
        rejected = [r for r in assessed if r["id"] not in kept_ids]
        kept = apply_review(kept, rejected, review_file)
        kept_ids = {r["id"] for r in kept}

    manifest_records = []
    for entry in assessed:
        manifest_records.append(
            {
                "id": entry["id"],
                "status": "accept" if entry["id"] in kept_ids else entry["quality"]["verdict"],
                "paths": {"image": str(Path(entry["path"]).relative_to(out))},
                "strata": entry.get("strata", {}),
                "quality": entry["quality"],
            }
        )
    for io_err in report.io_errors:
        manifest_records.append(
            {"id": io_err["id"], "status": "io_error", "paths": {}, "strata": {}, "error": io_err["message"]}
        )

    report_path.write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    manifest = Manifest(
        stage="filter",
        records=manifest_records,
        config_fingerprint=cfg.fingerprint(),
        params=params,
        counts={**report.counts, "kept": len(kept), "io_errors": len(report.io_errors)},
    )
    manifest.write(mdir)
    return manifest


def cmd_qa(cfg: PipelineConfig, k: int = 5, manifest_dir: str | None = None) -> Manifest:
    """Generate k oracle-verified QA samples per surviving chart."""
    out = _out(cfg)
    mdir = _mdir(cfg, manifest_dir)
    params = {"k": k}
    if stage_is_current(mdir, "qa", cfg.fingerprint(), params, [out / QA_FILE]):
        return read_manifest(mdir, "qa")
    taxonomy, _, _ = load_assets(cfg)
    filt = read_manifest(mdir, "filter", expect_fingerprint=cfg.fingerprint())
    options = {r["id"]: r for r in read_jsonl(out / SPECS_FILE)}

    qa_records = []
    manifest_records = []
    counts: dict[str, int] = {}
    for record in filt.records:
        if record["status"] != "accept":
            continue
        source = options[record["id"]]
        spec = parse_spec(source["option"], taxonomy).with_id(record["id"])
        samples = generate_questions(spec, k, cfg.seed, image_ref=record["paths"]["image"])
        for sample in samples:
            qa_records.append(sample.to_record())
            counts[sample.reasoning_type] = counts.get(sample.reasoning_type, 0) + 1
            manifest_records.append(
                {
                    "id": sample.id,
                    "status": "ok",
                    "paths": {"dataset": QA_FILE},
                    "strata": {
                        "reasoning_type": sample.reasoning_type,
                        "chart_type": sample.chart_type,
                    },
                }
            )
    write_jsonl(out / QA_FILE, qa_records)
    manifest = Manifest(
        stage="qa",
        records=manifest_records,
        config_fingerprint=cfg.fingerprint(),
        params=params,
        counts={"samples": len(qa_records), "per_reasoning_type": counts},
    )
    manifest.write(mdir)
    return manifest


def cmd_think(
    cfg: PipelineConfig,
    n: int | None = None,
    mode: str = "balanced",
    manifest_dir: str | None = None,
) -> Manifest:
    """Build reasoning traces and keep only verified ones."""
    out = _out(cfg)
    mdir = _mdir(cfg, manifest_dir)
    params = {"n": n, "mode": mode}
    if stage_is_current(mdir, "think", cfg.fingerprint(), params, [out / THINK_FILE]):
        return read_manifest(mdir, "think")
    taxonomy, _, _ = load_assets(cfg)
    read_manifest(mdir, "qa", expect_fingerprint=cfg.fingerprint())

    samples = read_jsonl(out / QA_FILE)
    if n is not None:
        samples = stratified_sample(samples, n, mode, cfg.seed)

    options = {r["id"]: r["option"] for r in read_jsonl(out / SPECS_FILE)}
    specs = {}
    for record in samples:
        spec_id = record["spec_id"]
        if spec_id not in specs:
            specs[spec_id] = parse_spec(options[spec_id], taxonomy).with_id(spec_id)

    template = cfg.output_template()

    def trace_one(record):
        try:
            return build_trace(
                specs[record["spec_id"]],
                record["question"],
                reasoner,
                cfg.think_max_tokens,
                template=template,
                prompt_template=cfg.think_prompt,
            )
        except (TemplateViolation, ClientError):
            return None

    if cfg.reasoner_url:
        # trace generation is concurrent under the configured in-flight bound
        reasoner = HttpReasonerClient(cfg.reasoner_url)
        with ThreadPoolExecutor(max_workers=max(1, cfg.concurrency)) as pool:
            results = list(pool.map(trace_one, samples))
    else:
        # the mock's accuracy pattern is indexed by call order, so it must
        # see samples sequentially to stay deterministic
        reasoner = MockReasoner(
            [r["answer"] for r in samples], accuracy=cfg.think_accuracy, template=template
        )
        results = [trace_one(record) for record in samples]

    traces = []
    failures = 0
    for record, result in zip(samples, results):
        if result is None:
            failures += 1
            continue
        traces.append((record, result[0], result[1]))

    think_samples, retention = verify_and_retain(
        traces, source="chartforge-synthetic", protocol=cfg.think_protocol
    )
    write_jsonl(out / THINK_FILE, [s.to_record() for s in think_samples])
    (out / "retention.json").write_text(
        json.dumps(retention.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )

    kept_ids = {s.id for s in think_samples}
    manifest_records = [
        {
            "id": record["id"],
            "status": "kept" if record["id"] in kept_ids else "dropped",
            "paths": {"dataset": THINK_FILE},
            "strata": {
                "reasoning_type": record["reasoning_type"],
                "chart_type": record["chart_type"],
            },
        }
        for record, _, _ in traces
    ]
    manifest = Manifest(
        stage="think",
        records=manifest_records,
        config_fingerprint=cfg.fingerprint(),
        params=params,
        counts={
            "kept": retention.kept,
            "total": retention.total,
            "trace_failures": failures,
            "retention_rate": retention.rate,
        },
    )
    manifest.write(mdir)
    return manifest


def cmd_eval(
    cfg: PipelineConfig,
    predictions_path: str,
    protocol: str = "exact",
    manifest_dir: str | None = None,
) -> dict:
    """Score a predictions file against the QA gold dataset."""
    out = _out(cfg)
    read_manifest(_mdir(cfg, manifest_dir), "qa", expect_fingerprint=cfg.fingerprint())
    gold = read_jsonl(out / QA_FILE)
    template = cfg.output_template()
    preds: dict[str, str] = {}
    pred_path = Path(predictions_path)
    if pred_path.is_file():
        for r in read_jsonl(pred_path):
            completion = str(r.get("completion", r.get("prediction", "")))
            answer_text = extract_answer(completion, template)
            preds[str(r["id"])] = (answer_text if answer_text is not None else completion).strip()
    report = evaluate_qa(preds, gold, protocol)
    (out / "eval_report.json").write_text(
        json.dumps(report.to_dict(), sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return report.to_dict()


def cmd_reward(cfg: PipelineConfig, completions_path: str) -> list[dict]:
    """Score completion groups with the rule-based rewards + advantages."""
    out = _out(cfg)
    gold_by_id = {}
    qa_path = out / QA_FILE
    if qa_path.is_file():
        gold_by_id = {r["id"]: r["answer"] for r in read_jsonl(qa_path)}

    rows = []
    for r in read_jsonl(completions_path):
        gold = r["gold"] if "gold" in r else gold_by_id.get(r["id"])
        if gold is None:
            raise ForgeError(f"no gold answer for id {r['id']} (not in file nor qa dataset)")
        group = score_group(
            r["completions"],
            gold,
            weights=cfg.reward_weights,
            bounds=cfg.length_bounds,
            protocol=cfg.think_protocol,
            template=cfg.output_template(),
        )
        rows.append(
            {
                "id": r["id"],
                "rewards": list(group.rewards),
                "advantages": list(group.advantages),
            }
        )
    write_jsonl(out / "rewards.jsonl", rows)
    return rows


def cmd_report(out_dir: str, manifest_dir: str | None = None) -> dict:
    """Aggregate every stage summary found under out_dir."""
    out = Path(out_dir)
    mdir = Path(manifest_dir) if manifest_dir else out
    report: dict = {"stages": {}}
    for summary_path in sorted(mdir.glob("*.manifest.json")):
        data = json.loads(summary_path.read_text(encoding="utf-8"))
        report["stages"][data["stage"]] = {
            "n_records": data.get("n_records"),
            "counts": data.get("counts"),
            "config_fingerprint": data.get("config_fingerprint"),
        }
    for extra in ("filter_report.json", "retention.json", "eval_report.json"):
        path = out / extra
        if path.is_file():
            report[extra.replace(".json", "")] = json.loads(path.read_text(encoding="utf-8"))
    (out / "report.json").write_text(
        json.dumps(report, sort_keys=True, indent=1) + "\n", encoding="utf-8"
    )
    return report
