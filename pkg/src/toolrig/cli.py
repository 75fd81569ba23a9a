"""Operator entry points.

    toolrig serve  --listen 127.0.0.1:8765 --journal-dir runs/journal
    toolrig gen    --bundle DIR --seeds 0..4 --out instances/
    toolrig eval   --instances instances/ --models oracle --out results/
    toolrig score  --traces results/episodes --instances instances/ --out rescored.csv
    toolrig report --csv results/report.csv --out tables/

Exit codes: 0 success, 1 validation error, 2 runtime error.  Every subcommand
is idempotent given identical inputs and seeds, and none mutates the bundle.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .bank import ProblemInstance, bundle_load, instantiate
from .evaluation import Report, RunConfig, episode_row, report_from_csv, run
from .evaluation.episode import Episode
from .evaluation.reconstruct import reconstruct
from .evaluation.scoring import score
from .jsonutil import canonical_dumps
from .server import ContextServer, ContextService, ContextStore
from .tools import default_registry, registry_from_manifest


class ValidationError(Exception):
    pass


def _parse_seeds(text: str) -> list[int]:
    seeds: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            seeds.extend(range(int(lo), int(hi) + 1))
        elif part:
            seeds.append(int(part))
    if not seeds:
        raise ValidationError("no seeds given")
    return seeds


def _load_instances(path: str) -> list[ProblemInstance]:
    directory = Path(path)
    if not directory.is_dir():
        raise ValidationError(f"instance directory not found: {directory}")
    instances = []
    for file in sorted(directory.glob("*.json")):
        instances.append(ProblemInstance.from_json(json.loads(file.read_text())))
    if not instances:
        raise ValidationError(f"no instances in {directory}")
    return instances


def _known_models(names: list[str]) -> None:
    from .agents import BUILTIN_MODELS

    for name in names:
        if name in BUILTIN_MODELS or name.startswith(("llm:", "cassette:")):
            continue
        raise ValidationError(
            f"unknown model {name!r}; built-ins: {', '.join(BUILTIN_MODELS)}"
        )


def cmd_serve(args: argparse.Namespace) -> int:
    host, _, port_text = args.listen.partition(":")
    registry = registry_from_manifest(args.registry) if args.registry else default_registry()
    store = ContextStore(args.journal_dir)
    service = ContextService(registry=registry, store=store)
    try:
        server = ContextServer(service, host or "127.0.0.1", int(port_text or 0))
    except OSError as err:
        print(f"cannot bind {args.listen}: {err}", file=sys.stderr)
        return 2
    host, port = server.address
    print(f"context server listening on http://{host}:{port}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    templates = bundle_load(args.bundle)
    if args.template:
        templates = [t for t in templates if t.id == args.template]
        if not templates:
            raise ValidationError(f"template {args.template!r} not in bundle")
    seeds = _parse_seeds(args.seeds)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    count = 0
    for template in templates:
        for seed in seeds:
            instance = instantiate(template, seed)
            (out / f"{instance.instance_id}.json").write_text(
                canonical_dumps(instance.to_json())
            )
            count += 1
    print(f"wrote {count} instances to {out}")
    return 0


def cmd_eval(args: argparse.Namespace) -> int:
    models = [m.strip() for m in args.models.split(",") if m.strip()]
    if not models:
        raise ValidationError("no models given")
    _known_models(models)
    instances = _load_instances(args.instances)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = RunConfig(
        models=tuple(models),
        parallelism=args.parallel,
        resume_dir=args.resume or out,
        step_budget=args.step_budget,
        time_budget_s=args.time_budget,
        seed=args.seed,
        judge_endpoint=args.judge_endpoint or os.environ.get("TOOLRIG_JUDGE_ENDPOINT"),
    )
    report = run(models, instances, config)
    (out / "report.csv").write_text(report.csv())
    (out / "summary.csv").write_text(report.summary_csv())
    (out / "buckets.csv").write_text(report.buckets_csv())
    print(f"evaluated {len(report.rows)} episodes -> {out / 'report.csv'}")
    return 0


def cmd_score(args: argparse.Namespace) -> int:
    instances = {i.instance_id: i for i in _load_instances(args.instances)}
    trace_dir = Path(args.traces)
    files = sorted(trace_dir.glob("*.json")) if trace_dir.is_dir() else [trace_dir]
    if not files:
        raise ValidationError(f"no trace files under {trace_dir}")
    rows = []
    for file in files:
        data = json.loads(file.read_text()) if file.stat().st_size else {}
        if "episode" in data:
            # an eval-run episode record: reconstruction state is already final
            episode = Episode.from_json(data["episode"])
        elif "trace" in data:  # a raw server trace export plus final-answer metadata
            episode = Episode(
                model=data.get("model", "sdk"),
                instance_id=data.get("instance_id", ""),
                run_id=data.get("run_id", "default"),
            )
            episode.artifacts = list(data["trace"])
            episode.completion_marker_seen = bool(data.get("marker_seen", False))
            episode.final_answer = data.get("final_answer")
            episode.executed_calls = len(episode.artifacts)
            episode.transcript = list(data.get("transcript", [""] * (len(episode.artifacts) + 1)))
            instance = instances.get(episode.instance_id)
            if instance is not None:
                episode = reconstruct(episode, instance)
        else:
            rows.append(None)  # empty/zero row
            continue
        instance = instances.get(episode.instance_id)
        if instance is None:
            raise ValidationError(f"{file.name}: unknown instance {episode.instance_id!r}")
        breakdown = score(episode, instance)
        rows.append(
            episode_row(
                episode.model,
                episode.instance_id,
                breakdown,
                episode,
                instance.min_steps,
                data.get("wall_time_ms", episode.wall_time_ms),
            )
        )
    report = Report(rows=[r for r in rows if r is not None])
    zero_rows = len([r for r in rows if r is None])
    Path(args.out).write_text(report.csv())
    note = f" ({zero_rows} empty trace files skipped)" if zero_rows else ""
    print(f"scored {len(report.rows)} traces -> {args.out}{note}")
    return 0


def cmd_report(args: argparse.Namespace) -> int:
    csv_path = Path(args.csv)
    if not csv_path.exists():
        raise ValidationError(f"csv not found: {csv_path}")
    report = report_from_csv(csv_path.read_text())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "summary.csv").write_text(report.summary_csv())
    (out / "buckets.csv").write_text(report.buckets_csv())
    print(f"wrote aggregate tables to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="toolrig", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the context server")
    serve.add_argument("--listen", default="127.0.0.1:8765")
    serve.add_argument("--journal-dir", default=None)
    serve.add_argument("--registry", default=None, help="tool registry manifest path")
    serve.set_defaults(func=cmd_serve)

    gen = sub.add_parser("gen", help="instantiate templates")
    gen.add_argument("--bundle", default=None, help="template directory (default: packaged)")
    gen.add_argument("--seeds", default="0..4", help="e.g. 0..4 or 1,5,9")
    gen.add_argument("--template", default=None, help="restrict to one template id")
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_gen)

    evaluate = sub.add_parser("eval", help="run an evaluation, CSV out")
    evaluate.add_argument("--instances", required=True)
    evaluate.add_argument("--models", required=True, help="comma-separated model names")
    evaluate.add_argument("--parallel", type=int, default=1)
    evaluate.add_argument("--resume", default=None, help="resume/checkpoint directory")
    evaluate.add_argument("--out", required=True)
    evaluate.add_argument("--seed", type=int, default=0)
    evaluate.add_argument("--step-budget", type=int, default=None)
    evaluate.add_argument("--time-budget", type=float, default=10.0)
    evaluate.add_argument("--judge-endpoint", default=None)
    evaluate.set_defaults(func=cmd_eval)

    rescore = sub.add_parser("score", help="offline re-scoring of exported traces")
    rescore.add_argument("--traces", required=True, help="episode/trace file or directory")
    rescore.add_argument("--instances", required=True)
    rescore.add_argument("--out", required=True)
    rescore.set_defaults(func=cmd_score)

    report = sub.add_parser("report", help="aggregate tables and difficulty buckets")
    report.add_argument("--csv", required=True)
    report.add_argument("--out", required=True)
    report.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exit_:
        return 1 if exit_.code not in (0, None) else 0
    try:
        return args.func(args)
    except ValidationError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except Exception as err:  # noqa: BLE001 - the CLI boundary reports, not raises
        print(f"runtime error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
