"""Operator command line: `aesthia measure|correlate|rank|simulate|physical|serve`.

Every subcommand is deterministic given its inputs (plus --seed where one
applies). Exit codes: 0 success, 1 partial or data failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import csv
import logging
import os
import sys
from pathlib import Path

from . import datasets, geometry, measures, ranking, simulate, stats
from .errors import CodecError, DomainError, ParameterError
from .imaging import load_image
from .measures import MEASURE_NAMES, MeasureConfig

log = logging.getLogger("aesthia")


def _add_measure_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--r-adapt", type=int, default=None, help="adaptive binarisation radius")
    parser.add_argument("--r-cg", type=int, default=None, help="coarse-grain radius")
    parser.add_argument("--delta", type=float, default=None, help="coarse-grain ratio threshold")
    parser.add_argument("--jpeg-quality", type=float, default=None, help="lossy quality in (0, 1]")
    parser.add_argument("--peak", type=float, default=None, help="preferred fractal dimension")
    parser.add_argument("--sigma", type=float, default=None, help="preference curve width")
    parser.add_argument("--box-min", type=int, default=None, help="smallest box size (px)")
    parser.add_argument(
        "--box-max-frac", type=float, default=None, help="largest box as fraction of min dimension"
    )


def _config_from_args(args) -> MeasureConfig:
    overrides = {
        "r_adapt": args.r_adapt,
        "r_cg": args.r_cg,
        "delta": args.delta,
        "jpeg_quality": args.jpeg_quality,
        "peak": args.peak,
        "sigma": args.sigma,
        "box_min": args.box_min,
        "box_max_frac": args.box_max_frac,
    }
    base = MeasureConfig()
    kwargs = {k: v for k, v in overrides.items() if v is not None}
    cfg = MeasureConfig(**{**base.__dict__, **kwargs})
    return cfg.validate()


def _measure_one(task):
    """Worker for the measure pool: returns (id, values-or-None, error-or-None)."""
    image_id, path, cfg, names = task
    try:
        img = load_image(path)
    except (FileNotFoundError, CodecError) as exc:
        return image_id, None, str(exc)
    vec = measures.measure_selected(img, cfg, names)
    return image_id, vec.as_dict(), None


def cmd_measure(args) -> int:
    cfg = _config_from_args(args)
    manifest = datasets.load_manifest(args.manifest)
    names = list(MEASURE_NAMES)
    if args.measures:
        names = [n.strip() for n in args.measures.split(",") if n.strip()]
        unknown = set(names) - set(MEASURE_NAMES)
        if unknown:
            print(f"unknown measures: {sorted(unknown)}", file=sys.stderr)
            return 2
    tasks = [(e.image_id, str(e.path), cfg, tuple(names)) for e in manifest.entries]
    results: dict[str, dict] = {}
    failures: list[tuple[str, str]] = []
    workers = args.workers or os.cpu_count() or 1

    def collect(outcomes):
        for index, (image_id, values, error) in enumerate(outcomes, start=1):
            if error is not None:
                failures.append((image_id, error))
            else:
                results[image_id] = values
            print(f"\r{index}/{len(tasks)} images measured", end="", file=sys.stderr)
        print(file=sys.stderr)

    if workers > 1 and len(tasks) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            collect(pool.map(_measure_one, tasks))
    else:
        collect(map(_measure_one, tasks))
    table = stats.ResultsTable(columns=datasets.RESULT_COLUMNS)
    for entry in manifest.entries:  # manifest order, deterministic output
        if entry.image_id not in results:
            continue
        values = dict(results[entry.image_id])
        values["score"] = entry.score
        table.add_row(entry.image_id, values)
    if table.rows:
        datasets.write_results(table, args.out, columns=names + ["score"])
        print(f"wrote {len(table.rows)} rows to {args.out}", file=sys.stderr)
    for image_id, error in failures:
        print(f"FAILED {image_id}: {error}", file=sys.stderr)
    return 1 if failures else 0


def cmd_correlate(args) -> int:
    table = datasets.read_results(args.results)
    score_col = args.score_col
    if score_col not in table.columns:
        print(f"score column {score_col!r} not present", file=sys.stderr)
        return 1
    if args.min_score is not None:
        table = table.filter_rows(
            lambda _id, row: row.get(score_col) is not None
            and row[score_col] >= args.min_score
        )
    candidates = [c for c in table.columns if c != score_col and c in MEASURE_NAMES]
    if args.complete_rows:
        needed = candidates + [score_col]
        table = table.filter_rows(lambda _id, row: all(c in row for c in needed))
    method = stats.spearman if args.spearman else stats.pearson
    usable = []
    for name in candidates:
        try:
            method(table.column(name), table.column(score_col))
            usable.append(name)
        except DomainError:
            print(f"excluding constant column {name}", file=sys.stderr)
        except ParameterError as exc:
            print(f"cannot correlate: {exc}", file=sys.stderr)
            return 1
    try:
        matrix = stats.correlation_matrix(table, usable, score_column=score_col, method=method)
    except (DomainError, ParameterError) as exc:
        print(f"cannot correlate: {exc}", file=sys.stderr)
        return 1
    if args.markdown:
        print(stats.render_matrix_markdown(matrix))
    else:
        print(stats.render_matrix_text(matrix))
    if args.csv_out:
        stats.write_matrix_csv(matrix, args.csv_out)
    return 0


def cmd_rank(args) -> int:
    events = []
    skipped = 0
    with open(args.log, encoding="utf-8") as fh:
        for line_num, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                events.append(ranking.ComparisonEvent.from_json(line))
            except (ParameterError, ValueError, KeyError) as exc:
                skipped += 1
                print(f"warning: skipping log line {line_num}: {exc}", file=sys.stderr)
    table = ranking.replay(events)
    total = len(table)
    if args.max_rd is not None:
        table, _ = ranking.filter_by_rd(table, args.max_rd)
    retained = len(table)
    fraction = retained / total if total else 0.0
    print(f"{retained} ({fraction * 100:.1f}%)")
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["image_id", "prompt", "rating", "rd", "matches"])
        for prompt in ranking.PROMPTS:
            for _dataset, image_id, r in table.ranked(prompt):
                writer.writerow(
                    [image_id, prompt, f"{r.rating:.9g}", f"{r.rd:.9g}", r.matches]
                )
    if skipped:
        print(f"{skipped} malformed line(s) skipped", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    events, strengths = simulate.simulate_events(
        args.events, args.items, args.seed, tie_prob=args.tie_prob
    )
    with open(args.out, "w", encoding="utf-8") as fh:
        for event in events:
            fh.write(event.to_json() + "\n")
    if args.truth_out:
        with open(args.truth_out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["item", "strength"])
            for item, strength in strengths.items():
                writer.writerow([item, f"{strength:.9g}"])
    print(f"wrote {len(events)} events to {args.out}", file=sys.stderr)
    return 0


def cmd_physical(args) -> int:
    forms_dir = Path(args.forms)
    files = sorted(forms_dir.glob("*.json"))
    if not files:
        print(f"warning: no form files found in {forms_dir}", file=sys.stderr)
    failures = 0
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "Sc"])
        for path in files:
            try:
                form = geometry.load_form_json(path)
                score = geometry.physical_complexity(form)
            except (ParameterError, DomainError, ValueError) as exc:
                failures += 1
                print(f"FAILED {path.name}: {exc}", file=sys.stderr)
                continue
            writer.writerow([path.stem, f"{score:.9g}"])
    return 1 if failures else 0


def cmd_serve(args) -> int:
    from . import service

    if args.config:
        config = service.load_config_toml(args.config)
    else:
        config = service.SurveyConfig(datasets={}, log_path=Path("events.jsonl"))
    dataset_map = dict(config.datasets)
    for item in args.dataset or []:
        if "=" not in item:
            print(f"--dataset expects name=manifest.csv, got {item!r}", file=sys.stderr)
            return 2
        name, _, manifest = item.partition("=")
        dataset_map[name] = Path(manifest)
    config = service.SurveyConfig(
        datasets=dataset_map,
        log_path=Path(args.log) if args.log else config.log_path,
        static_dir=Path(args.static_dir) if args.static_dir else config.static_dir,
        rng_seed=args.seed if args.seed is not None else config.rng_seed,
        high_rd_sampler=args.high_rd_sampler or config.high_rd_sampler,
        port=args.port or config.port,
    )
    try:
        app = service.create_app(config)
    except ParameterError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    import uvicorn

    uvicorn.run(app, host=args.host, port=config.port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aesthia",
        description="image complexity measures, physical form scoring and survey ranking",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="run the measure suite over a dataset manifest")
    p.add_argument("manifest", help="dataset manifest CSV (id,path,score,category)")
    p.add_argument("-o", "--out", required=True, help="results CSV path")
    p.add_argument("--measures", help="comma-separated subset of measure columns")
    p.add_argument("--workers", type=int, default=None, help="process pool size")
    _add_measure_flags(p)
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("correlate", help="correlation matrix of a results CSV")
    p.add_argument("results", help="results CSV from `aesthia measure`")
    p.add_argument("--score-col", default="score")
    p.add_argument("--min-score", type=float, default=None,
                   help="drop rows scoring below this (e.g. 1 to drop unrated 0-score rows)")
    p.add_argument("--complete-rows", action="store_true",
                   help="drop rows with any missing cell instead of pairwise deletion")
    p.add_argument("--spearman", action="store_true", help="rank correlation instead of Pearson")
    p.add_argument("--markdown", action="store_true", help="render a markdown table")
    p.add_argument("--csv-out", default=None, help="also write the matrix as CSV")
    p.set_defaults(func=cmd_correlate)

    p = sub.add_parser("rank", help="replay a survey event log into rating CSV")
    p.add_argument("log", help="JSON-lines event log")
    p.add_argument("-o", "--out", required=True, help="ranking CSV path")
    p.add_argument("--max-rd", type=float, default=None,
                   help="keep only images below this rating deviation in both prompts")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("simulate", help="generate a synthetic Bradley-Terry survey log")
    p.add_argument("-o", "--out", required=True, help="event log path")
    p.add_argument("--events", type=int, default=2000)
    p.add_argument("--items", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tie-prob", type=float, default=0.0)
    p.add_argument("--truth-out", default=None, help="also write the generating strengths CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("physical", help="physical complexity of layered-form JSON files")
    p.add_argument("forms", help="directory of form JSON files")
    p.add_argument("-o", "--out", required=True, help="Sc CSV path")
    p.set_defaults(func=cmd_physical)

    p = sub.add_parser("serve", help="run the pairwise-comparison survey service")
    p.add_argument("--config", default=None, help="TOML config file")
    p.add_argument("--dataset", action="append", help="name=manifest.csv (repeatable)")
    p.add_argument("--log", default=None, help="event log path")
    p.add_argument("--static-dir", default=None, help="UI bundle directory")
    p.add_argument("--port", type=int, default=None)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--seed", type=int, default=None, help="sampler RNG seed")
    p.add_argument("--high-rd-sampler", action="store_true",
                   help="bias pair sampling toward uncertain images")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("AESTHIA_LOG", "WARNING").upper())
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParameterError, DomainError, CodecError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
