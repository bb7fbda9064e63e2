"""Command line interface.

    studyflow run --students s.csv --curriculum c.csv --seed 42 --out results/
    studyflow defaults
    studyflow serve --port 8000

Exit codes: 0 success, 2 parameter validation failed, 3 unreadable or
malformed input files, 4 internal error. Validation failures print a JSON
error list to stderr so scripts can map them back to fields.
"""

from __future__ import annotations

import argparse
import json
import sys
import uuid
from pathlib import Path
from typing import Optional, Sequence

from .analytics import DATASET_NAMES
from .etl import (
    EtlError,
    GERMAN_CURRICULUM,
    GERMAN_STUDENTS,
    PLAIN_CURRICULUM,
    PLAIN_STUDENTS,
)
from .params import FieldError, default_params, params_from_flat, params_to_flat
from .runner import perform_run
from .semesters import DEFAULT_EPOCH, SemesterIndex, SemesterParseError
from .store import RunDescriptor, content_digest, write_dataset_files

EXIT_OK = 0
EXIT_PARAMS = 2
EXIT_INPUT = 3
EXIT_INTERNAL = 4

DIALECTS = {
    "german": (GERMAN_STUDENTS, GERMAN_CURRICULUM),
    "plain": (PLAIN_STUDENTS, PLAIN_CURRICULUM),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="studyflow",
        description="Simulate student flow through a modular study program.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one simulation and write its datasets")
    run.add_argument("--students", required=True, help="student CSV path")
    run.add_argument("--curriculum", required=True, help="curriculum CSV path")
    run.add_argument("--config", help="JSON file with flat parameters; flags override it")
    run.add_argument("--from", dest="window_from", metavar="SEM",
                     help="observation window start, e.g. WS15")
    run.add_argument("--to", dest="window_to", metavar="SEM",
                     help="observation window end, e.g. SS23")
    run.add_argument("--courses-per-semester", type=int, dest="courses_per_semester")
    run.add_argument("--max-attempts", type=int, dest="max_attempts")
    run.add_argument("--dropout", type=float, dest="dropout_chance",
                     help="per-semester drop-out probability")
    run.add_argument("--seed", type=int)
    run.add_argument("--sm-weights", dest="sm_weights", metavar="W1,W2,W3,W4,W5",
                     help="selection adjustment weights, five comma-separated numbers")
    run.add_argument("--sm5-exclusion", action=argparse.BooleanOptionalAction,
                     default=None, help="exclude courses with unmet prerequisites "
                     "instead of penalizing them")
    run.add_argument("--jitter", type=float, dest="selection_jitter",
                     help="uniform noise added to selection scores")
    run.add_argument("--capacity", metavar="COURSE=N,...",
                     help="per-course seat limits; unlisted courses are unbounded")
    run.add_argument("--epoch", type=int, help="century anchor for 2-digit years")
    run.add_argument("--dialect", choices=sorted(DIALECTS), default="german",
                     help="CSV dialect of both input files")
    run.add_argument("--out", default="out", help="output directory")
    run.add_argument("--format", choices=["csv", "json", "both"], default="both")
    run.add_argument("--save-log", action="store_true",
                     help="also write the kernel monitor log")
    run.add_argument("--plots", action="store_true",
                     help="also render the three result views as PNGs")

    sub.add_parser("defaults", help="print the default parameters as JSON")

    serve = sub.add_parser("serve", help="start the HTTP API")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--archive", help="run store directory (default ./archive)")
    serve.add_argument("--workers", type=int, help="simulation worker threads")
    serve.add_argument("--static", help="built frontend directory to serve at /")
    return parser


def _print_field_errors(errors: Sequence[FieldError]) -> None:
    payload = {"errors": [e.to_dict() for e in errors]}
    print(json.dumps(payload, indent=2), file=sys.stderr)


def _flat_from_args(args: argparse.Namespace) -> tuple[Optional[dict], list[FieldError]]:
    """Merge config file and flags into the flat parameter mapping."""
    errors: list[FieldError] = []
    flat: dict = {}
    if args.config:
        raw = Path(args.config).read_text(encoding="utf-8")
        loaded = json.loads(raw)
        if not isinstance(loaded, dict):
            raise EtlError(f"config {args.config} must hold a JSON object")
        flat.update(loaded)

    epoch = args.epoch if args.epoch is not None else flat.get("epoch", DEFAULT_EPOCH)
    if args.epoch is not None:
        flat["epoch"] = args.epoch

    for flag, start_key, year_key in (
        (args.window_from, "start_semester", "start_year"),
        (args.window_to, "end_semester", "end_year"),
    ):
        if flag is None:
            continue
        try:
            sem = SemesterIndex.parse(flag, epoch if isinstance(epoch, int) else DEFAULT_EPOCH)
        except SemesterParseError as exc:
            errors.append(FieldError(start_key, "invalid_choice", str(exc)))
            continue
        flat[start_key] = sem.season
        flat[year_key] = sem.year

    for key in ("courses_per_semester", "max_attempts", "dropout_chance",
                "seed", "selection_jitter"):
        value = getattr(args, key)
        if value is not None:
            flat[key] = value

    if args.sm_weights is not None:
        parts = [p.strip() for p in args.sm_weights.split(",")]
        try:
            weights = [float(p) for p in parts]
            if len(weights) != 5:
                raise ValueError
        except ValueError:
            errors.append(FieldError(
                "sm_weights", "wrong_type",
                f"--sm-weights needs five comma-separated numbers, got {args.sm_weights!r}",
            ))
        else:
            for i, w in enumerate(weights, start=1):
                flat[f"sm_w{i}"] = w
    if args.sm5_exclusion is not None:
        flat["sm5_exclusion"] = args.sm5_exclusion

    if args.capacity is not None:
        capacity: dict = {}
        for item in args.capacity.split(","):
            item = item.strip()
            if not item:
                continue
            course, sep, limit = item.partition("=")
            if not sep or not course:
                errors.append(FieldError(
                    "capacity", "wrong_type", f"capacity entry {item!r} is not COURSE=N"))
                continue
            try:
                capacity[course.strip()] = int(limit)
            except ValueError:
                errors.append(FieldError(
                    "capacity", "wrong_type", f"capacity limit {limit!r} is not an integer"))
        flat["capacity"] = capacity

    if errors:
        return None, errors
    return flat, []


def _cmd_run(args: argparse.Namespace) -> int:
    try:
        flat, errors = _flat_from_args(args)
    except (OSError, json.JSONDecodeError, EtlError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if errors:
        _print_field_errors(errors)
        return EXIT_PARAMS

    params, errors = params_from_flat(flat)
    if errors:
        _print_field_errors(errors)
        return EXIT_PARAMS

    try:
        students_bytes = Path(args.students).read_bytes()
        curriculum_bytes = Path(args.curriculum).read_bytes()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT

    s_dialect, c_dialect = DIALECTS[args.dialect]
    try:
        artifacts = perform_run(params, students_bytes, curriculum_bytes,
                                students_dialect=s_dialect, curriculum_dialect=c_dialect)
    except EtlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        # run_cohorts rejects e.g. capacity limits for unknown courses
        _print_field_errors([FieldError("capacity", "invalid_choice", str(exc))])
        return EXIT_PARAMS

    out = Path(args.out)
    formats = ("csv", "json") if args.format == "both" else (args.format,)
    exports = {
        name: {fmt: blobs[fmt] for fmt in formats}
        for name, blobs in artifacts.exports.items()
    }
    filenames, digests = write_dataset_files(out, exports)
    manifest = RunDescriptor(
        run_id=uuid.uuid4().hex,
        params=params_to_flat(params),
        inputs={
            "students": content_digest(students_bytes),
            "curriculum": content_digest(curriculum_bytes),
        },
        status="done",
        datasets=filenames,
        digests=digests,
    )
    (out / "manifest.json").write_text(
        json.dumps(manifest.to_dict(), indent=2, sort_keys=True), encoding="utf-8")

    if args.save_log:
        (out / "monitor_log.json").write_text(
            artifacts.results.monitor_log.to_json(), encoding="utf-8")
    if args.plots:
        from .plots import render_all

        render_all(artifacts.datasets, out)

    tally: dict = {}
    for record in artifacts.results.records:
        tally[record.reason.value] = tally.get(record.reason.value, 0) + 1
    summary = ", ".join(f"{k}={v}" for k, v in sorted(tally.items())) or "no students"
    print(f"run {manifest.run_id}: {artifacts.results.enrolled} students ({summary})")
    print(f"wrote {', '.join(f'{name}.{fmt}' for name in DATASET_NAMES for fmt in formats)}"
          f" and manifest.json to {out}/")
    return EXIT_OK


def _cmd_defaults() -> int:
    print(json.dumps(params_to_flat(default_params()), indent=2))
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(archive=args.archive, workers=args.workers, static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "defaults":
            return _cmd_defaults()
        if args.command == "serve":
            return _cmd_serve(args)
        parser.error(f"unknown command {args.command!r}")
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except SystemExit:
        raise
    except Exception as exc:  # noqa: BLE001 - the CLI boundary reports, not crashes
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
