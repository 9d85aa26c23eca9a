"""Command-line frontend wiring the toolkit into manifest-driven pipelines.

Subcommands: normalize, lint, asof, epiweek, merge, diff, report. Exit
codes are uniform: 0 ok, 1 warnings, 2 errors. Diagnostics go to stderr;
data goes to stdout or --output only, and an output file is never left
half-written.
"""

from __future__ import annotations

import argparse
import csv
import datetime
import io
import json
import sys
from pathlib import Path

from .containers import CanonicalDocument, read_canonical, write_canonical
from .epicalendar import MMWR, WEEK_SYSTEMS, week_interval, week_of
from .errors import EpinormError
from .lint import lint
from .manifest import load_manifest
from .pipeline import normalize_bytes
from .report import write_report
from .revstore import load_revision_store
from .series import UNKNOWN, TimeSeries, merge as merge_series, revision_diff
from .temporal import format_iso8601, parse_date

EXIT_OK = 0
EXIT_WARNINGS = 1
EXIT_ERRORS = 2


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except EpinormError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERRORS
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERRORS


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epinorm",
        description="Normalize epidemiological case-count data and lint it "
        "against publication best practices.",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--manifest", help="dataset manifest (JSON)")
    common.add_argument("--output", help="write data here instead of stdout")
    common.add_argument("--format", choices=["csv", "json", "text"], default=None,
                        help="output format")

    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("normalize", parents=[common],
                       help="run the full pipeline and write a canonical file")
    p.add_argument("input")
    p.set_defaults(handler=_cmd_normalize)

    p = sub.add_parser("lint", parents=[common],
                       help="check a dataset against publication best practices")
    p.add_argument("input")
    p.set_defaults(handler=_cmd_lint)

    p = sub.add_parser("asof", parents=[common],
                       help="print a revision store snapshot as of a publication date")
    p.add_argument("store")
    p.add_argument("date")
    p.set_defaults(handler=_cmd_asof)

    p = sub.add_parser("epiweek", parents=[common], help="epi week of a date")
    p.add_argument("date")
    p.add_argument("--system", choices=list(WEEK_SYSTEMS), default=MMWR)
    p.set_defaults(handler=_cmd_epiweek)

    p = sub.add_parser("merge", parents=[common], help="merge two canonical files")
    p.add_argument("first")
    p.add_argument("second", help="treated as the newer publication under prefer_newer")
    p.add_argument("--policy", choices=["prefer_newer", "error_on_conflict"],
                   default="error_on_conflict")
    p.set_defaults(handler=_cmd_merge)

    p = sub.add_parser("diff", parents=[common],
                       help="list revisions between two publication dates")
    p.add_argument("store")
    p.add_argument("p1")
    p.add_argument("p2")
    p.set_defaults(handler=_cmd_diff)

    p = sub.add_parser("report", parents=[common],
                       help="render an epi-curve figure next to a canonical copy")
    p.add_argument("input")
    p.add_argument("--stem", help="basename for the emitted files (default: input stem)")
    p.add_argument("--title")
    p.set_defaults(handler=_cmd_report)

    return parser


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, "utf-8")
    else:
        sys.stdout.write(text)


def _require_manifest(args):
    if not args.manifest:
        raise EpinormError(f"{args.command} requires --manifest")
    return load_manifest(args.manifest)


def _read_canonical_file(path: str) -> CanonicalDocument:
    text = Path(path).read_text("utf-8")
    kind = "json" if text.lstrip().startswith("{") else "csv"
    return read_canonical(text, kind, str(path))


def _publication_date(label: str) -> datetime.date:
    try:
        return datetime.date.fromisoformat(label)
    except ValueError as exc:
        raise EpinormError(f"not an ISO publication date: {label!r}") from exc


def _cmd_normalize(args) -> int:
    manifest = _require_manifest(args)
    data = Path(args.input).read_bytes()
    result = normalize_bytes(data, manifest, source_name=args.input)
    kind = args.format or "csv"
    if kind == "text":
        raise EpinormError("normalize writes csv or json")
    text = write_canonical(result.document, kind)

    locations = {obs.location for obs in result.document.observations}
    _emit(text, args.output)
    print(
        f"{args.input}: {result.rows_read} rows -> "
        f"{len(result.document.observations)} observations across "
        f"{len(locations)} location(s)",
        file=sys.stderr,
    )
    for message in result.warnings:
        print(f"warning: {message}", file=sys.stderr)
    return EXIT_WARNINGS if result.warnings else EXIT_OK


def _cmd_lint(args) -> int:
    manifest = _require_manifest(args)
    data = Path(args.input).read_bytes()
    report = lint(data, manifest, source_name=args.input, manifest_name=args.manifest)
    style = args.format or "text"
    if style == "json":
        _emit(report.to_json(), args.output)
    elif style == "csv":
        _emit(_findings_csv(report), args.output)
    else:
        _emit(report.to_text(), args.output)
    return report.exit_code


def _findings_csv(report) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["rule", "severity", "file", "row", "column", "message"])
    for f in report.findings:
        writer.writerow([f.rule, f.severity, f.file,
                         "" if f.row is None else f.row,
                         "" if f.column is None else f.column,
                         f.message])
    return buf.getvalue()


def _cmd_asof(args) -> int:
    rs, metadata = load_revision_store(args.store)
    snapshot = rs.as_of(_publication_date(args.date))
    doc = CanonicalDocument(metadata, list(snapshot.observations))
    kind = args.format or "json"
    if kind == "text":
        raise EpinormError("asof writes csv or json")
    _emit(write_canonical(doc, kind), args.output)
    return EXIT_OK


def _cmd_epiweek(args) -> int:
    ts = parse_date(args.date)
    week = week_of(ts, args.system)
    interval = week_interval(week)
    if args.format == "json":
        payload = {
            "system": week.system,
            "year": week.year,
            "week": week.week,
            "interval_start": format_iso8601(interval.start),
            "interval_end": format_iso8601(interval.end),
        }
        _emit(json.dumps(payload, sort_keys=True) + "\n", args.output)
    else:
        _emit(week.label() + "\n", args.output)
    return EXIT_OK


def _cmd_merge(args) -> int:
    doc_a = _read_canonical_file(args.first)
    doc_b = _read_canonical_file(args.second)

    groups_a = _by_context(doc_a)
    groups_b = _by_context(doc_b)
    merged = []
    for context in sorted(set(groups_a) | set(groups_b),
                          key=lambda c: (c.location, c.demographic, c.case_type)):
        if context in groups_a and context in groups_b:
            series = merge_series(groups_a[context], groups_b[context], args.policy)
        else:
            series = groups_a.get(context) or groups_b[context]
        merged.extend(series.observations)

    doc = CanonicalDocument(doc_a.metadata, merged)
    kind = args.format or "csv"
    if kind == "text":
        raise EpinormError("merge writes csv or json")
    _emit(write_canonical(doc, kind), args.output)
    return EXIT_OK


def _by_context(doc: CanonicalDocument) -> dict:
    groups: dict = {}
    for obs in doc.observations:
        groups.setdefault(obs.context, []).append(obs)
    return {ctx: TimeSeries.build(ctx, group) for ctx, group in groups.items()}


def _cmd_diff(args) -> int:
    rs, _ = load_revision_store(args.store)
    changes = revision_diff(rs, _publication_date(args.p1), _publication_date(args.p2))

    def encode(value):
        if value is None:
            return "absent"
        if value is UNKNOWN:
            return "unknown"
        return value

    if args.format == "json":
        payload = [
            {
                "interval": str(interval),
                "old": encode(old),
                "new": encode(new),
            }
            for interval, old, new in changes
        ]
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.output)
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["interval", "old", "new"])
        for interval, old, new in changes:
            writer.writerow([str(interval), encode(old), encode(new)])
        _emit(buf.getvalue(), args.output)
    else:
        lines = [f"{interval}  {encode(old)} -> {encode(new)}" for interval, old, new in changes]
        lines.append(f"{len(changes)} change(s)")
        _emit("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _cmd_report(args) -> int:
    doc = _read_canonical_file(args.input)
    out_dir = args.output or "."
    stem = args.stem or Path(args.input).stem
    kind = args.format or "csv"
    if kind == "text":
        raise EpinormError("report writes csv or json alongside the figure")
    data_path, figure_path = write_report(doc, out_dir, stem, kind=kind, title=args.title)
    print(f"wrote {data_path} and {figure_path}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
