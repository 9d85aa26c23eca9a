"""Machine-checkable publication best practices for case-count datasets.

Each rule audits the file as published (not what a locale hint could rescue
it into): UTF-8 encoding, ISO 8601 timestamps, declared time zones on
sub-day data, a declared interval type, resolvable ISO 3166 locations, a
stated case definition, and explicit unknown-value markers. Data problems
become findings, never crashes; only a broken manifest raises.
"""

from __future__ import annotations

import csv
import io
import json
import warnings
from dataclasses import asdict, dataclass

from . import geo
from .manifest import DatasetManifest
from .temporal import DateError, parse_date

RULES = {
    "R-UTF8": ("error", "data are encoded as UTF-8"),
    "R-ISO8601": ("error", "dates and timestamps use ISO 8601"),
    "R-TZ": ("warning", "sub-day timestamps declare a time zone or are UTC"),
    "R-INTERVAL": ("error", "the interval type is declared"),
    "R-ISO3166": ("warning", "locations resolve to ISO 3166 entries"),
    "R-CASEDEF": ("error", "the case definition is stated and non-empty"),
    "R-UNKNOWN": ("error", "counts are integers or explicit unknown markers"),
    # Structural escape hatch: a container that cannot be parsed at all
    # still yields a finding instead of a crash.
    "R-CONTAINER": ("error", "the container parses as declared"),
}


@dataclass(frozen=True)
class LintRule:
    id: str
    severity: str
    description: str


def rule_catalog() -> list[LintRule]:
    return [LintRule(rid, sev, desc) for rid, (sev, desc) in RULES.items()]


@dataclass(frozen=True)
class Finding:
    rule: str
    severity: str
    file: str
    row: int | None
    column: str | None
    message: str

    def locus(self) -> str:
        parts = [self.file]
        if self.row is not None:
            parts.append(f"row {self.row}")
        if self.column is not None:
            parts.append(f"col {self.column}")
        return ", ".join(parts)


@dataclass
class LintReport:
    findings: list[Finding]

    @property
    def error_count(self) -> int:
        return sum(1 for f in self.findings if f.severity == "error")

    @property
    def warning_count(self) -> int:
        return sum(1 for f in self.findings if f.severity == "warning")

    @property
    def exit_code(self) -> int:
        # Fixed contract for CI use: 0 clean, 1 warnings only, 2 errors.
        if self.error_count:
            return 2
        if self.warning_count:
            return 1
        return 0

    def rule_ids(self) -> list[str]:
        return [f.rule for f in self.findings]

    def to_json(self) -> str:
        payload = {
            "findings": [asdict(f) for f in self.findings],
            "summary": {
                "errors": self.error_count,
                "warnings": self.warning_count,
                "total": len(self.findings),
            },
        }
        return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    def to_text(self) -> str:
        if not self.findings:
            return "clean: no findings\n"
        lines = []
        width_rule = max(len(f.rule) for f in self.findings)
        width_sev = max(len(f.severity) for f in self.findings)
        width_locus = max(len(f.locus()) for f in self.findings)
        for f in self.findings:
            lines.append(
                f"{f.rule:<{width_rule}}  {f.severity:<{width_sev}}  "
                f"{f.locus():<{width_locus}}  {f.message}"
            )
        lines.append(f"{self.error_count} error(s), {self.warning_count} warning(s)")
        return "\n".join(lines) + "\n"


class _Collector:
    def __init__(self):
        self.findings: list[Finding] = []

    def add(self, rule: str, file: str, row: int | None, column: str | None, message: str):
        severity = RULES[rule][0]
        self.findings.append(Finding(rule, severity, file, row, column, message))

    def report(self) -> LintReport:
        ordered = sorted(
            self.findings,
            key=lambda f: (f.file, f.row if f.row is not None else -1, f.column or "", f.rule),
        )
        return LintReport(ordered)


def lint(
    data: bytes,
    manifest: DatasetManifest,
    *,
    source_name: str = "<data>",
    manifest_name: str = "<manifest>",
    gazetteer: geo.Gazetteer | None = None,
) -> LintReport:
    """Check one dataset plus its manifest and return a deterministic report."""
    out = _Collector()
    gaz = gazetteer if gazetteer is not None else geo.load_gazetteer(manifest.gazetteer)

    if manifest.interval_type is None:
        out.add("R-INTERVAL", manifest_name, None, None, "manifest declares no interval_type")
    if not (manifest.case_definition or "").strip():
        out.add("R-CASEDEF", manifest_name, None, None, "manifest states no case definition")

    payload = data
    if payload.startswith(b"\xef\xbb\xbf"):
        payload = payload[3:]
    try:
        text = payload.decode("utf-8")
    except UnicodeDecodeError as exc:
        out.add(
            "R-UTF8", source_name, None, None,
            f"not valid UTF-8 at byte {exc.start} (0x{payload[exc.start]:02x})",
        )
        text = payload.decode("iso-8859-1")

    if manifest.container == "csv":
        _lint_csv(text, manifest, gaz, source_name, out)
    else:
        _lint_json(text, manifest, gaz, source_name, out)
    return out.report()


def _lint_csv(text, manifest, gaz, source_name, out: _Collector):
    body = "\n".join(line for line in text.split("\n") if not line.startswith("#"))
    if not body.strip():
        out.add("R-CONTAINER", source_name, None, None, "no CSV content")
        return
    records = [row for row in csv.reader(io.StringIO(body)) if row]
    header = [cell.strip() for cell in records[0]]

    columns = {}
    for name in (*manifest.date_columns, manifest.location_column, manifest.value_column):
        if name in header:
            columns[name] = header.index(name)
        else:
            out.add("R-CONTAINER", source_name, None, None, f"declared column {name!r} not in header")

    for row_no, record in enumerate(records[1:], start=1):
        if len(record) != len(header):
            out.add(
                "R-CONTAINER", source_name, row_no, None,
                f"row has {len(record)} cells where the header has {len(header)}",
            )
            continue
        for name in manifest.date_columns:
            if name in columns:
                _check_date_cell(record[columns[name]], manifest, source_name, row_no, name, out)
        if manifest.location_column in columns:
            _check_location_cell(
                record[columns[manifest.location_column]], gaz,
                source_name, row_no, manifest.location_column, out,
            )
        if manifest.value_column in columns:
            _check_value_cell(
                record[columns[manifest.value_column]], manifest,
                source_name, row_no, manifest.value_column, out,
            )


def _lint_json(text, manifest, gaz, source_name, out: _Collector):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        out.add("R-CONTAINER", source_name, None, None, f"not valid JSON: {exc}")
        return

    if isinstance(doc, dict) and "observations" in doc:
        _lint_canonical_json(doc, manifest, gaz, source_name, out)
        return
    if not isinstance(doc, list):
        out.add(
            "R-CONTAINER", source_name, None, None,
            "expected an array of {date, locations} entries or a canonical document",
        )
        return

    for row_no, entry in enumerate(doc, start=1):
        if not isinstance(entry, dict) or "date" not in entry or "locations" not in entry:
            out.add(
                "R-CONTAINER", source_name, row_no, None,
                "entry needs 'date' and 'locations' keys",
            )
            continue
        if isinstance(entry["date"], str):
            _check_date_cell(entry["date"], manifest, source_name, row_no, "date", out)
        else:
            out.add("R-ISO8601", source_name, row_no, "date", "date is not a string")
        locations = entry["locations"]
        if not isinstance(locations, dict):
            out.add("R-CONTAINER", source_name, row_no, "locations", "'locations' is not an object")
            continue
        for name, count in locations.items():
            _check_location_cell(name, gaz, source_name, row_no, "locations", out)
            _check_json_count(count, manifest, source_name, row_no, f"locations.{name}", out)


def _lint_canonical_json(doc, manifest, gaz, source_name, out: _Collector):
    observations = doc.get("observations")
    if not isinstance(observations, list):
        out.add("R-CONTAINER", source_name, None, None, "'observations' is not an array")
        return
    for row_no, rec in enumerate(observations, start=1):
        if not isinstance(rec, dict):
            out.add("R-CONTAINER", source_name, row_no, None, "observation is not an object")
            continue
        for key in ("interval_start", "interval_end"):
            cell = rec.get(key)
            if isinstance(cell, str):
                _check_date_cell(cell, manifest, source_name, row_no, key, out)
            else:
                out.add("R-ISO8601", source_name, row_no, key, f"{key} is missing or not a string")
        code = rec.get("location_code")
        if isinstance(code, str):
            _check_location_cell(code, gaz, source_name, row_no, "location_code", out)
        else:
            out.add("R-ISO3166", source_name, row_no, "location_code",
                    "location_code is missing or not a string")
        _check_json_count(rec.get("value"), manifest, source_name, row_no, "value", out)


def _check_date_cell(cell, manifest, file, row, column, out: _Collector):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            ts = parse_date(cell)
        except DateError as exc:
            out.add("R-ISO8601", file, row, column, f"not ISO 8601: {exc}")
            return
    if ts.precision != "day" and ts.zone is None and manifest.zone is None:
        out.add(
            "R-TZ", file, row, column,
            f"{cell!r} has sub-day precision but neither it nor the manifest states a zone",
        )


def _check_location_cell(cell, gaz, file, row, column, out: _Collector):
    name = cell.strip()
    if not name:
        out.add("R-ISO3166", file, row, column, "empty location name")
        return
    try:
        entry = geo.resolve(name, gaz)
    except geo.GeoError as exc:
        out.add("R-ISO3166", file, row, column, str(exc))
        return
    if not entry.is_iso_coded:
        out.add(
            "R-ISO3166", file, row, column,
            f"{name!r} resolves to extension entry {entry.code}, not an ISO 3166 code",
        )


def _check_value_cell(cell, manifest, file, row, column, out: _Collector):
    token = cell.strip()
    if token in manifest.unknown_markers:
        return
    try:
        value = int(token)
    except ValueError:
        if not token:
            out.add(
                "R-UNKNOWN", file, row, column,
                "empty count cell without a declared unknown marker",
            )
        else:
            out.add(
                "R-UNKNOWN", file, row, column,
                f"{token!r} is neither an integer count nor a declared unknown marker",
            )
        return
    if value < 0:
        out.add("R-UNKNOWN", file, row, column, f"negative count {value}")


def _check_json_count(count, manifest, file, row, column, out: _Collector):
    if count is None:
        return  # JSON null is an explicit unknown
    if isinstance(count, bool) or not isinstance(count, int):
        if isinstance(count, str) and count.strip() in manifest.unknown_markers:
            return
        out.add(
            "R-UNKNOWN", file, row, column,
            f"{count!r} is neither an integer count nor an explicit unknown",
        )
        return
    if count < 0:
        out.add("R-UNKNOWN", file, row, column, f"negative count {count}")
