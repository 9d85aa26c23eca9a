"""Data containers: foreign CSV/JSON readers and the canonical export formats.

The canonical CSV schema is, in exact column order: interval_start,
interval_end, location_code, demographic, case_type, value — where value is
a non-negative integer or the literal token "unknown", and intervals are
ISO 8601 timestamps (start inclusive, end exclusive). Document metadata
rides in front as "# key: value" comment lines so a canonical file is fully
self-describing. Canonical JSON wraps the same records in
{"metadata": {...}, "observations": [...]} with null meaning unknown.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, fields

from .errors import EpinormError
from .intervals import Interval
from .series import UNKNOWN, Observation
from .temporal import format_iso8601, parse_date

CANONICAL_COLUMNS = (
    "interval_start",
    "interval_end",
    "location_code",
    "demographic",
    "case_type",
    "value",
)

UNKNOWN_TOKEN = "unknown"


class ContainerError(EpinormError):
    pass


class EmptyInput(ContainerError):
    pass


class RaggedRow(ContainerError):
    def __init__(self, row_index: int, expected: int, got: int):
        super().__init__(
            f"row {row_index} has {got} cells where the header has {expected}"
        )
        self.row_index = row_index
        self.expected = expected
        self.got = got


class MalformedDocument(ContainerError):
    pass


class ShapeMismatch(ContainerError):
    pass


class MissingMetadata(ContainerError):
    pass


@dataclass(frozen=True)
class Provenance:
    source: str
    kind: str


@dataclass(frozen=True)
class RawTable:
    header: tuple[str, ...]
    rows: tuple[tuple[str, ...], ...]
    provenance: Provenance

    def column_index(self, name: str) -> int:
        try:
            return self.header.index(name)
        except ValueError:
            raise ShapeMismatch(
                f"{self.provenance.source}: no column {name!r}; header is {list(self.header)}"
            ) from None


def read_csv(text: str, source: str = "<csv>") -> RawTable:
    """Parse comma-separated text with a header line into a raw table.

    Standard double-quote escaping applies; blank lines are skipped; a row
    whose cell count differs from the header is a RaggedRow error.
    """
    if not text.strip():
        raise EmptyInput(f"{source}: no CSV content")
    records = [row for row in csv.reader(io.StringIO(text)) if row]
    header = tuple(cell.strip() for cell in records[0])
    rows = []
    for index, record in enumerate(records[1:], start=1):
        if len(record) != len(header):
            raise RaggedRow(index, len(header), len(record))
        rows.append(tuple(record))
    return RawTable(header, tuple(rows), Provenance(source, "csv"))


def read_json(text: str, source: str = "<json>") -> list[tuple[str, str, int]]:
    """Flatten date-keyed location maps to (date, location, count) tuples.

    Expects an array of objects, each carrying a "date" string and a
    "locations" object of name -> integer count, and preserves document
    order.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{source}: {exc}") from exc
    if not isinstance(doc, list):
        raise ShapeMismatch(f"{source}: expected a top-level array")

    out = []
    for i, entry in enumerate(doc):
        if not isinstance(entry, dict) or "date" not in entry or "locations" not in entry:
            raise ShapeMismatch(f"{source}: entry {i} needs 'date' and 'locations' keys")
        date = entry["date"]
        locations = entry["locations"]
        if not isinstance(date, str) or not isinstance(locations, dict):
            raise ShapeMismatch(f"{source}: entry {i} has wrongly-typed 'date' or 'locations'")
        for name, count in locations.items():
            if not isinstance(count, int) or isinstance(count, bool):
                raise ShapeMismatch(
                    f"{source}: entry {i} location {name!r} has non-integer count {count!r}"
                )
            out.append((date, name, count))
    return out


@dataclass
class DocumentMetadata:
    """Declared context a canonical document carries with its observations."""

    interval_type: str | None = None
    case_definition: str | None = None
    calendar: str = "gregorian"
    zone: str | None = None
    source: str | None = None

    def to_dict(self) -> dict:
        return {
            "interval_type": self.interval_type,
            "case_definition": self.case_definition,
            "calendar": self.calendar,
            "zone": self.zone,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data: dict) -> DocumentMetadata:
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ShapeMismatch(f"unknown metadata keys {sorted(unknown)}")
        kwargs = {k: v for k, v in data.items() if v is not None}
        return cls(**kwargs)


@dataclass
class CanonicalDocument:
    metadata: DocumentMetadata
    observations: list[Observation] = field(default_factory=list)


def write_canonical(doc: CanonicalDocument, kind: str) -> str:
    """Serialize a canonical document, byte-stable for identical input.

    Raises MissingMetadata unless the interval type and case definition are
    declared; a document without them is exactly the kind of ambiguous
    publication this toolkit exists to prevent.
    """
    if not (doc.metadata.interval_type or "").strip():
        raise MissingMetadata("document metadata must declare interval_type")
    if not (doc.metadata.case_definition or "").strip():
        raise MissingMetadata("document metadata must declare case_definition")
    if kind == "csv":
        return _write_canonical_csv(doc)
    if kind == "json":
        return _write_canonical_json(doc)
    raise ValueError(f"kind must be 'csv' or 'json', got {kind!r}")


def read_canonical(text: str, kind: str, source: str = "<canonical>") -> CanonicalDocument:
    if kind == "csv":
        return _read_canonical_csv(text, source)
    if kind == "json":
        return _read_canonical_json(text, source)
    raise ValueError(f"kind must be 'csv' or 'json', got {kind!r}")


def _observation_fields(obs: Observation) -> tuple[str, str, str, str, str]:
    return (
        format_iso8601(obs.interval.start),
        format_iso8601(obs.interval.end),
        obs.location,
        obs.demographic,
        obs.case_type,
    )


def _write_canonical_csv(doc: CanonicalDocument) -> str:
    buf = io.StringIO()
    for key, value in sorted(doc.metadata.to_dict().items()):
        if value is None:
            continue
        if "\n" in str(value):
            raise MissingMetadata(f"metadata field {key} must be a single line")
        buf.write(f"# {key}: {value}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CANONICAL_COLUMNS)
    for obs in doc.observations:
        value = UNKNOWN_TOKEN if obs.value is UNKNOWN else str(obs.value)
        writer.writerow([*_observation_fields(obs), value])
    return buf.getvalue()


def _read_canonical_csv(text: str, source: str) -> CanonicalDocument:
    meta: dict[str, str] = {}
    lines = text.split("\n")
    body_start = 0
    for line in lines:
        if not line.startswith("#"):
            break
        body_start += 1
        stripped = line.lstrip("#").strip()
        if ":" not in stripped:
            raise ShapeMismatch(f"{source}: malformed metadata line {line!r}")
        key, _, value = stripped.partition(":")
        meta[key.strip()] = value.strip()
    metadata = DocumentMetadata.from_dict(meta)

    table = read_csv("\n".join(lines[body_start:]), source)
    if table.header != CANONICAL_COLUMNS:
        raise ShapeMismatch(
            f"{source}: canonical header must be {list(CANONICAL_COLUMNS)}, got {list(table.header)}"
        )
    observations = []
    for index, row in enumerate(table.rows, start=1):
        start, end, location, demographic, case_type, raw_value = row
        value = UNKNOWN if raw_value == UNKNOWN_TOKEN else _parse_count(raw_value, index, source)
        observations.append(
            Observation(
                interval=Interval(parse_date(start), parse_date(end)),
                location=location,
                case_type=case_type,
                value=value,
                demographic=demographic,
            )
        )
    return CanonicalDocument(metadata, observations)


def _parse_count(raw: str, index: int, source: str) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ShapeMismatch(
            f"{source}: row {index} value {raw!r} is neither an integer nor {UNKNOWN_TOKEN!r}"
        ) from None
    if value < 0:
        raise ShapeMismatch(f"{source}: row {index} has negative count {value}")
    return value


def _write_canonical_json(doc: CanonicalDocument) -> str:
    payload = {
        "metadata": doc.metadata.to_dict(),
        "observations": [
            {
                "interval_start": start,
                "interval_end": end,
                "location_code": location,
                "demographic": demographic,
                "case_type": case_type,
                "value": None if obs.value is UNKNOWN else obs.value,
            }
            for obs in doc.observations
            for start, end, location, demographic, case_type in [_observation_fields(obs)]
        ],
    }
    return json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def _read_canonical_json(text: str, source: str) -> CanonicalDocument:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"{source}: {exc}") from exc
    if not isinstance(payload, dict) or "metadata" not in payload or "observations" not in payload:
        raise ShapeMismatch(f"{source}: expected 'metadata' and 'observations' keys")
    metadata = DocumentMetadata.from_dict(payload["metadata"])

    observations = []
    for i, rec in enumerate(payload["observations"]):
        try:
            raw_value = rec["value"]
            if raw_value is None:
                value = UNKNOWN
            elif isinstance(raw_value, int) and not isinstance(raw_value, bool):
                value = raw_value
            else:
                raise ShapeMismatch(
                    f"{source}: observation {i} value {raw_value!r} must be an integer or null"
                )
            observations.append(
                Observation(
                    interval=Interval(
                        parse_date(rec["interval_start"]), parse_date(rec["interval_end"])
                    ),
                    location=rec["location_code"],
                    case_type=rec["case_type"],
                    value=value,
                    demographic=rec["demographic"],
                )
            )
        except KeyError as exc:
            raise ShapeMismatch(f"{source}: observation {i} is missing {exc}") from exc
    return CanonicalDocument(metadata, observations)
