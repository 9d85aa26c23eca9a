"""Dataset manifests: the single place a source's quirks are declared.

Institutions vary on container, encoding, date conventions, calendar,
interval semantics, week systems, location spellings and unknown-value
markers. A manifest pins all of them for one source, is validated against
the published JSON schema shipped with the package, and rejects unknown
keys outright so a typo cannot silently change meaning.
"""

from __future__ import annotations

import datetime
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import jsonschema

from .encoding import UnsupportedEncoding, canonical_encoding_name
from .epicalendar import DEFAULT_MONTHLY_SCHEME, MonthlyReportScheme
from .errors import EpinormError
from .intervals import DEFAULT_GRANULE, IntervalType
from .series import validate_case_type
from .temporal import (
    GREGORIAN,
    LocaleHint,
    UnparseableText,
    parse_iso_duration,
    zone_string_for,
)

MONTHLY_SCHEME = "monthly_scheme"


class ManifestInvalid(EpinormError):
    pass


@dataclass
class DatasetManifest:
    container: str
    interval_type: IntervalType | None = None
    case_definition: str | None = None
    case_type: str = "confirmed"
    demographic: str = "all"
    encoding: str | None = None
    date_format: LocaleHint | None = None
    calendar: str = GREGORIAN
    zone: str | None = None
    period: datetime.timedelta | None = None
    granule: datetime.timedelta = DEFAULT_GRANULE
    week_system: str | None = None
    monthly_scheme: MonthlyReportScheme = DEFAULT_MONTHLY_SCHEME
    date_columns: tuple[str, ...] = ("date",)
    location_column: str = "location"
    value_column: str = "cases"
    unknown_markers: frozenset[str] = frozenset({"unknown"})
    gazetteer: str | None = None
    source: str | None = None

    def hint(self) -> LocaleHint | None:
        return self.date_format

    def require_normalizable(self) -> None:
        """The fields the normalize pipeline cannot proceed without."""
        if self.interval_type is None:
            raise ManifestInvalid("manifest must declare interval_type")
        if not (self.case_definition or "").strip():
            raise ManifestInvalid("manifest must declare a non-empty case_definition")


def _schema() -> dict:
    text = resources.files("epinorm.data").joinpath("manifest.schema.json").read_text("utf-8")
    return json.loads(text)


def parse_manifest(data: dict, origin: str = "<manifest>") -> DatasetManifest:
    """Validate a manifest object against the published schema and build it."""
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "<root>"
        raise ManifestInvalid(f"{origin}: at {path}: {exc.message}") from exc

    calendar = data.get("calendar", GREGORIAN)

    date_format = None
    if "date_format" in data:
        raw = data["date_format"]
        date_format = LocaleHint(
            date_order=raw["order"],
            clock=raw.get("clock", "h24"),
            calendar=calendar,
            pattern=raw.get("pattern"),
        )

    encoding = None
    if "encoding" in data:
        try:
            encoding = canonical_encoding_name(data["encoding"])
        except UnsupportedEncoding as exc:
            raise ManifestInvalid(f"{origin}: {exc}") from exc

    zone = data.get("zone")
    if zone is not None:
        try:
            zone_string_for(zone, datetime.datetime(2000, 1, 1))
        except UnparseableText as exc:
            raise ManifestInvalid(f"{origin}: {exc}") from exc

    case_type = data.get("case_type", "confirmed")
    try:
        validate_case_type(case_type)
    except ValueError as exc:
        raise ManifestInvalid(f"{origin}: {exc}") from exc

    markers = frozenset(data.get("unknown_markers", ["unknown"]))
    for marker in markers:
        try:
            int(marker.strip())
        except ValueError:
            continue
        raise ManifestInvalid(
            f"{origin}: unknown_markers may not contain a parseable integer ({marker!r})"
        )

    try:
        period = parse_iso_duration(data["period"]) if "period" in data else None
        granule = parse_iso_duration(data["granule"]) if "granule" in data else DEFAULT_GRANULE
    except UnparseableText as exc:
        raise ManifestInvalid(f"{origin}: {exc}") from exc

    scheme = DEFAULT_MONTHLY_SCHEME
    if "monthly_cuts" in data:
        try:
            scheme = MonthlyReportScheme(tuple(data["monthly_cuts"]))
        except ValueError as exc:
            raise ManifestInvalid(f"{origin}: {exc}") from exc

    interval_type = None
    if "interval_type" in data:
        interval_type = IntervalType(data["interval_type"])

    return DatasetManifest(
        container=data["container"],
        interval_type=interval_type,
        case_definition=data.get("case_definition"),
        case_type=case_type,
        demographic=data.get("demographic", "all"),
        encoding=encoding,
        date_format=date_format,
        calendar=calendar,
        zone=zone,
        period=period,
        granule=granule,
        week_system=data.get("week_system"),
        monthly_scheme=scheme,
        date_columns=tuple(data.get("date_columns", ["date"])),
        location_column=data.get("location_column", "location"),
        value_column=data.get("value_column", "cases"),
        unknown_markers=markers,
        gazetteer=data.get("gazetteer"),
        source=data.get("source"),
    )


def load_manifest(path: str | Path) -> DatasetManifest:
    p = Path(path)
    try:
        data = json.loads(p.read_text("utf-8"))
    except OSError as exc:
        raise ManifestInvalid(f"cannot read manifest {p}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ManifestInvalid(f"{p}: not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ManifestInvalid(f"{p}: manifest must be a JSON object")
    return parse_manifest(data, origin=str(p))
