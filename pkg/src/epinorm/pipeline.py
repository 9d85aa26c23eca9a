"""The normalize pipeline: raw bytes plus a manifest in, canonical document out.

Stages run in a fixed order: decode the bytes, parse the container, turn
date cells into canonical timestamps or explicit intervals (week labels and
monthly reporting schemes resolve directly to intervals), resolve location
names against the gazetteer as of each row's own date, and assemble
validated time series. Any failure aborts the whole run; a partial
document is never produced.
"""

from __future__ import annotations

import warnings as _warnings
from dataclasses import dataclass

from . import geo
from .containers import CanonicalDocument, DocumentMetadata, read_csv, read_json
from .encoding import detect_and_decode
from .epicalendar import MMWR, MONDAY_START, parse_week_label, report_span_for, week_interval
from .errors import EpinormError
from .intervals import Interval, TimestampedPoint, to_interval_series
from .manifest import MONTHLY_SCHEME, DatasetManifest
from .series import UNKNOWN, Observation, SeriesContext, TimeSeries
from .temporal import CanonicalTimestamp, parse_date, zone_string_for


class PipelineError(EpinormError):
    pass


@dataclass
class NormalizeResult:
    document: CanonicalDocument
    warnings: list[str]
    rows_read: int


@dataclass
class _Row:
    number: int
    date_cells: tuple[str, ...]
    location: str
    value: object


def normalize_bytes(
    data: bytes,
    manifest: DatasetManifest,
    *,
    source_name: str = "<data>",
    gazetteer: geo.Gazetteer | None = None,
) -> NormalizeResult:
    manifest.require_normalizable()
    gaz = gazetteer if gazetteer is not None else geo.load_gazetteer(manifest.gazetteer)

    decoded = detect_and_decode(data, manifest.encoding)
    warns: list[str] = []
    if decoded.newline_style_found == "mixed":
        warns.append(f"{source_name}: mixed line endings were normalized to LF")

    rows = _extract_rows(decoded.text, manifest, source_name)

    with _warnings.catch_warnings(record=True) as caught:
        _warnings.simplefilter("always")
        observations = _build_observations(rows, manifest, gaz, source_name)
    warns.extend(f"{source_name}: {w.message}" for w in caught)

    document = CanonicalDocument(
        metadata=DocumentMetadata(
            interval_type=manifest.interval_type.value,
            case_definition=manifest.case_definition,
            calendar=manifest.calendar,
            zone=manifest.zone,
            source=manifest.source or source_name,
        ),
        observations=observations,
    )
    return NormalizeResult(document, warns, len(rows))


def _extract_rows(text: str, manifest: DatasetManifest, source_name: str) -> list[_Row]:
    if manifest.container == "json":
        return [
            _Row(i, (date,), location, count)
            for i, (date, location, count) in enumerate(read_json(text, source_name), start=1)
        ]

    table = read_csv(text, source_name)
    date_idx = [table.column_index(name) for name in manifest.date_columns]
    loc_idx = table.column_index(manifest.location_column)
    value_idx = table.column_index(manifest.value_column)

    rows = []
    for i, record in enumerate(table.rows, start=1):
        value = _parse_value(record[value_idx], manifest, source_name, i)
        rows.append(
            _Row(i, tuple(record[j] for j in date_idx), record[loc_idx], value)
        )
    return rows


def _parse_value(token: str, manifest: DatasetManifest, source_name: str, row: int) -> object:
    text = token.strip()
    if text in manifest.unknown_markers:
        return UNKNOWN
    try:
        value = int(text)
    except ValueError:
        raise PipelineError(
            f"{source_name}: row {row}: {token!r} is neither an integer count nor a "
            f"declared unknown marker"
        ) from None
    if value < 0:
        raise PipelineError(f"{source_name}: row {row}: negative count {value}")
    return value


def _build_observations(
    rows: list[_Row], manifest: DatasetManifest, gaz: geo.Gazetteer, source_name: str
) -> list[Observation]:
    explicit = (
        manifest.week_system is not None or len(manifest.date_columns) == 2
    )
    observations: list[Observation] = []
    pending: dict[str, list[tuple[TimestampedPoint, int]]] = {}

    for row in rows:
        try:
            if explicit:
                interval = _explicit_interval(row, manifest)
                code = _resolve_code(row, interval.start, manifest, gaz, source_name)
                observations.append(_observation(interval, code, row.value, manifest))
            else:
                ts = parse_date(row.date_cells[0], manifest.hint())
                ts = _attach_zone(ts, manifest)
                code = _resolve_code(row, ts, manifest, gaz, source_name)
                pending.setdefault(code, []).append((TimestampedPoint(ts, row.value), row.number))
        except (EpinormError, ValueError) as exc:
            if isinstance(exc, PipelineError):
                raise
            raise PipelineError(f"{source_name}: row {row.number}: {exc}") from exc

    for code in sorted(pending):
        entries = sorted(pending[code], key=lambda e: e[0].timestamp.instant)
        points = [point for point, _ in entries]
        try:
            interval_series = to_interval_series(
                points, manifest.interval_type, manifest.period, manifest.granule
            )
        except EpinormError as exc:
            raise PipelineError(f"{source_name}: location {code}: {exc}") from exc
        for interval, value in interval_series:
            observations.append(_observation(interval, code, value, manifest))

    observations.sort(
        key=lambda o: (o.location, o.demographic, o.case_type, o.interval.start.instant)
    )
    _validate_series(observations)
    return observations


def _explicit_interval(row: _Row, manifest: DatasetManifest) -> Interval:
    if manifest.week_system in (MMWR, MONDAY_START):
        week = parse_week_label(row.date_cells[0], manifest.week_system)
        return week_interval(week)
    if manifest.week_system == MONTHLY_SCHEME:
        ts = parse_date(row.date_cells[0], manifest.hint())
        return report_span_for(ts, manifest.monthly_scheme).to_interval()
    start = _attach_zone(parse_date(row.date_cells[0], manifest.hint()), manifest)
    end = _attach_zone(parse_date(row.date_cells[1], manifest.hint()), manifest)
    return Interval(start, end)


def _attach_zone(ts: CanonicalTimestamp, manifest: DatasetManifest) -> CanonicalTimestamp:
    if manifest.zone is None or ts.zone is not None or ts.precision == "day":
        return ts
    return ts.with_zone(zone_string_for(manifest.zone, ts.instant))


def _resolve_code(
    row: _Row,
    when: CanonicalTimestamp,
    manifest: DatasetManifest,
    gaz: geo.Gazetteer,
    source_name: str,
) -> str:
    try:
        entry = geo.resolve(row.location, gaz, as_of=when.calendar_date)
    except geo.GeoError as exc:
        raise PipelineError(f"{source_name}: row {row.number}: {exc}") from exc
    return entry.code


def _observation(interval: Interval, code: str, value: object, manifest: DatasetManifest) -> Observation:
    return Observation(
        interval=interval,
        location=code,
        case_type=manifest.case_type,
        value=value,
        demographic=manifest.demographic,
    )


def _validate_series(observations: list[Observation]) -> None:
    by_context: dict[SeriesContext, list[Observation]] = {}
    for obs in observations:
        by_context.setdefault(obs.context, []).append(obs)
    for context, group in by_context.items():
        TimeSeries.build(context, group)  # raises on overlapping intervals
