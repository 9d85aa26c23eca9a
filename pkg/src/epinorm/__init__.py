"""epinorm: normalize heterogeneous epidemiological case-count data.

Ingests the containers, encodings, date conventions, interval semantics
and location spellings that institutions actually publish, produces a
canonical revision-aware time-series form, and lints datasets against
publication best practices.
"""

from .containers import (
    CanonicalDocument,
    DocumentMetadata,
    RawTable,
    read_canonical,
    read_csv,
    read_json,
    write_canonical,
)
from .encoding import DecodedText, detect_and_decode
from .epicalendar import (
    EpiWeek,
    MonthlyReportScheme,
    month_report_intervals,
    week_interval,
    week_of,
)
from .errors import EpinormError
from .geo import Gazetteer, LocationRef, incidence_rate, load_gazetteer, resolve
from .intervals import (
    Interval,
    IntervalType,
    TimestampedPoint,
    from_interval_series,
    to_interval_series,
)
from .lint import LintReport, lint
from .manifest import DatasetManifest, load_manifest, parse_manifest
from .pipeline import normalize_bytes
from .series import (
    UNKNOWN,
    Observation,
    RevisionedSeries,
    SeriesContext,
    TimeSeries,
    merge,
    revision_diff,
)
from .temporal import (
    CanonicalTimestamp,
    LocaleHint,
    format_iso8601,
    parse_date,
    parse_iso_duration,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalDocument",
    "CanonicalTimestamp",
    "DatasetManifest",
    "DecodedText",
    "DocumentMetadata",
    "EpiWeek",
    "EpinormError",
    "Gazetteer",
    "Interval",
    "IntervalType",
    "LintReport",
    "LocaleHint",
    "LocationRef",
    "MonthlyReportScheme",
    "Observation",
    "RawTable",
    "RevisionedSeries",
    "SeriesContext",
    "TimeSeries",
    "TimestampedPoint",
    "UNKNOWN",
    "detect_and_decode",
    "format_iso8601",
    "from_interval_series",
    "incidence_rate",
    "lint",
    "load_gazetteer",
    "load_manifest",
    "merge",
    "month_report_intervals",
    "normalize_bytes",
    "parse_date",
    "parse_iso_duration",
    "parse_manifest",
    "read_canonical",
    "read_csv",
    "read_json",
    "resolve",
    "revision_diff",
    "to_interval_series",
    "week_interval",
    "week_of",
    "write_canonical",
]
