"""Parsing of heterogeneous date/time strings into canonical timestamps.

ISO 8601 input needs no hint. Locale-convention input (day-month-year vs
month-day-year, 12-hour clocks, Buddhist-calendar years) parses only under
an explicit LocaleHint; when both day/month readings of a string are valid
and no hint is given, parsing fails rather than guessing.
"""

from __future__ import annotations

import datetime
import re
import warnings
from dataclasses import dataclass, field

from .errors import EpinormError

GREGORIAN = "gregorian"
BUDDHIST = "buddhist"

# Thai solar calendar offset: Buddhist Era year = Common Era year + 543.
BUDDHIST_YEAR_OFFSET = 543

# A Gregorian-labeled year beyond this is suspiciously likely to be an
# undeclared Buddhist-calendar year.
BUDDHIST_SUSPECT_YEAR = 2400

DATE_ORDERS = ("DMY", "MDY", "YMD")
CLOCKS = ("h12", "h24")
CALENDARS = (GREGORIAN, BUDDHIST)
PRECISIONS = ("day", "hour", "minute", "second")


class DateError(EpinormError):
    """Base class for date/time parsing failures."""


class AmbiguousDate(DateError):
    """Both day/month readings are valid and no hint disambiguates them."""

    def __init__(self, text: str, readings: list[datetime.date]):
        pretty = " or ".join(d.isoformat() for d in readings)
        super().__init__(f"{text!r} is ambiguous without a locale hint: {pretty}")
        self.readings = readings


class InvalidDate(DateError):
    """The fields are recognized but name no real calendar date."""


class UnparseableText(DateError):
    """The text matches no supported date/time form."""


class BuddhistYearWarning(UserWarning):
    """A Gregorian-labeled year large enough to suggest a Buddhist-era year."""


@dataclass(frozen=True)
class LocaleHint:
    """Per-source parsing conventions. Every field must be stated explicitly.

    ``pattern`` optionally supplies a strptime pattern for formats the
    convention fields cannot describe (e.g. two-digit years, which are
    otherwise rejected).
    """

    date_order: str
    clock: str
    calendar: str
    pattern: str | None = None

    def __post_init__(self):
        if self.date_order not in DATE_ORDERS:
            raise ValueError(f"date_order must be one of {DATE_ORDERS}, got {self.date_order!r}")
        if self.clock not in CLOCKS:
            raise ValueError(f"clock must be one of {CLOCKS}, got {self.clock!r}")
        if self.calendar not in CALENDARS:
            raise ValueError(f"calendar must be one of {CALENDARS}, got {self.calendar!r}")


@dataclass(frozen=True)
class CanonicalTimestamp:
    """An unambiguous proleptic-Gregorian instant at a recorded precision.

    ``zone`` is ``"Z"``, a fixed ``+HH:MM``/``-HH:MM`` offset, or None for
    explicitly-unknown (the common case for day-resolution surveillance
    data). ``calendar_provenance`` records which calendar the source used;
    it never affects equality because the stored instant is already
    Gregorian.
    """

    instant: datetime.datetime
    precision: str = "day"
    zone: str | None = None
    calendar_provenance: str = field(default=GREGORIAN, compare=False)

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}, got {self.precision!r}")
        if self.zone is not None and not re.fullmatch(r"Z|[+-]\d{2}:\d{2}", self.zone):
            raise ValueError(f"zone must be 'Z' or a +HH:MM offset, got {self.zone!r}")
        if self.instant.microsecond:
            raise ValueError("sub-second components are not supported")
        finer = {
            "day": self.instant.hour or self.instant.minute or self.instant.second,
            "hour": self.instant.minute or self.instant.second,
            "minute": self.instant.second,
            "second": 0,
        }[self.precision]
        if finer:
            raise ValueError(f"instant {self.instant} has components finer than {self.precision}")
        if self.precision == "day" and self.zone is not None:
            raise ValueError("a day-precision date cannot carry a zone")

    @classmethod
    def from_date(cls, day: datetime.date) -> CanonicalTimestamp:
        return cls(datetime.datetime(day.year, day.month, day.day))

    @property
    def calendar_date(self) -> datetime.date:
        return self.instant.date()

    def add(self, delta: datetime.timedelta) -> CanonicalTimestamp:
        """Shift by a duration, refining precision if the result needs it."""
        instant = self.instant + delta
        needed = "day"
        if instant.second:
            needed = "second"
        elif instant.minute:
            needed = "minute"
        elif instant.hour:
            needed = "hour"
        precision = self.precision
        if PRECISIONS.index(needed) > PRECISIONS.index(precision):
            precision = needed
        return CanonicalTimestamp(instant, precision, self.zone, self.calendar_provenance)

    def with_zone(self, zone: str | None) -> CanonicalTimestamp:
        return CanonicalTimestamp(self.instant, self.precision, zone, self.calendar_provenance)

    # Ordering compares wall-clock instants; callers keep zones consistent
    # within a series.
    def __lt__(self, other: CanonicalTimestamp) -> bool:
        return self.instant < other.instant

    def __le__(self, other: CanonicalTimestamp) -> bool:
        return self.instant <= other.instant

    def __gt__(self, other: CanonicalTimestamp) -> bool:
        return self.instant > other.instant

    def __ge__(self, other: CanonicalTimestamp) -> bool:
        return self.instant >= other.instant


_ISO_RE = re.compile(
    r"(\d{4})-(\d{2})-(\d{2})"
    r"(?:[T ](\d{2})(?::(\d{2})(?::(\d{2}))?)?(Z|[+-]\d{2}(?::?\d{2})?)?)?"
)

_NUMERIC_RE = re.compile(r"(\d{1,4})([-/.])(\d{1,2})\2(\d{1,4})")

_TIME_RE = re.compile(r"(\d{1,2}):(\d{2})(?::(\d{2}))?(?:\s?([APap][Mm]))?")


def parse_date(text: str, hint: LocaleHint | None = None) -> CanonicalTimestamp:
    """Parse a date or timestamp string.

    Raises AmbiguousDate when the text has two valid day/month readings and
    no hint was given, InvalidDate for impossible calendar fields, and
    UnparseableText for everything unrecognized.
    """
    text = text.strip()
    if not text:
        raise UnparseableText("empty date string")

    if hint is not None and hint.pattern is not None:
        return _parse_with_pattern(text, hint)

    m = _ISO_RE.fullmatch(text)
    if m:
        return _build_iso(text, m, hint)

    m = _NUMERIC_RE.fullmatch(text)
    if m:
        return _build_numeric_date(text, m, hint)

    if hint is not None:
        m = re.fullmatch(r"(\S+)[T ]\s*(.+)", text)
        if m:
            day_part, time_part = m.group(1), m.group(2)
            dm = _NUMERIC_RE.fullmatch(day_part)
            tm = _TIME_RE.fullmatch(time_part)
            if dm and tm:
                day_ts = _build_numeric_date(day_part, dm, hint)
                return _attach_time(day_ts, tm, hint)

    raise UnparseableText(f"unrecognized date/time text {text!r}")


def format_iso8601(ts: CanonicalTimestamp) -> str:
    """Render at the stored precision; the zone suffix appears only when known."""
    d = ts.instant
    out = f"{d.year:04d}-{d.month:02d}-{d.day:02d}"
    if ts.precision == "day":
        return out
    out += f"T{d.hour:02d}"
    if ts.precision in ("minute", "second"):
        out += f":{d.minute:02d}"
    if ts.precision == "second":
        out += f":{d.second:02d}"
    if ts.zone is not None:
        out += ts.zone
    return out


_DURATION_RE = re.compile(r"P(?:(\d+)W)?(?:(\d+)D)?(?:T(?:(\d+)H)?(?:(\d+)M)?(?:(\d+)S)?)?")


def parse_iso_duration(text: str) -> datetime.timedelta:
    """Read an ISO 8601 duration such as P7D, P1W or PT12H."""
    m = _DURATION_RE.fullmatch(text.strip())
    if not m or not any(m.groups()):
        raise UnparseableText(f"not an ISO 8601 duration: {text!r}")
    weeks, days, hours, minutes, seconds = (int(g) if g else 0 for g in m.groups())
    return datetime.timedelta(
        weeks=weeks, days=days, hours=hours, minutes=minutes, seconds=seconds
    )


def zone_string_for(zone: str, instant: datetime.datetime) -> str:
    """Resolve a manifest zone declaration to a canonical zone string.

    Accepts 'Z'/'UTC', fixed offsets, or IANA names (resolved to the fixed
    offset in effect at ``instant``).
    """
    label = zone.strip()
    if label.upper() in ("Z", "UTC"):
        return "Z"
    if re.fullmatch(r"[+-]\d{2}:?\d{2}", label):
        return _normalize_zone(label)
    try:
        from zoneinfo import ZoneInfo

        offset = ZoneInfo(label).utcoffset(instant)
    except Exception as exc:
        raise UnparseableText(f"unknown time zone {label!r}") from exc
    assert offset is not None
    return _offset_string(offset)


def _offset_string(offset: datetime.timedelta) -> str:
    total = round(offset.total_seconds() / 60)
    if total == 0:
        return "Z"
    sign = "+" if total > 0 else "-"
    total = abs(total)
    return f"{sign}{total // 60:02d}:{total % 60:02d}"


def _normalize_zone(raw: str) -> str:
    if raw == "Z":
        return "Z"
    sign, digits = raw[0], raw[1:].replace(":", "")
    if len(digits) == 2:
        digits += "00"
    hours, minutes = int(digits[:2]), int(digits[2:])
    if hours == minutes == 0:
        return "Z"
    return f"{sign}{hours:02d}:{minutes:02d}"


def _build_iso(text: str, m: re.Match, hint: LocaleHint | None) -> CanonicalTimestamp:
    year, month, day = int(m.group(1)), int(m.group(2)), int(m.group(3))
    hour, minute, second = m.group(4), m.group(5), m.group(6)
    calendar = hint.calendar if hint is not None else GREGORIAN
    year = _to_gregorian_year(year, calendar)

    precision = "day"
    h = mi = s = 0
    if hour is not None:
        h, precision = int(hour), "hour"
    if minute is not None:
        mi, precision = int(minute), "minute"
    if second is not None:
        s, precision = int(second), "second"

    zone = None
    if m.group(7) is not None:
        zone = _normalize_zone(m.group(7))
    if precision == "day" and zone is not None:
        raise UnparseableText(f"a bare date cannot carry a zone: {text!r}")

    instant = _make_datetime(text, year, month, day, h, mi, s)
    ts = CanonicalTimestamp(instant, precision, zone, calendar)
    _warn_if_buddhist_suspect(ts)
    return ts


def _build_numeric_date(text: str, m: re.Match, hint: LocaleHint | None) -> CanonicalTimestamp:
    f1, f3 = m.group(1), m.group(4)
    fields = (f1, m.group(3), f3)

    # A four-digit leading field is year-first regardless of any hint; no
    # locale convention puts a year-width value anywhere else up front.
    if len(f1) == 4:
        order = "YMD"
    elif hint is not None:
        order = hint.date_order
    else:
        return _disambiguate(text, fields)

    calendar = hint.calendar if hint is not None else GREGORIAN
    year_field, month_field, day_field = {
        "YMD": (fields[0], fields[1], fields[2]),
        "MDY": (fields[2], fields[0], fields[1]),
        "DMY": (fields[2], fields[1], fields[0]),
    }[order]
    if len(year_field) != 4:
        raise UnparseableText(
            f"two-digit year in {text!r}; declare an explicit pattern for such sources"
        )
    year = _to_gregorian_year(int(year_field), calendar)
    instant = _make_datetime(text, year, int(month_field), int(day_field))
    ts = CanonicalTimestamp(instant, "day", None, calendar)
    _warn_if_buddhist_suspect(ts)
    return ts


def _disambiguate(text: str, fields: tuple[str, str, str]) -> CanonicalTimestamp:
    if len(fields[2]) != 4:
        raise UnparseableText(
            f"two-digit year in {text!r}; declare an explicit pattern for such sources"
        )
    year = int(fields[2])
    readings = []
    for month_field, day_field in ((fields[0], fields[1]), (fields[1], fields[0])):
        try:
            readings.append(datetime.date(year, int(month_field), int(day_field)))
        except ValueError:
            pass
    unique = sorted(set(readings))
    if not unique:
        raise InvalidDate(f"no valid day/month reading of {text!r}")
    if len(unique) > 1:
        raise AmbiguousDate(text, unique)
    only = unique[0]
    ts = CanonicalTimestamp.from_date(only)
    _warn_if_buddhist_suspect(ts)
    return ts


def _attach_time(day_ts: CanonicalTimestamp, tm: re.Match, hint: LocaleHint) -> CanonicalTimestamp:
    hour, minute = int(tm.group(1)), int(tm.group(2))
    second = int(tm.group(3)) if tm.group(3) else 0
    meridiem = tm.group(4)
    if hint.clock == "h12":
        if meridiem is None:
            raise UnparseableText("12-hour clock requires an AM/PM marker")
        if not 1 <= hour <= 12:
            raise InvalidDate(f"hour {hour} out of range on a 12-hour clock")
        hour = hour % 12
        if meridiem.lower() == "pm":
            hour += 12
    elif meridiem is not None:
        raise UnparseableText("AM/PM marker on a source declared as 24-hour")
    precision = "second" if tm.group(3) else "minute"
    base = day_ts.instant
    try:
        instant = base.replace(hour=hour, minute=minute, second=second)
    except ValueError as exc:
        raise InvalidDate(str(exc)) from exc
    return CanonicalTimestamp(instant, precision, None, day_ts.calendar_provenance)


def _parse_with_pattern(text: str, hint: LocaleHint) -> CanonicalTimestamp:
    try:
        parsed = datetime.datetime.strptime(text, hint.pattern)
    except ValueError as exc:
        raise UnparseableText(f"{text!r} does not match pattern {hint.pattern!r}") from exc

    precision = "day"
    if re.search(r"%[HI]", hint.pattern):
        precision = "hour"
    if "%M" in hint.pattern:
        precision = "minute"
    if "%S" in hint.pattern:
        precision = "second"

    zone = None
    if parsed.tzinfo is not None:
        offset = parsed.utcoffset()
        zone = _offset_string(offset) if offset is not None else None
        parsed = parsed.replace(tzinfo=None)

    year = _to_gregorian_year(parsed.year, hint.calendar)
    instant = _make_datetime(text, year, parsed.month, parsed.day,
                             parsed.hour, parsed.minute, parsed.second)
    ts = CanonicalTimestamp(instant, precision, zone, hint.calendar)
    _warn_if_buddhist_suspect(ts)
    return ts


def _to_gregorian_year(year: int, calendar: str) -> int:
    if calendar == BUDDHIST:
        return year - BUDDHIST_YEAR_OFFSET
    return year


def _make_datetime(text, year, month, day, hour=0, minute=0, second=0) -> datetime.datetime:
    try:
        return datetime.datetime(year, month, day, hour, minute, second)
    except ValueError as exc:
        raise InvalidDate(f"{text!r}: {exc}") from exc


def _warn_if_buddhist_suspect(ts: CanonicalTimestamp):
    if ts.calendar_provenance == GREGORIAN and ts.instant.year > BUDDHIST_SUSPECT_YEAR:
        warnings.warn(
            f"year {ts.instant.year} is later than {BUDDHIST_SUSPECT_YEAR}; "
            "the source may be using Buddhist-era years without declaring it",
            BuddhistYearWarning,
            stacklevel=3,
        )
