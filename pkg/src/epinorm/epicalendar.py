"""Epidemiological week calendars.

MMWR weeks run Sunday through Saturday; week 1 of a year is the first week
containing at least four January days (equivalently, the week ending on the
first Saturday that falls on or after January 4). Monday-start weeks, as
used in Japan, follow the same four-day rule with Monday folding. Poland's
monthly scheme cuts every month into four reports regardless of its length.
"""

from __future__ import annotations

import calendar
import datetime
import re
from dataclasses import dataclass

from .errors import EpinormError
from .intervals import Interval
from .temporal import CanonicalTimestamp

MMWR = "mmwr"
MONDAY_START = "monday_start"
WEEK_SYSTEMS = (MMWR, MONDAY_START)

_WEEK = datetime.timedelta(days=7)


class NoSuchWeek(EpinormError):
    """The numbered week does not exist in that year's calendar."""


@dataclass(frozen=True)
class EpiWeek:
    system: str
    year: int
    week: int

    def label(self) -> str:
        return f"{self.year}, week {self.week}"


@dataclass(frozen=True)
class MonthlyReportScheme:
    """Interior day-of-month cuts for a four-reports-per-month calendar.

    ``cuts`` lists the last day of the first three segments; the fourth
    always ends at month end. Cuts must fit February, so the last one may
    not exceed 27.
    """

    cuts: tuple[int, int, int] = (7, 15, 22)

    def __post_init__(self):
        if len(self.cuts) != 3:
            raise ValueError("exactly three interior cuts define four segments")
        if list(self.cuts) != sorted(set(self.cuts)):
            raise ValueError(f"cuts must strictly increase, got {self.cuts}")
        if self.cuts[0] < 1 or self.cuts[-1] > 27:
            raise ValueError(f"cuts must lie within 1..27, got {self.cuts}")


DEFAULT_MONTHLY_SCHEME = MonthlyReportScheme()


@dataclass(frozen=True)
class ReportSpan:
    """A closed run of days: both ``first`` and ``last`` are included."""

    first: datetime.date
    last: datetime.date

    @property
    def days(self) -> int:
        return (self.last - self.first).days + 1

    def to_interval(self) -> Interval:
        """The equivalent half-open interval, ending the day after ``last``."""
        return Interval(
            CanonicalTimestamp.from_date(self.first),
            CanonicalTimestamp.from_date(self.last + datetime.timedelta(days=1)),
        )


def _as_date(value: CanonicalTimestamp | datetime.date) -> datetime.date:
    if isinstance(value, CanonicalTimestamp):
        if value.precision != "day":
            raise ValueError(f"epi week of a {value.precision}-precision timestamp is undefined")
        return value.calendar_date
    return value


def _week_start(day: datetime.date, system: str) -> datetime.date:
    # date.weekday(): Monday = 0 .. Sunday = 6.
    if system == MMWR:
        back = (day.weekday() + 1) % 7
    elif system == MONDAY_START:
        back = day.weekday()
    else:
        raise ValueError(f"unknown week system {system!r}")
    return day - datetime.timedelta(days=back)


def _week1_start(year: int, system: str) -> datetime.date:
    # Week 1 contains at least four January days, i.e. it contains Jan 4.
    return _week_start(datetime.date(year, 1, 4), system)


def week_of(date: CanonicalTimestamp | datetime.date, system: str = MMWR) -> EpiWeek:
    """Number the epi week containing a day-precision date."""
    day = _as_date(date)
    start = _week_start(day, system)
    # The week's middle day decides which year owns it (the four-day rule).
    year = (start + datetime.timedelta(days=3)).year
    week = (start - _week1_start(year, system)).days // 7 + 1
    return EpiWeek(system, year, week)


def week_interval(week: EpiWeek) -> Interval:
    """The 7-day half-open interval a numbered week denotes."""
    if week.week < 1 or week.week > 53:
        raise NoSuchWeek(f"week {week.week} is outside 1..53")
    start = _week1_start(week.year, week.system) + (week.week - 1) * _WEEK
    if week_of(start, week.system) != week:
        raise NoSuchWeek(f"{week.year} has no week {week.week} in the {week.system} calendar")
    return Interval(
        CanonicalTimestamp.from_date(start),
        CanonicalTimestamp.from_date(start + _WEEK),
    )


def month_report_intervals(
    year: int,
    month: int,
    scheme: MonthlyReportScheme = DEFAULT_MONTHLY_SCHEME,
) -> list[ReportSpan]:
    """Partition a month into its four closed reporting spans."""
    month_end = calendar.monthrange(year, month)[1]
    firsts = [1, scheme.cuts[0] + 1, scheme.cuts[1] + 1, scheme.cuts[2] + 1]
    lasts = [scheme.cuts[0], scheme.cuts[1], scheme.cuts[2], month_end]
    return [
        ReportSpan(datetime.date(year, month, f), datetime.date(year, month, l))
        for f, l in zip(firsts, lasts)
    ]


def report_span_for(
    day: CanonicalTimestamp | datetime.date,
    scheme: MonthlyReportScheme = DEFAULT_MONTHLY_SCHEME,
) -> ReportSpan:
    """The monthly reporting span containing the given date."""
    d = _as_date(day)
    for span in month_report_intervals(d.year, d.month, scheme):
        if span.first <= d <= span.last:
            return span
    raise AssertionError("spans partition the month; unreachable")


_WEEK_LABEL_RE = re.compile(r"(\d{4})\s*,\s*week\s*(\d{1,2})", re.IGNORECASE)
_WEEK_COMPACT_RE = re.compile(r"(\d{4})-W(\d{2})", re.IGNORECASE)


def parse_week_label(text: str, system: str) -> EpiWeek:
    """Read a '2016, week 20' or '2016-W20' style label."""
    m = _WEEK_LABEL_RE.fullmatch(text.strip()) or _WEEK_COMPACT_RE.fullmatch(text.strip())
    if not m:
        raise NoSuchWeek(f"unrecognized week label {text!r}")
    return EpiWeek(system, int(m.group(1)), int(m.group(2)))
