"""Shared fixture generators and independent oracles for the test suite.

The oracles here deliberately avoid the library's own algorithms: epi weeks
come from a literal day-walk over calendar days, incidence from exact
rational arithmetic, and randomized structures from seeded generators so
every run sees identical data.
"""

from __future__ import annotations

import datetime
import random
from collections import Counter

from epinorm.containers import CanonicalDocument, DocumentMetadata
from epinorm.epicalendar import MMWR
from epinorm.intervals import Interval, IntervalType, TimestampedPoint
from epinorm.series import UNKNOWN, Observation
from epinorm.temporal import CanonicalTimestamp

DAY = datetime.timedelta(days=1)

LOCATION_POOL = ("US", "DE", "JP", "ZA", "PL", "CH-ZH", "US-TX")
DEMOGRAPHIC_POOL = ("all", "age 0-4", "age 65+")
CASE_TYPE_POOL = (
    "confirmed",
    "suspected",
    "hospitalizations",
    "deaths",
    "combined:confirmed+suspected",
)


def oracle_week_map(system: str = MMWR, first_year: int = 1990, last_year: int = 2030):
    """Map every date in [first_year, last_year] to (year, week) by brute force.

    Walks literal week starts day by day and assigns each 7-day week to the
    year owning the majority of its days (the at-least-four-January-days
    rule), then numbers the weeks of each year in order.
    """
    start_weekday = 6 if system == MMWR else 0  # date.weekday(): Sunday is 6
    day = datetime.date(first_year - 1, 1, 1)
    while day.weekday() != start_weekday:
        day += DAY

    week_starts = []
    while day <= datetime.date(last_year + 1, 12, 31):
        week_starts.append(day)
        day += 7 * DAY

    by_year: dict[int, list[datetime.date]] = {}
    for start in week_starts:
        days = [start + i * DAY for i in range(7)]
        year = Counter(d.year for d in days).most_common(1)[0][0]
        by_year.setdefault(year, []).append(start)

    mapping: dict[datetime.date, tuple[int, int]] = {}
    for year, starts in by_year.items():
        for number, start in enumerate(sorted(starts), start=1):
            for i in range(7):
                mapping[start + i * DAY] = (year, number)
    return mapping


def random_point_series(rng: random.Random) -> tuple[list[TimestampedPoint], datetime.timedelta]:
    """A strictly increasing series plus an explicit period of 1..30 days."""
    n = rng.randint(1, 12)
    base = datetime.date(1990, 1, 1) + rng.randint(0, 365 * 40) * DAY
    minute_precision = rng.random() < 0.5

    if rng.random() < 0.5:
        gaps = [rng.randint(1, 30) * DAY] * (n - 1)
    else:
        gaps = [rng.randint(1, 30) * DAY for _ in range(n - 1)]

    day = base
    points = []
    for i in range(n):
        if minute_precision:
            ts = CanonicalTimestamp(
                datetime.datetime(day.year, day.month, day.day), "minute"
            )
        else:
            ts = CanonicalTimestamp.from_date(day)
        value = UNKNOWN if rng.random() < 0.1 else rng.randint(0, 50)
        points.append(TimestampedPoint(ts, value))
        if i < n - 1:
            day += gaps[i]
    return points, rng.randint(1, 30) * DAY


def random_document(rng: random.Random) -> CanonicalDocument:
    """A valid CanonicalDocument with varied contexts, precisions and zones."""
    metadata = DocumentMetadata(
        interval_type=rng.choice([t.value for t in IntervalType]),
        case_definition=f"test definition {rng.randint(1, 99)}",
        calendar=rng.choice(["gregorian", "buddhist"]),
        zone=rng.choice([None, "Z", "+02:00"]),
        source=rng.choice([None, "unit-test"]),
    )

    observations = []
    contexts = rng.sample(
        [(loc, demo, ct) for loc in LOCATION_POOL
         for demo in DEMOGRAPHIC_POOL for ct in CASE_TYPE_POOL],
        k=rng.randint(1, 4),
    )
    for location, demographic, case_type in contexts:
        style = rng.choice(["day", "minute", "minute-z", "minute-offset"])
        day = datetime.date(2000, 1, 1) + rng.randint(0, 365 * 20) * DAY
        for _ in range(rng.randint(1, 6)):
            length = rng.randint(1, 30)
            start = _styled_timestamp(day, style)
            end = _styled_timestamp(day + length * DAY, style)
            value = UNKNOWN if rng.random() < 0.15 else rng.randint(0, 100)
            observations.append(
                Observation(
                    interval=Interval(start, end),
                    location=location,
                    case_type=case_type,
                    value=value,
                    demographic=demographic,
                )
            )
            day += (length + rng.randint(0, 5)) * DAY
    return CanonicalDocument(metadata, observations)


def _styled_timestamp(day: datetime.date, style: str) -> CanonicalTimestamp:
    moment = datetime.datetime(day.year, day.month, day.day)
    if style == "day":
        return CanonicalTimestamp(moment)
    zone = {"minute": None, "minute-z": "Z", "minute-offset": "+05:30"}[style]
    return CanonicalTimestamp(moment, "minute", zone)
