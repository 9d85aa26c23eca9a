"""Timestamped series to explicit interval series, and back.

A reported timestamp usually stands for an interval of time. Three
conventions are supported: leading (the timestamp starts its interval),
trailing exclusive (ends it, excluded) and trailing inclusive (ends it,
included). All intervals here are half-open: start inclusive, end
exclusive. There is no leading-exclusive variant.
"""

from __future__ import annotations

import datetime
from dataclasses import dataclass
from enum import Enum

from .errors import EpinormError
from .temporal import CanonicalTimestamp, format_iso8601

DEFAULT_GRANULE = datetime.timedelta(days=1)


class IntervalType(Enum):
    LEADING = "leading"
    TRAILING_EXCLUSIVE = "trailing_exclusive"
    TRAILING_INCLUSIVE = "trailing_inclusive"


class IntervalError(EpinormError):
    pass


class NonMonotonicTimestamps(IntervalError):
    pass


class MissingPeriod(IntervalError):
    pass


class ZeroGranule(IntervalError):
    pass


class OverlappingIntervals(IntervalError):
    pass


@dataclass(frozen=True)
class Interval:
    """Half-open span of time: ``start`` inclusive, ``end`` exclusive."""

    start: CanonicalTimestamp
    end: CanonicalTimestamp

    def __post_init__(self):
        if not self.start < self.end:
            raise ValueError(f"interval start {self.start} must precede end {self.end}")

    @property
    def duration(self) -> datetime.timedelta:
        return self.end.instant - self.start.instant

    def __str__(self) -> str:
        return f"[{format_iso8601(self.start)}, {format_iso8601(self.end)})"


@dataclass(frozen=True)
class TimestampedPoint:
    """One reported (timestamp, count) pair.

    Integer values must be non-negative counts; non-integer values (the
    series model's unknown marker) pass through interval transformations
    untouched.
    """

    timestamp: CanonicalTimestamp
    value: object

    def __post_init__(self):
        if isinstance(self.value, int) and not isinstance(self.value, bool):
            if self.value < 0:
                raise ValueError(f"case count must be >= 0, got {self.value}")


def to_interval_series(
    points: list[TimestampedPoint],
    itype: IntervalType,
    period: datetime.timedelta | None = None,
    granule: datetime.timedelta = DEFAULT_GRANULE,
) -> list[tuple[Interval, object]]:
    """Make every implied interval explicit.

    For leading series the final interval's length, and for trailing series
    the first interval's length, is not observable from the timestamps
    alone: it is taken from ``period``, or inferred from the common gap when
    the series is regular, and is otherwise a MissingPeriod error.
    """
    if granule <= datetime.timedelta(0):
        raise ZeroGranule(f"granule must be positive, got {granule}")
    points = list(points)
    if not points:
        return []
    for prev, cur in zip(points, points[1:]):
        if not prev.timestamp < cur.timestamp:
            raise NonMonotonicTimestamps(
                f"timestamps must strictly increase: {format_iso8601(prev.timestamp)} "
                f"then {format_iso8601(cur.timestamp)}"
            )

    gaps = [cur.timestamp.instant - prev.timestamp.instant
            for prev, cur in zip(points, points[1:])]
    regular = len(set(gaps)) == 1

    boundary = period
    if boundary is None:
        if regular:
            boundary = gaps[0]
        else:
            raise MissingPeriod(
                "period required: series is irregular or has a single point, so the "
                "boundary interval cannot be inferred"
            )

    out: list[tuple[Interval, object]] = []
    if itype is IntervalType.LEADING:
        for i, point in enumerate(points):
            end = points[i + 1].timestamp if i + 1 < len(points) else point.timestamp.add(boundary)
            out.append((Interval(point.timestamp, end), point.value))
        return out

    shift = granule if itype is IntervalType.TRAILING_INCLUSIVE else datetime.timedelta(0)
    for i, point in enumerate(points):
        start = points[i - 1].timestamp if i > 0 else point.timestamp.add(-boundary)
        out.append((Interval(start.add(shift), point.timestamp.add(shift)), point.value))
    return out


def from_interval_series(
    series: list[tuple[Interval, object]],
    itype: IntervalType,
    granule: datetime.timedelta = DEFAULT_GRANULE,
) -> list[TimestampedPoint]:
    """Invert to_interval_series for the same interval type and granule."""
    series = list(series)
    for (a, _), (b, _) in zip(series, series[1:]):
        if not a.start < b.start or a.end > b.start:
            raise OverlappingIntervals(f"intervals {a} and {b} must be increasing and disjoint")

    if itype is IntervalType.TRAILING_INCLUSIVE and granule <= datetime.timedelta(0):
        raise ZeroGranule(f"granule must be positive, got {granule}")

    points = []
    for interval, value in series:
        if itype is IntervalType.LEADING:
            ts = interval.start
        elif itype is IntervalType.TRAILING_EXCLUSIVE:
            ts = interval.end
        else:
            ts = interval.end.add(-granule)
        points.append(TimestampedPoint(ts, value))
    return points
