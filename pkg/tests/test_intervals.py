import datetime
import random

import pytest

from epinorm.intervals import (
    DEFAULT_GRANULE,
    Interval,
    IntervalType,
    MissingPeriod,
    NonMonotonicTimestamps,
    OverlappingIntervals,
    TimestampedPoint,
    ZeroGranule,
    from_interval_series,
    to_interval_series,
)
from epinorm.series import UNKNOWN
from epinorm.temporal import format_iso8601, parse_date

from support import random_point_series

WEEK = datetime.timedelta(days=7)
DAY = datetime.timedelta(days=1)


def rendered(series):
    return [(format_iso8601(i.start), format_iso8601(i.end), v) for i, v in series]


class TestWeeklySampleSeries:
    """The three-point weekly series must transform to all three layouts."""

    def test_leading(self, weekly_points):
        assert rendered(to_interval_series(weekly_points, IntervalType.LEADING, WEEK)) == [
            ("2014-08-07T00:00", "2014-08-14T00:00", 2),
            ("2014-08-14T00:00", "2014-08-21T00:00", 5),
            ("2014-08-21T00:00", "2014-08-28T00:00", 4),
        ]

    def test_trailing_exclusive(self, weekly_points):
        out = to_interval_series(weekly_points, IntervalType.TRAILING_EXCLUSIVE, WEEK)
        assert rendered(out) == [
            ("2014-07-31T00:00", "2014-08-07T00:00", 2),
            ("2014-08-07T00:00", "2014-08-14T00:00", 5),
            ("2014-08-14T00:00", "2014-08-21T00:00", 4),
        ]

    def test_trailing_inclusive(self, weekly_points):
        out = to_interval_series(weekly_points, IntervalType.TRAILING_INCLUSIVE, WEEK, DAY)
        assert rendered(out) == [
            ("2014-08-01T00:00", "2014-08-08T00:00", 2),
            ("2014-08-08T00:00", "2014-08-15T00:00", 5),
            ("2014-08-15T00:00", "2014-08-22T00:00", 4),
        ]

    def test_shift_law(self, weekly_points):
        exclusive = to_interval_series(weekly_points, IntervalType.TRAILING_EXCLUSIVE, WEEK)
        inclusive = to_interval_series(weekly_points, IntervalType.TRAILING_INCLUSIVE, WEEK, DAY)
        for (ex, _), (inc, _) in zip(exclusive, inclusive):
            assert inc.start.instant - ex.start.instant == DAY
            assert inc.end.instant - ex.end.instant == DAY

    def test_inversion_recovers_timestamps(self, weekly_points):
        for itype in IntervalType:
            out = to_interval_series(weekly_points, itype, WEEK)
            assert from_interval_series(out, itype) == weekly_points

    def test_period_inferred_when_regular(self, weekly_points):
        explicit = to_interval_series(weekly_points, IntervalType.LEADING, WEEK)
        assert to_interval_series(weekly_points, IntervalType.LEADING) == explicit


class TestEdgeCases:
    def test_singleton_with_explicit_period(self):
        point = TimestampedPoint(parse_date("2020-01-01"), 3)
        out = to_interval_series([point], IntervalType.LEADING, DAY)
        assert rendered(out) == [("2020-01-01", "2020-01-02", 3)]

    def test_singleton_without_period(self):
        point = TimestampedPoint(parse_date("2020-01-01"), 3)
        with pytest.raises(MissingPeriod):
            to_interval_series([point], IntervalType.LEADING)

    def test_irregular_without_period(self):
        points = [
            TimestampedPoint(parse_date("2020-01-01"), 1),
            TimestampedPoint(parse_date("2020-01-03"), 2),
            TimestampedPoint(parse_date("2020-01-10"), 3),
        ]
        with pytest.raises(MissingPeriod):
            to_interval_series(points, IntervalType.TRAILING_EXCLUSIVE)

    def test_non_monotonic(self):
        points = [
            TimestampedPoint(parse_date("2020-01-05"), 1),
            TimestampedPoint(parse_date("2020-01-05"), 2),
        ]
        with pytest.raises(NonMonotonicTimestamps):
            to_interval_series(points, IntervalType.LEADING, DAY)

    def test_zero_granule(self):
        point = TimestampedPoint(parse_date("2020-01-01"), 3)
        with pytest.raises(ZeroGranule):
            to_interval_series([point], IntervalType.LEADING, DAY, datetime.timedelta(0))

    def test_empty_series(self):
        assert to_interval_series([], IntervalType.LEADING, DAY) == []
        assert from_interval_series([], IntervalType.LEADING) == []

    def test_overlapping_intervals_rejected(self):
        series = [
            (Interval(parse_date("2020-01-01"), parse_date("2020-01-08")), 1),
            (Interval(parse_date("2020-01-04"), parse_date("2020-01-11")), 2),
        ]
        with pytest.raises(OverlappingIntervals):
            from_interval_series(series, IntervalType.LEADING)

    def test_interval_requires_positive_length(self):
        with pytest.raises(ValueError):
            Interval(parse_date("2020-01-02"), parse_date("2020-01-02"))

    def test_negative_count_rejected(self):
        with pytest.raises(ValueError):
            TimestampedPoint(parse_date("2020-01-01"), -1)

    def test_unknown_values_carried_through(self):
        points = [
            TimestampedPoint(parse_date("2020-01-01"), UNKNOWN),
            TimestampedPoint(parse_date("2020-01-08"), 4),
        ]
        out = to_interval_series(points, IntervalType.LEADING)
        assert out[0][1] is UNKNOWN
        assert from_interval_series(out, IntervalType.LEADING) == points


def test_round_trip_randomized_series():
    rng = random.Random(20140807)
    for _ in range(250):
        points, period = random_point_series(rng)
        for itype in IntervalType:
            series = to_interval_series(points, itype, period)
            assert from_interval_series(series, itype) == points


def test_regular_series_coverage():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(2, 10)
        period = rng.randint(1, 30) * DAY
        start = parse_date("2001-01-01").add(rng.randint(0, 5000) * DAY)
        points = [TimestampedPoint(start.add(i * period), i) for i in range(n)]
        for itype in IntervalType:
            series = to_interval_series(points, itype, period)
            for interval, _ in series:
                assert interval.duration == period
            for (a, _), (b, _) in zip(series, series[1:]):
                assert a.end == b.start
