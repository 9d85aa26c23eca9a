"""Canonical case-count observations, series merging, and backfill tracking.

A count of zero means "no cases occurred"; UNKNOWN means "no value was
reported". The two are kept apart through every operation here: no merge
or snapshot query ever turns one into the other, and a missing interval is
simply absent, not UNKNOWN.
"""

from __future__ import annotations

import datetime
from bisect import bisect_right
from dataclasses import dataclass

from .errors import EpinormError
from .intervals import Interval, OverlappingIntervals

CASE_TYPES = ("confirmed", "suspected", "hospitalizations", "deaths")
COMBINED_PREFIX = "combined:"

MERGE_POLICIES = ("prefer_newer", "error_on_conflict")


class _UnknownValue:
    """Singleton marker for a count that was not reported."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNKNOWN"

    def __eq__(self, other):
        return isinstance(other, _UnknownValue)

    def __hash__(self):
        return hash(_UnknownValue)

    def __bool__(self):
        # An unreported value must not quietly act as falsy-zero in checks.
        raise TypeError("UNKNOWN has no truth value; test with `is UNKNOWN`")


UNKNOWN = _UnknownValue()


class SeriesError(EpinormError):
    pass


class ContextMismatch(SeriesError):
    pass


class ConflictingValues(SeriesError):
    def __init__(self, interval: Interval, a: object, b: object):
        super().__init__(f"conflicting values for {interval}: {a!r} vs {b!r}")
        self.interval = interval
        self.a = a
        self.b = b


class NoSnapshotYet(SeriesError):
    pass


def is_valid_value(value: object) -> bool:
    if value is UNKNOWN:
        return True
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def validate_case_type(case_type: str) -> None:
    if case_type in CASE_TYPES:
        return
    if case_type.startswith(COMBINED_PREFIX) and len(case_type) > len(COMBINED_PREFIX):
        return
    raise ValueError(
        f"case_type must be one of {CASE_TYPES} or 'combined:<spec>', got {case_type!r}"
    )


@dataclass(frozen=True)
class SeriesContext:
    """What a series is about: where, who, and which kind of count."""

    location: str
    demographic: str
    case_type: str


@dataclass(frozen=True)
class Observation:
    """One case-count datum over an explicit half-open interval."""

    interval: Interval
    location: str
    case_type: str
    value: object
    demographic: str = "all"

    def __post_init__(self):
        if not is_valid_value(self.value):
            raise ValueError(f"value must be UNKNOWN or an integer >= 0, got {self.value!r}")
        validate_case_type(self.case_type)

    @property
    def context(self) -> SeriesContext:
        return SeriesContext(self.location, self.demographic, self.case_type)


@dataclass(frozen=True)
class TimeSeries:
    """Interval-ordered observations sharing one context."""

    context: SeriesContext
    observations: tuple[Observation, ...]

    def __post_init__(self):
        for obs in self.observations:
            if obs.context != self.context:
                raise ContextMismatch(
                    f"observation context {obs.context} does not match series {self.context}"
                )
        for a, b in zip(self.observations, self.observations[1:]):
            if not a.interval.start < b.interval.start or a.interval.end > b.interval.start:
                raise OverlappingIntervals(
                    f"intervals {a.interval} and {b.interval} overlap or are out of order"
                )

    @classmethod
    def build(cls, context: SeriesContext, observations: list[Observation]) -> TimeSeries:
        """Sort observations by interval start and validate."""
        ordered = tuple(sorted(observations, key=lambda o: o.interval.start.instant))
        return cls(context, ordered)

    def value_map(self) -> dict[Interval, object]:
        return {obs.interval: obs.value for obs in self.observations}


def merge(a: TimeSeries, b: TimeSeries, policy: str = "error_on_conflict") -> TimeSeries:
    """Combine two series over the same context.

    Under ``prefer_newer`` the second series counts as the newer
    publication: its values win conflicts, except that an UNKNOWN never
    overwrites a known value. Identical duplicates always collapse.
    """
    if policy not in MERGE_POLICIES:
        raise ValueError(f"policy must be one of {MERGE_POLICIES}, got {policy!r}")
    if a.context != b.context:
        raise ContextMismatch(f"cannot merge {a.context} with {b.context}")

    merged: dict[Interval, Observation] = {obs.interval: obs for obs in a.observations}
    for obs in b.observations:
        current = merged.get(obs.interval)
        if current is None:
            merged[obs.interval] = obs
            continue
        if current.value == obs.value:
            continue
        if policy == "error_on_conflict":
            raise ConflictingValues(obs.interval, current.value, obs.value)
        if obs.value is UNKNOWN:
            continue
        merged[obs.interval] = obs
    return TimeSeries.build(a.context, list(merged.values()))


class RevisionedSeries:
    """Publication-dated snapshots of one series, supporting as-of queries.

    Backfill means previously published counts get revised later; each
    publication is kept whole, append-only, so any historical view can be
    reconstructed.
    """

    def __init__(self, context: SeriesContext):
        self.context = context
        self._dates: list[datetime.date] = []
        self._snapshots: dict[datetime.date, TimeSeries] = {}

    @property
    def publication_dates(self) -> tuple[datetime.date, ...]:
        return tuple(self._dates)

    def snapshot(self, publication_date: datetime.date) -> TimeSeries:
        return self._snapshots[publication_date]

    def record(self, publication_date: datetime.date, snapshot: TimeSeries) -> None:
        """Append one publication. Dates must strictly increase."""
        if snapshot.context != self.context:
            raise ContextMismatch(
                f"snapshot context {snapshot.context} does not match store {self.context}"
            )
        if self._dates and publication_date <= self._dates[-1]:
            raise ValueError(
                f"publication dates must strictly increase: {publication_date} "
                f"is not after {self._dates[-1]}"
            )
        self._dates.append(publication_date)
        self._snapshots[publication_date] = snapshot

    def as_of(self, publication_date: datetime.date) -> TimeSeries:
        """The latest snapshot published on or before the given date."""
        if not self._dates:
            raise NoSnapshotYet("the revision store is empty")
        idx = bisect_right(self._dates, publication_date)
        if idx == 0:
            raise NoSnapshotYet(
                f"nothing published on or before {publication_date}; "
                f"first publication is {self._dates[0]}"
            )
        return self._snapshots[self._dates[idx - 1]]


def revision_diff(
    rs: RevisionedSeries,
    p1: datetime.date,
    p2: datetime.date,
) -> list[tuple[Interval, object, object]]:
    """Every interval whose value changed, appeared, or disappeared.

    Old/new of ``None`` means the interval was absent on that side; UNKNOWN
    is a reported value, so UNKNOWN -> 3 is a change, not an appearance.
    """
    if not p1 < p2:
        raise ValueError(f"p1 must precede p2, got {p1} and {p2}")
    before = rs.as_of(p1).value_map()
    after = rs.as_of(p2).value_map()

    changed = []
    intervals = set(before) | set(after)
    for interval in sorted(intervals, key=lambda i: i.start.instant):
        old = before.get(interval)
        new = after.get(interval)
        if old is None and new is None:
            continue
        if old is not None and new is not None and old == new:
            continue
        changed.append((interval, old, new))
    return changed
