"""Location-name normalization against a versioned ISO 3166 gazetteer.

Names are case- and diacritic-folded before lookup, so Zurich and Zürich
land on the same entry. Entries carry optional validity windows so that
boundary changes (Sudan before and after the 2011 split) resolve to the
version in force on a given date.
"""

from __future__ import annotations

import datetime
import json
import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .errors import EpinormError

PER_CAPITA_BASE = 100_000

# ISO 3166-1 alpha-2 or 3166-2 shaped codes; anything else is a local
# extension entry for finer-than-subdivision places.
_ISO_CODE_RE = re.compile(r"[A-Z]{2}(-[A-Z0-9]{1,3})?")

# Accented Latin letters to their base letters. Input is casefolded first,
# so only lowercase forms appear here.
_DIACRITIC_FOLDS = {
    "à": "a", "á": "a", "â": "a", "ã": "a", "ä": "a", "å": "a",
    "ā": "a", "ă": "a", "ą": "a",
    "ç": "c", "ć": "c", "č": "c", "ĉ": "c",
    "ď": "d", "đ": "d", "ð": "d",
    "è": "e", "é": "e", "ê": "e", "ë": "e", "ē": "e", "ė": "e",
    "ę": "e", "ě": "e",
    "ĝ": "g", "ğ": "g", "ģ": "g",
    "ì": "i", "í": "i", "î": "i", "ï": "i", "ī": "i", "į": "i", "ı": "i",
    "ķ": "k",
    "ĺ": "l", "ľ": "l", "ł": "l", "ļ": "l",
    "ñ": "n", "ń": "n", "ň": "n", "ņ": "n",
    "ò": "o", "ó": "o", "ô": "o", "õ": "o", "ö": "o", "ø": "o",
    "ō": "o", "ő": "o",
    "ŕ": "r", "ř": "r",
    "ś": "s", "š": "s", "ş": "s", "ș": "s",
    "ť": "t", "ț": "t", "þ": "th",
    "ù": "u", "ú": "u", "û": "u", "ü": "u", "ū": "u", "ů": "u",
    "ű": "u", "ų": "u",
    "ý": "y", "ÿ": "y",
    "ź": "z", "ż": "z", "ž": "z",
    "æ": "ae", "œ": "oe", "ß": "ss",
}
_FOLD_TABLE = {ord(k): v for k, v in _DIACRITIC_FOLDS.items()}


class GeoError(EpinormError):
    pass


class UnknownLocation(GeoError):
    def __init__(self, name: str):
        super().__init__(f"unknown location {name!r}")
        self.name = name


class AmbiguousLocation(GeoError):
    def __init__(self, name: str, codes: list[str]):
        super().__init__(f"{name!r} matches multiple places: {', '.join(codes)}")
        self.name = name
        self.codes = codes


class NoVersionForDate(GeoError):
    def __init__(self, name: str, as_of: datetime.date):
        super().__init__(f"{name!r} is known but has no boundary version covering {as_of}")
        self.name = name
        self.as_of = as_of


class ZeroPopulation(GeoError):
    pass


class GazetteerInvalid(GeoError):
    pass


def fold_name(name: str) -> str:
    """Lookup key for a place name: casefolded, diacritic-stripped, tidy spaces."""
    collapsed = " ".join(name.split())
    return collapsed.casefold().translate(_FOLD_TABLE)


@dataclass(frozen=True)
class LocationRef:
    """One place (or one boundary version of a place) the gazetteer knows.

    Validity windows are half-open: ``valid_from`` inclusive, ``valid_to``
    exclusive; an open side means unbounded.
    """

    code: str
    canonical_name: str
    aliases: tuple[str, ...] = ()
    valid_from: datetime.date | None = None
    valid_to: datetime.date | None = None
    population: int | None = None
    population_date: datetime.date | None = None

    def __post_init__(self):
        if self.valid_from is not None and self.valid_to is not None:
            if not self.valid_from < self.valid_to:
                raise GazetteerInvalid(
                    f"{self.code}: valid_from {self.valid_from} must precede valid_to {self.valid_to}"
                )
        keys = [fold_name(self.canonical_name)]
        for alias in self.aliases:
            key = fold_name(alias)
            if key in keys:
                raise GazetteerInvalid(
                    f"{self.code}: alias {alias!r} folds to the same key as another name"
                )
            keys.append(key)

    @property
    def is_iso_coded(self) -> bool:
        return _ISO_CODE_RE.fullmatch(self.code) is not None

    def covers(self, day: datetime.date) -> bool:
        if self.valid_from is not None and day < self.valid_from:
            return False
        if self.valid_to is not None and day >= self.valid_to:
            return False
        return True


class Gazetteer:
    """Immutable collection of LocationRef entries with a folded-name index."""

    def __init__(self, entries: list[LocationRef]):
        self.entries = tuple(entries)
        self._strong: dict[str, list[LocationRef]] = {}  # canonical names and codes
        self._weak: dict[str, list[LocationRef]] = {}  # aliases
        for entry in self.entries:
            self._strong.setdefault(fold_name(entry.canonical_name), []).append(entry)
            self._strong.setdefault(fold_name(entry.code), []).append(entry)
            for alias in entry.aliases:
                self._weak.setdefault(fold_name(alias), []).append(entry)
        self._check_version_windows()

    def _check_version_windows(self):
        by_code: dict[str, list[LocationRef]] = {}
        for entry in self.entries:
            by_code.setdefault(entry.code, []).append(entry)
        for code, versions in by_code.items():
            if len(versions) == 1:
                continue
            spans = sorted(
                versions, key=lambda e: e.valid_from or datetime.date.min
            )
            for a, b in zip(spans, spans[1:]):
                if a.valid_to is None or (b.valid_from is not None and a.valid_to > b.valid_from):
                    raise GazetteerInvalid(f"{code}: overlapping validity windows")

    def lookup(self, name: str) -> tuple[list[LocationRef], list[LocationRef]]:
        key = fold_name(name)
        return list(self._strong.get(key, [])), list(self._weak.get(key, []))


def resolve(name: str, gaz: Gazetteer, as_of: datetime.date | None = None) -> LocationRef:
    """Find the gazetteer entry a place name refers to.

    Canonical-name (and code) matches beat alias matches; with ``as_of``
    only versions whose validity window covers it are eligible, and without
    it the newest version of a place wins.
    """
    if not name or not name.strip():
        raise ValueError("location name must be non-empty")

    strong, weak = _raw_lookup(name, gaz)
    strong, weak = _filter(strong, as_of), _filter(weak, as_of)
    if not strong and not weak:
        # The name itself is known (else _raw_lookup raised), so the date
        # filter must have emptied the pool.
        raise NoVersionForDate(name, as_of)
    pool = strong or weak

    codes = sorted({entry.code for entry in pool})
    if len(codes) > 1:
        raise AmbiguousLocation(name, codes)

    versions = sorted(pool, key=lambda e: e.valid_from or datetime.date.min)
    return versions[-1]


def _raw_lookup(name: str, gaz: Gazetteer) -> tuple[list[LocationRef], list[LocationRef]]:
    strong, weak = gaz.lookup(name)
    if not strong and not weak:
        raise UnknownLocation(name)
    return strong, weak


def _filter(candidates: list[LocationRef], as_of: datetime.date | None) -> list[LocationRef]:
    if as_of is None:
        return candidates
    return [entry for entry in candidates if entry.covers(as_of)]


def incidence_rate(cases: int, population: int) -> float:
    """Attack rate per 100,000 people."""
    if population <= 0:
        raise ZeroPopulation(f"population must be positive, got {population}")
    if cases < 0:
        raise ValueError(f"case count must be >= 0, got {cases}")
    return cases * PER_CAPITA_BASE / population


_DATE_FIELDS = ("valid_from", "valid_to", "population_date")
_KNOWN_FIELDS = {"code", "name", "aliases", "population"} | set(_DATE_FIELDS)


def load_gazetteer(path: str | Path | None = None) -> Gazetteer:
    """Read a gazetteer JSON file (the bundled one when no path is given)."""
    if path is None:
        text = resources.files("epinorm.data").joinpath("gazetteer.json").read_text("utf-8")
        origin = "<bundled>"
    else:
        text = Path(path).read_text("utf-8")
        origin = str(path)
    try:
        records = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GazetteerInvalid(f"{origin}: not valid JSON: {exc}") from exc
    if not isinstance(records, list):
        raise GazetteerInvalid(f"{origin}: expected a JSON array of location records")

    entries = []
    for i, rec in enumerate(records):
        if not isinstance(rec, dict):
            raise GazetteerInvalid(f"{origin}: record {i} is not an object")
        unknown = set(rec) - _KNOWN_FIELDS
        if unknown:
            raise GazetteerInvalid(f"{origin}: record {i} has unknown fields {sorted(unknown)}")
        try:
            entries.append(
                LocationRef(
                    code=rec["code"],
                    canonical_name=rec["name"],
                    aliases=tuple(rec.get("aliases", ())),
                    valid_from=_read_date(rec, "valid_from", i, origin),
                    valid_to=_read_date(rec, "valid_to", i, origin),
                    population=rec.get("population"),
                    population_date=_read_date(rec, "population_date", i, origin),
                )
            )
        except KeyError as exc:
            raise GazetteerInvalid(f"{origin}: record {i} is missing {exc}") from exc
    return Gazetteer(entries)


def _read_date(rec: dict, fieldname: str, i: int, origin: str) -> datetime.date | None:
    raw = rec.get(fieldname)
    if raw is None:
        return None
    try:
        return datetime.date.fromisoformat(raw)
    except (TypeError, ValueError) as exc:
        raise GazetteerInvalid(f"{origin}: record {i} field {fieldname}: {exc}") from exc
