"""On-disk revision store: one canonical JSON snapshot per publication date.

Layout::

    store/
      index.json        {"context": {...}, "metadata": {...},
                         "publications": ["2014-08-15", ...]}
      2014-08-15.json   canonical JSON document for that publication
      2014-08-22.json

The index order is authoritative and must be strictly increasing.
"""

from __future__ import annotations

import datetime
import json
from pathlib import Path

from .containers import CanonicalDocument, DocumentMetadata, read_canonical, write_canonical
from .errors import EpinormError
from .series import RevisionedSeries, SeriesContext, TimeSeries

INDEX_FILE = "index.json"


class StoreInvalid(EpinormError):
    pass


def save_revision_store(
    rs: RevisionedSeries, metadata: DocumentMetadata, path: str | Path
) -> None:
    """Write every snapshot plus the index. Overwrites an existing store."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    publications = [d.isoformat() for d in rs.publication_dates]
    index = {
        "context": {
            "location": rs.context.location,
            "demographic": rs.context.demographic,
            "case_type": rs.context.case_type,
        },
        "metadata": metadata.to_dict(),
        "publications": publications,
    }
    for pub in rs.publication_dates:
        doc = CanonicalDocument(metadata, list(rs.snapshot(pub).observations))
        (root / f"{pub.isoformat()}.json").write_text(write_canonical(doc, "json"), "utf-8")
    (root / INDEX_FILE).write_text(
        json.dumps(index, sort_keys=True, indent=2, ensure_ascii=False) + "\n", "utf-8"
    )


def load_revision_store(path: str | Path) -> tuple[RevisionedSeries, DocumentMetadata]:
    root = Path(path)
    index_path = root / INDEX_FILE
    if not index_path.is_file():
        raise StoreInvalid(f"{root}: no {INDEX_FILE}; not a revision store")
    try:
        index = json.loads(index_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise StoreInvalid(f"{index_path}: {exc}") from exc
    for key in ("context", "metadata", "publications"):
        if key not in index:
            raise StoreInvalid(f"{index_path}: missing {key!r}")

    context = SeriesContext(**index["context"])
    metadata = DocumentMetadata.from_dict(index["metadata"])
    rs = RevisionedSeries(context)
    for label in index["publications"]:
        try:
            pub = datetime.date.fromisoformat(label)
        except ValueError as exc:
            raise StoreInvalid(f"{index_path}: bad publication date {label!r}") from exc
        snapshot_path = root / f"{label}.json"
        if not snapshot_path.is_file():
            raise StoreInvalid(f"{root}: missing snapshot file for {label}")
        doc = read_canonical(snapshot_path.read_text("utf-8"), "json", str(snapshot_path))
        series = TimeSeries.build(context, doc.observations)
        rs.record(pub, series)  # enforces strictly increasing dates
    return rs, metadata
