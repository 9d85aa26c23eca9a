import datetime
import json

import pytest

from epinorm.containers import DocumentMetadata
from epinorm.intervals import Interval
from epinorm.revstore import StoreInvalid, load_revision_store, save_revision_store
from epinorm.series import Observation, RevisionedSeries, SeriesContext, TimeSeries
from epinorm.temporal import parse_date

CTX = SeriesContext("US", "all", "confirmed")
META = DocumentMetadata(interval_type="leading", case_definition="lab confirmed")


def snapshot(value_by_span):
    observations = [
        Observation(Interval(parse_date(a), parse_date(b)), "US", "confirmed", v)
        for (a, b), v in value_by_span.items()
    ]
    return TimeSeries.build(CTX, observations)


@pytest.fixture
def store(tmp_path):
    rs = RevisionedSeries(CTX)
    rs.record(datetime.date(2014, 8, 15), snapshot({("2014-08-03", "2014-08-10"): 2}))
    rs.record(datetime.date(2014, 8, 22), snapshot({("2014-08-03", "2014-08-10"): 4}))
    path = tmp_path / "store"
    save_revision_store(rs, META, path)
    return path


def test_round_trip(store):
    rs, metadata = load_revision_store(store)
    assert metadata == META
    assert rs.publication_dates == (datetime.date(2014, 8, 15), datetime.date(2014, 8, 22))
    assert rs.as_of(datetime.date(2014, 8, 18)).observations[0].value == 2
    assert rs.as_of(datetime.date(2015, 1, 1)).observations[0].value == 4


def test_layout_is_one_canonical_file_per_publication(store):
    names = sorted(p.name for p in store.iterdir())
    assert names == ["2014-08-15.json", "2014-08-22.json", "index.json"]
    index = json.loads((store / "index.json").read_text())
    assert index["publications"] == ["2014-08-15", "2014-08-22"]
    first = json.loads((store / "2014-08-15.json").read_text())
    assert first["observations"][0]["value"] == 2


def test_missing_snapshot_file(store):
    (store / "2014-08-22.json").unlink()
    with pytest.raises(StoreInvalid):
        load_revision_store(store)


def test_out_of_order_index(store):
    index_path = store / "index.json"
    index = json.loads(index_path.read_text())
    index["publications"] = list(reversed(index["publications"]))
    index_path.write_text(json.dumps(index))
    with pytest.raises(ValueError):
        load_revision_store(store)


def test_not_a_store(tmp_path):
    with pytest.raises(StoreInvalid):
        load_revision_store(tmp_path / "nowhere")
