import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from epinorm.geo import load_gazetteer
from epinorm.intervals import TimestampedPoint
from epinorm.temporal import parse_date

FIGURE2_CSV = (
    "date,location,cases\n"
    "2013-11-05,United States,4\n"
    "2013-11-05,Germany,8\n"
    "2013-11-11,South Africa,9\n"
    "2013-11-12,Japan,6\n"
)

FIGURE3_JSON = """[
  {
    "date":"2013-11-05",
    "locations":{
      "United States":4,
      "Germany":8
    }
  },
  {
    "date":"2013-11-11",
    "locations":{
      "South Africa":9
    }
  },
  {
    "date":"2013-11-12",
    "locations":{
      "Japan":6
    }
  }
]"""


@pytest.fixture(scope="session")
def gazetteer():
    return load_gazetteer()


@pytest.fixture
def weekly_points():
    """The three-row sample series of weekly timestamps and counts."""
    return [
        TimestampedPoint(parse_date("2014-08-07 00:00"), 2),
        TimestampedPoint(parse_date("2014-08-14 00:00"), 5),
        TimestampedPoint(parse_date("2014-08-21 00:00"), 4),
    ]


@pytest.fixture
def figure2_csv():
    return FIGURE2_CSV


@pytest.fixture
def figure3_json():
    return FIGURE3_JSON
