import pytest

from epinorm.epicalendar import EpiWeek, week_interval
from epinorm.manifest import ManifestInvalid, parse_manifest
from epinorm.pipeline import PipelineError, normalize_bytes
from epinorm.series import UNKNOWN
from epinorm.temporal import format_iso8601

BASE = {
    "container": "csv",
    "interval_type": "leading",
    "case_definition": "laboratory-confirmed influenza",
    "period": "P7D",
}


def normalize(data: bytes, patch: dict | None = None, **kwargs):
    spec = dict(BASE)
    if patch:
        for key, value in patch.items():
            if value is None:
                spec.pop(key, None)
            else:
                spec[key] = value
    return normalize_bytes(data, parse_manifest(spec), **kwargs)


def intervals_of(doc):
    return [
        (format_iso8601(o.interval.start), format_iso8601(o.interval.end), o.location, o.value)
        for o in doc.observations
    ]


class TestCsvPipeline:
    def test_figure_style_csv(self, figure2_csv):
        result = normalize(figure2_csv.encode())
        assert result.rows_read == 4
        assert intervals_of(result.document) == [
            ("2013-11-05", "2013-11-12", "DE", 8),
            ("2013-11-12", "2013-11-19", "JP", 6),
            ("2013-11-05", "2013-11-12", "US", 4),
            ("2013-11-11", "2013-11-18", "ZA", 9),
        ]
        assert result.document.metadata.interval_type == "leading"

    def test_weekly_series_trailing_inclusive(self):
        data = (
            b"date,location,cases\n"
            b"2014-08-07 00:00,United States,2\n"
            b"2014-08-14 00:00,United States,5\n"
            b"2014-08-21 00:00,United States,4\n"
        )
        result = normalize(data, {"interval_type": "trailing_inclusive"})
        assert intervals_of(result.document) == [
            ("2014-08-01T00:00", "2014-08-08T00:00", "US", 2),
            ("2014-08-08T00:00", "2014-08-15T00:00", "US", 5),
            ("2014-08-15T00:00", "2014-08-22T00:00", "US", 4),
        ]

    def test_trailing_inclusive_date_labels_align_with_epi_weeks(self):
        # A Saturday-labeled weekly report, as some US states publish, lands
        # on the corresponding Sunday-start epi week once normalized.
        data = b"date,location,cases\n10/3/15,Texas,121\n"
        result = normalize(data, {
            "interval_type": "trailing_inclusive",
            "date_format": {"order": "MDY", "pattern": "%m/%d/%y"},
        })
        week = week_interval(EpiWeek("mmwr", 2015, 39))
        obs = result.document.observations[0]
        assert obs.interval.start.calendar_date == week.start.calendar_date
        assert obs.interval.end.calendar_date == week.end.calendar_date

    def test_unknown_markers(self):
        data = b"date,location,cases\n2014-08-03,Germany,n/a\n"
        result = normalize(data, {"unknown_markers": ["n/a"]})
        assert result.document.observations[0].value is UNKNOWN

    def test_undeclared_marker_fails(self):
        data = b"date,location,cases\n2014-08-03,Germany,n/a\n"
        with pytest.raises(PipelineError):
            normalize(data)

    def test_negative_count_fails(self):
        data = b"date,location,cases\n2014-08-03,Germany,-2\n"
        with pytest.raises(PipelineError):
            normalize(data)

    def test_unknown_location_fails(self):
        data = b"date,location,cases\n2014-08-03,Atlantis,2\n"
        with pytest.raises(PipelineError) as err:
            normalize(data)
        assert "Atlantis" in str(err.value)

    def test_ambiguous_date_fails_without_hint(self):
        data = b"date,location,cases\n03-09-2005,Germany,2\n"
        with pytest.raises(PipelineError):
            normalize(data)

    def test_hinted_locale_dates(self):
        data = b"date,location,cases\n09.03.2005,Germany,2\n"
        result = normalize(data, {"date_format": {"order": "DMY"}, "period": "P1D"})
        assert intervals_of(result.document)[0][:2] == ("2005-03-09", "2005-03-10")

    def test_buddhist_source(self):
        data = b"date,location,cases\n2561-04-01,Thailand,7\n"
        result = normalize(data, {
            "calendar": "buddhist",
            "date_format": {"order": "YMD"},
            "period": "P1D",
        })
        assert intervals_of(result.document)[0][:2] == ("2018-04-01", "2018-04-02")
        assert result.document.metadata.calendar == "buddhist"

    def test_missing_interval_type_is_a_validation_error(self, figure2_csv):
        with pytest.raises(ManifestInvalid):
            normalize(figure2_csv.encode(), {"interval_type": None})

    def test_missing_columns_fail(self):
        data = b"day,place,n\n2014-08-03,Germany,2\n"
        with pytest.raises(Exception):
            normalize(data)

    def test_declared_encoding(self):
        data = "date,location,cases\n2014-08-03,Zürich,3\n".encode("iso-8859-1")
        result = normalize(data, {"encoding": "iso-8859-1", "period": "P1D"})
        assert result.document.observations[0].location == "CH-ZH"

    def test_mixed_newlines_warn(self):
        data = b"date,location,cases\r\n2014-08-03,Germany,1\n2014-08-10,Germany,2\n"
        result = normalize(data)
        assert any("mixed line endings" in w for w in result.warnings)

    def test_sudan_resolves_by_observation_date(self):
        data = (
            b"date,location,cases\n"
            b"2010-06-01,Sudan,3\n"
            b"2012-06-01,Sudan,5\n"
        )
        result = normalize(data, {"period": "P7D"})
        assert {o.location for o in result.document.observations} == {"SD"}

    def test_zone_attached_to_subday_timestamps(self):
        data = (
            b"date,location,cases\n"
            b"2014-08-07T03:00,Germany,1\n"
            b"2014-08-14T03:00,Germany,2\n"
        )
        result = normalize(data, {"zone": "Europe/Berlin"})
        obs = result.document.observations[0]
        assert obs.interval.start.zone == "+02:00"  # CEST at that instant


class TestExplicitIntervalSources:
    def test_two_date_columns(self):
        data = (
            b"interval_start,interval_end,location,cases\n"
            b"2016-05-01,2016-05-08,Poland,240\n"
        )
        result = normalize(data, {"date_columns": ["interval_start", "interval_end"]})
        assert intervals_of(result.document) == [("2016-05-01", "2016-05-08", "PL", 240)]

    def test_week_labels(self):
        data = b'date,location,cases\n"2015, week 39",Texas,121\n'
        result = normalize(data, {"week_system": "mmwr"})
        assert intervals_of(result.document) == [("2015-09-27", "2015-10-04", "US-TX", 121)]

    def test_monthly_scheme_resolves_report_spans(self):
        data = (
            b"date,location,cases\n"
            b"2016-05-01,Poland,100\n"
            b"2016-05-08,Poland,110\n"
            b"2016-05-16,Poland,90\n"
            b"2016-05-23,Poland,95\n"
        )
        result = normalize(data, {"week_system": "monthly_scheme"})
        assert intervals_of(result.document) == [
            ("2016-05-01", "2016-05-08", "PL", 100),
            ("2016-05-08", "2016-05-16", "PL", 110),
            ("2016-05-16", "2016-05-23", "PL", 90),
            ("2016-05-23", "2016-06-01", "PL", 95),
        ]


class TestJsonPipeline:
    def test_figure_style_json(self, figure3_json):
        result = normalize(figure3_json.encode(), {"container": "json"})
        assert result.rows_read == 4
        assert len(result.document.observations) == 4
        assert {o.location for o in result.document.observations} == {"US", "DE", "ZA", "JP"}

    def test_deterministic_output(self, figure3_json):
        from epinorm.containers import write_canonical

        a = normalize(figure3_json.encode(), {"container": "json"})
        b = normalize(figure3_json.encode(), {"container": "json"})
        assert write_canonical(a.document, "csv") == write_canonical(b.document, "csv")
        assert write_canonical(a.document, "json") == write_canonical(b.document, "json")
