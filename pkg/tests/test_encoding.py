import pytest
from hypothesis import given
from hypothesis import strategies as st

from epinorm.encoding import (
    DeclaredEncodingMismatch,
    UnsupportedEncoding,
    detect_and_decode,
    newline_style,
    normalize_newlines,
)

# Strings with no carriage returns and no leading BOM: those characters are
# exactly what decoding normalizes away, so round trips are scoped to text
# already in canonical form.
clean_text = st.text(
    alphabet=st.characters(blacklist_categories=("Cs",), blacklist_characters="\r﻿")
)


def test_ascii_bytes_under_declared_utf8():
    out = detect_and_decode(b"date,cases\n", declared="utf-8")
    assert out.text == "date,cases\n"
    assert out.source_encoding == "utf-8"
    assert not out.had_bom


def test_empty_input_defaults_to_utf8():
    out = detect_and_decode(b"")
    assert out.text == ""
    assert out.source_encoding == "utf-8"
    assert out.newline_style_found == "none"


def test_pure_seven_bit_detected_as_ascii():
    out = detect_and_decode(b"hello,world\n")
    assert out.source_encoding == "ascii"
    assert all(ord(c) < 128 for c in out.text)


def test_latin1_fallback_for_isolated_high_byte():
    # 0xFC is u-umlaut in the ISO-8859-1 code page and never valid UTF-8.
    out = detect_and_decode(bytes([0xFC]))
    assert out.text == "ü"
    assert out.source_encoding == "iso-8859-1"


def test_multibyte_utf8_detected():
    out = detect_and_decode("Zürich".encode("utf-8"))
    assert out.source_encoding == "utf-8"
    assert out.text == "Zürich"


def test_declared_utf8_rejects_invalid_sequence():
    with pytest.raises(DeclaredEncodingMismatch):
        detect_and_decode(b"\xc3\x28", declared="utf-8")


def test_declared_ascii_rejects_high_bytes():
    with pytest.raises(DeclaredEncodingMismatch):
        detect_and_decode("Zürich".encode("iso-8859-1"), declared="ascii")


def test_unsupported_encoding_rejected():
    with pytest.raises(UnsupportedEncoding):
        detect_and_decode(b"abc", declared="utf-16")


def test_bom_stripped_and_recorded():
    out = detect_and_decode(b"\xef\xbb\xbfdate\n")
    assert out.text == "date\n"
    assert out.had_bom
    assert out.source_encoding == "utf-8"


def test_bom_stripped_under_declared_utf8():
    out = detect_and_decode(b"\xef\xbb\xbfdate\n", declared="utf-8")
    assert out.text == "date\n"
    assert out.had_bom


def test_latin1_transcodes_zurich_losslessly():
    raw = "location\nZürich\n".encode("iso-8859-1")
    out = detect_and_decode(raw, declared="iso-8859-1")
    assert out.text == "location\nZürich\n"
    assert out.text.encode("utf-8").decode("utf-8") == out.text


@pytest.mark.parametrize(
    "text,style",
    [
        ("a\r\nb\r\n", "CRLF"),
        ("a\nb\n", "LF"),
        ("a\r\nb\n", "mixed"),
        ("a\rb", "mixed"),
        ("plain", "none"),
    ],
)
def test_newline_classification(text, style):
    assert newline_style(text) == style


def test_newlines_normalized_with_style_recorded():
    out = detect_and_decode(b"a\r\nb\nc\r")
    assert out.text == "a\nb\nc\n"
    assert out.newline_style_found == "mixed"
    assert "\r" not in out.text


@given(clean_text)
def test_utf8_round_trip(s):
    assert detect_and_decode(s.encode("utf-8"), declared="utf-8").text == s


@given(st.text(alphabet=st.characters(max_codepoint=127)))
def test_ascii_embedding(s):
    raw = s.encode("ascii")
    as_utf8 = detect_and_decode(raw, declared="utf-8")
    as_latin1 = detect_and_decode(raw, declared="iso-8859-1")
    assert as_utf8.text == as_latin1.text


@given(st.text())
def test_newline_normalization_idempotent(s):
    once = normalize_newlines(s)
    assert normalize_newlines(once) == once
