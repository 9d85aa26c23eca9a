"""Byte-stream decoding to canonical UTF-8 text with LF line endings.

Exactly three source encodings are supported: ASCII, ISO-8859-1 and UTF-8.
Anything else is rejected up front instead of guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import EpinormError

SUPPORTED_ENCODINGS = ("ascii", "iso-8859-1", "utf-8")

UTF8_BOM = b"\xef\xbb\xbf"

# Accepted spellings for the three supported encodings.
_ENCODING_ALIASES = {
    "ascii": "ascii",
    "us-ascii": "ascii",
    "iso-8859-1": "iso-8859-1",
    "iso8859-1": "iso-8859-1",
    "iso_8859_1": "iso-8859-1",
    "latin-1": "iso-8859-1",
    "latin1": "iso-8859-1",
    "utf-8": "utf-8",
    "utf8": "utf-8",
    "utf_8": "utf-8",
}


class DeclaredEncodingMismatch(EpinormError):
    """The bytes cannot be decoded under the encoding the source declared."""

    def __init__(self, declared: str, reason: str):
        super().__init__(f"declared encoding {declared!r} cannot decode input: {reason}")
        self.declared = declared


class UnsupportedEncoding(EpinormError):
    """An encoding outside the supported trio was requested."""

    def __init__(self, name: str):
        super().__init__(
            f"unsupported encoding {name!r}; supported: {', '.join(SUPPORTED_ENCODINGS)}"
        )
        self.name = name


@dataclass(frozen=True)
class DecodedText:
    """Canonical text plus a record of what the raw bytes looked like.

    ``text`` never contains carriage returns; ``newline_style_found`` keeps
    the original convention (``mixed`` doubles as the normalization warning
    flag).
    """

    text: str
    source_encoding: str
    had_bom: bool
    newline_style_found: str  # "CRLF" | "LF" | "mixed" | "none"


def canonical_encoding_name(name: str) -> str:
    """Map an encoding label to its canonical spelling, or raise UnsupportedEncoding."""
    key = name.strip().lower()
    if key not in _ENCODING_ALIASES:
        raise UnsupportedEncoding(name)
    return _ENCODING_ALIASES[key]


def normalize_newlines(text: str) -> str:
    """Rewrite CRLF and stray CR to LF. Idempotent."""
    return text.replace("\r\n", "\n").replace("\r", "\n")


def newline_style(text: str) -> str:
    """Classify the line-ending convention of raw (unnormalized) text."""
    crlf = text.count("\r\n")
    bare_lf = text.count("\n") - crlf
    bare_cr = text.count("\r") - crlf
    if crlf == bare_lf == bare_cr == 0:
        return "none"
    if crlf and not bare_lf and not bare_cr:
        return "CRLF"
    if bare_lf and not crlf and not bare_cr:
        return "LF"
    return "mixed"


def detect_and_decode(data: bytes, declared: str | None = None) -> DecodedText:
    """Decode a byte stream into canonical text.

    With a declared encoding the bytes must decode strictly under it
    (DeclaredEncodingMismatch otherwise; that usually means a mislabeled
    source). Without one, detection runs best effort: an empty stream is
    called UTF-8, pure 7-bit bytes are ASCII, valid multi-byte UTF-8 is
    UTF-8, and anything else falls back to ISO-8859-1, which never fails.
    A UTF-8 byte-order mark is stripped and recorded either way.
    """
    if declared is not None:
        encoding = canonical_encoding_name(declared)
        had_bom = False
        if encoding == "utf-8" and data.startswith(UTF8_BOM):
            data = data[len(UTF8_BOM):]
            had_bom = True
        try:
            text = data.decode(encoding)
        except UnicodeDecodeError as exc:
            raise DeclaredEncodingMismatch(encoding, str(exc)) from exc
        return _finish(text, encoding, had_bom)

    if data.startswith(UTF8_BOM):
        payload = data[len(UTF8_BOM):]
        try:
            return _finish(payload.decode("utf-8"), "utf-8", had_bom=True)
        except UnicodeDecodeError:
            # A BOM followed by non-UTF-8 bytes: read the whole stream,
            # BOM included, as ISO-8859-1.
            return _finish(data.decode("iso-8859-1"), "iso-8859-1", had_bom=False)

    if not data:
        return DecodedText("", "utf-8", had_bom=False, newline_style_found="none")
    if max(data) < 0x80:
        return _finish(data.decode("ascii"), "ascii", had_bom=False)
    try:
        return _finish(data.decode("utf-8"), "utf-8", had_bom=False)
    except UnicodeDecodeError:
        return _finish(data.decode("iso-8859-1"), "iso-8859-1", had_bom=False)


def _finish(text: str, encoding: str, had_bom: bool) -> DecodedText:
    return DecodedText(
        text=normalize_newlines(text),
        source_encoding=encoding,
        had_bom=had_bom,
        newline_style_found=newline_style(text),
    )
