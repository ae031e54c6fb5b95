"""Immutable morphological dictionary: form -> set of (lemma, tag) analyses.

The text format is one entry per line, three TAB-separated columns, in either
form-lemma-tag or lemma-tag-form order (the latter matches MorfFlex-style
exports). Lemma comments are stripped at load time. A compact versioned
binary cache avoids re-parsing large dictionaries.
"""

import io
import os
import struct
import zlib
from dataclasses import dataclass

from .errors import (
    CorruptFileError,
    EncodingError,
    FormatError,
    VersionMismatchError,
)
from .lemma_rules import Lemma, strip_comments

COLUMN_ORDERS = ("form-lemma-tag", "lemma-tag-form")

_MAGIC = b"DTDC"
_VERSION = 1


def validate_tag(tag: str, strict: bool = False) -> str:
    if not tag:
        raise ValueError("empty tag")
    if strict:
        if len(tag) != 15 or not all(c.isalnum() or c == "-" for c in tag):
            raise ValueError(f"not a 15-char positional tag: {tag!r}")
    return tag


@dataclass(frozen=True, order=True)
class Analysis:
    """One dictionary reading of a form."""

    lemma: Lemma
    tag: str

    @property
    def sort_key(self):
        return (self.tag, self.lemma.raw)


class MorphDict:
    """Immutable form -> analyses map with a lemma membership index."""

    def __init__(self, entries, source="memory"):
        self._entries = {
            form: tuple(sorted(set(analyses), key=lambda a: a.sort_key))
            for form, analyses in entries.items()
            if analyses
        }
        self._lemmas = frozenset(
            a.lemma.raw for analyses in self._entries.values() for a in analyses
        )
        self.source = source

    @classmethod
    def from_triples(cls, triples, source="memory"):
        """Build from (form, lemma string, tag) triples; comments are stripped."""
        entries = {}
        for form, lemma, tag in triples:
            if not isinstance(lemma, Lemma):
                lemma = strip_comments(lemma)
            validate_tag(tag)
            entries.setdefault(form, []).append(Analysis(lemma, tag))
        return cls(entries, source=source)

    def lookup(self, form: str) -> tuple:
        """Exact-match analyses for a form; empty tuple means OOV."""
        return self._entries.get(form, ())

    def lookup_folded(self, form: str) -> tuple:
        """Exact match first, then a lowercase fallback."""
        hit = self._entries.get(form)
        if hit:
            return hit
        return self._entries.get(form.lower(), ())

    def ambiguity(self, form: str) -> int:
        return len(self.lookup(form))

    def is_known_lemma(self, lemma_raw: str) -> bool:
        return lemma_raw in self._lemmas

    def contains_entry(self, form: str, lemma_raw: str, tag: str) -> bool:
        return any(
            a.lemma.raw == lemma_raw and a.tag == tag for a in self.lookup(form)
        )

    def forms(self):
        return iter(self._entries)

    @property
    def n_forms(self) -> int:
        return len(self._entries)

    @property
    def n_analyses(self) -> int:
        return sum(len(v) for v in self._entries.values())

    @property
    def n_lemmas(self) -> int:
        return len(self._lemmas)

    def __contains__(self, form):
        return form in self._entries

    def __eq__(self, other):
        if not isinstance(other, MorphDict):
            return NotImplemented
        return self._entries == other._entries and self.source == other.source

    def __repr__(self):
        return (
            f"MorphDict(source={self.source!r}, forms={self.n_forms}, "
            f"analyses={self.n_analyses})"
        )


def _split_columns(line, order, lineno):
    cols = line.split("\t")
    if len(cols) != 3:
        raise FormatError(f"expected 3 TAB-separated columns, got {len(cols)}", lineno)
    if order == "form-lemma-tag":
        return cols[0], cols[1], cols[2]
    return cols[2], cols[0], cols[1]


def load_dictionary(path, column_order="form-lemma-tag", strict_tags=False):
    """Parse a TSV dictionary file into a MorphDict."""
    if column_order not in COLUMN_ORDERS:
        raise ValueError(f"column_order must be one of {COLUMN_ORDERS}")
    entries = {}
    try:
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.rstrip("\r\n")
                if not line:
                    continue
                form, lemma_raw, tag = _split_columns(line, column_order, lineno)
                try:
                    lemma = strip_comments(lemma_raw)
                    validate_tag(tag, strict=strict_tags)
                except (ValueError, FormatError) as exc:
                    raise FormatError(str(exc), lineno) from exc
                entries.setdefault(form, []).append(Analysis(lemma, tag))
    except UnicodeDecodeError as exc:
        raise EncodingError(f"{path}: not valid UTF-8: {exc}") from exc
    return MorphDict(entries, source=os.path.basename(str(path)))


def save_binary(mdict: MorphDict, path) -> None:
    """Write the versioned binary cache (magic, version, zlib TSV payload)."""
    buf = io.StringIO()
    buf.write(mdict.source.replace("\t", " ").replace("\n", " "))
    buf.write("\n")
    for form in sorted(mdict.forms()):
        for analysis in mdict.lookup(form):
            buf.write(f"{form}\t{analysis.lemma.raw}\t{analysis.tag}\n")
    payload = zlib.compress(buf.getvalue().encode("utf-8"), level=6)
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<I", _VERSION))
        fh.write(struct.pack("<I", len(payload)))
        fh.write(payload)


def load_binary(path) -> MorphDict:
    """Load a binary cache written by `save_binary`."""
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < 12 or blob[:4] != _MAGIC:
        raise CorruptFileError(f"{path}: not a dictionary cache file")
    (version,) = struct.unpack("<I", blob[4:8])
    if version != _VERSION:
        raise VersionMismatchError(
            f"{path}: format version {version}, expected {_VERSION}"
        )
    (length,) = struct.unpack("<I", blob[8:12])
    payload = blob[12:]
    if len(payload) != length:
        raise CorruptFileError(f"{path}: truncated payload")
    try:
        text = zlib.decompress(payload).decode("utf-8")
    except (zlib.error, UnicodeDecodeError) as exc:
        raise CorruptFileError(f"{path}: corrupt payload: {exc}") from exc
    lines = text.split("\n")
    source = lines[0]
    entries = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line:
            continue
        cols = line.split("\t")
        if len(cols) != 3:
            raise CorruptFileError(f"{path}: malformed cache line {lineno}")
        form, lemma_raw, tag = cols
        entries.setdefault(form, []).append(Analysis(strip_comments(lemma_raw), tag))
    return MorphDict(entries, source=source)
