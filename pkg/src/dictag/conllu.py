"""CoNLL-U reading/writing and a rule-based tokenizer/segmenter.

Tokens model the ID, FORM, LEMMA and XPOS columns (positional tags ride in
XPOS); the remaining columns pass through verbatim so that read -> write is
byte-exact. Multiword-token ranges and empty-node lines are preserved as
opaque lines anchored to their position in the token stream.
"""

import io
import os
import unicodedata
from dataclasses import dataclass, replace
from importlib import resources
from typing import Optional

from .errors import (
    ColumnCountError,
    EncodingError,
    FormatError,
    NonContiguousIdsError,
)

_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    id: int
    form: str
    lemma: Optional[str] = None
    xpos: Optional[str] = None
    upos: str = "_"
    feats: str = "_"
    head: str = "_"
    deprel: str = "_"
    deps: str = "_"
    misc: str = "_"

    def __post_init__(self):
        if self.id < 1:
            raise ValueError(f"token id must be >= 1, got {self.id}")
        if not self.form:
            raise ValueError("token form must be non-empty")

    def with_annotation(self, lemma: str, xpos: str) -> "Token":
        return replace(self, lemma=lemma, xpos=xpos)


@dataclass(frozen=True)
class Sentence:
    tokens: tuple
    comments: tuple = ()
    # (position, raw line): opaque multiword-token / empty-node lines kept
    # verbatim; position = number of regular tokens preceding the line.
    extra_lines: tuple = ()

    def __post_init__(self):
        if not self.tokens:
            raise ValueError("sentence must contain at least one token")
        for i, tok in enumerate(self.tokens, start=1):
            if tok.id != i:
                raise ValueError(f"token ids must be contiguous from 1, got {tok.id}")

    def forms(self):
        return [t.form for t in self.tokens]


def _opt(column: str) -> Optional[str]:
    return None if column == "_" else column


def _parse_token_line(cols, expected_id, lineno):
    try:
        tid = int(cols[0])
    except ValueError:
        raise NonContiguousIdsError(f"malformed token id {cols[0]!r}", lineno)
    if tid != expected_id:
        raise NonContiguousIdsError(
            f"expected token id {expected_id}, got {tid}", lineno
        )
    if not cols[1]:
        raise FormatError("empty FORM column", lineno)
    return Token(
        id=tid,
        form=cols[1],
        lemma=_opt(cols[2]),
        xpos=_opt(cols[4]),
        upos=cols[3],
        feats=cols[5],
        head=cols[6],
        deprel=cols[7],
        deps=cols[8],
        misc=cols[9],
    )


def read_conllu(source):
    """Parse CoNLL-U from a path or an open text stream into Sentences."""
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, encoding="utf-8") as fh:
                return _read_stream(fh)
        except UnicodeDecodeError as exc:
            raise EncodingError(f"{source}: not valid UTF-8: {exc}") from exc
    return _read_stream(source)


def parse_conllu(text: str):
    """Parse CoNLL-U from an in-memory string."""
    return _read_stream(io.StringIO(text))


def _read_stream(fh):
    sentences = []
    tokens, comments, extras = [], [], []

    def flush():
        nonlocal tokens, comments, extras
        if tokens:
            sentences.append(
                Sentence(tuple(tokens), tuple(comments), tuple(extras))
            )
        elif comments or extras:
            raise FormatError("comments or ranges without any token line")
        tokens, comments, extras = [], [], []

    for lineno, line in enumerate(fh, start=1):
        line = line.rstrip("\n").rstrip("\r")
        if not line:
            flush()
            continue
        if line.startswith("#"):
            if tokens:
                raise FormatError("comment line inside a sentence", lineno)
            comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != _COLUMNS:
            raise ColumnCountError(
                f"expected {_COLUMNS} columns, got {len(cols)}", lineno
            )
        if "-" in cols[0] or "." in cols[0]:
            extras.append((len(tokens), line))
            continue
        tokens.append(_parse_token_line(cols, len(tokens) + 1, lineno))
    flush()
    return sentences


def _token_line(tok: Token) -> str:
    return "\t".join(
        (
            str(tok.id),
            tok.form,
            tok.lemma if tok.lemma is not None else "_",
            tok.upos,
            tok.xpos if tok.xpos is not None else "_",
            tok.feats,
            tok.head,
            tok.deprel,
            tok.deps,
            tok.misc,
        )
    )


def write_conllu(sentences) -> str:
    """Serialize sentences back to CoNLL-U text (one blank line after each)."""
    out = []
    for sent in sentences:
        out.extend(sent.comments)
        extras = dict()
        for pos, raw in sent.extra_lines:
            extras.setdefault(pos, []).append(raw)
        for i, tok in enumerate(sent.tokens):
            out.extend(extras.get(i, ()))
            out.append(_token_line(tok))
        out.extend(extras.get(len(sent.tokens), ()))
        out.append("")
    return "\n".join(out) + "\n" if out else ""


def write_conllu_file(sentences, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(write_conllu(sentences))


# ---------------------------------------------------------------------------
# Tokenizer


def _is_punct(ch: str) -> bool:
    return unicodedata.category(ch).startswith("P")


def load_abbreviations(path) -> frozenset:
    """One abbreviation per line (with its dot), '#' comments allowed."""
    abbrevs = set()
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith("#"):
                abbrevs.add(line)
    return frozenset(abbrevs)


def default_abbreviations() -> frozenset:
    ref = resources.files("dictag").joinpath("data/abbreviations_cs.txt")
    abbrevs = set()
    for line in ref.read_text(encoding="utf-8").splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            abbrevs.add(line)
    return frozenset(abbrevs)


_DEFAULT_ABBREVS = None


def _abbrevs(custom):
    global _DEFAULT_ABBREVS
    if custom is not None:
        return custom
    if _DEFAULT_ABBREVS is None:
        _DEFAULT_ABBREVS = default_abbreviations()
    return _DEFAULT_ABBREVS


@dataclass
class _Chunk:
    text: str
    paragraph_after: bool


def _split_chunks(text):
    chunks = []
    i, n = 0, len(text)
    while i < n:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < n and not text[j].isspace():
            j += 1
        k = j
        newlines = 0
        while k < n and text[k].isspace():
            if text[k] == "\n":
                newlines += 1
            k += 1
        chunks.append(_Chunk(text[i:j], paragraph_after=newlines >= 2))
        i = k
    return chunks


def _chunk_tokens(chunk_text, abbrevs):
    """Split edge punctuation off a whitespace-delimited chunk."""
    head, tail = [], []
    cur = chunk_text
    while len(cur) > 1 and cur not in abbrevs and _is_punct(cur[0]):
        head.append(cur[0])
        cur = cur[1:]
    while len(cur) > 1 and cur not in abbrevs and _is_punct(cur[-1]):
        tail.append(cur[-1])
        cur = cur[:-1]
    return head + [cur] + tail[::-1]


_TERMINALS = {".", "!", "?"}


def tokenize(text: str, abbreviations=None):
    """Rule-based tokenization and sentence segmentation of plain text.

    Tokens split at Unicode whitespace, with punctuation peeled off word
    edges (abbreviations from the stop-list keep their dot). Sentences end
    after '.', '!' or '?' when the next chunk starts with an uppercase
    letter or digit, and always at blank lines.
    """
    abbrevs = _abbrevs(abbreviations)
    chunks = _split_chunks(text)
    sentences = []
    current = []

    def flush():
        nonlocal current
        if current:
            sentences.append(
                Sentence(
                    tuple(
                        Token(id=i + 1, form=form, misc=misc)
                        for i, (form, misc) in enumerate(current)
                    )
                )
            )
            current = []

    for ci, chunk in enumerate(chunks):
        words = _chunk_tokens(chunk.text, abbrevs)
        for wi, word in enumerate(words):
            misc = "SpaceAfter=No" if wi + 1 < len(words) else "_"
            current.append((word, misc))
        nxt = chunks[ci + 1].text if ci + 1 < len(chunks) else None
        if chunk.paragraph_after or nxt is None:
            flush()
        elif words[-1] in _TERMINALS and (nxt[0].isupper() or nxt[0].isdigit()):
            flush()
    flush()
    return sentences
