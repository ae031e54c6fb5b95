"""PDT-style lemmas and form-to-lemma character edit rules.

A lemma string like "jak-2_^(zvire)" carries three layers: the lemma proper
("jak"), a numeric sense suffix ("-2"), and technical comments ("_..." and
beyond). Comments are stripped at ingestion; sense numbers are kept, because
the dictionary distinguishes senses and the tagger must be able to produce
them.

An edit rule is a deterministic recipe turning a surface form into a lemma.
The rule anchors on the longest common contiguous substring of the lowercased
form and lemma, rewrites the material before and after it, and finishes with
a casing directive recovered from the lemma. Rules serialize to a single-line
canonical string (see `rule_to_string`), the encoding used in model files and
external distribution files:

    A;<strip_prefix>;<prefix_insert>;<strip_suffix>;<suffix_insert>;<casing>
    R;<replacement>;<casing>

with `%`, `;` and control characters percent-escaped inside string fields,
and casing one of `L` (all lower), `F` (first upper, rest lower), `U` (all
upper) or `X<start>-<end>,...` (explicit uppercase index ranges).
"""

import re
from dataclasses import dataclass
from typing import Optional

from . import _kernels
from .errors import EmptyLemmaError, ParseError, RuleNotApplicableError

_SENSE_RE = re.compile(r"^(.*\D)-([1-9][0-9]*)$", re.DOTALL)


@dataclass(frozen=True, order=True)
class Lemma:
    """A structured lemma: comment-free string, lemma proper, optional sense."""

    raw: str
    proper: str
    sense: Optional[int] = None

    def __post_init__(self):
        if not self.proper:
            raise EmptyLemmaError("lemma proper must be non-empty")
        if self.sense is not None:
            if self.sense < 1:
                raise ValueError(f"sense must be >= 1, got {self.sense}")
            expected = f"{self.proper}-{self.sense}"
        else:
            expected = self.proper
        if self.raw != expected:
            raise ValueError(f"inconsistent lemma: raw={self.raw!r} vs {expected!r}")


def strip_comments(raw_lemma: str) -> Lemma:
    """Drop everything from the first "_" on and split off the sense number.

    The sense suffix is "-N" with N a positive integer without leading zeros,
    immediately preceded by a non-digit; anything else stays part of the
    lemma proper.
    """
    cut = raw_lemma.split("_", 1)[0]
    if not cut:
        raise EmptyLemmaError(f"empty lemma after comment stripping: {raw_lemma!r}")
    m = _SENSE_RE.match(cut)
    if m:
        return Lemma(raw=cut, proper=m.group(1), sense=int(m.group(2)))
    return Lemma(raw=cut, proper=cut)


@dataclass(frozen=True)
class Casing:
    """Casing directive: how to re-case a lowercased lemma string.

    mode "lower", "first" and "upper" cover the regular patterns; "explicit"
    carries the index ranges (half-open) that are uppercase.
    """

    mode: str
    upper_ranges: tuple = ()

    def __post_init__(self):
        if self.mode not in ("lower", "first", "upper", "explicit"):
            raise ValueError(f"unknown casing mode: {self.mode!r}")
        if self.mode != "explicit" and self.upper_ranges:
            raise ValueError("ranges are only valid for explicit casing")


ALL_LOWER = Casing("lower")
FIRST_UPPER = Casing("first")
ALL_UPPER = Casing("upper")


def _is_cased(ch: str) -> bool:
    return ch.lower() != ch.upper()


def _is_upper(ch: str) -> bool:
    return ch != ch.lower()


def casing_of(text: str) -> Casing:
    """Recover the casing directive that reproduces `text` from its lowercase."""
    cased = [ch for ch in text if _is_cased(ch)]
    uppers = [_is_upper(ch) for ch in cased]
    if not any(uppers):
        return ALL_LOWER
    if uppers[0] and not any(uppers[1:]):
        return FIRST_UPPER
    if all(uppers):
        return ALL_UPPER
    ranges = []
    start = None
    for i, ch in enumerate(text):
        if _is_upper(ch):
            if start is None:
                start = i
        elif start is not None:
            ranges.append((start, i))
            start = None
    if start is not None:
        ranges.append((start, len(text)))
    return Casing("explicit", tuple(ranges))


def _apply_casing(casing: Casing, text: str) -> str:
    if casing.mode == "lower":
        return text.lower()
    if casing.mode == "upper":
        return text.upper()
    if casing.mode == "first":
        chars = list(text.lower())
        for i, ch in enumerate(chars):
            if _is_cased(ch):
                chars[i] = ch.upper()
                break
        return "".join(chars)
    chars = list(text.lower())
    for start, end in casing.upper_ranges:
        for i in range(start, min(end, len(chars))):
            chars[i] = chars[i].upper()
    return "".join(chars)


@dataclass(frozen=True)
class EditRule:
    """Form-to-lemma transformation: affix edits or a full replacement."""

    kind: str  # "affix" | "absolute"
    strip_prefix: int = 0
    prefix_insert: str = ""
    strip_suffix: int = 0
    suffix_insert: str = ""
    replacement: str = ""
    casing: Casing = ALL_LOWER

    def __post_init__(self):
        if self.kind not in ("affix", "absolute"):
            raise ValueError(f"unknown rule kind: {self.kind!r}")
        if self.kind == "affix":
            if self.strip_prefix < 0 or self.strip_suffix < 0:
                raise ValueError("strip counts must be non-negative")
            if self.replacement:
                raise ValueError("affix rules carry no replacement")
        else:
            if (
                self.strip_prefix
                or self.strip_suffix
                or self.prefix_insert
                or self.suffix_insert
            ):
                raise ValueError("absolute rules carry no affix edits")

    @classmethod
    def affix(cls, strip_prefix, prefix_insert, strip_suffix, suffix_insert, casing):
        return cls(
            kind="affix",
            strip_prefix=strip_prefix,
            prefix_insert=prefix_insert,
            strip_suffix=strip_suffix,
            suffix_insert=suffix_insert,
            casing=casing,
        )

    @classmethod
    def absolute(cls, replacement, casing):
        return cls(kind="absolute", replacement=replacement, casing=casing)


IDENTITY_RULE = EditRule.affix(0, "", 0, "", ALL_LOWER)


def induce_rule(form: str, lemma: Lemma) -> EditRule:
    """Derive the edit rule turning `form` into `lemma.raw`.

    Anchors on the longest common contiguous substring of the lowercased
    strings (ties: leftmost in the form, then leftmost in the lemma). With
    no common character at all the rule replaces the form outright.
    """
    if not form:
        raise ValueError("form must be non-empty")
    f = form.lower()
    l = lemma.raw.lower()
    length, start_f, start_l = _kernels.lcs(f, l)
    casing = casing_of(lemma.raw)
    if length == 0:
        return EditRule.absolute(l, casing)
    return EditRule.affix(
        strip_prefix=start_f,
        prefix_insert=l[:start_l],
        strip_suffix=len(f) - (start_f + length),
        suffix_insert=l[start_l + length :],
        casing=casing,
    )


def rule_applicable(rule: EditRule, form: str) -> bool:
    """Whether `apply_rule` would succeed on this form."""
    if rule.kind == "absolute":
        return True
    return rule.strip_prefix + rule.strip_suffix <= len(form.lower())


def apply_rule(rule: EditRule, form: str) -> str:
    """Run the rule on a surface form, producing the lemma's raw string."""
    if not form:
        raise ValueError("form must be non-empty")
    if rule.kind == "absolute":
        return _apply_casing(rule.casing, rule.replacement)
    s = form.lower()
    if rule.strip_prefix + rule.strip_suffix > len(s):
        raise RuleNotApplicableError(
            f"rule strips {rule.strip_prefix}+{rule.strip_suffix} chars "
            f"from a {len(s)}-char form {form!r}"
        )
    core = s[rule.strip_prefix : len(s) - rule.strip_suffix]
    return _apply_casing(rule.casing, rule.prefix_insert + core + rule.suffix_insert)


_ESCAPE = {"%": "%25", ";": "%3B"}
_HEX_RE = re.compile(r"%([0-9A-Fa-f]{2})")


def _escape(s: str) -> str:
    out = []
    for ch in s:
        if ch in _ESCAPE:
            out.append(_ESCAPE[ch])
        elif ord(ch) < 0x20:
            out.append(f"%{ord(ch):02X}")
        else:
            out.append(ch)
    return "".join(out)


def _unescape(s: str) -> str:
    if "\t" in s or "\n" in s or "\r" in s:
        raise ParseError(f"unescaped control character in field {s!r}")
    pos = 0
    out = []
    while True:
        i = s.find("%", pos)
        if i < 0:
            out.append(s[pos:])
            return "".join(out)
        m = _HEX_RE.match(s, i)
        if not m:
            raise ParseError(f"bad escape in field {s!r}")
        out.append(s[pos:i])
        out.append(chr(int(m.group(1), 16)))
        pos = i + 3


def _casing_to_string(c: Casing) -> str:
    if c.mode == "lower":
        return "L"
    if c.mode == "first":
        return "F"
    if c.mode == "upper":
        return "U"
    return "X" + ",".join(f"{a}-{b}" for a, b in c.upper_ranges)


def _casing_from_string(s: str) -> Casing:
    if s == "L":
        return ALL_LOWER
    if s == "F":
        return FIRST_UPPER
    if s == "U":
        return ALL_UPPER
    if s.startswith("X") and len(s) > 1:
        ranges = []
        for part in s[1:].split(","):
            m = re.fullmatch(r"([0-9]+)-([0-9]+)", part)
            if not m:
                raise ParseError(f"bad casing range {part!r}")
            a, b = int(m.group(1)), int(m.group(2))
            if a >= b:
                raise ParseError(f"empty casing range {part!r}")
            ranges.append((a, b))
        return Casing("explicit", tuple(ranges))
    raise ParseError(f"bad casing directive {s!r}")


def rule_to_string(rule: EditRule) -> str:
    """Canonical single-line encoding; inverse of `rule_from_string`."""
    casing = _casing_to_string(rule.casing)
    if rule.kind == "absolute":
        return f"R;{_escape(rule.replacement)};{casing}"
    return (
        f"A;{rule.strip_prefix};{_escape(rule.prefix_insert)};"
        f"{rule.strip_suffix};{_escape(rule.suffix_insert)};{casing}"
    )


def rule_from_string(text: str) -> EditRule:
    """Parse the canonical rule encoding; raises ParseError on anything else."""
    fields = text.split(";")
    if fields[0] == "A":
        if len(fields) != 6:
            raise ParseError(f"affix rule needs 6 fields, got {len(fields)}: {text!r}")
        if not fields[1].isdigit() or not fields[3].isdigit():
            raise ParseError(f"non-numeric strip count in {text!r}")
        return EditRule.affix(
            strip_prefix=int(fields[1]),
            prefix_insert=_unescape(fields[2]),
            strip_suffix=int(fields[3]),
            suffix_insert=_unescape(fields[4]),
            casing=_casing_from_string(fields[5]),
        )
    if fields[0] == "R":
        if len(fields) != 3:
            raise ParseError(
                f"absolute rule needs 3 fields, got {len(fields)}: {text!r}"
            )
        return EditRule.absolute(_unescape(fields[1]), _casing_from_string(fields[2]))
    raise ParseError(f"unknown rule encoding: {text!r}")
