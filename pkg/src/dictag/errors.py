"""Exception types shared across the package."""


class DictagError(Exception):
    """Base class for all errors raised by this package."""


class EmptyLemmaError(DictagError):
    """Comment stripping produced an empty lemma."""


class RuleNotApplicableError(DictagError):
    """An edit rule strips more characters than the form has."""


class ParseError(DictagError):
    """Malformed serialized input (rule strings, distribution files)."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnknownRuleEncodingError(ParseError):
    """A rule string in an external file does not decode."""


class NegativeProbabilityError(DictagError):
    """A probability in an external distribution file is negative."""


class FormatError(DictagError):
    """A dictionary or corpus line has the wrong shape."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EncodingError(DictagError):
    """Input file is not valid UTF-8."""


class VersionMismatchError(DictagError):
    """Binary file was written by an incompatible format version."""


class CorruptFileError(DictagError):
    """Binary file is truncated or fails integrity checks."""


class EmptyCorpusError(DictagError):
    """Training requested on an empty corpus."""


class CorpusFormatError(DictagError):
    """A gold corpus token is missing its lemma or tag."""


class LengthMismatchError(DictagError):
    """Parallel sequences (forms vs. distributions) differ in length."""


class ColumnCountError(FormatError):
    """A CoNLL-U line does not have exactly 10 columns."""


class NonContiguousIdsError(FormatError):
    """Token ids within a sentence are not 1..n."""


class AlignmentError(DictagError):
    """Gold and system token streams do not line up."""
