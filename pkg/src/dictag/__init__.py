"""dictag: morphosyntactic tagging and lemmatization with dictionary rescoring.

A trainable statistical tagger/lemmatizer (or externally supplied per-token
distributions) combined with inference-time rescoring against a
high-precision morphological dictionary, plus CoNLL-U handling, an
evaluation harness, self-training, an HTTP service and a CLI.
"""

from ._kernels import BACKEND as kernel_backend
from .conllu import (
    Sentence,
    Token,
    parse_conllu,
    read_conllu,
    tokenize,
    write_conllu,
)
from .evaluation import (
    accuracy,
    bucket_by_ambiguity,
    build_report,
    categorize_errors,
    diff_systems,
    error_reduction,
    macro_average,
)
from .lemma_rules import (
    EditRule,
    Lemma,
    apply_rule,
    induce_rule,
    rule_from_string,
    rule_to_string,
    strip_comments,
)
from .morphdict import (
    Analysis,
    MorphDict,
    load_binary,
    load_dictionary,
    save_binary,
)
from .pipeline import annotate, self_train
from .rescore import (
    RescoredChoice,
    rescore_sentence,
    rescore_token,
    valid_pairs,
)
from .tagger import (
    TaggerModel,
    TokenDistributions,
    load_external_distributions,
    load_model,
    predict,
    save_model,
    train,
)

__version__ = "0.1.0"

__all__ = [
    "Analysis",
    "EditRule",
    "Lemma",
    "MorphDict",
    "RescoredChoice",
    "Sentence",
    "TaggerModel",
    "Token",
    "TokenDistributions",
    "accuracy",
    "annotate",
    "apply_rule",
    "bucket_by_ambiguity",
    "build_report",
    "categorize_errors",
    "diff_systems",
    "error_reduction",
    "induce_rule",
    "kernel_backend",
    "load_binary",
    "load_dictionary",
    "load_external_distributions",
    "load_model",
    "macro_average",
    "parse_conllu",
    "predict",
    "read_conllu",
    "rescore_sentence",
    "rescore_token",
    "rule_from_string",
    "rule_to_string",
    "save_binary",
    "save_model",
    "self_train",
    "strip_comments",
    "tokenize",
    "train",
    "valid_pairs",
    "write_conllu",
]
