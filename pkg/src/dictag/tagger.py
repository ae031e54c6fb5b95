"""Feature-based statistical tagger/lemmatizer and external-distribution input.

The built-in model is an averaged perceptron with two output heads sharing
one feature set: one head scores the tag inventory, the other the edit-rule
inventory. Per-token softmax over the averaged scores yields the probability
distributions the rescorer consumes. The same distributions can instead be
read from a JSON-lines file, so any external model (neural or otherwise) can
drive the pipeline.

Feature templates (fixed): bias; surface form; lowercased form; lowercased
prefixes and suffixes of length 1-4; word shape (case/digit/other classes,
runs collapsed); lowercased neighbor forms at offsets -2..+2 with sentence
boundary markers.

External distribution files contain one JSON object per token, for example
`{"form": "psa", "tags": [["NNMS2-----A----", 0.9]], "rules": [["A;0;;1;;L",
1.0]]}`, with blank lines separating sentences. Listed probabilities are
renormalized to sum to one; inventory items not listed get probability zero.
"""

import hashlib
import io
import json
import random
import struct
import zlib
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from .conllu import Sentence
from .errors import (
    CorpusFormatError,
    CorruptFileError,
    EmptyCorpusError,
    NegativeProbabilityError,
    ParseError,
    UnknownRuleEncodingError,
    VersionMismatchError,
)
from .lemma_rules import (
    EditRule,
    induce_rule,
    rule_from_string,
    rule_to_string,
    strip_comments,
)

_MAGIC = b"DTMD"
_VERSION = 1


@dataclass(frozen=True)
class TokenDistributions:
    """Per-token probability distributions over tags and edit rules."""

    tag_probs: dict
    rule_probs: dict

    def validate(self, tol=1e-6):
        for name, probs in (("tag", self.tag_probs), ("rule", self.rule_probs)):
            total = sum(probs.values())
            if abs(total - 1.0) > tol:
                raise ValueError(f"{name} probabilities sum to {total}, not 1")
            if any(p < 0 or p > 1 for p in probs.values()):
                raise ValueError(f"{name} probabilities outside [0,1]")
        return self


def word_shape(form: str) -> str:
    """Collapse the form into character-class runs: Xx, xx-xx, dd.d, ..."""
    out = []
    for ch in form:
        if ch.isupper():
            cls = "X"
        elif ch.islower():
            cls = "x"
        elif ch.isdigit():
            cls = "d"
        else:
            cls = "o"
        if not out or out[-1] != cls:
            out.append(cls)
    return "".join(out)


def token_features(forms, i) -> list:
    """Feature strings for token `i` of a sentence (fixed template set)."""
    form = forms[i]
    low = form.lower()
    feats = ["b", f"w0={form}", f"l0={low}"]
    for k in (1, 2, 3, 4):
        if len(low) >= k:
            feats.append(f"p{k}={low[:k]}")
            feats.append(f"s{k}={low[-k:]}")
    feats.append(f"sh={word_shape(form)}")
    n = len(forms)
    for off in (-2, -1, 1, 2):
        j = i + off
        if j < 0:
            val = "<s>"
        elif j >= n:
            val = "</s>"
        else:
            val = forms[j].lower()
        feats.append(f"w{off:+d}={val}")
    return feats


class TaggerModel:
    """Trained two-head averaged perceptron over a fixed tag/rule inventory.

    Scores are stored as accumulated weight totals plus a scale (the number
    of update steps); averaged scores are totals/scale. Totals stay
    integer-valued, which keeps scoring bit-identical across kernel backends.
    """

    def __init__(self, tags, rules, feature_index, tag_totals, rule_totals,
                 scale, meta=None):
        self.tags = tuple(tags)
        self.rules = tuple(rules)
        self.feature_index = dict(feature_index)
        self.tag_totals = tag_totals
        self.rule_totals = rule_totals
        self.scale = int(scale)
        self.meta = dict(meta or {})
        self._tag_index = {t: i for i, t in enumerate(self.tags)}
        self._rule_index = {r: i for i, r in enumerate(self.rules)}

    def feature_ids(self, feats) -> np.ndarray:
        idx = self.feature_index
        known = [idx[f] for f in feats if f in idx]
        return np.asarray(known, dtype=np.int32)

    def __eq__(self, other):
        if not isinstance(other, TaggerModel):
            return NotImplemented
        return model_to_bytes(self) == model_to_bytes(other)


def _softmax(scores: np.ndarray, temperature: float) -> np.ndarray:
    z = scores / temperature
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def corpus_fingerprint(corpus) -> str:
    """Stable sha256 over the (form, lemma, tag) content of a corpus."""
    h = hashlib.sha256()
    for sent in corpus:
        for tok in sent.tokens:
            h.update(
                f"{tok.form}\t{tok.lemma or ''}\t{tok.xpos or ''}\n".encode("utf-8")
            )
        h.update(b"\n")
    return h.hexdigest()


def _gold_targets(corpus):
    """Extract per-sentence forms, gold tags and induced gold rules."""
    data = []
    for si, sent in enumerate(corpus):
        forms = sent.forms()
        tags, rules = [], []
        for tok in sent.tokens:
            if tok.lemma is None or tok.xpos is None:
                raise CorpusFormatError(
                    f"sentence {si + 1}, token {tok.id}: gold lemma and tag required"
                )
            lemma = strip_comments(tok.lemma)
            tags.append(tok.xpos)
            rules.append(induce_rule(tok.form, lemma))
        data.append((forms, tags, rules))
    return data


def train(corpus, epochs: int = 10, seed: int = 1, temperature: float = 1.0):
    """Train the averaged perceptron; deterministic for a fixed seed."""
    corpus = list(corpus)
    if not corpus or all(not s.tokens for s in corpus):
        raise EmptyCorpusError("training corpus has no tokens")
    if epochs < 1:
        raise ValueError("epochs must be >= 1")

    data = _gold_targets(corpus)
    tags = sorted({t for _, ts, _ in data for t in ts})
    rules = sorted({r for _, _, rs in data for r in rs}, key=rule_to_string)
    tag_index = {t: i for i, t in enumerate(tags)}
    rule_index = {r: i for i, r in enumerate(rules)}

    feature_index = {}
    examples = []  # (feature ids, gold tag id, gold rule id) per token
    for forms, gold_tags, gold_rules in data:
        sent_examples = []
        for i in range(len(forms)):
            ids = []
            for feat in token_features(forms, i):
                fid = feature_index.setdefault(feat, len(feature_index))
                ids.append(fid)
            sent_examples.append(
                (
                    np.asarray(ids, dtype=np.int32),
                    tag_index[gold_tags[i]],
                    rule_index[gold_rules[i]],
                )
            )
        examples.append(sent_examples)

    n_feats = len(feature_index)
    tag_w = np.zeros((n_feats, len(tags)), dtype=np.float64)
    tag_tot = np.zeros_like(tag_w)
    tag_stamp = np.zeros(tag_w.shape, dtype=np.int64)
    rule_w = np.zeros((n_feats, len(rules)), dtype=np.float64)
    rule_tot = np.zeros_like(rule_w)
    rule_stamp = np.zeros(rule_w.shape, dtype=np.int64)

    rng = random.Random(seed)
    order = list(range(len(examples)))
    step = 0
    for _ in range(epochs):
        rng.shuffle(order)
        for si in order:
            for ids, gold_tag, gold_rule in examples[si]:
                step += 1
                scores = _kernels.score_rows(tag_w, ids)
                pred = int(np.argmax(scores))
                if pred != gold_tag:
                    _kernels.perceptron_update(
                        tag_w, tag_tot, tag_stamp, ids, gold_tag, pred, step
                    )
                scores = _kernels.score_rows(rule_w, ids)
                pred = int(np.argmax(scores))
                if pred != gold_rule:
                    _kernels.perceptron_update(
                        rule_w, rule_tot, rule_stamp, ids, gold_rule, pred, step
                    )
    _kernels.finalize_totals(tag_w, tag_tot, tag_stamp, step)
    _kernels.finalize_totals(rule_w, rule_tot, rule_stamp, step)

    meta = {
        "epochs": epochs,
        "seed": seed,
        "temperature": temperature,
        "corpus_fingerprint": corpus_fingerprint(corpus),
        "sentences": len(corpus),
        "tokens": step // epochs,
    }
    return TaggerModel(
        tags, rules, feature_index, tag_tot, rule_tot, step, meta=meta
    )


def predict(model: TaggerModel, sentence, temperature: Optional[float] = None):
    """Per-token tag and rule distributions for one sentence.

    `sentence` is a Sentence or a list of surface forms. Unseen features are
    ignored; output distributions always cover the full inventories.
    """
    forms = sentence.forms() if isinstance(sentence, Sentence) else list(sentence)
    if temperature is None:
        temperature = float(model.meta.get("temperature", 1.0))
    out = []
    scale = float(model.scale)
    for i in range(len(forms)):
        ids = model.feature_ids(token_features(forms, i))
        tag_scores = _kernels.score_rows(model.tag_totals, ids) / scale
        rule_scores = _kernels.score_rows(model.rule_totals, ids) / scale
        tag_probs = _softmax(np.asarray(tag_scores), temperature)
        rule_probs = _softmax(np.asarray(rule_scores), temperature)
        out.append(
            TokenDistributions(
                tag_probs=dict(zip(model.tags, tag_probs.tolist())),
                rule_probs=dict(zip(model.rules, rule_probs.tolist())),
            )
        )
    return out


# ---------------------------------------------------------------------------
# Model serialization (versioned binary: magic, version, zlib payload of a
# JSON header line followed by the two raw little-endian float64 matrices).


def model_to_bytes(model: TaggerModel) -> bytes:
    features = [None] * len(model.feature_index)
    for feat, idx in model.feature_index.items():
        features[idx] = feat
    header = json.dumps(
        {
            "tags": list(model.tags),
            "rules": [rule_to_string(r) for r in model.rules],
            "features": features,
            "scale": model.scale,
            "meta": model.meta,
        },
        ensure_ascii=False,
        sort_keys=True,
        separators=(",", ":"),
    ).encode("utf-8")
    body = io.BytesIO()
    body.write(header)
    body.write(b"\n")
    body.write(np.ascontiguousarray(model.tag_totals, dtype="<f8").tobytes())
    body.write(np.ascontiguousarray(model.rule_totals, dtype="<f8").tobytes())
    payload = zlib.compress(body.getvalue(), level=6)
    return _MAGIC + struct.pack("<I", _VERSION) + payload


def model_from_bytes(blob: bytes) -> TaggerModel:
    if len(blob) < 8 or blob[:4] != _MAGIC:
        raise CorruptFileError("not a tagger model file")
    (version,) = struct.unpack("<I", blob[4:8])
    if version != _VERSION:
        raise VersionMismatchError(f"model version {version}, expected {_VERSION}")
    try:
        body = zlib.decompress(blob[8:])
    except zlib.error as exc:
        raise CorruptFileError(f"corrupt model payload: {exc}") from exc
    nl = body.find(b"\n")
    if nl < 0:
        raise CorruptFileError("model header missing")
    try:
        header = json.loads(body[:nl].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptFileError(f"corrupt model header: {exc}") from exc
    tags = header["tags"]
    rules = [rule_from_string(s) for s in header["rules"]]
    features = header["features"]
    scale = header["scale"]
    n_feats = len(features)
    raw = body[nl + 1 :]
    expected = n_feats * (len(tags) + len(rules)) * 8
    if len(raw) != expected:
        raise CorruptFileError(
            f"model matrices have {len(raw)} bytes, expected {expected}"
        )
    split = n_feats * len(tags) * 8
    tag_totals = (
        np.frombuffer(raw[:split], dtype="<f8").reshape(n_feats, len(tags)).copy()
    )
    rule_totals = (
        np.frombuffer(raw[split:], dtype="<f8").reshape(n_feats, len(rules)).copy()
    )
    feature_index = {f: i for i, f in enumerate(features)}
    return TaggerModel(
        tags,
        rules,
        feature_index,
        tag_totals,
        rule_totals,
        scale,
        meta=header.get("meta", {}),
    )


def save_model(model: TaggerModel, path) -> None:
    with open(path, "wb") as fh:
        fh.write(model_to_bytes(model))


def load_model(path) -> TaggerModel:
    with open(path, "rb") as fh:
        return model_from_bytes(fh.read())


# ---------------------------------------------------------------------------
# External distributions (JSON lines)


@dataclass(frozen=True)
class DistributionSentence:
    """Forms plus their externally supplied distributions, one sentence."""

    forms: tuple
    distributions: tuple


def _dist_from_pairs(pairs, inventory, key_parse, lineno):
    probs = {}
    for entry in pairs:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ParseError(f"expected [key, probability] pairs, got {entry!r}",
                             lineno)
        key_raw, prob = entry
        if not isinstance(prob, (int, float)) or isinstance(prob, bool):
            raise ParseError(f"probability must be a number, got {prob!r}", lineno)
        if prob < 0:
            raise NegativeProbabilityError(
                f"line {lineno}: negative probability {prob} for {key_raw!r}"
            )
        key = key_parse(key_raw, lineno)
        if key not in inventory:
            raise ParseError(f"{key_raw!r} is not in the model inventory", lineno)
        probs[key] = probs.get(key, 0.0) + float(prob)
    total = sum(probs.values())
    if total <= 0.0:
        raise ParseError("probabilities sum to zero", lineno)
    full = {key: 0.0 for key in inventory}
    for key, p in probs.items():
        full[key] = p / total
    return full


def _parse_tag(raw, lineno):
    if not isinstance(raw, str) or not raw:
        raise ParseError(f"bad tag key {raw!r}", lineno)
    return raw


def _parse_rule(raw, lineno):
    if not isinstance(raw, str):
        raise UnknownRuleEncodingError(f"bad rule key {raw!r}", lineno)
    try:
        return rule_from_string(raw)
    except ParseError as exc:
        raise UnknownRuleEncodingError(
            f"undecodable rule {raw!r}: {exc}", lineno
        ) from exc


def load_external_distributions(source, tag_inventory, rule_inventory):
    """Read a JSON-lines distribution file into DistributionSentence records.

    `source` is a path or an open text stream. Inventories fix the key sets;
    every token object must stay inside them.
    """
    tag_inv = list(tag_inventory)
    rule_inv = list(rule_inventory)
    tag_set = dict.fromkeys(tag_inv)
    rule_set = dict.fromkeys(rule_inv)

    if hasattr(source, "read"):
        lines = source.read().splitlines()
    else:
        with open(source, encoding="utf-8") as fh:
            lines = fh.read().splitlines()

    sentences = []
    forms, dists = [], []

    def flush():
        nonlocal forms, dists
        if forms:
            sentences.append(DistributionSentence(tuple(forms), tuple(dists)))
        forms, dists = [], []

    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            flush()
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", lineno) from exc
        if not isinstance(obj, dict) or "form" not in obj:
            raise ParseError("token object must carry a 'form' field", lineno)
        form = obj["form"]
        if not isinstance(form, str) or not form:
            raise ParseError(f"bad form {form!r}", lineno)
        tag_probs = _dist_from_pairs(
            obj.get("tags", []), tag_set, _parse_tag, lineno
        )
        rule_probs = _dist_from_pairs(
            obj.get("rules", []), rule_set, _parse_rule, lineno
        )
        forms.append(form)
        dists.append(TokenDistributions(tag_probs, rule_probs))
    flush()
    return sentences
