"""Annotation and the two-stage self-training procedure."""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from .conllu import Sentence
from .errors import EmptyCorpusError
from .morphdict import MorphDict
from .rescore import rescore_sentence
from .tagger import TaggerModel, corpus_fingerprint, predict, train

_EMPTY_DICT = MorphDict({}, source="empty")


def _annotate_one(model, mdict, temperature, sentence: Sentence) -> Sentence:
    dists = predict(model, sentence, temperature)
    choices = rescore_sentence(mdict, sentence.forms(), dists)
    tokens = tuple(
        tok.with_annotation(choice.lemma, choice.tag)
        for tok, choice in zip(sentence.tokens, choices)
    )
    return replace(sentence, tokens=tokens)


def annotate(model: TaggerModel, sentences, mdict=None, temperature=None,
             threads: int = 1):
    """Fill lemma and xpos on every token: predict, then rescore.

    Without a dictionary this is plain unconstrained decoding (an empty
    dictionary treats every form as out-of-vocabulary).
    """
    mdict = mdict if mdict is not None else _EMPTY_DICT
    sentences = list(sentences)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(
                pool.map(
                    lambda s: _annotate_one(model, mdict, temperature, s),
                    sentences,
                )
            )
    return [_annotate_one(model, mdict, temperature, s) for s in sentences]


@dataclass
class SelfTrainResult:
    stage1: TaggerModel
    stage2: TaggerModel
    provenance: dict

    @property
    def model(self) -> TaggerModel:
        return self.stage2


def self_train(gold_part, raw_part, epochs: int = 10, seed: int = 1,
               mdict=None, threads: int = 1) -> SelfTrainResult:
    """Train on gold data, auto-annotate the raw part, retrain on the union.

    The raw part's existing annotations (if any) are overwritten by stage-1
    output. An empty raw part degenerates to plain training: stage 2 equals
    stage 1 byte for byte.
    """
    gold_part = list(gold_part)
    raw_part = list(raw_part)
    if not gold_part:
        raise EmptyCorpusError("gold part is empty")

    stage1 = train(gold_part, epochs=epochs, seed=seed)
    auto = annotate(stage1, raw_part, mdict=mdict, threads=threads)
    stage2 = train(gold_part + auto, epochs=epochs, seed=seed)

    provenance = {
        "stage1": {
            "corpus_fingerprint": corpus_fingerprint(gold_part),
            "sentences": len(gold_part),
            "epochs": epochs,
            "seed": seed,
        },
        "stage2": {
            "corpus_fingerprint": corpus_fingerprint(gold_part + auto),
            "sentences": len(gold_part) + len(auto),
            "epochs": epochs,
            "seed": seed,
        },
        "auto_annotated_sentences": len(auto),
        "dictionary": mdict.source if mdict is not None else None,
    }
    return SelfTrainResult(stage1=stage1, stage2=stage2, provenance=provenance)
