import pytest

from dictag.morphdict import MorphDict
from dictag.tagger import train

from helpers import (
    ADV_TAG_DB,
    ANIM_TAG,
    CONJ_TAG,
    FEM_TAGS,
    corpus_triples,
    lexicon,
    make_corpus,
    unambiguous_triples,
)


def ambiguity_extras():
    """Extra dictionary analyses: senses, casing pairs, high-ambiguity forms."""
    extras = [
        ("hrady", "hrad", "NNIP4-----A----"),
        ("ženy", "žena", "NNFP1-----A----"),
        ("ženy", "žena", "NNFP4-----A----"),
        ("jak", "jak-1", CONJ_TAG),
        ("jak", "jak-2", ANIM_TAG),
        ("ještě", "ještě-1", ADV_TAG_DB),
        ("ještě", "ještě-2", ADV_TAG_DB),
        ("Kozoroh", "Kozoroh", ANIM_TAG),
        ("kozoroh", "kozoroh", ANIM_TAG),
        ("Lovochemie", "Lovochemie", FEM_TAGS["nom"]),
        ("lovochemie", "lovochemie", FEM_TAGS["nom"]),
        ("úhlů", "úhel", "NNIS2-----A----"),
    ]
    for case in range(1, 8):
        extras.append(("stání", "stání", f"NNNS{case}-----A----"))
    extras.append(("stání", "stání", "NNNP1-----A----"))
    extras.append(("stání", "stání", "NNNP4-----A----"))
    return extras


def build_fixture_dict(corpus=None):
    triples = []
    for entries in lexicon().values():
        triples.extend(entries)
    if corpus is not None:
        triples.extend(corpus_triples(corpus))
    triples.extend(ambiguity_extras())
    return MorphDict.from_triples(triples, source="fixture")


@pytest.fixture(scope="session")
def corpus200():
    return make_corpus(200, seed=7)


@pytest.fixture(scope="session")
def model200(corpus200):
    return train(corpus200, epochs=12, seed=3)


@pytest.fixture(scope="session")
def fixture_dict(corpus200):
    return build_fixture_dict(corpus200)


@pytest.fixture(scope="session")
def unambiguous_dict(corpus200):
    return MorphDict.from_triples(
        unambiguous_triples(corpus200), source="unambiguous"
    )
