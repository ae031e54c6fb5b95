"""Shared test utilities: independent oracles and synthetic Czech fixtures.

The oracles re-derive expected values by brute force and stay independent of
the library code paths they check.
"""

import random

from dictag.conllu import Sentence, Token

# ---------------------------------------------------------------------------
# Independent oracles


def oracle_lcs(a, b):
    """Brute-force longest common substring: every anchor pair, maximal run.

    Ties resolve to the smallest start in `a`, then in `b`.
    """
    candidates = []
    for sa in range(len(a)):
        for sb in range(len(b)):
            run = 0
            while (
                sa + run < len(a)
                and sb + run < len(b)
                and a[sa + run] == b[sb + run]
            ):
                run += 1
            if run:
                candidates.append((run, sa, sb))
    if not candidates:
        return 0, 0, 0
    best_len = max(c[0] for c in candidates)
    _, sa, sb = min((c for c in candidates if c[0] == best_len),
                    key=lambda c: (c[1], c[2]))
    return best_len, sa, sb


def oracle_casing(text):
    """Independent casing classification: 'lower'/'first'/'upper' or ranges."""
    cased = [ch for ch in text if ch.lower() != ch.upper()]
    ups = [ch != ch.lower() for ch in cased]
    if not any(ups):
        return "lower"
    if ups[0] and not any(ups[1:]):
        return "first"
    if all(ups):
        return "upper"
    ranges = []
    start = None
    for i, ch in enumerate(text):
        if ch != ch.lower():
            if start is None:
                start = i
        elif start is not None:
            ranges.append((start, i))
            start = None
    if start is not None:
        ranges.append((start, len(text)))
    return tuple(ranges)


def oracle_induce(form, lemma_raw):
    """Expected rule pieces for a (form, lemma) pair, derived independently.

    Returns a dict with either kind="absolute" and the replacement, or
    kind="affix" with the four edit fields, plus the casing classification.
    """
    f, l = form.lower(), lemma_raw.lower()
    length, sf, sl = oracle_lcs(f, l)
    casing = oracle_casing(lemma_raw)
    if length == 0:
        return {"kind": "absolute", "replacement": l, "casing": casing}
    return {
        "kind": "affix",
        "strip_prefix": sf,
        "prefix_insert": l[:sl],
        "strip_suffix": len(f) - (sf + length),
        "suffix_insert": l[sl + length:],
        "casing": casing,
    }


def oracle_apply(rule_desc, form):
    """Apply an oracle_induce description to a form."""
    s = form.lower()
    if rule_desc["kind"] == "absolute":
        out = rule_desc["replacement"]
    else:
        core = s[rule_desc["strip_prefix"]: len(s) - rule_desc["strip_suffix"]]
        out = rule_desc["prefix_insert"] + core + rule_desc["suffix_insert"]
    casing = rule_desc["casing"]
    if casing == "lower":
        return out.lower()
    if casing == "upper":
        return out.upper()
    if casing == "first":
        chars = list(out.lower())
        for i, ch in enumerate(chars):
            if ch.lower() != ch.upper():
                chars[i] = ch.upper()
                break
        return "".join(chars)
    chars = list(out.lower())
    for start, end in casing:
        for i in range(start, min(end, len(chars))):
            chars[i] = chars[i].upper()
    return "".join(chars)


# ---------------------------------------------------------------------------
# Synthetic Czech-like lexicon and corpus

NOUN_TAGS = {
    "nom": "NNIS1-----A----",
    "gen": "NNIS2-----A----",
    "ins": "NNIS7-----A----",
    "pl": "NNIP1-----A----",
}
FEM_TAGS = {
    "nom": "NNFS1-----A----",
    "gen": "NNFS2-----A----",
    "ins": "NNFS7-----A----",
}
ANIM_TAG = "NNMS1-----A----"
ADJ_TAG_M = "AAMS1----1A----"
ADJ_TAG_F = "AAFS1----1A----"
VERB_TAG = "VB-S---3P-AA---"
ADV_TAG = "Dg-------1A----"
ADV_TAG_DB = "Db-------------"
CONJ_TAG = "J,-------------"
PRON_TAG = "PDMS1----------"
PUNCT_TAG = "Z:-------------"
PROPN_TAG = "NNFS1-----A---8"

# (lemma, nominative, genitive, instrumental, plural) with vowel alternations
_MASC_NOUNS = [
    ("hrad", "hrad", "hradu", "hradem", "hrady"),
    ("les", "les", "lesa", "lesem", "lesy"),
    ("most", "most", "mostu", "mostem", "mosty"),
    ("vlak", "vlak", "vlaku", "vlakem", "vlaky"),
    ("mrak", "mrak", "mraku", "mrakem", "mraky"),
    ("plot", "plot", "plotu", "plotem", "ploty"),
    ("soud", "soud", "soudu", "soudem", "soudy"),
    ("úhel", "úhel", "úhlu", "úhlem", "úhly"),
    ("dům", "dům", "domu", "domem", "domy"),
    ("stůl", "stůl", "stolu", "stolem", "stoly"),
    ("vůz", "vůz", "vozu", "vozem", "vozy"),
    ("déšť", "déšť", "deště", "deštěm", "deště"),
]
_FEM_NOUNS = [
    ("žena", "žena", "ženy", "ženou"),
    ("škola", "škola", "školy", "školou"),
    ("kniha", "kniha", "knihy", "knihou"),
    ("ryba", "ryba", "ryby", "rybou"),
    ("hora", "hora", "hory", "horou"),
    ("cesta", "cesta", "cesty", "cestou"),
    ("voda", "voda", "vody", "vodou"),
    ("síla", "síla", "síly", "silou"),
    ("hlava", "hlava", "hlavy", "hlavou"),
    ("přímka", "přímka", "přímky", "přímkou"),
]
_ANIM_NOUNS = [
    ("pes", "pes"),
    ("kůň", "kůň"),
    ("muž", "muž"),
    ("drak", "drak"),
    ("kos", "kos"),
]
_ADJ_STEMS = ["nov", "star", "mlad", "rychl", "velk", "mal", "dobr", "česk"]
_VERBS = [
    ("nese", "nést"),
    ("vede", "vést"),
    ("bere", "brát"),
    ("čte", "číst"),
    ("vaří", "vařit"),
    ("dělá", "dělat"),
    ("zpívá", "zpívat"),
    ("běží", "běžet"),
    ("píše", "psát"),
    ("hraje", "hrát"),
]
_ADVERBS = ["rychle", "pomalu", "dobře", "špatně", "včera", "dnes", "velmi",
            "hodně", "málo", "opět"]
_PROPER = [
    ("Praha", "Praha"),
    ("Prahy", "Praha"),
    ("Brno", "Brno"),
    ("Brna", "Brno"),
    ("Novák", "Novák"),
    ("Nováka", "Novák"),
    ("Karel", "Karel"),
    ("Karla", "Karel"),
]


def lexicon():
    """(form, lemma, tag) triples grouped by slot class."""
    slots = {
        "noun_nom": [], "noun_gen": [], "noun_ins": [], "noun_pl": [],
        "fem_nom": [], "fem_gen": [], "fem_ins": [],
        "anim": [], "adj_m": [], "adj_f": [], "verb": [],
        "adv": [], "propn": [], "pron": [],
    }
    for lemma, nom, gen, ins, pl in _MASC_NOUNS:
        slots["noun_nom"].append((nom, lemma, NOUN_TAGS["nom"]))
        slots["noun_gen"].append((gen, lemma, NOUN_TAGS["gen"]))
        slots["noun_ins"].append((ins, lemma, NOUN_TAGS["ins"]))
        slots["noun_pl"].append((pl, lemma, NOUN_TAGS["pl"]))
    for lemma, nom, gen, ins in _FEM_NOUNS:
        slots["fem_nom"].append((nom, lemma, FEM_TAGS["nom"]))
        slots["fem_gen"].append((gen, lemma, FEM_TAGS["gen"]))
        slots["fem_ins"].append((ins, lemma, FEM_TAGS["ins"]))
    for form, lemma in _ANIM_NOUNS:
        slots["anim"].append((form, lemma, ANIM_TAG))
    for stem in _ADJ_STEMS:
        slots["adj_m"].append((stem + "ý", stem + "ý", ADJ_TAG_M))
        slots["adj_f"].append((stem + "á", stem + "ý", ADJ_TAG_F))
    for form, lemma in _VERBS:
        slots["verb"].append((form, lemma, VERB_TAG))
    for form in _ADVERBS:
        slots["adv"].append((form, form, ADV_TAG))
    for form, lemma in _PROPER:
        slots["propn"].append((form, lemma, PROPN_TAG))
    slots["pron"].append(("ten", "ten", PRON_TAG))
    slots["pron"].append(("tento", "tento", PRON_TAG))
    return slots


_TEMPLATES = [
    ("adj_m", "noun_nom", "verb", "fem_gen", "."),
    ("fem_nom", "verb", "adv", "."),
    ("propn", "verb", "noun_gen", "."),
    ("anim", "verb", "fem_gen", "adv", "."),
    ("adj_f", "fem_nom", "verb", "noun_gen", "."),
    ("pron", "noun_nom", "verb", "adv", "."),
    ("noun_pl", "verb", "fem_ins", "."),
    ("adv", "verb", "adj_m", "noun_nom", "."),
    ("jak_conj", "verb", "fem_nom", "?"),
    ("adj_m", "jak_noun", "verb", "fem_gen", "."),
]

_HOMONYM_CONJ = ("jak", "jak-1", CONJ_TAG)
_HOMONYM_NOUN = ("jak", "jak-2", ANIM_TAG)


def make_corpus(n_sentences=200, seed=7):
    """Deterministic synthetic corpus of annotated sentences."""
    rng = random.Random(seed)
    slots = lexicon()
    sentences = []
    for _ in range(n_sentences):
        template = rng.choice(_TEMPLATES)
        tokens = []
        for slot in template:
            if slot in (".", "?"):
                form, lemma, tag = slot, slot, PUNCT_TAG
            elif slot == "jak_conj":
                form, lemma, tag = _HOMONYM_CONJ
            elif slot == "jak_noun":
                form, lemma, tag = _HOMONYM_NOUN
            else:
                form, lemma, tag = rng.choice(slots[slot])
            if not tokens and form[0].islower() and slot not in (".", "?"):
                # sentence-initial capitalization, mirroring real text
                form = form[0].upper() + form[1:]
            tokens.append((form, lemma, tag))
        sentences.append(
            Sentence(
                tuple(
                    Token(id=i + 1, form=f, lemma=l, xpos=t)
                    for i, (f, l, t) in enumerate(tokens)
                )
            )
        )
    return sentences


def corpus_triples(corpus):
    """All (form, lemma, tag) triples of a corpus, in order."""
    return [
        (tok.form, tok.lemma, tok.xpos)
        for sent in corpus
        for tok in sent.tokens
    ]


def strip_annotations(corpus):
    """Forms-only copy of a corpus (lemma and xpos dropped)."""
    out = []
    for sent in corpus:
        out.append(
            Sentence(
                tuple(
                    Token(id=t.id, form=t.form, misc=t.misc)
                    for t in sent.tokens
                ),
                sent.comments,
                sent.extra_lines,
            )
        )
    return out


def unambiguous_triples(corpus):
    """One analysis per form: the first (lemma, tag) seen for each form."""
    seen = {}
    for form, lemma, tag in corpus_triples(corpus):
        seen.setdefault(form, (lemma, tag))
    return [(form, lemma, tag) for form, (lemma, tag) in seen.items()]


# ---------------------------------------------------------------------------
# Form-lemma pairs for the edit-rule roundtrip fixture

_EXTRA_PAIRS = [
    # abbreviation-style expansions and irregular pairs
    ("úhlům", "úhel"),
    ("úhlech", "úhel"),
    ("Angl", "Anglie"),
    ("Kan", "Kanada"),
    ("kateg", "kategorie"),
    ("zataženo", "zatáhnout"),
    ("el", "elektrický"),
    ("Nig", "Nigérie"),
    ("dožínkách", "dožínky"),
    ("nedaleko", "daleko-1"),
    ("Kristem", "Kristus-3"),
    ("mg", "miligram"),
    ("proklel", "proklít"),
    ("nenesli", "nést"),
    ("Nenesla", "nést"),
    ("jehož", "jehož"),
    ("Piercem", "Pierce"),
    ("nindžové", "nindža"),
    ("g", "gram"),
    ("prostřednictvím", "prostřednictví"),
    ("dešťů", "déšť"),
    ("studiích", "studium"),
    ("MW", "megawatt"),
    ("přímek", "přímka"),
    ("Maď", "Maďarsko"),
    ("kpt", "kapitán"),
    ("So", "sobota"),
    ("Út", "úterý"),
    ("lovochemie", "Lovochemie"),
    ("Fytoplankton", "fytoplankton"),
    ("Kozoroh", "kozoroh"),
    ("ještě", "ještě-2"),
    ("Lincolnem", "Lincoln-3"),
    ("jak", "jak-2"),
    ("USA", "USA"),
    ("OSN", "OSN"),
    ("McDonald", "McDonald"),
    ("iPhonem", "iPhone"),
    ("xylofon", "žert"),  # no shared characters: absolute rule
]

# ---------------------------------------------------------------------------
# Independent rescoring oracle


def rule_descriptor(rule):
    """Plain-tuple view of a library EditRule, for oracle-side comparison."""
    casing = rule.casing
    cdesc = casing.mode if casing.mode != "explicit" else casing.upper_ranges
    if rule.kind == "absolute":
        return ("absolute", rule.replacement, cdesc)
    return (
        "affix",
        rule.strip_prefix,
        rule.prefix_insert,
        rule.strip_suffix,
        rule.suffix_insert,
        cdesc,
    )


def oracle_descriptor(desc):
    """Plain-tuple view of an oracle_induce result."""
    if desc["kind"] == "absolute":
        return ("absolute", desc["replacement"], desc["casing"])
    return (
        "affix",
        desc["strip_prefix"],
        desc["prefix_insert"],
        desc["strip_suffix"],
        desc["suffix_insert"],
        desc["casing"],
    )


def oracle_rescore(analyses, form, tag_probs, rule_probs):
    """Exhaustive re-derivation of the rescoring choice.

    `analyses` are (lemma_raw, tag) pairs exactly as the dictionary would
    order them. Distributions are keyed by tag string and library EditRule;
    rule identity is established through independently derived descriptors.
    Returns (tag, rule_descriptor, lemma, constrained, fallback).
    """
    inventory = {rule_descriptor(r): r for r in rule_probs}

    def unconstrained(fallback):
        best_tag, best_p = None, -1.0
        for tag, p in tag_probs.items():
            if p > best_p:
                best_tag, best_p = tag, p
        best_rule, applicable = None, None
        for rule, p in sorted(rule_probs.items(), key=lambda kv: -kv[1]):
            if rule_descriptor(rule)[0] == "absolute":
                fits = True
            else:
                _, sp, _, ss, _, _ = rule_descriptor(rule)
                fits = sp + ss <= len(form.lower())
            if fits:
                best_rule = rule
                break
        desc = rule_descriptor(best_rule)
        lemma = oracle_apply(_desc_to_oracle(desc), form)
        return best_tag, desc, lemma, False, fallback

    if not analyses:
        return unconstrained(None)

    candidates = []
    for lemma_raw, tag in analyses:
        desc = oracle_descriptor(oracle_induce(form, lemma_raw))
        if tag in tag_probs and desc in inventory:
            rule = inventory[desc]
            candidates.append((tag, desc, lemma_raw, tag_probs[tag],
                               rule_probs[rule]))
    if not candidates:
        return unconstrained("no_valid_pair")

    best = None
    best_key = None
    for tag, desc, lemma_raw, tp, rp in candidates:
        key = (tp * rp, tp)
        if best is None or key > best_key:
            best, best_key = (tag, desc, lemma_raw), key
    fallback = None
    if best_key[0] == 0.0:
        fallback = "all_zero"
        best, best_p = None, -1.0
        for tag, desc, lemma_raw, tp, rp in candidates:
            if tp > best_p:
                best, best_p = (tag, desc, lemma_raw), tp
    tag, desc, lemma_raw = best
    return tag, desc, lemma_raw, True, fallback


def _desc_to_oracle(desc):
    if desc[0] == "absolute":
        return {"kind": "absolute", "replacement": desc[1], "casing": desc[2]}
    return {
        "kind": "affix",
        "strip_prefix": desc[1],
        "prefix_insert": desc[2],
        "strip_suffix": desc[3],
        "suffix_insert": desc[4],
        "casing": desc[5],
    }


_TRIAL_ALPHABET = "abcdě"
_TRIAL_TAG_POOL = [f"T{i:02d}" for i in range(24)]


def _trial_word(rng, lo=1, hi=6):
    word = "".join(
        rng.choice(_TRIAL_ALPHABET) for _ in range(rng.randint(lo, hi))
    )
    if rng.random() < 0.2:
        word = word.capitalize()
    if rng.random() < 0.15:
        word = f"{word}-{rng.randint(1, 3)}"
    return word


def random_rescore_trial(rng):
    """One randomized rescoring scenario.

    Returns (analysis_triples, form, tag_inventory, rule_inventory_lemmas)
    where rule_inventory_lemmas are (other_form, lemma) pairs whose induced
    rules make up the rule inventory, plus flags controlling which of this
    form's own rules enter the inventory.
    """
    form = _trial_word(rng)
    n_tags = rng.randint(1, 20)
    tag_inventory = rng.sample(_TRIAL_TAG_POOL, n_tags)
    n_analyses = rng.randint(0, 10)
    analyses = []
    seen = set()
    for _ in range(n_analyses):
        lemma = _trial_word(rng)
        # occasionally use a tag outside the model inventory
        if rng.random() < 0.15:
            tag = rng.choice(_TRIAL_TAG_POOL)
        else:
            tag = rng.choice(tag_inventory)
        if (lemma, tag) in seen:
            continue
        seen.add((lemma, tag))
        analyses.append((lemma, tag))
    # rule inventory: some of this form's own rules + noise rules; one
    # identity pair guarantees an applicable rule for the passthrough path
    own_included = [pair for pair in analyses if rng.random() < 0.7]
    noise = [(_trial_word(rng), _trial_word(rng)) for _ in range(rng.randint(0, 8))]
    w = _trial_word(rng)
    noise.append((w.lower(), w.lower()))
    return form, tag_inventory, analyses, own_included, noise


def random_distribution(rng, keys, zero_rate=0.25):
    """Random probabilities over keys, with exact zeros mixed in."""
    raw = []
    for _ in keys:
        raw.append(0.0 if rng.random() < zero_rate else rng.random())
    if sum(raw) == 0.0:
        raw[rng.randrange(len(raw))] = 1.0
    total = sum(raw)
    return {k: v / total for k, v in zip(keys, raw)}


_CZ_LOWER = "aábcčdďeéěfghchiíjklmnňoóprřsštťuúůvxyýzž"


def roundtrip_pairs(n=1200, seed=11):
    """Deterministic (form, lemma) pairs: diacritics, senses, mixed casing."""
    rng = random.Random(seed)
    pairs = list(_EXTRA_PAIRS)
    slots = lexicon()
    for entries in slots.values():
        for form, lemma, _ in entries:
            pairs.append((form, lemma))
    suffix_pool = ["", "a", "u", "em", "ům", "ech", "ách", "ou", "y", "í",
                   "ové", "emi", "ami"]
    lemma_suffix_pool = ["", "a", "o", "ý", "it", "nout", "ce", "ie"]
    while len(pairs) < n:
        stem_len = rng.randint(1, 7)
        stem = "".join(rng.choice(_CZ_LOWER) for _ in range(stem_len))
        form = stem + rng.choice(suffix_pool)
        lemma = stem + rng.choice(lemma_suffix_pool)
        if not form or not lemma:
            continue
        style = rng.random()
        if style < 0.15:
            form = form.capitalize()
            lemma = lemma.capitalize()
        elif style < 0.25:
            form = form.upper()
            lemma = lemma.upper()
        elif style < 0.3:
            lemma = lemma.capitalize()
        if rng.random() < 0.15:
            lemma = f"{lemma}-{rng.randint(1, 99)}"
        pairs.append((form, lemma))
    return pairs[:n]
