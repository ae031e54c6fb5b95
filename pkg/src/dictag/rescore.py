"""Dictionary-constrained rescoring of per-token distributions.

For a form the dictionary knows, only (tag, edit rule) pairs that reproduce
one of its dictionary analyses stay in play, and the pair with the largest
tag-probability times rule-probability wins. Unknown forms pass through with
the model's unconstrained argmax, so every token gets an analysis.

Tie-breaking and degenerate cases are fixed for reproducibility: equal
products fall back to the higher tag probability, then to dictionary
analysis order; an all-zero product set is ranked by tag probability alone;
a known form whose analyses all map outside the model's rule inventory falls
back to the unconstrained argmax.
"""

from dataclasses import dataclass
from typing import Optional

from .errors import LengthMismatchError
from .lemma_rules import (
    IDENTITY_RULE,
    EditRule,
    apply_rule,
    induce_rule,
    rule_applicable,
    rule_to_string,
)
from .morphdict import MorphDict
from .tagger import TokenDistributions

NO_VALID_PAIR = "no_valid_pair"
ALL_ZERO = "all_zero"


@dataclass(frozen=True)
class RescoredChoice:
    """The selected (tag, rule) pair and the lemma the rule produced."""

    tag: str
    rule: EditRule
    lemma: str
    score: float
    constrained: bool
    fallback_used: Optional[str] = None


def _argmax(probs: dict):
    best_key, best_p = None, -1.0
    for key, p in probs.items():
        if p > best_p:
            best_key, best_p = key, p
    return best_key, best_p


def _unconstrained(form: str, dists: TokenDistributions, fallback=None):
    tag, tag_p = _argmax(dists.tag_probs)
    rule, rule_p = None, 0.0
    for r, p in sorted(dists.rule_probs.items(), key=lambda kv: -kv[1]):
        if rule_applicable(r, form):
            rule, rule_p = r, p
            break
    if rule is None:
        # Degenerate inventory where no rule fits this form; fall back to
        # the identity rule so that the output stays total.
        rule, rule_p = IDENTITY_RULE, 0.0
    return RescoredChoice(
        tag=tag,
        rule=rule,
        lemma=apply_rule(rule, form),
        score=tag_p * rule_p,
        constrained=False,
        fallback_used=fallback,
    )


def _candidates(mdict: MorphDict, form: str, dists: TokenDistributions):
    """Dictionary analyses mapped to in-inventory (tag, rule) pairs, in
    dictionary order."""
    out = []
    for analysis in mdict.lookup(form):
        rule = induce_rule(form, analysis.lemma)
        if analysis.tag in dists.tag_probs and rule in dists.rule_probs:
            out.append((analysis, rule))
    return out


def valid_pairs(mdict: MorphDict, form: str, dists: TokenDistributions) -> set:
    """The (tag, rule) pairs licensed by the dictionary for this form."""
    return {(a.tag, rule) for a, rule in _candidates(mdict, form, dists)}


def rescore_token(
    mdict: MorphDict, form: str, dists: TokenDistributions
) -> RescoredChoice:
    """Constrain one token's distributions by the dictionary and pick a pair."""
    analyses = mdict.lookup(form)
    if not analyses:
        return _unconstrained(form, dists)
    candidates = _candidates(mdict, form, dists)
    if not candidates:
        return _unconstrained(form, dists, fallback=NO_VALID_PAIR)

    best = None
    best_key = None
    for analysis, rule in candidates:
        tag_p = dists.tag_probs[analysis.tag]
        rule_p = dists.rule_probs[rule]
        key = (tag_p * rule_p, tag_p)
        if best is None or key > best_key:
            best = (analysis, rule, tag_p, rule_p)
            best_key = key

    fallback = None
    if best_key[0] == 0.0:
        fallback = ALL_ZERO
        best = None
        best_p = -1.0
        for analysis, rule in candidates:
            tag_p = dists.tag_probs[analysis.tag]
            if tag_p > best_p:
                best = (analysis, rule, tag_p, dists.rule_probs[rule])
                best_p = tag_p

    analysis, rule, tag_p, rule_p = best
    return RescoredChoice(
        tag=analysis.tag,
        rule=rule,
        lemma=apply_rule(rule, form),
        score=tag_p * rule_p,
        constrained=True,
        fallback_used=fallback,
    )


def rescore_sentence(mdict: MorphDict, forms, dists_list) -> list:
    """Token-wise rescoring; tokens do not interact."""
    if len(forms) != len(dists_list):
        raise LengthMismatchError(
            f"{len(forms)} forms vs {len(dists_list)} distributions"
        )
    return [rescore_token(mdict, f, d) for f, d in zip(forms, dists_list)]


def candidate_table(mdict: MorphDict, form: str, dists: TokenDistributions):
    """Debug view: every dictionary candidate with its probabilities."""
    chosen = rescore_token(mdict, form, dists)
    rows = []
    for analysis, rule in _candidates(mdict, form, dists):
        tag_p = dists.tag_probs[analysis.tag]
        rule_p = dists.rule_probs[rule]
        rows.append(
            {
                "form": form,
                "tag": analysis.tag,
                "rule": rule_to_string(rule),
                "lemma": analysis.lemma.raw,
                "tag_prob": tag_p,
                "rule_prob": rule_p,
                "product": tag_p * rule_p,
                "chosen": analysis.tag == chosen.tag and rule == chosen.rule,
            }
        )
    return rows
