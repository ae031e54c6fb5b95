"""Accuracy, error reduction, ambiguity buckets and error categorization.

Lemma comparison is sense-sensitive but comment-insensitive: "jak-2" and
"jak-3" differ, "jak-2" and "jak-2_^(zvire)" do not. Macro averages are
unweighted means over named corpus sections.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Optional

from .errors import AlignmentError
from .lemma_rules import strip_comments
from .morphdict import MorphDict

NON_LEMMA = "non_lemma"
SENSE_ERROR = "sense_error"
CASING_ERROR = "casing_error"
OTHER_LEMMA_ERROR = "other_lemma_error"
TAG_ERROR = "tag_error"

LEMMA_CATEGORIES = (NON_LEMMA, SENSE_ERROR, CASING_ERROR, OTHER_LEMMA_ERROR)

BUCKET_LABELS = tuple(str(i) for i in range(9)) + ("9+",)


def _norm_lemma(lemma: Optional[str]) -> Optional[str]:
    if lemma is None:
        return None
    return strip_comments(lemma).raw


def _flatten(sentences):
    return [tok for sent in sentences for tok in sent.tokens]


def _aligned(gold, system):
    gold_toks = _flatten(gold)
    sys_toks = _flatten(system)
    if len(gold_toks) != len(sys_toks):
        raise AlignmentError(
            f"token counts differ: gold {len(gold_toks)} vs system {len(sys_toks)}"
        )
    for i, (g, s) in enumerate(zip(gold_toks, sys_toks)):
        if g.form != s.form:
            raise AlignmentError(
                f"token {i + 1}: forms differ: gold {g.form!r} vs system {s.form!r}"
            )
    return list(zip(gold_toks, sys_toks))


def _field_values(g, s, fld):
    if fld == "lemma":
        gv, sv = _norm_lemma(g.lemma), _norm_lemma(s.lemma)
    elif fld == "pos":
        gv, sv = g.xpos, s.xpos
    else:
        raise ValueError(f"field must be 'lemma' or 'pos', got {fld!r}")
    if gv is None:
        raise AlignmentError(f"gold token {g.form!r} is missing its {fld}")
    return gv, sv


def accuracy(gold, system, fld: str) -> float:
    """Exact-match percentage over aligned token streams."""
    pairs = _aligned(gold, system)
    if not pairs:
        raise AlignmentError("empty token streams")
    correct = 0
    for g, s in pairs:
        gv, sv = _field_values(g, s, fld)
        correct += gv == sv
    return 100.0 * correct / len(pairs)


def error_reduction(baseline_acc: float, new_acc: float) -> float:
    """Relative shrinkage of the error rate, in percent."""
    for v in (baseline_acc, new_acc):
        if not 0.0 <= v <= 100.0:
            raise ValueError(f"accuracy out of range: {v}")
    if baseline_acc == 100.0:
        raise ZeroDivisionError("baseline accuracy is 100: no errors to reduce")
    return 100.0 * ((100.0 - baseline_acc) - (100.0 - new_acc)) / (100.0 - baseline_acc)


def macro_average(per_section) -> float:
    """Unweighted mean of per-section accuracies."""
    values = list(per_section)
    if not values:
        raise ValueError("macro average of zero sections")
    return sum(values) / len(values)


@dataclass
class BucketStats:
    count: int = 0
    pos_correct: int = 0
    lemma_correct: int = 0
    weight: float = 0.0

    @property
    def pos_acc(self) -> Optional[float]:
        return 100.0 * self.pos_correct / self.count if self.count else None

    @property
    def lemma_acc(self) -> Optional[float]:
        return 100.0 * self.lemma_correct / self.count if self.count else None


def bucket_by_ambiguity(mdict: MorphDict, gold, system) -> dict:
    """Micro accuracies per dictionary-ambiguity bucket (0, 1, ..., 8, 9+)."""
    pairs = _aligned(gold, system)
    buckets = {label: BucketStats() for label in BUCKET_LABELS}
    for g, s in pairs:
        amb = mdict.ambiguity(g.form)
        label = "9+" if amb >= 9 else str(amb)
        st = buckets[label]
        st.count += 1
        gl, sl = _field_values(g, s, "lemma")
        gp, sp = _field_values(g, s, "pos")
        st.lemma_correct += gl == sl
        st.pos_correct += gp == sp
    total = len(pairs)
    if total:
        for st in buckets.values():
            st.weight = 100.0 * st.count / total
    return buckets


def categorize_lemma_error(mdict: MorphDict, gold_lemma: str, system_lemma: str) -> str:
    """Mutually exclusive category for one wrong lemma, in priority order."""
    if not mdict.is_known_lemma(system_lemma):
        return NON_LEMMA
    g = strip_comments(gold_lemma)
    s = strip_comments(system_lemma)
    if g.proper == s.proper and g.sense != s.sense:
        return SENSE_ERROR
    if g.raw != s.raw and g.raw.lower() == s.raw.lower():
        return CASING_ERROR
    return OTHER_LEMMA_ERROR


@dataclass
class CorrectionRow:
    form: str
    system_lemma: str
    gold_lemma: str
    count: int
    is_non_lemma: bool


@dataclass
class ErrorAnalysis:
    categories: dict
    corrections: list = field(default_factory=list)


def categorize_errors(mdict: MorphDict, gold, system) -> ErrorAnalysis:
    """Counts per error category plus the correction table of lemma errors."""
    pairs = _aligned(gold, system)
    counts = Counter({cat: 0 for cat in LEMMA_CATEGORIES + (TAG_ERROR,)})
    grouped = Counter()
    for g, s in pairs:
        gl, sl = _field_values(g, s, "lemma")
        gp, sp = _field_values(g, s, "pos")
        if gp != sp:
            counts[TAG_ERROR] += 1
        if gl != sl:
            counts[categorize_lemma_error(mdict, gl, sl)] += 1
            grouped[(g.form, sl, gl)] += 1
    corrections = [
        CorrectionRow(
            form=form,
            system_lemma=sl,
            gold_lemma=gl,
            count=count,
            is_non_lemma=not mdict.is_known_lemma(sl),
        )
        for (form, sl, gl), count in grouped.items()
    ]
    corrections.sort(key=lambda row: (-row.count, row.form))
    return ErrorAnalysis(categories=dict(counts), corrections=corrections)


@dataclass
class DiffStats:
    fixed: int
    introduced: int
    both_wrong: int


def diff_systems(gold, system_a, system_b, fld: str = "lemma") -> DiffStats:
    """Error set algebra between two systems relative to gold."""
    pairs_a = _aligned(gold, system_a)
    pairs_b = _aligned(gold, system_b)
    if len(pairs_a) != len(pairs_b):
        raise AlignmentError("system streams have different lengths")
    fixed = introduced = both_wrong = 0
    for (g, a), (_, b) in zip(pairs_a, pairs_b):
        gv, av = _field_values(g, a, fld)
        _, bv = _field_values(g, b, fld)
        a_wrong = av != gv
        b_wrong = bv != gv
        if a_wrong and not b_wrong:
            fixed += 1
        elif not a_wrong and b_wrong:
            introduced += 1
        elif a_wrong and b_wrong:
            both_wrong += 1
    return DiffStats(fixed=fixed, introduced=introduced, both_wrong=both_wrong)


@dataclass
class SectionScore:
    lemma_acc: float
    pos_acc: float
    tokens: int


@dataclass
class EvalReport:
    per_section: dict
    macro_avg: dict
    error_reductions: dict
    ambiguity_buckets: Optional[dict] = None
    error_analysis: Optional[ErrorAnalysis] = None

    def to_dict(self) -> dict:
        out = {
            "per_section": {
                name: {
                    "lemma_acc": s.lemma_acc,
                    "pos_acc": s.pos_acc,
                    "tokens": s.tokens,
                }
                for name, s in self.per_section.items()
            },
            "macro_avg": self.macro_avg,
            "error_reductions": self.error_reductions,
        }
        if self.ambiguity_buckets is not None:
            out["ambiguity_buckets"] = {
                label: {
                    "count": st.count,
                    "weight": st.weight,
                    "pos_acc": st.pos_acc,
                    "lemma_acc": st.lemma_acc,
                }
                for label, st in self.ambiguity_buckets.items()
            }
        if self.error_analysis is not None:
            out["error_categories"] = self.error_analysis.categories
            out["corrections"] = [
                {
                    "form": r.form,
                    "system_lemma": r.system_lemma,
                    "gold_lemma": r.gold_lemma,
                    "count": r.count,
                    "is_non_lemma": r.is_non_lemma,
                }
                for r in self.error_analysis.corrections
            ]
        return out

    def render(self) -> str:
        lines = []
        lines.append(f"{'section':<12} {'tokens':>8} {'lemma%':>8} {'pos%':>8}")
        for name, s in self.per_section.items():
            lines.append(
                f"{name:<12} {s.tokens:>8} {s.lemma_acc:>8.2f} {s.pos_acc:>8.2f}"
            )
        lines.append(
            f"{'macro avg':<12} {'':>8} {self.macro_avg['lemma_acc']:>8.2f} "
            f"{self.macro_avg['pos_acc']:>8.2f}"
        )
        for name, red in self.error_reductions.items():
            parts = [
                f"{fld} {red[fld]:.1f}%" if red[fld] is not None else f"{fld} n/a"
                for fld in ("lemma", "pos")
            ]
            lines.append(f"error reduction vs {name}: " + "  ".join(parts))
        if self.ambiguity_buckets:
            lines.append("")
            lines.append(f"{'analyses':<10} {'weight%':>8} {'pos%':>8} {'lemma%':>8}")
            for label, st in self.ambiguity_buckets.items():
                if st.count == 0:
                    continue
                lines.append(
                    f"{label:<10} {st.weight:>8.2f} {st.pos_acc:>8.2f} "
                    f"{st.lemma_acc:>8.2f}"
                )
        if self.error_analysis:
            lines.append("")
            cats = self.error_analysis.categories
            lines.append(
                "lemma errors: "
                + "  ".join(f"{cat}={cats[cat]}" for cat in LEMMA_CATEGORIES)
                + f"  {TAG_ERROR}={cats[TAG_ERROR]}"
            )
        return "\n".join(lines)


def build_report(gold_by_section, system_by_section, mdict=None,
                 baselines=None) -> EvalReport:
    """Full evaluation over named sections, with optional baselines.

    `baselines` maps a baseline name to its own system outputs keyed by the
    same section names; error reductions compare macro averages.
    """
    if set(gold_by_section) != set(system_by_section):
        raise AlignmentError("gold and system section names differ")
    per_section = {}
    for name in gold_by_section:
        gold = gold_by_section[name]
        system = system_by_section[name]
        per_section[name] = SectionScore(
            lemma_acc=accuracy(gold, system, "lemma"),
            pos_acc=accuracy(gold, system, "pos"),
            tokens=sum(len(s.tokens) for s in gold),
        )
    macro = {
        "lemma_acc": macro_average(s.lemma_acc for s in per_section.values()),
        "pos_acc": macro_average(s.pos_acc for s in per_section.values()),
    }
    reductions = {}
    for base_name, base_sections in (baselines or {}).items():
        base_lemma = macro_average(
            accuracy(gold_by_section[n], base_sections[n], "lemma")
            for n in gold_by_section
        )
        base_pos = macro_average(
            accuracy(gold_by_section[n], base_sections[n], "pos")
            for n in gold_by_section
        )
        reductions[base_name] = {
            # a perfect baseline leaves no error to reduce
            "lemma": (
                error_reduction(base_lemma, macro["lemma_acc"])
                if base_lemma < 100.0
                else None
            ),
            "pos": (
                error_reduction(base_pos, macro["pos_acc"])
                if base_pos < 100.0
                else None
            ),
        }
    buckets = None
    analysis = None
    if mdict is not None:
        all_gold = [s for n in sorted(gold_by_section) for s in gold_by_section[n]]
        all_sys = [s for n in sorted(gold_by_section) for s in system_by_section[n]]
        buckets = bucket_by_ambiguity(mdict, all_gold, all_sys)
        analysis = categorize_errors(mdict, all_gold, all_sys)
    return EvalReport(
        per_section=per_section,
        macro_avg=macro,
        error_reductions=reductions,
        ambiguity_buckets=buckets,
        error_analysis=analysis,
    )
