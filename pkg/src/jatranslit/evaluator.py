"""Exact-match accuracy, edit-span M2 scoring and error categorization."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Iterable, NamedTuple, Sequence

from .aligner import DEFAULT_COST, UNK, AlignmentCost, AlignmentRow, align_ops
from .corpus import Label
from .errors import NoEvaluableRows, OverlappingEdits


@dataclass(frozen=True)
class EditSpan:
    start: int
    end: int
    replacement: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "replacement", tuple(self.replacement))
        if not 0 <= self.start <= self.end:
            raise ValueError(f"bad span {self.start}..{self.end}")

    @property
    def is_insertion(self) -> bool:
        return self.start == self.end

    @property
    def is_deletion(self) -> bool:
        return self.start < self.end and not self.replacement


@dataclass(frozen=True)
class Counts:
    matched_edits: int = 0
    system_edits: int = 0
    gold_edits: int = 0
    matched_words: int = 0
    eval_words: int = 0

    def __add__(self, other: "Counts") -> "Counts":
        return Counts(
            self.matched_edits + other.matched_edits,
            self.system_edits + other.system_edits,
            self.gold_edits + other.gold_edits,
            self.matched_words + other.matched_words,
            self.eval_words + other.eval_words,
        )


def precision_recall(matched: int, system: int, gold: int) -> tuple[Fraction, Fraction]:
    # an empty side scores 1, as the reference M2 scorer does
    p = Fraction(matched, system) if system else Fraction(1)
    r = Fraction(matched, gold) if gold else Fraction(1)
    return p, r


def f_beta(p, r, beta=1):
    """F-measure; exact when ``p`` and ``r`` are Fractions and ``beta`` is rational."""
    b2 = beta * beta
    if p + r == 0:
        return p * 0
    denom = b2 * p + r
    if denom == 0:
        return p * 0
    return (1 + b2) * p * r / denom


HALF = Fraction(1, 2)


@dataclass(frozen=True)
class ScoreReport:
    precision: float | None = None
    recall: float | None = None
    f1: float | None = None
    f_half: float | None = None
    accuracy: float | None = None
    counts: Counts = field(default_factory=Counts)

    @classmethod
    def from_counts(cls, counts: Counts, edits: bool = True, words: bool = True) -> "ScoreReport":
        kw: dict = {"counts": counts}
        if edits:
            p, r = precision_recall(counts.matched_edits, counts.system_edits, counts.gold_edits)
            kw.update(precision=float(p), recall=float(r), f1=float(f_beta(p, r)), f_half=float(f_beta(p, r, HALF)))
        if words and counts.eval_words:
            kw["accuracy"] = counts.matched_words / counts.eval_words
        return cls(**kw)

    def merge(self, other: "ScoreReport") -> "ScoreReport":
        has_edits = self.precision is not None or other.precision is not None
        has_words = self.accuracy is not None or other.accuracy is not None
        return ScoreReport.from_counts(self.counts + other.counts, has_edits, has_words)

    def as_dict(self) -> dict:
        out = {}
        for name in ("precision", "recall", "f1", "f_half", "accuracy"):
            value = getattr(self, name)
            out[name] = None if value is None else round(100 * value, 1)
        out["counts"] = vars(self.counts).copy()
        return out

    def format(self) -> str:
        parts = []
        for label, name in (("P", "precision"), ("R", "recall"), ("F1", "f1"), ("F0.5", "f_half"), ("Acc", "accuracy")):
            value = getattr(self, name)
            if value is not None:
                parts.append(f"{label}={100 * value:.1f}")
        return " ".join(parts)


# -- word accuracy ------------------------------------------------------------

Column = str | Callable[[AlignmentRow], str]


def _column_getter(column: Column) -> Callable[[AlignmentRow], str]:
    if callable(column):
        return column
    if column in ("dotted", "hypothesis"):
        return lambda r: r.hypothesis
    if column == "dotless":
        return lambda r: r.hypothesis_dotless if r.hypothesis_dotless is not None else r.hypothesis
    raise ValueError(f"unknown hypothesis column {column!r}")


def word_accuracy(rows: Iterable[AlignmentRow], column: Column = "dotted", scope: str = "ja") -> ScoreReport:
    """Share of rows whose hypothesis equals the reference.

    ``scope="ja"`` counts JA-labeled rows only (transliteration rule);
    ``scope="all"`` keeps Hebrew and punctuation rows (post-correction rule).
    Rows whose reference is UNK are never counted.
    """
    if scope not in ("ja", "all"):
        raise ValueError(f"scope must be 'ja' or 'all', not {scope!r}")
    get = _column_getter(column)
    matched = total = 0
    for row in rows:
        if row.reference == UNK:
            continue
        if scope == "ja" and row.label is not Label.JA:
            continue
        total += 1
        matched += get(row) == row.reference
    if not total:
        raise NoEvaluableRows("no rows left to evaluate")
    return ScoreReport.from_counts(Counts(matched_words=matched, eval_words=total), edits=False)


def exact_match_accuracy(rows: Iterable[AlignmentRow], hypothesis_column: Column = "dotted") -> ScoreReport:
    return word_accuracy(rows, hypothesis_column, scope="ja")


# -- edits --------------------------------------------------------------------

def extract_edits(source: Sequence[str], target: Sequence[str], cost: AlignmentCost = DEFAULT_COST) -> list[EditSpan]:
    """Turn the minimum-cost word alignment of ``source`` to ``target`` into spans.

    Each maximal run of non-identical alignment columns becomes one edit.
    """
    edits: list[EditSpan] = []
    pos = 0  # next source index
    run_start: int | None = None
    replacement: list[str] = []

    for i, j in align_ops(source, target, cost):
        same = i is not None and j is not None and source[i] == target[j]
        if same:
            if run_start is not None:
                edits.append(EditSpan(run_start, pos, tuple(replacement)))
                run_start, replacement = None, []
        else:
            if run_start is None:
                run_start = pos
            if j is not None:
                replacement.append(target[j])
        if i is not None:
            pos = i + 1
    if run_start is not None:
        edits.append(EditSpan(run_start, pos, tuple(replacement)))
    return edits


def check_overlaps(edits: Iterable[EditSpan]) -> list[EditSpan]:
    ordered = sorted(edits, key=lambda e: (e.start, e.end))
    for a, b in zip(ordered, ordered[1:]):
        if b.start < a.end or (a.start, a.end) == (b.start, b.end):
            raise OverlappingEdits(f"{a} overlaps {b}")
    return ordered


def apply_edits(source: Sequence[str], edits: Iterable[EditSpan]) -> list[str]:
    out: list[str] = []
    pos = 0
    for e in check_overlaps(edits):
        if e.end > len(source):
            raise ValueError(f"{e} runs past the end of a {len(source)}-token source")
        out.extend(source[pos:e.start])
        out.extend(e.replacement)
        pos = e.end
    out.extend(source[pos:])
    return out


def m2_counts(system_edits: Iterable[EditSpan], gold_edits: Iterable[EditSpan]) -> Counts:
    system = check_overlaps(system_edits)
    gold = check_overlaps(gold_edits)
    matched = len(set(system) & set(gold))
    return Counts(matched_edits=matched, system_edits=len(system), gold_edits=len(gold))


def m2_score(system_edits: Iterable[EditSpan], gold_edits: Iterable[EditSpan]) -> ScoreReport:
    """Exact-span edit matching for one sentence."""
    return ScoreReport.from_counts(m2_counts(system_edits, gold_edits), words=False)


def m2_score_corpus(pairs: Iterable[tuple[Iterable[EditSpan], Iterable[EditSpan]]]) -> ScoreReport:
    """Micro-average over ``(system_edits, gold_edits)`` pairs: sum counts, then divide."""
    total = Counts()
    for system, gold in pairs:
        total += m2_counts(system, gold)
    return ScoreReport.from_counts(total, words=False)


# -- error categories ---------------------------------------------------------

class ErrorCategory(str, Enum):
    VALID_PARAPHRASE = "valid_paraphrase"
    UNNECESSARY_CHANGE = "unnecessary_change"
    ALIF_HAMZA = "alif_hamza"
    WRONG_WORD = "wrong_word"
    SOURCE_ERROR = "source_error"
    HEB_TRANSLATION = "heb_translation"
    UNK_OUTPUT = "unk_output"
    UNCLASSIFIED = "unclassified"


class ErrorRow(NamedTuple):
    source: str
    translit: str
    corrected: str
    reference: str
    label: Label | str | None = Label.JA


_COLLAPSE = str.maketrans({"آ": "ا", "أ": "ا", "إ": "ا", "ؤ": None, "ئ": None, "ء": None, "ة": "ه", "ى": "ي"})


def collapse_alif_hamza(word: str) -> str:
    return word.translate(_COLLAPSE)


def _is_hebrew(label) -> bool:
    if isinstance(label, Label):
        return label is Label.HEBREW
    return label in ("Heb", "Hebrew")


def classify_error(row: ErrorRow) -> ErrorCategory:
    if row.corrected.strip() == UNK:
        return ErrorCategory.UNK_OUTPUT
    if _is_hebrew(row.label):
        return ErrorCategory.HEB_TRANSLATION
    if row.translit == row.reference and row.corrected != row.reference:
        return ErrorCategory.UNNECESSARY_CHANGE
    if collapse_alif_hamza(row.corrected) == collapse_alif_hamza(row.reference):
        return ErrorCategory.ALIF_HAMZA
    # paraphrase, wrong word and source errors need a human reader
    return ErrorCategory.UNCLASSIFIED


def classify_errors(rows: Iterable[ErrorRow | tuple]) -> list[ErrorCategory]:
    return [classify_error(r if isinstance(r, ErrorRow) else ErrorRow(*r)) for r in rows]


def error_breakdown(categories: Iterable[ErrorCategory]) -> dict[str, dict]:
    counts = Counter(categories)
    total = sum(counts.values())
    return {
        cat.value: {"count": counts[cat], "pct": round(100 * counts[cat] / total, 1) if total else 0.0}
        for cat in ErrorCategory
    }
