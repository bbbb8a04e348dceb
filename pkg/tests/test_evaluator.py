from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from jatranslit.aligner import UNK, AlignmentRow
from jatranslit.char_mapper import default_mapping
from jatranslit.aligner import three_way
from jatranslit.corpus import Label
from jatranslit.errors import NoEvaluableRows, OverlappingEdits
from jatranslit.evaluator import (
    HALF,
    Counts,
    EditSpan,
    ErrorCategory,
    ErrorRow,
    ScoreReport,
    apply_edits,
    classify_error,
    collapse_alif_hamza,
    error_breakdown,
    exact_match_accuracy,
    extract_edits,
    f_beta,
    m2_counts,
    m2_score,
    m2_score_corpus,
    precision_recall,
    word_accuracy,
)

from oracles import f_beta_reference


def row(h, r, label=Label.JA, dotless=None):
    return AlignmentRow(h, r, label=label, hypothesis_dotless=dotless)


# -- accuracy -----------------------------------------------------------------

def test_word_accuracy_ja_scope():
    rows = [
        row("a", "a"),
        row("b", "x"),
        row("c", UNK),
        row("ה", "ה", Label.HEBREW),
        row(",", ",", Label.PUNCT),
    ]
    rep = word_accuracy(rows, scope="ja")
    assert (rep.counts.matched_words, rep.counts.eval_words) == (1, 2)
    rep_all = word_accuracy(rows, scope="all")
    assert (rep_all.counts.matched_words, rep_all.counts.eval_words) == (3, 4)


def test_dotless_column():
    rows = [row("خ", "خ", dotless="ك")]
    assert exact_match_accuracy(rows, "dotted").accuracy == 1.0
    assert exact_match_accuracy(rows, "dotless").accuracy == 0.0


def test_no_evaluable_rows():
    with pytest.raises(NoEvaluableRows):
        word_accuracy([row("a", UNK), row(",", ",", Label.PUNCT)])


def test_khazari_accuracy(khazari_corpus):
    # the seven JA rows: four exact matches in dotted mode, two in dotless
    rows = three_way(khazari_corpus, default_mapping())
    dotted = exact_match_accuracy(rows, "dotted")
    dotless = exact_match_accuracy(rows, "dotless")
    assert (dotted.counts.matched_words, dotted.counts.eval_words) == (4, 7)
    assert (dotless.counts.matched_words, dotless.counts.eval_words) == (2, 7)
    assert dotted.as_dict()["accuracy"] == 57.1
    assert dotless.as_dict()["accuracy"] == 28.6


# -- P/R/F --------------------------------------------------------------------

def test_precision_recall_conventions():
    assert precision_recall(0, 0, 5) == (1, 0)
    assert precision_recall(0, 3, 0) == (0, 1)
    assert precision_recall(2, 4, 8) == (Fraction(1, 2), Fraction(1, 4))


def test_f_beta_values():
    p, r = Fraction(1, 2), Fraction(1, 4)
    assert f_beta(p, r) == Fraction(1, 3)
    assert f_beta(p, r, HALF) == Fraction(5, 12)
    assert f_beta(Fraction(1), Fraction(0), HALF) == 0
    assert f_beta(Fraction(0), Fraction(0)) == 0


counts = st.tuples(st.integers(0, 50), st.integers(0, 50), st.integers(0, 50)).map(
    lambda t: (min(t), t[1], t[2])
)


@given(counts)
def test_f_beta_matches_reference(triple):
    p, r = precision_recall(*triple)
    for beta in (1, HALF, 2):
        assert f_beta(p, r, beta) == f_beta_reference(p, r, beta)


@given(counts)
def test_f_between_p_and_r(triple):
    p, r = precision_recall(*triple)
    if p and r:
        for beta in (1, HALF):
            assert min(p, r) <= f_beta(p, r, beta) <= max(p, r)


def test_score_report_format():
    rep = ScoreReport.from_counts(Counts(1, 2, 4, 3, 4))
    assert rep.format() == "P=50.0 R=25.0 F1=33.3 F0.5=41.7 Acc=75.0"
    assert rep.as_dict()["f_half"] == 41.7


def test_merge_is_micro():
    a = ScoreReport.from_counts(Counts(1, 1, 1), words=False)
    b = ScoreReport.from_counts(Counts(0, 3, 1), words=False)
    merged = a.merge(b)
    assert merged.precision == 0.25
    assert merged.recall == 0.5


# -- edits --------------------------------------------------------------------

def test_extract_edits_simple():
    src = ["قال", "الخزري", "كلفه"]
    tgt = ["قال", "الخزري", "كلفة"]
    assert extract_edits(src, tgt) == [EditSpan(2, 3, ("كلفة",))]


def test_extract_edits_insert_and_delete():
    assert extract_edits(["a"], ["a", "b"]) == [EditSpan(1, 1, ("b",))]
    assert extract_edits(["a", "b"], ["a"]) == [EditSpan(1, 2, ())]
    assert extract_edits([], []) == []
    assert extract_edits(["a"], ["a"]) == []


def test_adjacent_changes_merge_into_one_edit():
    assert extract_edits(["ab", "cd"], ["ax", "cx"]) == [EditSpan(0, 2, ("ax", "cx"))]


def test_overlaps_rejected():
    with pytest.raises(OverlappingEdits):
        apply_edits(["a", "b"], [EditSpan(0, 2, ("x",)), EditSpan(1, 2, ())])
    with pytest.raises(OverlappingEdits):
        m2_counts([EditSpan(0, 1, ("x",)), EditSpan(0, 1, ("y",))], [])


def test_apply_edits_bounds():
    with pytest.raises(ValueError):
        apply_edits(["a"], [EditSpan(1, 3, ())])


def test_editspan_validates():
    with pytest.raises(ValueError):
        EditSpan(2, 1)


token_seq = st.lists(st.sampled_from(["قال", "قل", "ذلك", "دلك", "و", "،", "كلفة", "كلفه"]), max_size=8)


@given(token_seq, token_seq)
def test_edit_round_trip(src, tgt):
    assert apply_edits(src, extract_edits(src, tgt)) == tgt


@given(token_seq, token_seq)
def test_edits_are_disjoint_and_sorted(src, tgt):
    edits = extract_edits(src, tgt)
    for a, b in zip(edits, edits[1:]):
        assert a.end <= b.start


def test_m2_exact_span_match():
    gold = [EditSpan(0, 1, ("x",)), EditSpan(2, 2, ("y",))]
    system = [EditSpan(0, 1, ("x",)), EditSpan(2, 3, ())]
    c = m2_counts(system, gold)
    assert (c.matched_edits, c.system_edits, c.gold_edits) == (1, 2, 2)


def test_identity_system_scores():
    rep = m2_score([], [EditSpan(0, 1, ("x",))])
    assert rep.as_dict()["precision"] == 100.0
    assert rep.as_dict()["recall"] == 0.0
    assert rep.as_dict()["f1"] == 0.0
    assert rep.as_dict()["f_half"] == 0.0


sentences = st.lists(st.tuples(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4)), min_size=1, max_size=6)


def _spans(n, offset):
    return [EditSpan(offset + 2 * k, offset + 2 * k + 1, ("w",)) for k in range(n)]


@given(sentences)
def test_corpus_score_is_micro_average(spec):
    pairs, total = [], Counts()
    for matched, extra_sys, extra_gold in spec:
        shared = _spans(matched, 0)
        system = shared + _spans(extra_sys, 100)
        gold = shared + _spans(extra_gold, 200)
        pairs.append((system, gold))
        total += Counts(matched, matched + extra_sys, matched + extra_gold)
    rep = m2_score_corpus(pairs)
    p, r = precision_recall(total.matched_edits, total.system_edits, total.gold_edits)
    assert rep.precision == float(p)
    assert rep.recall == float(r)
    assert rep.f_half == float(f_beta(p, r, HALF))


# -- error categories ---------------------------------------------------------

def test_collapse_alif_hamza():
    assert collapse_alif_hamza("الآب") == collapse_alif_hamza("الأب") == "الاب"
    assert collapse_alif_hamza("رءوف") == "روف"
    assert collapse_alif_hamza("كلفة") == "كلفه"


@pytest.mark.parametrize(
    "r, cat",
    [
        (ErrorRow("בהא", "بها", "UNK", "بها"), ErrorCategory.UNK_OUTPUT),
        (ErrorRow("והמשכילים", "وهمشكيليم", "وهمشكيليم", "والعقلاء", Label.HEBREW), ErrorCategory.HEB_TRANSLATION),
        (ErrorRow("x", "وهمشكيليم", "وهمشكيليم", "والعقلاء", "Heb"), ErrorCategory.HEB_TRANSLATION),
        (ErrorRow("כׄלקהׄ", "خلقة", "خلق", "خلقة"), ErrorCategory.UNNECESSARY_CHANGE),
        (ErrorRow("אלאב", "الاب", "الآب", "الأب"), ErrorCategory.ALIF_HAMZA),
        (ErrorRow("ותסלים", "وتسليم", "وإنجاء", "وتسليم"), ErrorCategory.UNNECESSARY_CHANGE),
        (ErrorRow("קאל", "قال", "قال", "فقال"), ErrorCategory.UNCLASSIFIED),
    ],
)
def test_classify_error(r, cat):
    assert classify_error(r) is cat


def test_error_breakdown():
    cats = [ErrorCategory.ALIF_HAMZA, ErrorCategory.ALIF_HAMZA, ErrorCategory.UNK_OUTPUT, ErrorCategory.UNCLASSIFIED]
    b = error_breakdown(cats)
    assert b["alif_hamza"] == {"count": 2, "pct": 50.0}
    assert b["valid_paraphrase"]["count"] == 0
    assert error_breakdown([])["unk_output"]["pct"] == 0.0
