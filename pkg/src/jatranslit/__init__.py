"""Judeo-Arabic (Hebrew script) to Arabic script transliteration, post-correction and evaluation."""

from .aligner import UNK, AlignmentCost, AlignmentRow, align_section, three_way
from .char_mapper import MappingTable, TranslitMode, default_mapping, transliterate_text, transliterate_token
from .corpus import Label, ParallelCorpus, Token, ingest, ingest_lines, label_source_tokens, label_stats
from .correction import (
    CorrectionRequest,
    CorrectionResponse,
    FixtureBackend,
    HttpBackend,
    IdentityBackend,
    build_prompt,
    correct_section,
)
from .evaluator import (
    EditSpan,
    ErrorCategory,
    ScoreReport,
    classify_errors,
    exact_match_accuracy,
    extract_edits,
    m2_score,
    m2_score_corpus,
)
from .script_core import NormalizationPolicy, classify_hebrew, is_punctuation_token, normalize

__version__ = "0.1.0"
