"""Parallel corpus ingestion: line-per-section files, punctuation separation, token labels."""

from __future__ import annotations

import logging
import re
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import InvalidEncoding, LineCountMismatch
from .script_core import (
    REFERENCE_POLICY,
    SOURCE_POLICY,
    NormalizationPolicy,
    has_niqqud,
    is_punctuation_char,
    is_punctuation_token,
    normalize,
)

log = logging.getLogger(__name__)

_FOOTNOTE_MARKER = re.compile(r"[\[(]\d+[\])]")


class Label(str, Enum):
    JA = "JA"
    HEBREW = "Heb"
    PUNCT = "Punc"


@dataclass(frozen=True)
class Token:
    surface: str
    label: Label | None = None
    position: tuple[int, int] = (0, 0)  # (section line number, token index)


@dataclass(frozen=True)
class Section:
    line: int  # 1-based line number in the original files
    source: tuple[Token, ...]
    reference: tuple[Token, ...]


@dataclass(frozen=True)
class ParallelCorpus:
    sections: tuple[Section, ...]
    dropped_lines: frozenset[int] = frozenset()

    def __iter__(self):
        return iter(self.sections)

    def __len__(self):
        return len(self.sections)


def _peel(word: str) -> list[str]:
    """Split leading and trailing punctuation runs off ``word``.

    A run of one repeated mark ("...") stays a single token; mixed runs split
    per character. Internal punctuation (abbreviation dots) stays attached.
    """
    start, end = 0, len(word)
    while start < end and is_punctuation_char(word[start]):
        start += 1
    if start == end:
        return _group_marks(word)
    while end > start and is_punctuation_char(word[end - 1]):
        end -= 1
    return _group_marks(word[:start]) + [word[start:end]] + _group_marks(word[end:])


def _group_marks(run: str) -> list[str]:
    out: list[str] = []
    for ch in run:
        if out and out[-1][-1] == ch:
            out[-1] += ch
        else:
            out.append(ch)
    return out


def split_punctuation(text: str) -> list[str]:
    tokens: list[str] = []
    for word in text.split():
        tokens.extend(_peel(word))
    return tokens


def load_lexicon(path: str | Path) -> dict[str, Label]:
    """Read ``token[<TAB>label]`` lines; a missing label means Hebrew."""
    lexicon: dict[str, Label] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        surface, _, label = line.partition("\t")
        lexicon[_lexicon_key(surface.strip())] = Label(label.strip()) if label.strip() else Label.HEBREW
    return lexicon


def _lexicon_key(surface: str) -> str:
    return normalize(surface, NormalizationPolicy(strip_niqqud=True, strip_upper_dot=True))


def label_source_tokens(tokens: Sequence[Token], lexicon: Mapping[str, Label] | None = None) -> list[Token]:
    """Assign JA / Heb / Punc to source-side tokens.

    A token carrying any niqqud is Hebrew; the upper dot does not count.
    ``lexicon`` entries (keyed on the undotted, unpointed surface) win over
    the niqqud heuristic but never over punctuation.
    """
    out = []
    for tok in tokens:
        if is_punctuation_token(tok.surface):
            label = Label.PUNCT
        elif lexicon and _lexicon_key(tok.surface) in lexicon:
            label = lexicon[_lexicon_key(tok.surface)]
        elif has_niqqud(tok.surface):
            label = Label.HEBREW
        else:
            label = Label.JA
        out.append(replace(tok, label=label))
    return out


def label_reference_tokens(tokens: Sequence[Token]) -> list[Token]:
    return [
        replace(t, label=Label.PUNCT if is_punctuation_token(t.surface) else Label.JA) for t in tokens
    ]


def tokenize_section(text: str, line: int) -> list[Token]:
    return [Token(s, None, (line, i)) for i, s in enumerate(split_punctuation(text))]


def ingest_lines(
    source_lines: Sequence[str],
    reference_lines: Sequence[str],
    dropped_lines: Iterable[int] = (),
    lexicon: Mapping[str, Label] | None = None,
) -> ParallelCorpus:
    if len(source_lines) != len(reference_lines):
        raise LineCountMismatch(
            f"source has {len(source_lines)} lines, reference has {len(reference_lines)}"
        )
    dropped = frozenset(int(n) for n in dropped_lines)
    out_of_range = sorted(n for n in dropped if not 1 <= n <= len(source_lines))
    if out_of_range:
        raise ValueError(f"dropped lines out of range: {out_of_range}")
    sections = []
    for lineno, (src, ref) in enumerate(zip(source_lines, reference_lines), 1):
        if lineno in dropped:
            continue
        ref = normalize(ref, REFERENCE_POLICY)
        if _FOOTNOTE_MARKER.search(ref):
            log.warning("line %d: reference looks like it still carries footnote markers", lineno)
        src_tokens = label_source_tokens(tokenize_section(normalize(src, SOURCE_POLICY), lineno), lexicon)
        ref_tokens = label_reference_tokens(tokenize_section(ref, lineno))
        sections.append(Section(lineno, tuple(src_tokens), tuple(ref_tokens)))
    return ParallelCorpus(tuple(sections), dropped)


def read_lines(path: str | Path) -> list[str]:
    try:
        text = Path(path).read_bytes().decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InvalidEncoding(f"{path}: not valid UTF-8 ({exc})") from exc
    if text.startswith("\ufeff"):
        text = text[1:]
    return text.splitlines()


def ingest(
    source_path: str | Path,
    reference_path: str | Path,
    dropped_lines: Iterable[int] = (),
    lexicon: Mapping[str, Label] | None = None,
) -> ParallelCorpus:
    """Load a line-aligned JA source / Arabic reference pair."""
    return ingest_lines(read_lines(source_path), read_lines(reference_path), dropped_lines, lexicon)


def parse_drop_lines(spec: str | None) -> frozenset[int]:
    if not spec:
        return frozenset()
    return frozenset(int(part) for part in spec.split(",") if part.strip())


# -- statistics ---------------------------------------------------------------

@dataclass(frozen=True)
class LabelStats:
    sections: int
    tokens: int
    punctuation: int
    hebrew: int
    ja: int

    def percent(self, count: int) -> float:
        return 100.0 * count / self.tokens if self.tokens else 0.0

    @property
    def excluded(self) -> int:
        return self.punctuation + self.hebrew

    def as_dict(self) -> dict:
        return {
            "sections": self.sections,
            "tokens": self.tokens,
            "punctuation": self.punctuation,
            "hebrew": self.hebrew,
            "ja": self.ja,
            "punctuation_pct": round(self.percent(self.punctuation), 2),
            "hebrew_pct": round(self.percent(self.hebrew), 2),
            "ja_pct": round(self.percent(self.ja), 2),
            "excluded_pct": round(self.percent(self.excluded), 2),
        }

    def format(self) -> str:
        def row(name, n):
            return f"{name:<12}{n:>10,} ({self.percent(n):.2f}%)"

        return "\n".join([
            f"{'sections':<12}{self.sections:>10,}",
            f"{'tokens':<12}{self.tokens:>10,}",
            row("punctuation", self.punctuation),
            row("Hebrew", self.hebrew),
            row("JA", self.ja),
            row("excluded", self.excluded),
        ])


def label_stats(corpus: ParallelCorpus) -> LabelStats:
    counts = Counter(t.label for s in corpus for t in s.source)
    return LabelStats(
        sections=len(corpus),
        tokens=sum(counts.values()),
        punctuation=counts[Label.PUNCT],
        hebrew=counts[Label.HEBREW],
        ja=counts[Label.JA],
    )


# -- token tables -------------------------------------------------------------

TOKEN_TABLE_HEADER = ("section", "index", "surface", "label")


def write_token_table(path: str | Path, tokens: Iterable[Token]) -> None:
    lines = ["\t".join(TOKEN_TABLE_HEADER)]
    for t in tokens:
        lines.append(f"{t.position[0]}\t{t.position[1]}\t{t.surface}\t{t.label.value if t.label else ''}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_token_table(path: str | Path) -> list[Token]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != TOKEN_TABLE_HEADER:
        raise ValueError(f"{path}: missing token-table header")
    tokens = []
    for line in lines[1:]:
        sec, idx, surface, label = line.split("\t")
        tokens.append(Token(surface, Label(label) if label else None, (int(sec), int(idx))))
    return tokens
