"""Monotone word-level alignment of a transliteration against its Arabic reference.

Every hypothesis word lands in exactly one row. Hypothesis words with no
reference partner get the ``UNK`` sentinel; reference words with no partner
are dropped from the row view (but kept by :func:`align_ops` for edit
extraction).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

from .char_mapper import MappingTable, TranslitMode, transliterate_token
from .corpus import Label, ParallelCorpus, Token
from .errors import UnmappableCharacter

log = logging.getLogger(__name__)

UNK = "UNK"

ALIGNMENT_HEADER = ("section", "source", "hypothesis_dotted", "hypothesis_dotless", "reference", "label")


@lru_cache(maxsize=1 << 16)
def levenshtein(a: str, b: str) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


@dataclass(frozen=True)
class AlignmentCost:
    """Normalized edit distance for word pairs plus a flat gap penalty."""

    gap: Fraction = Fraction(3, 5)

    def substitution(self, a: str, b: str) -> Fraction:
        if a == b:
            return Fraction(0)
        return Fraction(levenshtein(a, b), max(len(a), len(b)))


DEFAULT_COST = AlignmentCost()

# an op is (hyp index | None, ref index | None)
Op = tuple[int | None, int | None]


def align_ops(hyp: Sequence[str], ref: Sequence[str], cost: AlignmentCost = DEFAULT_COST) -> list[Op]:
    """Minimum-cost monotone alignment as a list of columns.

    ``(i, j)`` pairs hyp[i] with ref[j]; ``(i, None)`` leaves hyp[i] unaligned;
    ``(None, j)`` is a reference insertion. Ties prefer pairing, then consuming
    the reference earlier.
    """
    n, m = len(hyp), len(ref)
    gap = float(cost.gap)
    sub = [[float(cost.substitution(h, r)) for r in ref] for h in hyp]
    # suffix table: best[i][j] aligns hyp[i:] with ref[j:]
    best = [[0.0] * (m + 1) for _ in range(n + 1)]
    for i in range(n, -1, -1):
        row, below = best[i], best[i + 1] if i < n else None
        for j in range(m, -1, -1):
            if i == n:
                row[j] = (m - j) * gap
            elif j == m:
                row[j] = (n - i) * gap
            else:
                row[j] = min(sub[i][j] + below[j + 1], gap + row[j + 1], gap + below[j])
    ops: list[Op] = []
    i = j = 0
    eps = 1e-9
    while i < n or j < m:
        here = best[i][j]
        if i < n and j < m and sub[i][j] + best[i + 1][j + 1] <= here + eps:
            ops.append((i, j))
            i, j = i + 1, j + 1
        elif j < m and gap + best[i][j + 1] <= here + eps:
            ops.append((None, j))
            j += 1
        else:
            ops.append((i, None))
            i += 1
    return ops


def ops_cost(ops: Iterable[Op], hyp: Sequence[str], ref: Sequence[str], cost: AlignmentCost = DEFAULT_COST) -> Fraction:
    total = Fraction(0)
    for i, j in ops:
        if i is not None and j is not None:
            total += cost.substitution(hyp[i], ref[j])
        else:
            total += cost.gap
    return total


@dataclass(frozen=True)
class AlignmentRow:
    hypothesis: str
    reference: str
    source: Token | None = None
    label: Label | None = None
    hypothesis_dotless: str | None = None
    section: int | None = None

    @property
    def is_unk(self) -> bool:
        return self.reference == UNK


def align_section(hyp_tokens: Sequence[str], ref_tokens: Sequence[str], cost: AlignmentCost = DEFAULT_COST) -> list[AlignmentRow]:
    rows = []
    for i, j in align_ops(hyp_tokens, ref_tokens, cost):
        if i is None:
            continue  # reference insertion, dropped
        rows.append(AlignmentRow(hyp_tokens[i], UNK if j is None else ref_tokens[j]))
    return rows


def _translit_or_copy(surface: str, table: MappingTable, mode: TranslitMode, warnings: list[str] | None) -> str:
    try:
        return transliterate_token(surface, table, mode, warnings)
    except UnmappableCharacter as exc:
        log.warning("%s", exc)
        if warnings is not None:
            warnings.append(str(exc))
        return surface


def transliterate_tokens(tokens: Sequence[Token], table: MappingTable, mode: TranslitMode | str,
                         warnings: list[str] | None = None) -> list[str]:
    mode = TranslitMode(mode)
    return [_translit_or_copy(t.surface, table, mode, warnings) for t in tokens]


def three_way(corpus: ParallelCorpus, table: MappingTable, cost: AlignmentCost = DEFAULT_COST,
              warnings: list[str] | None = None) -> list[AlignmentRow]:
    """Align the dotted transliteration of every section against its reference.

    The dotless hypothesis is attached row by row afterwards; it never takes
    part in the alignment itself.
    """
    rows: list[AlignmentRow] = []
    for section in corpus:
        dotted = transliterate_tokens(section.source, table, TranslitMode.DOTTED, warnings)
        dotless = transliterate_tokens(section.source, table, TranslitMode.DOTLESS, None)
        refs = [t.surface for t in section.reference]
        for k, row in enumerate(align_section(dotted, refs, cost)):
            src = section.source[k]
            rows.append(AlignmentRow(
                hypothesis=row.hypothesis,
                reference=row.reference,
                source=src,
                label=src.label,
                hypothesis_dotless=dotless[k],
                section=section.line,
            ))
    return rows


def format_alignment_tsv(rows: Iterable[AlignmentRow]) -> str:
    lines = ["\t".join(ALIGNMENT_HEADER)]
    for r in rows:
        lines.append("\t".join([
            str(r.section if r.section is not None else ""),
            r.source.surface if r.source else "",
            r.hypothesis,
            r.hypothesis_dotless or "",
            r.reference,
            r.label.value if r.label else "",
        ]))
    return "\n".join(lines) + "\n"


def write_alignment_tsv(path: str | Path, rows: Iterable[AlignmentRow]) -> None:
    Path(path).write_text(format_alignment_tsv(rows), encoding="utf-8")


def read_alignment_tsv(path: str | Path) -> list[AlignmentRow]:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or tuple(lines[0].split("\t")) != ALIGNMENT_HEADER:
        raise ValueError(f"{path}: missing alignment header")
    rows = []
    counters: dict[int, int] = {}
    for line in lines[1:]:
        section, source, dotted, dotless, reference, label = line.split("\t")
        sec = int(section) if section else None
        idx = counters[sec] = counters.get(sec, -1) + 1
        lab = Label(label) if label else None
        rows.append(AlignmentRow(
            hypothesis=dotted,
            reference=reference,
            source=Token(source, lab, (sec or 0, idx)),
            label=lab,
            hypothesis_dotless=dotless or None,
            section=sec,
        ))
    return rows
