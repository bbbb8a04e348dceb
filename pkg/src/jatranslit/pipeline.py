"""End-to-end run: ingest, transliterate, align, correct, score."""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

from .aligner import (
    DEFAULT_COST,
    UNK,
    AlignmentCost,
    AlignmentRow,
    align_section,
    three_way,
    write_alignment_tsv,
)
from .char_mapper import MappingTable, TranslitMode, default_mapping
from .corpus import Label, ParallelCorpus, label_stats, split_punctuation, write_token_table
from .correction import BackendConfig, correct_sections, make_backend
from .errors import NoEvaluableRows
from .evaluator import (
    Counts,
    ErrorCategory,
    ErrorRow,
    ScoreReport,
    classify_errors,
    error_breakdown,
    exact_match_accuracy,
    extract_edits,
    m2_counts,
    word_accuracy,
)
from .m2 import format_m2
from .script_core import REFERENCE_POLICY, normalize

log = logging.getLogger(__name__)


@dataclass
class PipelineConfig:
    mode: TranslitMode = TranslitMode.DOTTED
    table: MappingTable = field(default_factory=default_mapping)
    backend: BackendConfig | None = None
    # "input": edits are measured from the text handed to the corrector;
    # "dotless": from the dotless transliteration regardless of mode
    m2_source: str = "input"
    accuracy_scope: str = "all"
    cost: AlignmentCost = DEFAULT_COST


@dataclass
class PipelineResult:
    config: PipelineConfig
    corpus: ParallelCorpus
    rows: list[AlignmentRow]
    corrected_rows: list[AlignmentRow]
    corrected_sections: list[list[str]] | None
    m2_entries_gold: list[tuple[list[str], list]]
    m2_entries_system: list[tuple[list[str], list]]
    translit_scores: dict[str, ScoreReport | None]
    correction_score: ScoreReport
    error_rows: list[tuple[ErrorRow, ErrorCategory]]
    warnings: list[str]

    @property
    def stats(self):
        return label_stats(self.corpus)

    def summary(self) -> dict:
        return {
            "mode": self.config.mode.value,
            "m2_source": self.config.m2_source,
            "accuracy_scope": self.config.accuracy_scope,
            "backend": self.config.backend.kind if self.config.backend else None,
            "labels": self.stats.as_dict(),
            "transliteration": {
                k: (v.as_dict() if v else None) for k, v in self.translit_scores.items()
            },
            "correction": self.correction_score.as_dict(),
            "errors": error_breakdown(cat for _, cat in self.error_rows),
            "warnings": len(self.warnings),
        }

    def summary_text(self) -> str:
        lines = ["Label statistics", self.stats.format(), ""]
        lines.append("Transliteration exact-match accuracy (JA words)")
        for name, rep in self.translit_scores.items():
            lines.append(f"  {name:<8}" + (f"{100 * rep.accuracy:.1f}" if rep else "n/a"))
        lines.append("")
        backend = self.config.backend.kind if self.config.backend else "none"
        lines.append(f"Post-correction ({backend}, {self.config.mode.value} input, M2 source: {self.config.m2_source})")
        lines.append("  " + self.correction_score.format())
        c = self.correction_score.counts
        lines.append(f"  edits: matched={c.matched_edits} system={c.system_edits} gold={c.gold_edits}")
        lines.append("")
        lines.append(f"Error categories ({len(self.error_rows)} errors)")
        for cat, v in error_breakdown(cat for _, cat in self.error_rows).items():
            lines.append(f"  {cat:<20}{v['count']:>6} ({v['pct']:.1f}%)")
        return "\n".join(lines) + "\n"


def _hyp(rows: list[AlignmentRow], which: str) -> list[str]:
    if which == TranslitMode.DOTTED.value:
        return [r.hypothesis for r in rows]
    return [r.hypothesis_dotless or r.hypothesis for r in rows]


def tokenize_output(text: str) -> list[str]:
    return split_punctuation(normalize(text, REFERENCE_POLICY))


def run_pipeline(corpus: ParallelCorpus, config: PipelineConfig | None = None) -> PipelineResult:
    config = config or PipelineConfig()
    mode = TranslitMode(config.mode)
    config.mode = mode
    if config.m2_source not in ("input", "dotless"):
        raise ValueError(f"m2_source must be 'input' or 'dotless', not {config.m2_source!r}")
    warnings: list[str] = []
    rows = three_way(corpus, config.table, config.cost, warnings)

    by_section: dict[int, list[AlignmentRow]] = {}
    for r in rows:
        by_section.setdefault(r.section, []).append(r)

    inputs = [_hyp(by_section.get(s.line, []), mode.value) for s in corpus]
    corrected_sections = None
    if config.backend is not None:
        transport = make_backend(config.backend)
        responses = correct_sections(
            [" ".join(toks) for toks in inputs],
            transport,
            concurrency=config.backend.concurrency,
            model_id=config.backend.model,
            max_retries=config.backend.max_retries,
            timeout=config.backend.timeout,
        )
        for sec, resp in zip(corpus, responses):
            if not resp.extracted and resp.raw.strip():
                warnings.append(f"section {sec.line}: backend output had no <output> tags")
        corrected_sections = [tokenize_output(r.corrected) for r in responses]
    outputs = corrected_sections if corrected_sections is not None else inputs

    gold_entries, system_entries = [], []
    counts = Counts()
    corrected_rows: list[AlignmentRow] = []
    for sec, hyp_in, out in zip(corpus, inputs, outputs):
        sec_rows = by_section.get(sec.line, [])
        src = hyp_in if config.m2_source == "input" else _hyp(sec_rows, TranslitMode.DOTLESS.value)
        ref = [t.surface for t in sec.reference]
        gold = extract_edits(src, ref, config.cost)
        system = extract_edits(src, out, config.cost)
        gold_entries.append((src, gold))
        system_entries.append((src, system))
        counts += m2_counts(system, gold)
        for row, paired in zip(sec_rows, align_section(hyp_in, out, config.cost)):
            corrected_rows.append(AlignmentRow(
                hypothesis=paired.reference,  # corrected token or UNK
                reference=row.reference,
                source=row.source,
                label=row.label,
                hypothesis_dotless=row.hypothesis_dotless,
                section=row.section,
            ))

    try:
        acc = word_accuracy(corrected_rows, "hypothesis", config.accuracy_scope)
        counts += acc.counts
    except NoEvaluableRows:
        pass
    correction_score = ScoreReport.from_counts(counts)

    translit_scores: dict[str, ScoreReport | None] = {}
    for column in ("dotted", "dotless"):
        try:
            translit_scores[column] = exact_match_accuracy(rows, column)
        except NoEvaluableRows:
            translit_scores[column] = None

    error_rows = []
    errs = [
        ErrorRow(
            row.source.surface if row.source else "",
            row.hypothesis if mode is TranslitMode.DOTTED else (row.hypothesis_dotless or row.hypothesis),
            crow.hypothesis,
            row.reference,
            row.label,
        )
        for row, crow in zip(rows, corrected_rows)
        if row.label is not Label.PUNCT and row.reference != UNK and crow.hypothesis != row.reference
    ]
    error_rows = list(zip(errs, classify_errors(errs)))

    return PipelineResult(
        config=config,
        corpus=corpus,
        rows=rows,
        corrected_rows=corrected_rows,
        corrected_sections=corrected_sections,
        m2_entries_gold=gold_entries,
        m2_entries_system=system_entries,
        translit_scores=translit_scores,
        correction_score=correction_score,
        error_rows=error_rows,
        warnings=warnings,
    )


def write_reports(result: PipelineResult, out_dir: str | Path, figures: bool = True) -> dict[str, Path]:
    """Write every report file under ``out_dir`` and return them by name."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = {
        "alignment": out / "alignment.tsv",
        "source_tokens": out / "source_tokens.tsv",
        "reference_tokens": out / "reference_tokens.tsv",
        "gold_m2": out / "gold.m2",
        "system_m2": out / "system.m2",
        "rows": out / "rows.jsonl",
        "errors": out / "errors.tsv",
        "summary_json": out / "summary.json",
        "summary_txt": out / "summary.txt",
        "warnings": out / "warnings.log",
    }
    write_alignment_tsv(paths["alignment"], result.rows)
    write_token_table(paths["source_tokens"], (t for s in result.corpus for t in s.source))
    write_token_table(paths["reference_tokens"], (t for s in result.corpus for t in s.reference))
    paths["gold_m2"].write_text(format_m2(result.m2_entries_gold), encoding="utf-8")
    paths["system_m2"].write_text(format_m2(result.m2_entries_system), encoding="utf-8")
    if result.corrected_sections is not None:
        paths["corrected"] = out / "corrected.txt"
        paths["corrected"].write_text(
            "".join(" ".join(toks) + "\n" for toks in result.corrected_sections), encoding="utf-8"
        )

    with open(paths["rows"], "w", encoding="utf-8") as fh:
        for row, crow in zip(result.rows, result.corrected_rows):
            record = {
                "section": row.section,
                "index": row.source.position[1] if row.source else None,
                "source": row.source.surface if row.source else None,
                "dotted": row.hypothesis,
                "dotless": row.hypothesis_dotless,
                "corrected": crow.hypothesis,
                "reference": row.reference,
                "label": row.label.value if row.label else None,
            }
            fh.write(json.dumps(record, ensure_ascii=False) + "\n")

    err_lines = ["source\ttranslit\tcorrected\treference\tlabel\tcategory"]
    for er, cat in result.error_rows:
        label = er.label.value if isinstance(er.label, Label) else (er.label or "")
        err_lines.append("\t".join([er.source, er.translit, er.corrected, er.reference, label, cat.value]))
    paths["errors"].write_text("\n".join(err_lines) + "\n", encoding="utf-8")

    paths["summary_json"].write_text(
        json.dumps(result.summary(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )
    paths["summary_txt"].write_text(result.summary_text(), encoding="utf-8")
    paths["warnings"].write_text("".join(w + "\n" for w in result.warnings), encoding="utf-8")

    if figures:
        from .reporting import plot_label_distribution, plot_scores

        fig_dir = out / "figures"
        fig_dir.mkdir(exist_ok=True)
        paths["fig_labels"] = plot_label_distribution(result.stats, fig_dir / "labels.png")
        paths["fig_scores"] = plot_scores(result.summary(), fig_dir / "scores.png")
    return paths
