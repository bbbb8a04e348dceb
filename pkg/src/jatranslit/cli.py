"""Command-line entry point: ``jatranslit <subcommand> ...``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .aligner import read_alignment_tsv, three_way, write_alignment_tsv
from .char_mapper import MappingTable, TranslitMode, default_mapping, transliterate_text
from .corpus import ingest, label_stats, load_lexicon, parse_drop_lines, write_token_table
from .correction import BackendConfig, PromptTemplate, correct_sections, make_backend
from .errors import TranslitError
from .evaluator import (
    ErrorRow,
    classify_errors,
    error_breakdown,
    exact_match_accuracy,
    extract_edits,
    m2_score_corpus,
)
from .m2 import read_m2
from .pipeline import PipelineConfig, tokenize_output, run_pipeline, write_reports

log = logging.getLogger("jatranslit")


def _table(args) -> MappingTable:
    return MappingTable.from_file(args.mapping) if args.mapping else default_mapping()


def _backend(args) -> BackendConfig | None:
    if args.backend == "none":
        return None
    options = {}
    for item in args.option or []:
        key, _, value = item.partition("=")
        try:
            options[key] = json.loads(value)
        except json.JSONDecodeError:
            options[key] = value
    return BackendConfig(
        kind=args.backend,
        model=args.model,
        url=args.url,
        fixture=args.fixture,
        api_key_env=args.api_key_env,
        concurrency=args.concurrency,
        timeout=args.timeout,
        max_retries=args.max_retries,
        options=options,
    )


def _write(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_translit(args) -> int:
    table = _table(args)
    warnings: list[str] = []
    text = Path(args.input).read_text(encoding="utf-8")
    lines = text.splitlines(keepends=True)
    out = "".join(transliterate_text(line, table, args.mode, warnings) for line in lines)
    _write(args.output, out)
    if warnings:
        if args.output:
            Path(args.output + ".warnings.log").write_text("".join(w + "\n" for w in warnings), encoding="utf-8")
        else:
            for w in warnings:
                print(f"warning: {w}", file=sys.stderr)
    return 0


def _ingest(args):
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    return ingest(args.source, args.reference, parse_drop_lines(args.drop_lines), lexicon)


def cmd_ingest(args) -> int:
    corpus = _ingest(args)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    write_token_table(out / "source_tokens.tsv", (t for s in corpus for t in s.source))
    write_token_table(out / "reference_tokens.tsv", (t for s in corpus for t in s.reference))
    stats = label_stats(corpus).format() + "\n"
    (out / "label_stats.txt").write_text(stats, encoding="utf-8")
    sys.stdout.write(stats)
    return 0


def cmd_align(args) -> int:
    corpus = _ingest(args)
    warnings: list[str] = []
    rows = three_way(corpus, _table(args), warnings=warnings)
    write_alignment_tsv(args.output, rows)
    for w in warnings:
        print(f"warning: {w}", file=sys.stderr)
    return 0


def cmd_correct(args) -> int:
    cfg = _backend(args)
    if cfg is None:
        raise SystemExit("correct needs a backend other than 'none'")
    texts = Path(args.input).read_text(encoding="utf-8").splitlines()
    responses = correct_sections(
        texts, make_backend(cfg), concurrency=cfg.concurrency, prompt_template=args.prompt,
        model_id=cfg.model, max_retries=cfg.max_retries, timeout=cfg.timeout,
    )
    _write(args.output, "".join(r.corrected.replace("\n", " ") + "\n" for r in responses))
    return 0


def cmd_score_accuracy(args) -> int:
    rows = read_alignment_tsv(args.alignment)
    report = exact_match_accuracy(rows, args.column)
    if args.json:
        print(json.dumps(report.as_dict(), ensure_ascii=False))
    else:
        c = report.counts
        print(f"{args.column}: {report.format()} ({c.matched_words}/{c.eval_words})")
    return 0


def cmd_score_m2(args) -> int:
    gold = read_m2(args.gold)
    if args.system:
        system = read_m2(args.system)
        if [toks for toks, _ in system] != [toks for toks, _ in gold]:
            raise TranslitError("system and gold M2 files have different source sentences")
        sys_edits = [edits for _, edits in system]
    else:
        lines = Path(args.system_text).read_text(encoding="utf-8").splitlines()
        if len(lines) != len(gold):
            raise TranslitError(f"{len(lines)} system lines for {len(gold)} gold sentences")
        sys_edits = [extract_edits(toks, tokenize_output(line)) for (toks, _), line in zip(gold, lines)]
    report = m2_score_corpus(zip(sys_edits, (edits for _, edits in gold)))
    if args.json:
        print(json.dumps(report.as_dict(), ensure_ascii=False))
    else:
        c = report.counts
        print(f"{report.format()}  (matched={c.matched_edits} system={c.system_edits} gold={c.gold_edits})")
    return 0


def cmd_classify_errors(args) -> int:
    lines = Path(args.errors).read_text(encoding="utf-8").splitlines()
    header = lines[0].split("\t") if lines else []
    if header[:5] != ["source", "translit", "corrected", "reference", "label"]:
        raise TranslitError("error table needs columns source, translit, corrected, reference, label")
    rows = [ErrorRow(*line.split("\t")[:5]) for line in lines[1:] if line.strip()]
    cats = classify_errors(rows)
    out = ["\t".join(header[:5] + ["category"])]
    out += ["\t".join(list(r) + [c.value]) for r, c in zip(rows, cats)]
    _write(args.output, "\n".join(out) + "\n")
    for name, v in error_breakdown(cats).items():
        print(f"{name:<20}{v['count']:>6} ({v['pct']:.1f}%)", file=sys.stderr)
    return 0


def cmd_pipeline(args) -> int:
    corpus = _ingest(args)
    config = PipelineConfig(
        mode=TranslitMode(args.mode),
        table=_table(args),
        backend=_backend(args),
        m2_source=args.m2_source,
        accuracy_scope=args.accuracy_scope,
    )
    result = run_pipeline(corpus, config)
    write_reports(result, args.output, figures=not args.no_figures)
    sys.stdout.write(result.summary_text())
    return 0


def _global_flags(with_defaults: bool) -> argparse.ArgumentParser:
    # flags accepted before and after the subcommand; the copy attached to
    # subcommands must not overwrite values given before it
    def d(value):
        return value if with_defaults else argparse.SUPPRESS

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=[m.value for m in TranslitMode], default=d("dotted"),
                   help="keep (dotted) or strip (dotless) upper dots before mapping")
    p.add_argument("--mapping", default=d(None), help="mapping config file overriding the built-in table")
    p.add_argument("--drop-lines", default=d(None), help="comma-separated 1-based line numbers to drop")
    p.add_argument("--lexicon", default=d(None), help="token<TAB>label overrides for source labeling")
    p.add_argument("-v", "--verbose", action="store_true", default=d(False))
    return p


def build_parser() -> argparse.ArgumentParser:
    top = _global_flags(with_defaults=True)
    common = _global_flags(with_defaults=False)

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend", choices=["none", "identity", "fixture", "http"], default="none")
    backend.add_argument("--model", default="identity")
    backend.add_argument("--url", help="chat-completion endpoint for the http backend")
    backend.add_argument("--fixture", help="fixture TSV for the fixture backend")
    backend.add_argument("--api-key-env", default="JATRANSLIT_API_KEY")
    backend.add_argument("--concurrency", type=int, default=4)
    backend.add_argument("--timeout", type=float, default=60.0)
    backend.add_argument("--max-retries", type=int, default=3)
    backend.add_argument("--option", action="append", metavar="KEY=VALUE",
                         help="extra request field for the http backend (e.g. temperature=0)")

    parser = argparse.ArgumentParser(prog="jatranslit", description=__doc__, parents=[top])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("translit", parents=[common], help="transliterate a Hebrew-script file")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_translit)

    for name, func, helptext in (
        ("ingest", cmd_ingest, "tokenize and label a parallel corpus"),
        ("align", cmd_align, "write the three-way alignment TSV"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("source")
        p.add_argument("reference")
        p.add_argument("-o", "--output", required=True)
        p.set_defaults(func=func)

    p = sub.add_parser("correct", parents=[common, backend], help="post-correct one section per line")
    p.add_argument("input")
    p.add_argument("-o", "--output")
    p.add_argument("--prompt", choices=[t.value for t in PromptTemplate], default="gec")
    p.set_defaults(func=cmd_correct)

    p = sub.add_parser("score-accuracy", parents=[common], help="exact-match accuracy from an alignment TSV")
    p.add_argument("alignment")
    p.add_argument("--column", choices=["dotted", "dotless"], default="dotted")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_score_accuracy)

    p = sub.add_parser("score-m2", parents=[common], help="score system edits against gold M2")
    p.add_argument("--gold", required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--system", help="system edits as M2")
    group.add_argument("--system-text", help="corrected text, one sentence per line")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_score_m2)

    p = sub.add_parser("classify-errors", parents=[common], help="categorize error rows")
    p.add_argument("errors", help="TSV with source, translit, corrected, reference, label columns")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_classify_errors)

    p = sub.add_parser("pipeline", parents=[common, backend], help="run everything and write reports")
    p.add_argument("source")
    p.add_argument("reference")
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--m2-source", choices=["input", "dotless"], default="input")
    p.add_argument("--accuracy-scope", choices=["all", "ja"], default="all")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_pipeline)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (TranslitError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
