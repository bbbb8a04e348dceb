"""Reader and writer for the M2 edit annotation format.

One block per sentence::

    S tok0 tok1 ...
    A 0 1|||NA|||replacement|||REQUIRED|||-NONE-|||0

Blocks are separated by a blank line. Sentences without edits carry the
conventional ``noop`` line so external scorers see every sentence.
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable, Sequence

from .evaluator import EditSpan

EDIT_TYPE = "NA"
NOOP = "A -1 -1|||noop|||-NONE-|||REQUIRED|||-NONE-|||0"

M2Entry = tuple[list[str], list[EditSpan]]


def format_edit(edit: EditSpan, annotator: int = 0) -> str:
    return f"A {edit.start} {edit.end}|||{EDIT_TYPE}|||{' '.join(edit.replacement)}|||REQUIRED|||-NONE-|||{annotator}"


def format_m2(entries: Iterable[tuple[Sequence[str], Iterable[EditSpan]]]) -> str:
    blocks = []
    for tokens, edits in entries:
        lines = ["S " + " ".join(tokens)]
        edit_lines = [format_edit(e) for e in sorted(edits, key=lambda e: (e.start, e.end))]
        lines.extend(edit_lines or [NOOP])
        blocks.append("\n".join(lines))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


def parse_m2(text: str, annotator: int = 0) -> list[M2Entry]:
    """Parse M2 text, keeping edits from one annotator id."""
    entries: list[M2Entry] = []
    for block in text.strip("\n").split("\n\n"):
        lines = [ln for ln in block.splitlines() if ln.strip()]
        if not lines:
            continue
        if not lines[0].startswith("S"):
            raise ValueError(f"M2 block does not start with an S line: {lines[0]!r}")
        tokens = lines[0][2:].split()
        edits = []
        for line in lines[1:]:
            if not line.startswith("A "):
                raise ValueError(f"unexpected M2 line {line!r}")
            fields = line[2:].split("|||")
            start, end = (int(x) for x in fields[0].split())
            if fields[1] == "noop" or start < 0:
                continue
            if len(fields) > 5 and int(fields[5]) != annotator:
                continue
            replacement = fields[2]
            if replacement == "-NONE-":
                replacement = ""
            edits.append(EditSpan(start, end, tuple(replacement.split())))
        entries.append((tokens, edits))
    return entries


def write_m2(path: str | Path, entries) -> None:
    Path(path).write_text(format_m2(entries), encoding="utf-8")


def read_m2(path: str | Path, annotator: int = 0) -> list[M2Entry]:
    return parse_m2(Path(path).read_text(encoding="utf-8"), annotator)
