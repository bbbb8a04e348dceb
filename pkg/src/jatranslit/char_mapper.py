"""Rule-based Hebrew-script to Arabic-script character mapping.

The mapper is a letter-for-letter substitution: every Hebrew base letter
(final forms fold to their base) yields exactly one Arabic letter. Seven
letters carry an upper-dot variant that selects a different Arabic letter.
Hamza is never produced; restoring it is left to post-correction.
"""

from __future__ import annotations

import logging
import string
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from types import MappingProxyType
from typing import Mapping

from .errors import MappingConfigError, UnmappableCharacter
from .script_core import (
    CANTILLATION_MARKS,
    FINAL_FORMS,
    HEBREW_BASE_LETTERS,
    NIQQUD_MARKS,
    UPPER_DOT,
    UPPER_DOT_LOOKALIKES,
    ARABIC_BASE_LETTERS,
    TEH_MARBUTA,
    strip_upper_dots,
)

log = logging.getLogger(__name__)

DOTTED_LETTERS = frozenset("גדהטכצת")

_BASE_PAIRS = (
    ("א", "ا"), ("ב", "ب"), ("ג", "ج"), ("ד", "د"), ("ה", "ه"), ("ו", "و"),
    ("ז", "ز"), ("ח", "ح"), ("ט", "ط"), ("י", "ي"), ("כ", "ك"), ("ל", "ل"),
    ("מ", "م"), ("נ", "ن"), ("ס", "س"), ("ע", "ع"), ("פ", "ف"), ("צ", "ص"),
    ("ק", "ق"), ("ר", "ر"), ("ש", "ش"), ("ת", "ت"),
)
_DOTTED_PAIRS = (
    ("ג", "غ"), ("ד", "ذ"), ("ה", "ة"), ("ט", "ظ"), ("כ", "خ"), ("צ", "ض"), ("ת", "ث"),
)

DEFAULT_PASSTHROUGH = frozenset(
    string.punctuation
    + string.digits
    + "־׀׃׆׳״"  # maqaf, paseq, sof pasuq, nun hafukha, geresh, gershayim
    + "،؛؟«»“”‘’–—…"
)

_ARABIC_TARGETS = frozenset(ARABIC_BASE_LETTERS + TEH_MARBUTA)


class TranslitMode(str, Enum):
    DOTTED = "dotted"
    DOTLESS = "dotless"


@dataclass(frozen=True)
class MappingTable:
    base_map: Mapping[str, str]
    dotted_map: Mapping[str, str]
    passthrough: frozenset[str] = field(default=DEFAULT_PASSTHROUGH)

    def __post_init__(self):
        object.__setattr__(self, "base_map", MappingProxyType(dict(self.base_map)))
        object.__setattr__(self, "dotted_map", MappingProxyType(dict(self.dotted_map)))
        object.__setattr__(self, "passthrough", frozenset(self.passthrough))
        self.validate()

    def validate(self) -> None:
        missing = set(HEBREW_BASE_LETTERS) - set(self.base_map)
        if missing:
            raise MappingConfigError(f"base map lacks letters: {''.join(sorted(missing))}")
        extra = set(self.base_map) - set(HEBREW_BASE_LETTERS)
        if extra:
            raise MappingConfigError(f"base map has non-letter keys: {sorted(extra)}")
        if set(self.dotted_map) != DOTTED_LETTERS:
            raise MappingConfigError(
                f"dotted map keys must be {''.join(sorted(DOTTED_LETTERS))}, "
                f"got {''.join(sorted(self.dotted_map))}"
            )
        for name, table in (("base", self.base_map), ("dotted", self.dotted_map)):
            for k, v in table.items():
                if v not in _ARABIC_TARGETS:
                    raise MappingConfigError(f"{name} map value for {k} must be one Arabic letter, got {v!r}")
        for k, v in self.dotted_map.items():
            if v == self.base_map[k]:
                raise MappingConfigError(f"dotted and plain {k} both map to {v}")

    def lookup(self, letter: str, dotted: bool = False) -> str:
        letter = FINAL_FORMS.get(letter, letter)
        if dotted:
            return self.dotted_map[letter]
        return self.base_map[letter]

    def with_overrides(self, base=None, dotted=None) -> "MappingTable":
        return MappingTable(
            {**self.base_map, **(base or {})},
            {**self.dotted_map, **(dotted or {})},
            self.passthrough,
        )

    def dumps(self) -> str:
        lines = ["# hebrew[+dot]\tarabic"]
        lines += [f"{k}\t{v}" for k, v in self.base_map.items()]
        lines += [f"{k}+dot\t{v}" for k, v in self.dotted_map.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, base: "MappingTable | None" = None) -> "MappingTable":
        """Parse a mapping config on top of ``base`` (the default table if omitted).

        Each non-comment line is ``<letter>[+dot]<TAB><arabic>``; the dotted key
        may also be written as the letter followed by the upper-dot mark.
        """
        base = base or default_mapping()
        plain: dict[str, str] = {}
        dotted: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise MappingConfigError(f"line {lineno}: expected two tab-separated fields: {raw!r}")
            key, value = parts[0].strip(), parts[1].strip()
            is_dotted = False
            if key.endswith("+dot"):
                key, is_dotted = key[: -len("+dot")], True
            elif len(key) == 2 and (key[1] == UPPER_DOT or key[1] in UPPER_DOT_LOOKALIKES):
                key, is_dotted = key[0], True
            key = FINAL_FORMS.get(key, key)
            if key not in HEBREW_BASE_LETTERS or len(key) != 1:
                raise MappingConfigError(f"line {lineno}: {key!r} is not a Hebrew base letter")
            (dotted if is_dotted else plain)[key] = value
        return base.with_overrides(plain, dotted)

    @classmethod
    def from_file(cls, path: str | Path, base: "MappingTable | None" = None) -> "MappingTable":
        return cls.loads(Path(path).read_text(encoding="utf-8"), base)


_DEFAULT: MappingTable | None = None


def default_mapping() -> MappingTable:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = MappingTable(dict(_BASE_PAIRS), dict(_DOTTED_PAIRS))
    return _DEFAULT


def transliterate_token(
    token: str,
    table: MappingTable | None = None,
    mode: TranslitMode | str = TranslitMode.DOTTED,
    warnings: list[str] | None = None,
) -> str:
    """Transliterate one whitespace-free token.

    In dotted mode an upper dot attached to one of the seven dotted letters
    selects the dotted mapping; dotless mode strips every dot first. Intervening niqqud between the letter and its
    dot is tolerated. A dot on any other letter is dropped (with a warning);
    a dot with no letter to attach to raises :class:`UnmappableCharacter`.
    """
    table = table or default_mapping()
    if TranslitMode(mode) is TranslitMode.DOTLESS:
        token = strip_upper_dots(token)
    out: list[str] = []
    last_letter: int | None = None  # index into ``out`` of the letter marks attach to
    last_letter_src: str | None = None
    dotted_applied = False
    for offset, ch in enumerate(token):
        if ch == UPPER_DOT or ch in UPPER_DOT_LOOKALIKES:
            if last_letter is None:
                raise UnmappableCharacter(token, offset, "upper dot with no letter")
            if dotted_applied:
                continue
            base = FINAL_FORMS.get(last_letter_src, last_letter_src)
            if base in table.dotted_map:
                out[last_letter] = table.lookup(base, dotted=True)
                dotted_applied = True
            elif warnings is not None:
                warnings.append(f"{token}: upper dot on {last_letter_src} ignored")
            continue
        if ch in HEBREW_BASE_LETTERS or ch in FINAL_FORMS:
            out.append(table.lookup(ch))
            last_letter, last_letter_src, dotted_applied = len(out) - 1, ch, False
            continue
        if ch in NIQQUD_MARKS or ch in CANTILLATION_MARKS:
            continue
        if ch in table.passthrough:
            out.append(ch)
            last_letter = last_letter_src = None
            continue
        raise UnmappableCharacter(token, offset)
    if not out:
        raise UnmappableCharacter(token, -1, "token has no letters")
    return "".join(out)


def transliterate_text(
    text: str,
    table: MappingTable | None = None,
    mode: TranslitMode | str = TranslitMode.DOTTED,
    warnings: list[str] | None = None,
) -> str:
    """Transliterate running text token by token, keeping whitespace verbatim.

    Tokens that cannot be mapped are copied unchanged and reported through
    ``warnings`` (and the module logger).
    """
    out = []
    for piece in _split_keep_whitespace(text):
        if not piece or piece.isspace():
            out.append(piece)
            continue
        try:
            out.append(transliterate_token(piece, table, mode, warnings))
        except UnmappableCharacter as exc:
            log.warning("%s", exc)
            if warnings is not None:
                warnings.append(str(exc))
            out.append(piece)
    return "".join(out)


def _split_keep_whitespace(text: str) -> list[str]:
    pieces: list[str] = []
    buf = ""
    for ch in text:
        if buf and ch.isspace() != buf[-1].isspace():
            pieces.append(buf)
            buf = ""
        buf += ch
    if buf:
        pieces.append(buf)
    return pieces
