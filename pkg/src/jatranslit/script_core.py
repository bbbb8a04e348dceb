"""Character inventories and normalization for Hebrew-script Judeo-Arabic and Arabic text."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from enum import Enum

from .errors import EmptyToken, NotHebrewScript

UPPER_DOT = "\u05c4"  # HEBREW MARK UPPER DOT

# marks that show up in place of the upper dot in real editions
UPPER_DOT_LOOKALIKES = frozenset({"\u0307"})

HEBREW_BASE_LETTERS = "אבגדהוזחטיכלמנסעפצקרשת"
FINAL_FORMS = {"ך": "כ", "ם": "מ", "ן": "נ", "ף": "פ", "ץ": "צ"}

# points (sheva..dagesh), meteg, rafe, shin/sin dots, qamats qatan
NIQQUD_MARKS = frozenset(
    [chr(c) for c in range(0x05B0, 0x05BD + 1)] + ["\u05bf", "\u05c1", "\u05c2", "\u05c7"]
)
CANTILLATION_MARKS = frozenset(chr(c) for c in range(0x0591, 0x05AF + 1))

HEBREW_BLOCK = range(0x0590, 0x0600)

ARABIC_BASE_LETTERS = "ابتثجحخدذرزسشصضطظعغفقكلمنهوي"
TEH_MARBUTA = "ة"
HAMZA_FORMS = frozenset("ءآأؤإئ")


def _is_arabic_diacritic(ch: str) -> bool:
    cp = ord(ch)
    return (
        0x064B <= cp <= 0x065F
        or cp == 0x0670
        or 0x0610 <= cp <= 0x061A
        or 0x06D6 <= cp <= 0x06ED
    )


class HebrewKind(str, Enum):
    BASE_LETTER = "base_letter"
    FINAL_FORM_LETTER = "final_form_letter"
    UPPER_DOT_MARK = "upper_dot_mark"
    NIQQUD_MARK = "niqqud_mark"
    OTHER_MARK = "other_mark"


class ArabicKind(str, Enum):
    BASE_LETTER = "base_letter"
    TEH_MARBUTA = "teh_marbuta"
    HAMZA_FORM = "hamza_form"
    DIACRITIC = "diacritic"
    OTHER = "other"


@dataclass(frozen=True)
class HebrewChar:
    codepoint: int
    kind: HebrewKind
    base: str | None = None  # base letter for letters and final forms

    @property
    def char(self) -> str:
        return chr(self.codepoint)


@dataclass(frozen=True)
class ArabicChar:
    codepoint: int
    kind: ArabicKind


def _is_shared_punctuation(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PZ" or ch.isspace()


def classify_hebrew(ch: str) -> HebrewChar:
    """Classify a single scalar from a Hebrew-script token.

    Lookalike upper-dot marks (a generic combining dot above) classify as the
    upper dot. Punctuation shared with other scripts is ``other_mark``.
    Anything else outside the Hebrew block raises :class:`NotHebrewScript`.
    """
    if len(ch) != 1:
        raise ValueError(f"expected a single character, got {ch!r}")
    cp = ord(ch)
    if ch == UPPER_DOT or ch in UPPER_DOT_LOOKALIKES:
        return HebrewChar(cp, HebrewKind.UPPER_DOT_MARK)
    if ch in HEBREW_BASE_LETTERS:
        return HebrewChar(cp, HebrewKind.BASE_LETTER, ch)
    if ch in FINAL_FORMS:
        return HebrewChar(cp, HebrewKind.FINAL_FORM_LETTER, FINAL_FORMS[ch])
    if ch in NIQQUD_MARKS:
        return HebrewChar(cp, HebrewKind.NIQQUD_MARK)
    if cp in HEBREW_BLOCK or _is_shared_punctuation(ch):
        return HebrewChar(cp, HebrewKind.OTHER_MARK)
    raise NotHebrewScript(ch)


def classify_arabic(ch: str) -> ArabicChar:
    cp = ord(ch)
    if ch in ARABIC_BASE_LETTERS:
        return ArabicChar(cp, ArabicKind.BASE_LETTER)
    if ch == TEH_MARBUTA:
        return ArabicChar(cp, ArabicKind.TEH_MARBUTA)
    if ch in HAMZA_FORMS:
        return ArabicChar(cp, ArabicKind.HAMZA_FORM)
    if _is_arabic_diacritic(ch):
        return ArabicChar(cp, ArabicKind.DIACRITIC)
    return ArabicChar(cp, ArabicKind.OTHER)


@dataclass(frozen=True)
class NormalizationPolicy:
    strip_niqqud: bool = False
    strip_upper_dot: bool = False
    strip_arabic_diacritics: bool = False
    normalize_final_forms: bool = False


SOURCE_POLICY = NormalizationPolicy()
DOTLESS_POLICY = NormalizationPolicy(strip_upper_dot=True)
REFERENCE_POLICY = NormalizationPolicy(strip_arabic_diacritics=True)


def canonicalize_upper_dot(text: str) -> str:
    """Rewrite lookalike dots that follow a Hebrew letter as the Hebrew upper dot."""
    out = []
    prev_hebrew = False
    for ch in text:
        if ch in UPPER_DOT_LOOKALIKES and prev_hebrew:
            out.append(UPPER_DOT)
            continue
        out.append(ch)
        if not unicodedata.combining(ch):
            prev_hebrew = ord(ch) in HEBREW_BLOCK
    return "".join(out)


def strip_arabic_diacritics(text: str) -> str:
    # compose first so decomposed hamza above/below survives as a letter
    text = unicodedata.normalize("NFC", text)
    return "".join(ch for ch in text if not _is_arabic_diacritic(ch))


def normalize(text: str, policy: NormalizationPolicy = SOURCE_POLICY) -> str:
    """Apply ``policy`` to ``text``.

    Cantillation marks are always removed and lookalike upper dots are always
    canonicalized. Letter order and digits are untouched.
    """
    text = canonicalize_upper_dot(text)
    if policy.strip_arabic_diacritics:
        text = strip_arabic_diacritics(text)
    out = []
    for ch in text:
        if ch in CANTILLATION_MARKS:
            continue
        if policy.strip_niqqud and ch in NIQQUD_MARKS:
            continue
        if policy.strip_upper_dot and ch == UPPER_DOT:
            continue
        if policy.normalize_final_forms and ch in FINAL_FORMS:
            ch = FINAL_FORMS[ch]
        out.append(ch)
    return "".join(out)


def strip_upper_dots(text: str) -> str:
    return normalize(text, DOTLESS_POLICY)


def has_niqqud(token: str) -> bool:
    return any(ch in NIQQUD_MARKS for ch in token)


def is_punctuation_char(ch: str) -> bool:
    return unicodedata.category(ch)[0] in "PS"


def is_punctuation_token(token: str) -> bool:
    """True iff every scalar is punctuation or a symbol (digits are neither)."""
    if not token:
        raise EmptyToken("empty token")
    return all(is_punctuation_char(ch) for ch in token)
