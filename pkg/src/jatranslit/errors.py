"""Exception hierarchy shared across the toolkit."""


class TranslitError(Exception):
    """Base class for hard errors raised by jatranslit."""


class NotHebrewScript(TranslitError, ValueError):
    def __init__(self, ch: str):
        super().__init__(f"U+{ord(ch):04X} {ch!r} is not a Hebrew-script character")
        self.char = ch


class EmptyToken(TranslitError, ValueError):
    pass


class UnmappableCharacter(TranslitError, ValueError):
    def __init__(self, token: str, offset: int, reason: str = "no mapping"):
        ch = token[offset] if 0 <= offset < len(token) else ""
        super().__init__(
            f"cannot transliterate U+{ord(ch):04X} at offset {offset} in {token!r}: {reason}"
            if ch
            else f"cannot transliterate {token!r}: {reason}"
        )
        self.token = token
        self.offset = offset
        self.reason = reason


class MappingConfigError(TranslitError, ValueError):
    pass


class LineCountMismatch(TranslitError):
    pass


class InvalidEncoding(TranslitError):
    pass


class NoEvaluableRows(TranslitError):
    pass


class OverlappingEdits(TranslitError, ValueError):
    pass


class UnknownTemplate(TranslitError, KeyError):
    pass


class TransportFailure(TranslitError):
    pass


class AuthMissing(TranslitError):
    pass
