"""Post-correction through a pluggable GEC backend.

A backend ("transport") is any callable ``transport(prompt, request) -> str``
returning the raw model text. Three are provided: :class:`IdentityBackend`
(echoes the input, useful as a no-edit baseline), :class:`FixtureBackend`
(replays recorded outputs keyed by input hash) and :class:`HttpBackend`
(chat-completion style JSON endpoint).
"""

from __future__ import annotations

import hashlib
import logging
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Iterable, Mapping, Sequence

import httpx

from .errors import AuthMissing, TransportFailure, UnknownTemplate

log = logging.getLogger(__name__)


class PromptTemplate(str, Enum):
    GEC = "gec"
    TRANSLITERATION = "transliteration"
    TRANSLATION = "translation"


PROMPTS = {
    PromptTemplate.TRANSLITERATION: (
        "You are a transliteration system that can transliterate Judeo-Arabic text to Arabic. "
        "Please transliterate the following Judeo-Arabic sentence to Arabic without providing any "
        "explanation. The output should be in Arabic script."
    ),
    PromptTemplate.GEC: (
        "Please identify and correct any grammatical and spelling errors in the following sentence "
        "marked with the tag <input> SRC </input>. Make the minimal changes necessary to correct the "
        "sentence. Do not rephrase any parts of the sentence that are already grammatically correct, "
        "and avoid altering the meaning by adding or removing information. After making the "
        "corrections, output the revised sentence directly without providing any explanations. "
        "Remember to format the corrected output with the tag <output> Your Corrected Version </output>."
    ),
    PromptTemplate.TRANSLATION: (
        "You are a machine translation system that can translate Arabic to English. Please translate "
        "the following Arabic sentence to English without providing any explanation."
    ),
}

# the GEC template names its input slot; the others take the sentence on a new line
_GEC_SLOT = "<input> SRC </input>"

OUTPUT_OPEN, OUTPUT_CLOSE = "<output>", "</output>"
_OUTPUT_RE = re.compile(re.escape(OUTPUT_OPEN) + r"(.*?)" + re.escape(OUTPUT_CLOSE), re.DOTALL)


@dataclass(frozen=True)
class CorrectionRequest:
    text: str
    prompt_template: PromptTemplate | str = PromptTemplate.GEC
    model_id: str = "identity"
    max_retries: int = 3
    timeout: float = 60.0

    def __post_init__(self):
        if not self.text or not self.text.strip():
            raise ValueError("correction request needs non-empty text")
        if self.max_retries < 0:
            raise ValueError("max_retries must be >= 0")


@dataclass(frozen=True)
class CorrectionResponse:
    corrected: str
    raw: str
    extracted: bool


def build_prompt(req: CorrectionRequest) -> str:
    try:
        template = PromptTemplate(req.prompt_template)
    except ValueError:
        raise UnknownTemplate(req.prompt_template) from None
    body = PROMPTS[template]
    if template is PromptTemplate.GEC:
        return body.replace(_GEC_SLOT, f"<input> {req.text} </input>")
    return f"{body}\n{req.text}"


def wrap_output(text: str) -> str:
    return f"{OUTPUT_OPEN}{text}{OUTPUT_CLOSE}"


def extract_output(raw: str) -> str | None:
    """Content of the first ``<output>...</output>`` pair, or None."""
    m = _OUTPUT_RE.search(raw)
    return m.group(1) if m else None


def input_key(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class TransientError(Exception):
    """A failure worth retrying (timeouts, rate limits, 5xx)."""


Transport = Callable[[str, CorrectionRequest], str]


class IdentityBackend:
    """Returns the input unchanged, wrapped in output tags."""

    name = "identity"

    def __call__(self, prompt: str, req: CorrectionRequest) -> str:
        return wrap_output(req.text)


def _unescape(field_: str) -> str:
    return field_.replace("\\t", "\t").replace("\\n", "\n").replace("\\\\", "\\")


def _escape(field_: str) -> str:
    return field_.replace("\\", "\\\\").replace("\t", "\\t").replace("\n", "\\n")


class FixtureBackend:
    """Replays outputs from a two-column TSV: sha256(input) <TAB> raw output."""

    name = "fixture"

    def __init__(self, outputs: Mapping[str, str]):
        self.outputs = dict(outputs)

    @classmethod
    def from_file(cls, path: str | Path) -> "FixtureBackend":
        outputs = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line.strip() or line.startswith("#"):
                continue
            key, _, value = line.partition("\t")
            outputs[key.strip()] = _unescape(value)
        return cls(outputs)

    @staticmethod
    def dump(pairs: Iterable[tuple[str, str]]) -> str:
        """Render ``(input text, raw output)`` pairs in the fixture format."""
        return "".join(f"{input_key(src)}\t{_escape(out)}\n" for src, out in pairs)

    def __call__(self, prompt: str, req: CorrectionRequest) -> str:
        key = input_key(req.text)
        try:
            return self.outputs[key]
        except KeyError:
            raise TransportFailure(f"fixture has no output for input {key[:12]}...") from None


class HttpBackend:
    """Chat-completion client: POSTs ``{"model", "messages", **options}`` as JSON."""

    name = "http"
    RETRYABLE_STATUS = frozenset({408, 409, 429, 500, 502, 503, 504})

    def __init__(self, url: str, api_key_env: str = "JATRANSLIT_API_KEY",
                 options: Mapping[str, Any] | None = None, client: httpx.Client | None = None):
        key = os.environ.get(api_key_env)
        if not key:
            raise AuthMissing(f"environment variable {api_key_env} is not set")
        self.url = url
        self.options = dict(options or {})
        self.client = client or httpx.Client()
        self._headers = {"Authorization": f"Bearer {key}"}

    def __call__(self, prompt: str, req: CorrectionRequest) -> str:
        payload = {"model": req.model_id, "messages": [{"role": "user", "content": prompt}], **self.options}
        try:
            resp = self.client.post(self.url, json=payload, headers=self._headers, timeout=req.timeout)
        except (httpx.TimeoutException, httpx.TransportError) as exc:
            raise TransientError(str(exc)) from exc
        if resp.status_code in self.RETRYABLE_STATUS:
            raise TransientError(f"HTTP {resp.status_code}")
        if resp.status_code >= 400:
            raise TransportFailure(f"HTTP {resp.status_code}: {resp.text[:200]}")
        try:
            return resp.json()["choices"][0]["message"]["content"]
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportFailure(f"malformed completion payload: {exc}") from exc


def correct_section(
    req: CorrectionRequest,
    transport: Transport,
    backoff: float = 1.0,
    sleep: Callable[[float], None] = time.sleep,
) -> CorrectionResponse:
    """Send one section, retrying transient failures with exponential backoff."""
    prompt = build_prompt(req)
    for attempt in range(req.max_retries + 1):
        try:
            raw = transport(prompt, req)
            break
        except TransientError as exc:
            if attempt == req.max_retries:
                raise TransportFailure(f"giving up after {attempt + 1} attempts: {exc}") from exc
            delay = backoff * 2 ** attempt
            log.warning("transient failure (%s), retrying in %.1fs", exc, delay)
            sleep(delay)
    payload = extract_output(raw)
    if payload is None:
        log.warning("no %s tags in model output; using raw text", OUTPUT_OPEN)
        return CorrectionResponse(corrected=raw.strip(), raw=raw, extracted=False)
    return CorrectionResponse(corrected=payload, raw=raw, extracted=True)


def correct_sections(
    texts: Sequence[str],
    transport: Transport,
    concurrency: int = 4,
    **request_kw,
) -> list[CorrectionResponse]:
    """Correct many sections with at most ``concurrency`` requests in flight.

    Results come back in input order. Blank sections skip the backend.
    """
    def one(text: str) -> CorrectionResponse:
        if not text.strip():
            return CorrectionResponse(corrected=text, raw=text, extracted=False)
        return correct_section(CorrectionRequest(text, **request_kw), transport)

    if concurrency <= 1:
        return [one(t) for t in texts]
    with ThreadPoolExecutor(max_workers=concurrency) as pool:
        return list(pool.map(one, texts))


@dataclass
class BackendConfig:
    kind: str = "identity"  # identity | fixture | http
    model: str = "identity"
    url: str | None = None
    fixture: str | None = None
    api_key_env: str = "JATRANSLIT_API_KEY"
    concurrency: int = 4
    timeout: float = 60.0
    max_retries: int = 3
    options: dict = field(default_factory=dict)


def make_backend(cfg: BackendConfig) -> Transport:
    if cfg.kind == "identity":
        return IdentityBackend()
    if cfg.kind == "fixture":
        if not cfg.fixture:
            raise ValueError("fixture backend needs a fixture file")
        return FixtureBackend.from_file(cfg.fixture)
    if cfg.kind == "http":
        if not cfg.url:
            raise ValueError("http backend needs --url")
        return HttpBackend(cfg.url, cfg.api_key_env, cfg.options)
    raise ValueError(f"unknown backend {cfg.kind!r}")
