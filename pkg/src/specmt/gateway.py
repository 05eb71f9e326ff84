"""Uniform access to chat-completion and embedding providers.

Three modes:

* ``live``    — talk to an OpenAI-compatible HTTP API.
* ``record``  — talk live, then persist the response to the fixture store.
* ``replay``  — deterministic offline operation from the fixture store only.

Fixture entries are content-addressed by SHA-256 over (kind, model id, full
input text), so near-duplicate prompts can never collide and replay is an
exact-match lookup.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import re
import tempfile
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import requests

from .errors import (
    CandidateParseError,
    FixtureMissError,
    ProviderAuthError,
    ProviderError,
    ProviderNetworkError,
    ProviderResponseError,
    ValidationError,
)

MODES = ("live", "replay", "record")

DEFAULT_CHAT_MODEL = "gpt-4"
DEFAULT_EMBED_MODEL = "text-embedding-ada-002"
DEFAULT_BASE_URL = "https://api.openai.com/v1"

API_KEY_ENV = "SPECMT_API_KEY"
API_KEY_FALLBACK_ENV = "OPENAI_API_KEY"


@dataclass(frozen=True)
class GenerationRequest:
    prompt: str
    model_id: str = DEFAULT_CHAT_MODEL
    temperature: float = 1.0
    max_tokens: int = 1024

    def __post_init__(self):
        if not self.prompt:
            raise ValidationError("prompt must be non-empty", code="request.prompt.empty")
        if self.temperature < 0:
            raise ValidationError("temperature must be >= 0", code="request.temperature.negative")
        if self.max_tokens < 1:
            raise ValidationError("max_tokens must be positive", code="request.max_tokens.invalid")


@dataclass(frozen=True)
class EmbeddingVector:
    """An embedding with its provenance; values are finite and the recorded
    dimension always equals len(values)."""

    values: tuple[float, ...]
    model_id: str
    dimension: int = field(init=False)

    def __post_init__(self):
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ProviderResponseError("embedding has dimension zero")
        if not all(math.isfinite(v) for v in values):
            raise ValidationError("embedding values must be finite", code="embedding.not_finite")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dimension", len(values))


def fixture_key(kind: str, model_id: str, input_text: str) -> str:
    """Content address of one fixture entry.

    NUL separators keep the hash injective across the three parts.
    """

    payload = "\x00".join((kind, model_id, input_text)).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()


class FixtureStore:
    """Directory of JSON fixture entries, one file per content address.

    Concurrent reads are safe; writes go through a temp file + atomic rename
    and are serialized per process (identical keys hold identical content, so
    last-write-wins is harmless).
    """

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._write_lock = threading.Lock()

    def path_for(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, kind: str, model_id: str, input_text: str) -> dict | None:
        key = fixture_key(kind, model_id, input_text)
        path = self.path_for(key)
        if not path.exists():
            return None
        entry = json.loads(path.read_text(encoding="utf-8"))
        # Exact-match replay: the stored input must be the requested input.
        if entry.get("input") != input_text or entry.get("kind") != kind:
            raise ProviderResponseError(
                f"fixture {key} does not match its content address", code="provider.fixture_corrupt"
            )
        return entry

    def put(self, kind: str, model_id: str, input_text: str, output) -> str:
        key = fixture_key(kind, model_id, input_text)
        entry = {
            "kind": kind,
            "model_id": model_id,
            "input_sha256": hashlib.sha256(input_text.encode("utf-8")).hexdigest(),
            "input": input_text,
            "output": output,
        }
        self.root.mkdir(parents=True, exist_ok=True)
        with self._write_lock:
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            try:
                with os.fdopen(fd, "w", encoding="utf-8") as handle:
                    json.dump(entry, handle, ensure_ascii=False)
                os.replace(tmp, self.path_for(key))
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise
        return key


@dataclass(frozen=True)
class ProviderConfig:
    mode: str = "replay"
    chat_base_url: str = DEFAULT_BASE_URL
    embed_base_url: str = DEFAULT_BASE_URL
    chat_model: str = DEFAULT_CHAT_MODEL
    embed_model: str = DEFAULT_EMBED_MODEL
    api_key: str | None = None
    temperature: float = 1.0
    max_tokens: int = 1024
    timeout: float = 60.0
    retries: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValidationError(
                f"mode must be one of {', '.join(MODES)}, got {self.mode!r}",
                code="config.mode.invalid",
            )

    def resolve_api_key(self) -> str | None:
        return self.api_key or os.environ.get(API_KEY_ENV) or os.environ.get(API_KEY_FALLBACK_ENV)


class ProviderGateway:
    """Chat + embedding access with record/replay semantics."""

    def __init__(self, config: ProviderConfig, store: FixtureStore | None = None):
        if config.mode in ("replay", "record") and store is None:
            raise ValidationError(
                f"{config.mode} mode needs a fixture store", code="config.fixtures.missing"
            )
        self.config = config
        self.store = store

    # -- chat ---------------------------------------------------------------

    def generate(self, request: GenerationRequest) -> str:
        """Return the provider's full text response for a prompt."""

        mode = self.config.mode
        if mode == "replay":
            entry = self.store.get("chat", request.model_id, request.prompt)
            if entry is None:
                raise FixtureMissError(
                    "chat", fixture_key("chat", request.model_id, request.prompt), request.prompt
                )
            return entry["output"]
        response = self._live_chat(request)
        if mode == "record":
            self.store.put("chat", request.model_id, request.prompt, response)
        return response

    def _live_chat(self, request: GenerationRequest) -> str:
        body = {
            "model": request.model_id,
            "messages": [{"role": "user", "content": request.prompt}],
            "temperature": request.temperature,
            "max_tokens": request.max_tokens,
        }
        data = self._post(f"{self.config.chat_base_url.rstrip('/')}/chat/completions", body)
        try:
            content = data["choices"][0]["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderResponseError(f"chat response missing content: {exc}") from exc
        if not isinstance(content, str) or not content:
            raise ProviderResponseError("chat response content is empty")
        return content

    # -- embeddings ---------------------------------------------------------

    def embed(self, text: str, model_id: str | None = None) -> EmbeddingVector:
        """Embed a text with the configured (or given) embedding model."""

        if not text:
            raise ValidationError("cannot embed empty text", code="request.text.empty")
        model = model_id or self.config.embed_model
        mode = self.config.mode
        if mode == "replay":
            entry = self.store.get("embed", model, text)
            if entry is None:
                raise FixtureMissError("embed", fixture_key("embed", model, text), text)
            return EmbeddingVector(values=tuple(entry["output"]), model_id=model)
        vector = self._live_embed(text, model)
        if mode == "record":
            self.store.put("embed", model, text, list(vector.values))
        return vector

    def _live_embed(self, text: str, model: str) -> EmbeddingVector:
        body = {"model": model, "input": text}
        data = self._post(f"{self.config.embed_base_url.rstrip('/')}/embeddings", body)
        try:
            values = data["data"][0]["embedding"]
        except (KeyError, IndexError, TypeError) as exc:
            raise ProviderResponseError(f"embedding response missing vector: {exc}") from exc
        if not values:
            raise ProviderResponseError("embedding has dimension zero")
        return EmbeddingVector(values=tuple(values), model_id=model)

    # -- transport ----------------------------------------------------------

    def _post(self, url: str, body: dict) -> dict:
        headers = {"Content-Type": "application/json"}
        api_key = self.config.resolve_api_key()
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        last_error: ProviderError | None = None
        for attempt in range(self.config.retries + 1):
            try:
                response = requests.post(url, json=body, headers=headers, timeout=self.config.timeout)
            except requests.RequestException as exc:
                last_error = ProviderNetworkError(f"request to {url} failed: {exc}")
            else:
                if response.status_code in (401, 403):
                    raise ProviderAuthError(
                        f"provider rejected credentials (HTTP {response.status_code})"
                    )
                if response.status_code in (429, 500, 502, 503, 504):
                    last_error = ProviderResponseError(
                        f"provider returned HTTP {response.status_code}: {response.text[:200]}"
                    )
                elif response.status_code >= 400:
                    raise ProviderResponseError(
                        f"provider returned HTTP {response.status_code}: {response.text[:200]}"
                    )
                else:
                    try:
                        return response.json()
                    except ValueError as exc:
                        raise ProviderResponseError(f"provider returned non-JSON body: {exc}") from exc
            if attempt < self.config.retries:
                time.sleep(0.2 * (attempt + 1))
        raise last_error


# ---------------------------------------------------------------------------
# Multi-candidate response parsing.
# ---------------------------------------------------------------------------

# Leading enumerators at line start: "1." / "1)" / "v1:" families,
# case-insensitive, optional indentation.
_ENUMERATOR_RE = re.compile(r"^\s*(?:v(\d{1,3})\s*[:.)]|(\d{1,3})\s*[.)])\s*", re.IGNORECASE)

_QUOTE_PAIRS = {
    '"': '"',
    "'": "'",
    "“": "”",
    "‘": "’",
    "«": "»",
}


def _strip_quotes(text: str) -> str:
    if len(text) >= 2 and _QUOTE_PAIRS.get(text[0]) == text[-1]:
        return text[1:-1].strip()
    return text


def parse_candidates(raw: str, expected_n: int) -> list[str]:
    """Split a provider response into exactly ``expected_n`` candidate texts.

    For a single candidate the whole trimmed response is the candidate. For
    more, candidates start at lines with a leading enumerator; enumerators and
    surrounding quotes/whitespace are stripped. Any mismatch between the found
    and expected count is an error that reports both.
    """

    if expected_n < 1:
        raise ValidationError("expected_n must be >= 1", code="request.n.invalid")
    if expected_n == 1:
        candidate = raw.strip()
        if not candidate:
            raise CandidateParseError(
                "response is empty after trimming", found=0, expected=1, raw=raw
            )
        return [candidate]

    blocks: list[list[str]] = []
    for line in raw.splitlines():
        match = _ENUMERATOR_RE.match(line)
        if match:
            blocks.append([line[match.end():]])
        elif blocks:
            blocks[-1].append(line)
        # text before the first enumerator is preamble, not a candidate
    if len(blocks) != expected_n:
        raise CandidateParseError(
            f"expected {expected_n} enumerated candidates, found {len(blocks)} in response: "
            f"{raw[:200]!r}",
            found=len(blocks),
            expected=expected_n,
            raw=raw,
        )
    candidates = []
    for i, block in enumerate(blocks, start=1):
        text = _strip_quotes("\n".join(block).strip())
        if not text:
            raise CandidateParseError(
                f"candidate {i} is empty after stripping", found=len(blocks), expected=expected_n, raw=raw
            )
        candidates.append(text)
    return candidates


def iter_fixture_entries(store: FixtureStore) -> Iterable[dict]:
    """Yield every entry in a fixture store (diagnostics/tooling helper)."""

    if not store.root.is_dir():
        return
    for path in sorted(store.root.glob("*.json")):
        yield json.loads(path.read_text(encoding="utf-8"))
