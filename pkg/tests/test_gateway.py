from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from specmt.errors import (
    CandidateParseError,
    FixtureMissError,
    ProviderAuthError,
    ProviderNetworkError,
    ProviderResponseError,
    ValidationError,
)
from specmt.gateway import (
    EmbeddingVector,
    FixtureStore,
    GenerationRequest,
    ProviderConfig,
    ProviderGateway,
    fixture_key,
    iter_fixture_entries,
    parse_candidates,
)


# -- scripted provider endpoint for live/record tests -------------------------


class _ScriptedProvider:
    def __init__(self) -> None:
        self.script: list[tuple[int, object]] = []
        self.seen: list[dict] = []
        provider = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self) -> None:
                length = int(self.headers.get("Content-Length", "0"))
                body = json.loads(self.rfile.read(length)) if length else None
                provider.seen.append(
                    {
                        "path": self.path,
                        "body": body,
                        "authorization": self.headers.get("Authorization"),
                    }
                )
                status, payload = provider.script.pop(0)
                data = (
                    payload.encode("utf-8")
                    if isinstance(payload, str)
                    else json.dumps(payload).encode("utf-8")
                )
                self.send_response(status)
                self.send_header("Content-Type", "application/json")
                self.send_header("Content-Length", str(len(data)))
                self.end_headers()
                self.wfile.write(data)

            def log_message(self, *args) -> None:
                pass

        self.server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self.thread = threading.Thread(target=self.server.serve_forever, daemon=True)
        self.thread.start()

    @property
    def base_url(self) -> str:
        host, port = self.server.server_address[:2]
        return f"http://{host}:{port}/v1"

    def close(self) -> None:
        self.server.shutdown()
        self.server.server_close()


@pytest.fixture()
def provider():
    scripted = _ScriptedProvider()
    yield scripted
    scripted.close()


def _live_config(provider: _ScriptedProvider, *, mode: str = "live", **overrides) -> ProviderConfig:
    fields = {
        "mode": mode,
        "chat_base_url": provider.base_url,
        "embed_base_url": provider.base_url,
        "api_key": "test-key",
        "retries": 1,
    }
    fields.update(overrides)
    return ProviderConfig(**fields)


def _chat_payload(content: str) -> dict:
    return {"choices": [{"message": {"role": "assistant", "content": content}}]}


def _embed_payload(values: list[float]) -> dict:
    return {"data": [{"embedding": values}]}


# -- fixture store -------------------------------------------------------------


def test_fixture_key_is_stable_and_input_sensitive() -> None:
    key = fixture_key("chat", "gpt-4", "hello")
    assert key == fixture_key("chat", "gpt-4", "hello")
    assert key != fixture_key("embed", "gpt-4", "hello")
    assert key != fixture_key("chat", "gpt-4", "hello ")
    assert len(key) == 64


def test_fixture_store_round_trips_entries(tmp_path: Path) -> None:
    store = FixtureStore(tmp_path)
    store.put("chat", "gpt-4", "prompt text", "response text")
    entry = store.get("chat", "gpt-4", "prompt text")
    assert entry is not None
    assert entry["output"] == "response text"
    assert entry["input"] == "prompt text"
    assert store.get("chat", "gpt-4", "different prompt") is None


def test_fixture_store_rejects_tampered_entries(tmp_path: Path) -> None:
    store = FixtureStore(tmp_path)
    key = store.put("embed", "m", "text", [0.1, 0.2])
    path = store.path_for(key)
    entry = json.loads(path.read_text(encoding="utf-8"))
    entry["input"] = "swapped"
    path.write_text(json.dumps(entry), encoding="utf-8")
    with pytest.raises(ProviderResponseError) as excinfo:
        store.get("embed", "m", "text")
    assert excinfo.value.code == "provider.fixture_corrupt"


def test_iter_fixture_entries_lists_everything(tmp_path: Path) -> None:
    store = FixtureStore(tmp_path)
    store.put("chat", "m", "a", "1")
    store.put("embed", "m", "b", [1.0])
    kinds = sorted(entry["kind"] for entry in iter_fixture_entries(store))
    assert kinds == ["chat", "embed"]


def test_bundled_store_replays_known_chat_fixture(replay_gateway: ProviderGateway, goldens: Path) -> None:
    prompt = (goldens / "spec_conditioned_shared_pot_three.txt").read_text(encoding="utf-8")
    raw = replay_gateway.generate(GenerationRequest(prompt=prompt, model_id="gpt-4"))
    assert len(parse_candidates(raw, 3)) == 3


# -- embedding vector invariants -----------------------------------------------


def test_embedding_vector_coerces_values_and_derives_dimension() -> None:
    vec = EmbeddingVector(values=(1, 2, 3), model_id="m")
    assert vec.values == (1.0, 2.0, 3.0)
    assert all(isinstance(v, float) for v in vec.values)
    assert vec.dimension == 3


def test_embedding_vector_rejects_empty_and_non_finite() -> None:
    with pytest.raises(ProviderResponseError):
        EmbeddingVector(values=(), model_id="m")
    with pytest.raises(ValidationError):
        EmbeddingVector(values=(1.0, float("nan")), model_id="m")
    with pytest.raises(ValidationError):
        EmbeddingVector(values=(float("inf"),), model_id="m")


# -- gateway modes ---------------------------------------------------------------


def test_replay_mode_requires_a_store() -> None:
    with pytest.raises(ValidationError):
        ProviderGateway(ProviderConfig(mode="replay"), store=None)


def test_invalid_mode_is_rejected() -> None:
    with pytest.raises(ValidationError):
        ProviderConfig(mode="cached")


def test_replay_miss_identifies_kind_and_input(replay_gateway: ProviderGateway) -> None:
    with pytest.raises(FixtureMissError) as excinfo:
        replay_gateway.generate(GenerationRequest(prompt="never recorded", model_id="gpt-4"))
    assert excinfo.value.code == "provider.fixture_miss"
    assert "never recorded" in str(excinfo.value)


def test_embed_rejects_empty_text(replay_gateway: ProviderGateway) -> None:
    with pytest.raises(ValidationError):
        replay_gateway.embed("")


def test_live_chat_posts_prompt_and_returns_content(provider: _ScriptedProvider) -> None:
    provider.script.append((200, _chat_payload("Bonjour le monde")))
    gateway = ProviderGateway(_live_config(provider))
    text = gateway.generate(GenerationRequest(prompt="Translate: hello world", model_id="gpt-4"))
    assert text == "Bonjour le monde"
    request = provider.seen[0]
    assert request["path"].endswith("/chat/completions")
    assert request["body"]["messages"] == [{"role": "user", "content": "Translate: hello world"}]
    assert request["authorization"] == "Bearer test-key"


def test_live_embed_posts_text_and_returns_vector(provider: _ScriptedProvider) -> None:
    provider.script.append((200, _embed_payload([0.6, 0.8])))
    gateway = ProviderGateway(_live_config(provider))
    vec = gateway.embed("hello world")
    assert vec.values == (0.6, 0.8)
    assert provider.seen[0]["path"].endswith("/embeddings")
    assert provider.seen[0]["body"]["input"] == "hello world"


def test_auth_failure_raises_immediately_without_retry(provider: _ScriptedProvider) -> None:
    provider.script.append((401, {"error": "bad key"}))
    gateway = ProviderGateway(_live_config(provider))
    with pytest.raises(ProviderAuthError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))
    assert len(provider.seen) == 1


def test_retryable_status_is_retried_then_succeeds(provider: _ScriptedProvider) -> None:
    provider.script.append((503, {"error": "overloaded"}))
    provider.script.append((200, _chat_payload("second try")))
    gateway = ProviderGateway(_live_config(provider))
    text = gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))
    assert text == "second try"
    assert len(provider.seen) == 2


def test_retries_exhausted_raises_response_error(provider: _ScriptedProvider) -> None:
    provider.script.append((500, {"error": "boom"}))
    provider.script.append((500, {"error": "boom"}))
    gateway = ProviderGateway(_live_config(provider, retries=1))
    with pytest.raises(ProviderResponseError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))
    assert len(provider.seen) == 2


def test_client_error_is_not_retried(provider: _ScriptedProvider) -> None:
    provider.script.append((404, {"error": "no such model"}))
    gateway = ProviderGateway(_live_config(provider))
    with pytest.raises(ProviderResponseError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))
    assert len(provider.seen) == 1


def test_unreachable_host_raises_network_error() -> None:
    config = ProviderConfig(
        mode="live",
        chat_base_url="http://127.0.0.1:9/v1",
        embed_base_url="http://127.0.0.1:9/v1",
        api_key="k",
        retries=0,
        timeout=0.5,
    )
    gateway = ProviderGateway(config)
    with pytest.raises(ProviderNetworkError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))


def test_malformed_chat_body_raises_response_error(provider: _ScriptedProvider) -> None:
    provider.script.append((200, {"choices": []}))
    gateway = ProviderGateway(_live_config(provider))
    with pytest.raises(ProviderResponseError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))


def test_non_json_body_raises_response_error(provider: _ScriptedProvider) -> None:
    provider.script.append((200, "<html>gateway timeout</html>"))
    gateway = ProviderGateway(_live_config(provider, retries=0))
    with pytest.raises(ProviderResponseError):
        gateway.generate(GenerationRequest(prompt="p", model_id="gpt-4"))


def test_record_mode_persists_then_replays(provider: _ScriptedProvider, tmp_path: Path) -> None:
    provider.script.append((200, _chat_payload("recorded answer")))
    provider.script.append((200, _embed_payload([1.0, 0.0, 0.0])))
    store = FixtureStore(tmp_path / "store")
    recording = ProviderGateway(_live_config(provider, mode="record"), store=store)
    assert recording.generate(GenerationRequest(prompt="rec", model_id="gpt-4")) == "recorded answer"
    assert recording.embed("rec").dimension == 3

    replaying = ProviderGateway(ProviderConfig(mode="replay"), store=store)
    assert replaying.generate(GenerationRequest(prompt="rec", model_id="gpt-4")) == "recorded answer"
    assert replaying.embed("rec").values == (1.0, 0.0, 0.0)
    assert len(provider.seen) == 2


# -- multi-candidate parsing -----------------------------------------------------


def test_parse_single_candidate_takes_whole_trimmed_response() -> None:
    assert parse_candidates("  A whole answer.\n", 1) == ["A whole answer."]


def test_parse_rejects_blank_single_response() -> None:
    with pytest.raises(CandidateParseError):
        parse_candidates("   \n ", 1)


@pytest.mark.parametrize(
    "raw",
    [
        '1. "First one."\n2. "Second one."\n3. "Third one."',
        "1) First one.\n2) Second one.\n3) Third one.",
        "v1: First one.\nv2: Second one.\nv3: Third one.",
        "Sure, here are three options:\n\nV1. First one.\nV2. Second one.\nV3. Third one.",
    ],
)
def test_parse_handles_common_enumeration_styles(raw: str) -> None:
    assert parse_candidates(raw, 3) == ["First one.", "Second one.", "Third one."]


def test_parse_keeps_multiline_candidates_together() -> None:
    raw = "1. First line\nstill the first candidate\n2. Second candidate"
    assert parse_candidates(raw, 2) == [
        "First line\nstill the first candidate",
        "Second candidate",
    ]


def test_parse_strips_matched_curly_quotes_only() -> None:
    assert parse_candidates("1. “Quoted.”\n2. 'Singled.'", 2) == ["Quoted.", "Singled."]
    assert parse_candidates('1. "Mismatched.\n2. plain', 2) == ['"Mismatched.', "plain"]


def test_parse_count_mismatch_reports_both_counts() -> None:
    with pytest.raises(CandidateParseError) as excinfo:
        parse_candidates("1. only one", 3)
    assert excinfo.value.found == 1
    assert excinfo.value.expected == 3
    assert excinfo.value.code == "provider.unparseable_candidates"


def test_parse_rejects_unnumbered_prose_for_multiple_candidates() -> None:
    with pytest.raises(CandidateParseError) as excinfo:
        parse_candidates("Here you go. No list formatting at all.", 2)
    assert excinfo.value.found == 0


def test_parse_rejects_invalid_expected_count() -> None:
    with pytest.raises(ValidationError):
        parse_candidates("1. a", 0)
