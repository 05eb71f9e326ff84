"""End-to-end translation sessions: prompt, generate, parse, embed, rank,
persist, and record the translator's selection.

A session persists as one JSON file under the sessions directory plus an
entry in ``index.json``. Persistence is all-or-nothing: any upstream failure
aborts the run before anything is written.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Mapping, Sequence

from .errors import SessionStoreError, SpecValidationError, UnknownLabelError, UnknownSessionError, ValidationError
from .gateway import GenerationRequest, ProviderGateway, parse_candidates
from .model import (
    ORIGIN_GENERATED,
    ORIGIN_REFERENCE,
    PromptStrategy,
    SourceSegment,
    TranslationSpec,
    spec_from_dict,
    spec_to_dict,
    strategy_from_dict,
    strategy_kind,
    strategy_to_dict,
    validate_spec,
)
from .prompts import PromptBundle, build_prompt
from .ranking import (
    Candidate,
    RankedReport,
    rank_candidates,
    report_from_dict,
    report_to_dict,
    DEFAULT_SCORE_PRECISION,
)

GENERATED_LABEL_PREFIX = "v"


def _now() -> datetime:
    return datetime.now(timezone.utc)


@dataclass(frozen=True)
class Selection:
    label: str
    edited_text: str | None
    selected_at: datetime


@dataclass(frozen=True)
class ProviderMeta:
    chat_model: str
    embed_model: str
    mode: str


@dataclass(frozen=True)
class SessionRecord:
    session_id: str
    created_at: datetime
    spec: TranslationSpec
    segment: SourceSegment
    strategy: PromptStrategy
    prompt: PromptBundle
    raw_response: str
    candidates: tuple[Candidate, ...]
    report: RankedReport
    provider_meta: ProviderMeta
    selection: Selection | None = None
    selection_history: tuple[Selection, ...] = ()


# -- serialization ----------------------------------------------------------


def _selection_to_dict(selection: Selection) -> dict[str, Any]:
    return {
        "label": selection.label,
        "edited_text": selection.edited_text,
        "selected_at": selection.selected_at.isoformat(),
    }


def _selection_from_dict(data: Mapping[str, Any]) -> Selection:
    return Selection(
        label=data["label"],
        edited_text=data.get("edited_text"),
        selected_at=datetime.fromisoformat(data["selected_at"]),
    )


def record_to_dict(record: SessionRecord) -> dict[str, Any]:
    return {
        "session_id": record.session_id,
        "created_at": record.created_at.isoformat(),
        "spec": spec_to_dict(record.spec),
        "segment": {"id": record.segment.id, "text": record.segment.text},
        "strategy": strategy_to_dict(record.strategy),
        "prompt": {
            "strategy": strategy_to_dict(record.prompt.strategy),
            "text": record.prompt.text,
            "template_id": record.prompt.template_id,
            "n_candidates": record.prompt.n_candidates,
        },
        "raw_response": record.raw_response,
        "candidates": [
            {"label": c.label, "text": c.text, "origin": c.origin} for c in record.candidates
        ],
        "report": report_to_dict(record.report),
        "selection": _selection_to_dict(record.selection) if record.selection else None,
        "selection_history": [_selection_to_dict(s) for s in record.selection_history],
        "provider_meta": {
            "chat_model": record.provider_meta.chat_model,
            "embed_model": record.provider_meta.embed_model,
            "mode": record.provider_meta.mode,
        },
    }


def record_from_dict(data: Mapping[str, Any]) -> SessionRecord:
    segment = SourceSegment(text=data["segment"]["text"], id=data["segment"]["id"])
    prompt_data = data["prompt"]
    prompt = PromptBundle(
        strategy=strategy_from_dict(prompt_data["strategy"]),
        text=prompt_data["text"],
        template_id=prompt_data["template_id"],
        n_candidates=int(prompt_data["n_candidates"]),
    )
    meta = data["provider_meta"]
    return SessionRecord(
        session_id=data["session_id"],
        created_at=datetime.fromisoformat(data["created_at"]),
        spec=spec_from_dict(data["spec"]),
        segment=segment,
        strategy=strategy_from_dict(data["strategy"]),
        prompt=prompt,
        raw_response=data["raw_response"],
        candidates=tuple(
            Candidate(label=c["label"], text=c["text"], origin=c["origin"])
            for c in data["candidates"]
        ),
        report=report_from_dict(data["report"], source_id=segment.id),
        selection=_selection_from_dict(data["selection"]) if data.get("selection") else None,
        selection_history=tuple(_selection_from_dict(s) for s in data.get("selection_history", [])),
        provider_meta=ProviderMeta(
            chat_model=meta["chat_model"], embed_model=meta["embed_model"], mode=meta["mode"]
        ),
    )


# -- persistence ------------------------------------------------------------


class SessionStore:
    """One JSON file per session plus an index, under a sessions directory."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self._index_lock = threading.Lock()

    @property
    def index_path(self) -> Path:
        return self.root / "index.json"

    def session_path(self, session_id: str) -> Path:
        return self.root / f"{session_id}.json"

    def _write_json(self, path: Path, payload: Any) -> None:
        try:
            self.root.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=self.root, suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                json.dump(payload, handle, ensure_ascii=False, indent=2)
                handle.write("\n")
            os.replace(tmp, path)
        except OSError as exc:
            raise SessionStoreError(f"cannot write {path}: {exc}") from exc

    def save(self, record: SessionRecord) -> None:
        self._write_json(self.session_path(record.session_id), record_to_dict(record))
        with self._index_lock:
            index = self._read_index()
            entry = {
                "session_id": record.session_id,
                "created_at": record.created_at.isoformat(),
                "strategy": strategy_kind(record.strategy),
                "segment_text": record.segment.text,
                "selection_label": record.selection.label if record.selection else None,
            }
            index = [e for e in index if e["session_id"] != record.session_id]
            index.append(entry)
            index.sort(key=lambda e: (e["created_at"], e["session_id"]), reverse=True)
            self._write_json(self.index_path, index)

    def _read_index(self) -> list[dict]:
        if not self.index_path.exists():
            return []
        try:
            return json.loads(self.index_path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SessionStoreError(f"cannot read session index: {exc}") from exc

    def list(self) -> list[dict]:
        """Index entries, most recent first."""

        with self._index_lock:
            return self._read_index()

    def load(self, session_id: str) -> SessionRecord:
        path = self.session_path(session_id)
        if not path.exists():
            raise UnknownSessionError(session_id)
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise SessionStoreError(f"cannot read session {session_id}: {exc}") from exc
        return record_from_dict(data)


# -- pipeline ---------------------------------------------------------------


def _generated_labels(n: int) -> list[str]:
    return [f"{GENERATED_LABEL_PREFIX}{i}" for i in range(1, n + 1)]


def _check_references(references: Sequence[Candidate], n: int) -> list[Candidate]:
    generated = set(_generated_labels(n))
    seen: set[str] = set()
    checked = []
    for ref in references:
        if ref.label in generated:
            raise ValidationError(
                f"reference label {ref.label!r} collides with a generated candidate label",
                code="reference.label.reserved",
            )
        if ref.label in seen:
            raise ValidationError(
                f"duplicate reference label {ref.label!r}", code="reference.label.duplicate"
            )
        seen.add(ref.label)
        checked.append(replace(ref, origin=ORIGIN_REFERENCE))
    return checked


def run_session(
    spec: TranslationSpec,
    segment: SourceSegment,
    strategy: PromptStrategy,
    n: int,
    references: Sequence[Candidate],
    *,
    gateway: ProviderGateway,
    store: SessionStore | None = None,
    multi_call: bool = False,
    score_precision: int = DEFAULT_SCORE_PRECISION,
) -> SessionRecord:
    """Run one full pipeline pass and persist the resulting session.

    Generated candidates are labeled v1..vn in parse order; references come
    first in the report, preserving their given order. By default all n
    candidates come from a single response; ``multi_call`` instead issues n
    independent generation calls and takes each whole response as one
    candidate.
    """

    violations = validate_spec(spec, strategy)
    if violations:
        raise SpecValidationError(violations)
    references = _check_references(references, n)

    prompt = build_prompt(segment, spec, strategy, 1 if multi_call else n)
    config = gateway.config
    if multi_call:
        responses = [
            gateway.generate(
                GenerationRequest(
                    prompt=prompt.text,
                    model_id=config.chat_model,
                    temperature=config.temperature,
                    max_tokens=config.max_tokens,
                )
            )
            for _ in range(n)
        ]
        raw_response = "\n\n".join(responses)
        texts = [parse_candidates(r, 1)[0] for r in responses]
    else:
        raw_response = gateway.generate(
            GenerationRequest(
                prompt=prompt.text,
                model_id=config.chat_model,
                temperature=config.temperature,
                max_tokens=config.max_tokens,
            )
        )
        texts = parse_candidates(raw_response, n)

    generated = [
        Candidate(label=label, text=text, origin=ORIGIN_GENERATED)
        for label, text in zip(_generated_labels(n), texts)
    ]
    candidates = [*references, *generated]

    source_vec = gateway.embed(segment.text)
    scored_inputs = [(c, gateway.embed(c.text)) for c in candidates]
    report = rank_candidates(segment, source_vec, scored_inputs, precision=score_precision)

    record = SessionRecord(
        session_id=uuid.uuid4().hex,
        created_at=_now(),
        spec=spec,
        segment=segment,
        strategy=strategy,
        prompt=prompt,
        raw_response=raw_response,
        candidates=tuple(candidates),
        report=report,
        provider_meta=ProviderMeta(
            chat_model=config.chat_model, embed_model=config.embed_model, mode=config.mode
        ),
    )
    if store is not None:
        store.save(record)
    return record


def record_selection(
    store: SessionStore,
    session_id: str,
    label: str,
    edited_text: str | None = None,
) -> SessionRecord:
    """Store the translator's pick for a session; re-selecting overwrites the
    current selection and appends to the history."""

    record = store.load(session_id)
    labels = record.report.labels()
    if label not in labels:
        raise UnknownLabelError(label, labels)
    selection = Selection(label=label, edited_text=edited_text, selected_at=_now())
    updated = replace(
        record,
        selection=selection,
        selection_history=(*record.selection_history, selection),
    )
    store.save(updated)
    return updated


def emit_report(store: SessionStore, session_id: str, format: str = "table") -> str:
    """Render a stored session's report as JSON or as the plain-text table."""

    from .ranking import render_report_table

    record = store.load(session_id)
    if format == "json":
        return json.dumps(report_to_dict(record.report), ensure_ascii=False, indent=2) + "\n"
    if format == "table":
        return render_report_table(record.report) + "\n"
    raise ValidationError(f"unknown report format: {format!r}", code="report.format.unknown")
