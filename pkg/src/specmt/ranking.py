"""Cosine similarity over embeddings and dense ranking of candidates.

Scores are compared after rounding to the report's printed precision
(3 decimals by default) so ties behave exactly like ties of printed values,
while raw scores stay available in the report.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .gateway import EmbeddingVector
from .model import ORIGIN_GENERATED, ORIGIN_REFERENCE, SourceSegment

DEFAULT_SCORE_PRECISION = 3

ENTITY_SLOT = "{ENTITY}"


@dataclass(frozen=True)
class Candidate:
    """One translation under comparison: an engine reference or a generated
    candidate."""

    label: str
    text: str
    origin: str = ORIGIN_GENERATED

    def __post_init__(self):
        if not self.label:
            raise ValidationError("candidate label must be non-empty", code="candidate.label.empty")
        if not self.text:
            raise ValidationError("candidate text must be non-empty", code="candidate.text.empty")
        if self.origin not in (ORIGIN_REFERENCE, ORIGIN_GENERATED):
            raise ValidationError(
                f"candidate origin must be {ORIGIN_REFERENCE!r} or {ORIGIN_GENERATED!r}",
                code="candidate.origin.invalid",
            )


@dataclass(frozen=True)
class ScoredCandidate:
    candidate: Candidate
    score: float
    rank: int

    def __post_init__(self):
        if self.rank < 1:
            raise ValidationError("rank must be >= 1", code="rank.invalid")


@dataclass(frozen=True)
class RankedReport:
    """Scored and ranked candidates for one source segment, input order
    preserved."""

    source: SourceSegment
    entries: tuple[ScoredCandidate, ...]
    embed_model: str
    score_precision: int = DEFAULT_SCORE_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    def labels(self) -> list[str]:
        return [entry.candidate.label for entry in self.entries]


def _as_array(vector: EmbeddingVector) -> np.ndarray:
    return np.asarray(vector.values, dtype=np.float64)


def cosine(a: EmbeddingVector, b: EmbeddingVector) -> float:
    """Cosine of the angle between two vectors: dot(a, b) / (|a| * |b|).

    Symmetric bit-for-bit (arguments are put in a canonical order before
    summation) and clamped to [-1, 1] against floating-point overshoot.
    """

    if a.dimension != b.dimension:
        raise ValidationError(
            f"dimension mismatch: {a.dimension} vs {b.dimension}", code="embedding.dim_mismatch"
        )
    if b.values < a.values:
        a, b = b, a
    va, vb = _as_array(a), _as_array(b)
    norm_a = float(np.linalg.norm(va))
    norm_b = float(np.linalg.norm(vb))
    if norm_a == 0.0 or norm_b == 0.0:
        raise ValidationError("cannot take cosine of a zero vector", code="embedding.zero_norm")
    value = float(np.dot(va, vb)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, value))


def quantize_score(score: float, precision: int = DEFAULT_SCORE_PRECISION) -> float:
    """Round a score exactly as printing at ``precision`` decimals would."""

    if not math.isfinite(score):
        raise ValidationError("scores must be finite", code="score.not_finite")
    return float(format(score, f".{precision}f"))


def dense_rank(scores: Sequence[float], precision: int = DEFAULT_SCORE_PRECISION) -> list[int]:
    """Dense ranking of scores, highest first, compared at printed precision.

    Equal rounded scores share a rank; each next distinct rounded score gets
    the previous rank + 1, so ranks cover 1..#distinct with no gaps.
    """

    if len(scores) == 0:
        raise ValidationError("cannot rank an empty score list", code="rank.empty")
    rounded = [quantize_score(s, precision) for s in scores]
    distinct = sorted(set(rounded), reverse=True)
    position = {value: i + 1 for i, value in enumerate(distinct)}
    return [position[value] for value in rounded]


def _score_and_rank(
    source_vec: EmbeddingVector,
    pairs: Sequence[tuple[Candidate, EmbeddingVector]],
    precision: int,
) -> list[ScoredCandidate]:
    for _, vector in pairs:
        if vector.dimension != source_vec.dimension:
            raise ValidationError(
                "all candidate vectors must share the source vector's dimension",
                code="embedding.dim_mismatch",
            )
        if vector.model_id != source_vec.model_id:
            raise ValidationError(
                "all vectors in one report must come from the same embedding model",
                code="embedding.model_mismatch",
            )
    scores = [cosine(source_vec, vector) for _, vector in pairs]
    ranks = dense_rank(scores, precision)
    return [
        ScoredCandidate(candidate=candidate, score=score, rank=rank)
        for (candidate, _), score, rank in zip(pairs, scores, ranks)
    ]


def rank_candidates(
    source: SourceSegment,
    source_vec: EmbeddingVector,
    candidates: Sequence[tuple[Candidate, EmbeddingVector]],
    precision: int = DEFAULT_SCORE_PRECISION,
) -> RankedReport:
    """Score every candidate against the source and dense-rank the scores.

    Input order is preserved in the report; the most similar candidate gets
    rank 1. Candidate labels must be unique within one report.
    """

    if not candidates:
        raise ValidationError("need at least one candidate to rank", code="rank.empty")
    labels = [candidate.label for candidate, _ in candidates]
    if len(set(labels)) != len(labels):
        raise ValidationError("candidate labels must be unique in a report", code="candidate.label.duplicate")
    entries = _score_and_rank(source_vec, candidates, precision)
    return RankedReport(
        source=source,
        entries=tuple(entries),
        embed_model=source_vec.model_id,
        score_precision=precision,
    )


def substitution_analysis(
    frame: str,
    entities: Sequence[str],
    source: SourceSegment,
    source_vec: EmbeddingVector,
    embed: Callable[[str], EmbeddingVector],
    precision: int = DEFAULT_SCORE_PRECISION,
) -> RankedReport:
    """Rank entity substitutions into a fixed sentence frame.

    The frame must contain the ``{ENTITY}`` slot exactly once. Each entity is
    substituted into the frame, embedded, and scored against the source; the
    entity names label the report rows. Listing the same entity twice yields
    the same rendered text and therefore a shared rank.
    """

    occurrences = frame.count(ENTITY_SLOT)
    if occurrences != 1:
        raise ValidationError(
            f"frame must contain the {ENTITY_SLOT} slot exactly once, found {occurrences}",
            code="substitution.frame.slot",
        )
    if not entities:
        raise ValidationError("need at least one entity", code="substitution.entities.empty")
    pairs = []
    for entity in entities:
        if not entity.strip():
            raise ValidationError("entities must be non-empty", code="substitution.entities.empty")
        rendered = frame.replace(ENTITY_SLOT, entity)
        pairs.append((Candidate(label=entity, text=rendered, origin=ORIGIN_GENERATED), embed(rendered)))
    entries = _score_and_rank(source_vec, pairs, precision)
    return RankedReport(
        source=source,
        entries=tuple(entries),
        embed_model=source_vec.model_id,
        score_precision=precision,
    )


# ---------------------------------------------------------------------------
# Report serialization and rendering.
# ---------------------------------------------------------------------------


def report_to_dict(report: RankedReport) -> dict[str, Any]:
    return {
        "source": report.source.text,
        "entries": [
            {
                "label": entry.candidate.label,
                "text": entry.candidate.text,
                "origin": entry.candidate.origin,
                "score": entry.score,
                "rank": entry.rank,
            }
            for entry in report.entries
        ],
        "embed_model": report.embed_model,
        "score_precision": report.score_precision,
    }


def report_from_dict(data: Mapping[str, Any], source_id: str | None = None) -> RankedReport:
    source = SourceSegment(text=data["source"], **({"id": source_id} if source_id else {}))
    entries = tuple(
        ScoredCandidate(
            candidate=Candidate(label=e["label"], text=e["text"], origin=e["origin"]),
            score=float(e["score"]),
            rank=int(e["rank"]),
        )
        for e in data["entries"]
    )
    return RankedReport(
        source=source,
        entries=entries,
        embed_model=data["embed_model"],
        score_precision=int(data.get("score_precision", DEFAULT_SCORE_PRECISION)),
    )


def render_report_table(report: RankedReport) -> str:
    """Plain-text table with Type | Target sentence | C.S. | Rank columns,
    scores printed at the report's precision."""

    header = ("Type", "Target sentence", "C.S.", "Rank")
    rows = [
        (
            entry.candidate.label,
            entry.candidate.text,
            format(entry.score, f".{report.score_precision}f"),
            str(entry.rank),
        )
        for entry in report.entries
    ]
    widths = [max(len(row[i]) for row in [header, *rows]) for i in range(4)]
    lines = [f"[source text] {report.source.text}", ""]
    for row in [header, *rows]:
        cells = [row[i].ljust(widths[i]) for i in range(4)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines)
