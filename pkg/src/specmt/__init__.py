"""Specification-conditioned machine translation with similarity reranking.

The package turns a pre-production translation specification (purpose,
audience, locale, register, style guide) into conditioned prompts, generates
one or more candidate translations through an OpenAI-compatible provider,
and ranks the candidates by embedding cosine similarity against the source
segment. It ships a deterministic fixture store so the whole pipeline runs
offline and bit-reproducibly.
"""

from .errors import (
    CandidateParseError,
    DuplicateIdempotencyKeyError,
    FixtureMissError,
    ProviderAuthError,
    ProviderError,
    ProviderNetworkError,
    ProviderResponseError,
    SessionStoreError,
    SpecmtError,
    SpecValidationError,
    UnknownLabelError,
    UnknownSessionError,
    ValidationError,
)
from .gateway import (
    EmbeddingVector,
    FixtureStore,
    GenerationRequest,
    ProviderConfig,
    ProviderGateway,
    fixture_key,
    parse_candidates,
)
from .model import (
    Baseline,
    DynamicEquivalence,
    ExemplarPair,
    LanguagePair,
    SourceSegment,
    SpecConditioned,
    TranslationSpec,
    Violation,
    parse_spec,
    serialize_spec,
    spec_from_dict,
    spec_to_dict,
    validate_spec,
)
from .prompts import (
    PromptBundle,
    build_baseline,
    build_dynamic_equivalence,
    build_prompt,
    build_spec_conditioned,
)
from .ranking import (
    Candidate,
    RankedReport,
    ScoredCandidate,
    cosine,
    dense_rank,
    quantize_score,
    rank_candidates,
    render_report_table,
    report_from_dict,
    report_to_dict,
    substitution_analysis,
)
from .sessions import (
    SessionRecord,
    SessionStore,
    emit_report,
    record_selection,
    run_session,
)

__version__ = "0.1.0"

__all__ = [
    "Baseline",
    "Candidate",
    "CandidateParseError",
    "DuplicateIdempotencyKeyError",
    "DynamicEquivalence",
    "EmbeddingVector",
    "ExemplarPair",
    "FixtureMissError",
    "FixtureStore",
    "GenerationRequest",
    "LanguagePair",
    "PromptBundle",
    "ProviderAuthError",
    "ProviderConfig",
    "ProviderError",
    "ProviderGateway",
    "ProviderNetworkError",
    "ProviderResponseError",
    "RankedReport",
    "ScoredCandidate",
    "SessionRecord",
    "SessionStore",
    "SessionStoreError",
    "SourceSegment",
    "SpecConditioned",
    "SpecValidationError",
    "SpecmtError",
    "TranslationSpec",
    "UnknownLabelError",
    "UnknownSessionError",
    "ValidationError",
    "Violation",
    "build_baseline",
    "build_dynamic_equivalence",
    "build_prompt",
    "build_spec_conditioned",
    "cosine",
    "dense_rank",
    "emit_report",
    "fixture_key",
    "parse_candidates",
    "parse_spec",
    "quantize_score",
    "rank_candidates",
    "record_selection",
    "render_report_table",
    "report_from_dict",
    "report_to_dict",
    "run_session",
    "serialize_spec",
    "spec_from_dict",
    "spec_to_dict",
    "substitution_analysis",
    "validate_spec",
]
