"""Prompt rendering for the three translation strategies.

Rendering is deterministic and byte-stable: identical inputs produce identical
text, and the canonical renders are pinned by golden files under
``fixtures/bundled/goldens/``. Every rendered prompt contains the source
segment verbatim exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import SpecValidationError, ValidationError
from .model import (
    DynamicEquivalence,
    LanguagePair,
    PromptStrategy,
    SourceSegment,
    SpecConditioned,
    Baseline,
    TranslationSpec,
    strategy_kind,
    validate_spec,
)

# Display names for language tags. Prompts must read naturally, so an
# unmapped tag is an error rather than echoing the raw tag.
LANGUAGE_NAMES = {
    "ar": "Arabic",
    "cs": "Czech",
    "da": "Danish",
    "de": "German",
    "el": "Greek",
    "en": "English",
    "es": "Spanish",
    "fi": "Finnish",
    "fr": "French",
    "he": "Hebrew",
    "hi": "Hindi",
    "hu": "Hungarian",
    "id": "Indonesian",
    "it": "Italian",
    "ja": "Japanese",
    "ko": "Korean",
    "nl": "Dutch",
    "no": "Norwegian",
    "pl": "Polish",
    "pt": "Portuguese",
    "ro": "Romanian",
    "ru": "Russian",
    "sv": "Swedish",
    "th": "Thai",
    "tr": "Turkish",
    "uk": "Ukrainian",
    "vi": "Vietnamese",
    "zh": "Chinese",
}

_COUNT_WORDS = {
    1: "one",
    2: "two",
    3: "three",
    4: "four",
    5: "five",
    6: "six",
    7: "seven",
    8: "eight",
    9: "nine",
    10: "ten",
}

MAX_CANDIDATES = 10

TEMPLATE_BASELINE = "baseline.v1"
TEMPLATE_SPEC_CONDITIONED = "spec_conditioned.v1"
TEMPLATE_DYNAMIC_EQUIVALENCE = "dynamic_equivalence.v1"

_DEFINITION = (
    "Dynamic equivalence is a strategy for translating from the perspective of "
    "equalizing the reader’s response to the [source text] and the [target text]."
)


def language_name(tag: str) -> str:
    """Display name for a language tag; the region subtag does not change it."""

    primary = tag.split("-")[0]
    try:
        return LANGUAGE_NAMES[primary]
    except KeyError:
        raise ValidationError(
            f"no display name known for language tag {tag!r}",
            code="prompt.language.unmapped",
        ) from None


def spell_count(n: int) -> str:
    if not isinstance(n, int) or n < 1:
        raise ValidationError("candidate count must be a positive integer", code="prompt.n.invalid")
    if n > MAX_CANDIDATES:
        raise ValidationError(
            f"candidate count {n} exceeds the supported maximum of {MAX_CANDIDATES}",
            code="prompt.n.too_large",
        )
    return _COUNT_WORDS[n]


def _directive(n: int) -> str:
    return f"Please generate {spell_count(n)} translations"


@dataclass(frozen=True)
class PromptBundle:
    """A rendered prompt plus the provenance needed to reproduce it."""

    strategy: PromptStrategy
    text: str
    template_id: str
    n_candidates: int

    def __post_init__(self):
        if self.n_candidates < 1:
            raise ValidationError("n_candidates must be >= 1", code="prompt.n.invalid")


def _bundle(strategy: PromptStrategy, text: str, template_id: str, n: int, segment: SourceSegment) -> PromptBundle:
    occurrences = text.count(segment.text)
    if occurrences != 1:
        raise ValidationError(
            f"rendered {strategy_kind(strategy)} prompt contains the source segment "
            f"{occurrences} times, expected exactly once",
            code="prompt.segment.occurrences",
        )
    return PromptBundle(strategy=strategy, text=text, template_id=template_id, n_candidates=n)


def build_baseline(segment: SourceSegment, pair: LanguagePair) -> PromptBundle:
    """The minimal prompt: a bare translation instruction plus the segment."""

    text = f"Translate to {language_name(pair.target_lang)}.\n{segment.text}"
    return _bundle(Baseline(), text, TEMPLATE_BASELINE, 1, segment)


def build_spec_conditioned(segment: SourceSegment, spec: TranslationSpec, n: int = 1) -> PromptBundle:
    """Prompt that states the translation conditions before the segment.

    Layout: instruction header, then one condition line per spec field
    (purpose and audience always; locale, register and style guide when
    present, in that fixed order), then the multi-candidate directive iff
    n > 1, then the ``[source text]`` line.
    """

    violations = validate_spec(spec, SpecConditioned())
    if violations:
        raise SpecValidationError(violations)
    spell_count(n)  # range check before any rendering

    source_name = language_name(spec.pair.source_lang)
    target_name = language_name(spec.pair.target_lang)
    lines = [
        f"Translate the following {source_name} [source text] into {target_name}. "
        "Please fulfill the following conditions when translating.",
        f"Purpose of the translation: {spec.purpose}",
        f"Target audience: {spec.target_audience}",
    ]
    if spec.target_locale is not None:
        lines.append(f"Target locale: {spec.target_locale}")
    if spec.register is not None:
        lines.append(f"Register: {spec.register}")
    if spec.style_guide is not None:
        lines.append(f"Style guide: {spec.style_guide}")
    if n > 1:
        lines.append(_directive(n))
    lines.append(f"[source text] {segment.text}")
    return _bundle(SpecConditioned(), "\n".join(lines), TEMPLATE_SPEC_CONDITIONED, n, segment)


def build_dynamic_equivalence(
    segment: SourceSegment,
    strategy: DynamicEquivalence,
    pair: LanguagePair,
    n: int = 1,
) -> PromptBundle:
    """Prompt that defines dynamic equivalence, walks through the exemplar
    substitution(s), and asks for a culturally substituted translation."""

    if not isinstance(strategy, DynamicEquivalence):
        raise ValidationError(
            "build_dynamic_equivalence needs a DynamicEquivalence strategy",
            code="strategy.kind.unknown",
        )
    spell_count(n)

    target_name = language_name(pair.target_lang)
    paragraphs = [_DEFINITION]
    for exemplar in strategy.exemplars:
        if exemplar.rationale.strip():
            paragraphs.append(exemplar.rationale)
        paragraphs.append(
            f"[source text] {exemplar.source_phrase}\n[target text] {exemplar.target_phrase}"
        )
    paragraphs.append(
        "Following this concept and example, please translate the following "
        f"[source text] into {target_name} using the dynamic equivalent. "
        "Please replace the translation with something that would be understood "
        f"in {strategy.target_culture}."
    )
    if n > 1:
        paragraphs.append(_directive(n))
    paragraphs.append(f"[source text] {segment.text}")
    return _bundle(strategy, "\n\n".join(paragraphs), TEMPLATE_DYNAMIC_EQUIVALENCE, n, segment)


def build_prompt(
    segment: SourceSegment,
    spec: TranslationSpec,
    strategy: PromptStrategy,
    n: int = 1,
) -> PromptBundle:
    """Dispatch to the builder for ``strategy``.

    The baseline template has no place to ask for multiple candidates, so it
    only accepts n == 1.
    """

    if isinstance(strategy, Baseline):
        if n != 1:
            raise ValidationError(
                "the baseline prompt generates a single translation; use the "
                "spec-conditioned or dynamic-equivalence strategy for n > 1",
                code="prompt.n.unsupported",
            )
        return build_baseline(segment, spec.pair)
    if isinstance(strategy, SpecConditioned):
        return build_spec_conditioned(segment, spec, n)
    if isinstance(strategy, DynamicEquivalence):
        return build_dynamic_equivalence(segment, strategy, spec.pair, n)
    raise ValidationError(f"unknown strategy: {strategy!r}", code="strategy.kind.unknown")
