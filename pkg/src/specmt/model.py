"""Domain types for translation jobs: language pairs, specifications, segments
and prompt strategies.

A translation specification captures the parameters agreed before production
starts — purpose, audience, locale, register, style guide. All types are
immutable values; construction validates the invariants that do not depend on
how the value is used, while :func:`validate_spec` checks the strategy-specific
requirements.
"""

from __future__ import annotations

import json
import re
import uuid
from dataclasses import dataclass, field, replace
from typing import Any, Mapping, Union

from .errors import SpecValidationError, ValidationError

LANG_TAG_RE = re.compile(r"^[a-z]{2,3}(-[A-Z]{2})?$")

ORIGIN_REFERENCE = "reference"
ORIGIN_GENERATED = "generated"


@dataclass(frozen=True)
class Violation:
    """One validation finding: which field, a stable code, and a message."""

    fieldname: str
    code: str
    message: str


def _check_tag(tag: str, fieldname: str) -> None:
    if not isinstance(tag, str) or not LANG_TAG_RE.match(tag):
        raise SpecValidationError(
            [
                Violation(
                    fieldname,
                    f"spec.{fieldname}.bad_tag",
                    f"{fieldname} must be a lowercase 2-3 letter language tag with optional "
                    f"-REGION suffix, got {tag!r}",
                )
            ]
        )


@dataclass(frozen=True)
class LanguagePair:
    """Source/target language tags, e.g. ja -> en."""

    source_lang: str
    target_lang: str

    def __post_init__(self):
        _check_tag(self.source_lang, "source_lang")
        _check_tag(self.target_lang, "target_lang")
        if self.source_lang == self.target_lang:
            raise SpecValidationError(
                [
                    Violation(
                        "target_lang",
                        "spec.pair.same_language",
                        f"source and target language must differ, both are {self.source_lang!r}",
                    )
                ]
            )


@dataclass(frozen=True)
class TranslationSpec:
    """Pre-production parameters that condition a prompt.

    ``purpose`` and ``target_audience`` may be empty for pair-only specs used
    with the baseline strategy; :func:`validate_spec` enforces them where the
    spec-conditioned strategy needs them. Optional fields must be non-empty
    when present.
    """

    pair: LanguagePair
    purpose: str = ""
    target_audience: str = ""
    target_locale: str | None = None
    register: str | None = None
    style_guide: str | None = None

    def __post_init__(self):
        for name in ("purpose", "target_audience"):
            if not isinstance(getattr(self, name), str):
                raise SpecValidationError(
                    [Violation(name, f"spec.{name}.not_text", f"{name} must be text")]
                )
        if self.target_locale is not None:
            _check_tag(self.target_locale, "target_locale")
        for name in ("register", "style_guide"):
            value = getattr(self, name)
            if value is not None and (not isinstance(value, str) or not value.strip()):
                raise SpecValidationError(
                    [
                        Violation(
                            name,
                            f"spec.{name}.empty",
                            f"{name} must be non-empty when present",
                        )
                    ]
                )


@dataclass(frozen=True)
class SourceSegment:
    """One source-language segment to translate."""

    text: str
    id: str = field(default_factory=lambda: uuid.uuid4().hex)

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise ValidationError("segment text must be non-empty", code="segment.text.empty")
        if not isinstance(self.id, str) or not self.id:
            raise ValidationError("segment id must be non-empty", code="segment.id.empty")


@dataclass(frozen=True)
class ExemplarPair:
    """A source/target phrase pair illustrating a substitution, with the
    reasoning behind it."""

    source_phrase: str
    target_phrase: str
    rationale: str = ""

    def __post_init__(self):
        if not self.source_phrase.strip() or not self.target_phrase.strip():
            raise ValidationError(
                "exemplar phrases must be non-empty", code="exemplar.phrase.empty"
            )


# The bundled default exemplar: the classic cultural substitution used to
# define dynamic equivalence, with its Iceland rationale.
DEFAULT_EXEMPLAR = ExemplarPair(
    source_phrase="Lamb of God",
    target_phrase="Seal of God",
    rationale=(
        "In the example below, the word “Lamb” in the original text would be "
        "translated as “lamb” in the literal translation. However, when translating "
        "for Iceland, which has no sheep, it is difficult to convey the nuance of the word "
        "“lamb”. From the standpoint of equalizing the reader’s reaction, this "
        "is a ruse to translate it as “seal”. It is believed that “lamb” "
        "in the [source text] and “seal” in the [target text] will evoke the same "
        "reaction in the reader."
    ),
)

DEFAULT_TARGET_CULTURE = "an English-speaking culture"


@dataclass(frozen=True)
class Baseline:
    """Plain 'Translate to X.' prompting, no specification conditioning."""


@dataclass(frozen=True)
class SpecConditioned:
    """Prompting conditioned on the translation specification."""


@dataclass(frozen=True)
class DynamicEquivalence:
    """Prompting that asks for culturally substituted (dynamically equivalent)
    translations, guided by one or more exemplar substitutions."""

    exemplars: tuple[ExemplarPair, ...] = (DEFAULT_EXEMPLAR,)
    target_culture: str = DEFAULT_TARGET_CULTURE

    def __post_init__(self):
        if not self.exemplars:
            raise ValidationError(
                "dynamic-equivalence strategy needs at least one exemplar",
                code="strategy.exemplars.empty",
            )
        object.__setattr__(self, "exemplars", tuple(self.exemplars))
        if not self.target_culture.strip():
            raise ValidationError(
                "target_culture must be non-empty", code="strategy.target_culture.empty"
            )


PromptStrategy = Union[Baseline, SpecConditioned, DynamicEquivalence]

_STRATEGY_KINDS = {
    Baseline: "baseline",
    SpecConditioned: "spec_conditioned",
    DynamicEquivalence: "dynamic_equivalence",
}


def strategy_kind(strategy: PromptStrategy) -> str:
    return _STRATEGY_KINDS[type(strategy)]


def strategy_to_dict(strategy: PromptStrategy) -> dict[str, Any]:
    data: dict[str, Any] = {"kind": strategy_kind(strategy)}
    if isinstance(strategy, DynamicEquivalence):
        data["exemplars"] = [
            {
                "source_phrase": ex.source_phrase,
                "target_phrase": ex.target_phrase,
                "rationale": ex.rationale,
            }
            for ex in strategy.exemplars
        ]
        data["target_culture"] = strategy.target_culture
    return data


def strategy_from_dict(data: Mapping[str, Any]) -> PromptStrategy:
    kind = data.get("kind")
    if kind == "baseline":
        return Baseline()
    if kind == "spec_conditioned":
        return SpecConditioned()
    if kind == "dynamic_equivalence":
        exemplars = tuple(
            ExemplarPair(
                source_phrase=ex["source_phrase"],
                target_phrase=ex["target_phrase"],
                rationale=ex.get("rationale", ""),
            )
            for ex in data.get("exemplars", [])
        ) or (DEFAULT_EXEMPLAR,)
        return DynamicEquivalence(
            exemplars=exemplars,
            target_culture=data.get("target_culture", DEFAULT_TARGET_CULTURE),
        )
    raise ValidationError(f"unknown strategy kind: {kind!r}", code="strategy.kind.unknown")


# ---------------------------------------------------------------------------
# Spec document (de)serialization.
#
# Canonical file format: a flat UTF-8 JSON object. Exact key names are part of
# the contract; unknown keys are hard errors so a misspelled "purpose" can
# never silently demote a job to baseline translation.
# ---------------------------------------------------------------------------

REQUIRED_KEYS = ("source_lang", "target_lang", "purpose", "target_audience")
OPTIONAL_KEYS = ("target_locale", "register", "style_guide")


def spec_from_dict(data: Mapping[str, Any]) -> TranslationSpec:
    """Validate a flat mapping against the spec-file schema."""

    violations: list[Violation] = []
    unknown = sorted(set(data) - set(REQUIRED_KEYS) - set(OPTIONAL_KEYS))
    for key in unknown:
        violations.append(
            Violation(key, f"spec.{key}.unknown_key", f"unknown key in spec document: {key!r}")
        )
    for key in REQUIRED_KEYS:
        if key not in data:
            violations.append(
                Violation(key, f"spec.{key}.missing", f"missing required key: {key!r}")
            )
        elif not isinstance(data[key], str) or not data[key].strip():
            violations.append(
                Violation(key, f"spec.{key}.empty", f"required key {key!r} must be non-empty text")
            )
    for key in OPTIONAL_KEYS:
        if key in data and (not isinstance(data[key], str) or not data[key].strip()):
            violations.append(
                Violation(key, f"spec.{key}.empty", f"optional key {key!r} must be non-empty when present")
            )
    if violations:
        raise SpecValidationError(violations)
    pair = LanguagePair(source_lang=data["source_lang"], target_lang=data["target_lang"])
    return TranslationSpec(
        pair=pair,
        purpose=data["purpose"],
        target_audience=data["target_audience"],
        target_locale=data.get("target_locale"),
        register=data.get("register"),
        style_guide=data.get("style_guide"),
    )


def parse_spec(document: str) -> TranslationSpec:
    """Parse a spec file (UTF-8 JSON object) into a validated spec."""

    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SpecValidationError(
            [Violation("", "spec.document.malformed", f"spec document is not valid JSON: {exc}")]
        ) from exc
    if not isinstance(data, dict):
        raise SpecValidationError(
            [Violation("", "spec.document.not_object", "spec document must be a JSON object")]
        )
    return spec_from_dict(data)


def spec_to_dict(spec: TranslationSpec) -> dict[str, str]:
    data = {
        "source_lang": spec.pair.source_lang,
        "target_lang": spec.pair.target_lang,
        "purpose": spec.purpose,
        "target_audience": spec.target_audience,
    }
    for key in OPTIONAL_KEYS:
        value = getattr(spec, key)
        if value is not None:
            data[key] = value
    return data


def serialize_spec(spec: TranslationSpec) -> str:
    """Inverse of :func:`parse_spec` for every valid spec."""

    return json.dumps(spec_to_dict(spec), ensure_ascii=False, indent=2) + "\n"


def validate_spec(spec: TranslationSpec, strategy: PromptStrategy) -> list[Violation]:
    """Check a spec against the requirements of a strategy.

    Returns the violations found (empty list means ok); never raises. The
    baseline and dynamic-equivalence strategies only need the language pair,
    which the type itself guarantees; spec-conditioned prompting additionally
    needs a purpose and a target audience.
    """

    violations: list[Violation] = []
    if isinstance(strategy, SpecConditioned):
        if not spec.purpose.strip():
            violations.append(
                Violation(
                    "purpose",
                    "spec.purpose.empty",
                    "purpose required for spec-conditioned prompting",
                )
            )
        if not spec.target_audience.strip():
            violations.append(
                Violation(
                    "target_audience",
                    "spec.target_audience.empty",
                    "target_audience required for spec-conditioned prompting",
                )
            )
    return violations


def with_pair(spec: TranslationSpec, pair: LanguagePair) -> TranslationSpec:
    return replace(spec, pair=pair)
