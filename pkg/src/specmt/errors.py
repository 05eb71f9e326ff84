"""Exception taxonomy shared by the library, CLI and HTTP service.

Every error carries a machine-readable ``code`` so the CLI can map it to a
stable exit code and the HTTP layer to a stable status + error body.
"""

from __future__ import annotations


class SpecmtError(Exception):
    """Base class for all errors raised by this package."""

    code = "error"

    def __init__(self, message: str, *, code: str | None = None):
        super().__init__(message)
        if code is not None:
            self.code = code


class ValidationError(SpecmtError):
    """Input violates a documented precondition (bad value, not bad I/O)."""

    code = "request.invalid"


class SpecValidationError(ValidationError):
    """A translation specification or spec document failed validation.

    ``violations`` holds the individual findings; ``code`` is the code of the
    first one so single-issue failures stay precise.
    """

    code = "spec.invalid"

    def __init__(self, violations):
        self.violations = list(violations)
        if self.violations:
            self.code = self.violations[0].code
        super().__init__("; ".join(v.message for v in self.violations) or "invalid spec")


class UnknownSessionError(SpecmtError):
    code = "session.not_found"

    def __init__(self, session_id: str):
        self.session_id = session_id
        super().__init__(f"unknown session: {session_id}")


class UnknownLabelError(ValidationError):
    code = "selection.unknown_label"

    def __init__(self, label: str, known: list[str]):
        self.label = label
        super().__init__(f"unknown candidate label {label!r}; session has {', '.join(known)}")


class DuplicateIdempotencyKeyError(SpecmtError):
    """A session-creation idempotency key was already spent."""

    code = "session.idempotency_conflict"

    def __init__(self, key: str, session_id: str):
        self.key = key
        self.session_id = session_id
        super().__init__(f"idempotency key already used by session {session_id}")


class ProviderError(SpecmtError):
    """Failure talking to (or replaying) a chat/embedding provider."""

    code = "provider.error"


class ProviderAuthError(ProviderError):
    code = "provider.auth_failed"


class ProviderNetworkError(ProviderError):
    code = "provider.network"


class ProviderResponseError(ProviderError):
    code = "provider.bad_response"


class FixtureMissError(ProviderError):
    """Replay mode found no fixture for the requested input."""

    code = "provider.fixture_miss"

    def __init__(self, kind: str, key: str, input_text: str):
        self.kind = kind
        self.key = key
        self.input_prefix = input_text[:80]
        super().__init__(
            f"no {kind} fixture for key {key}; input starts with: {self.input_prefix!r}"
        )


class CandidateParseError(ProviderError):
    """The provider response did not contain the expected candidate list."""

    code = "provider.unparseable_candidates"

    def __init__(self, message: str, *, found: int | None = None, expected: int | None = None, raw: str = ""):
        self.found = found
        self.expected = expected
        self.raw = raw
        super().__init__(message)


class SessionStoreError(SpecmtError):
    """Session persistence failed (I/O or corrupt store)."""

    code = "store.io"
