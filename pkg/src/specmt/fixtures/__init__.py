"""Locates the deterministic provider fixtures that ship with the package."""

from __future__ import annotations

from importlib import resources
from pathlib import Path


def bundled_root() -> Path:
    """Directory holding the bundled fixture snapshot (manifest, store,
    canonical inputs, and prompt golden files)."""

    return Path(resources.files(__package__)) / "bundled"


def bundled_store_root() -> Path:
    """Directory holding the content-addressed provider entries."""

    return bundled_root() / "store"
