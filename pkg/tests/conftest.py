from __future__ import annotations

import json
from pathlib import Path

import pytest

from specmt.fixtures import bundled_root, bundled_store_root
from specmt.gateway import FixtureStore, ProviderConfig, ProviderGateway
from specmt.model import SourceSegment, parse_spec
from specmt.ranking import Candidate
from specmt.sessions import SessionStore


@pytest.fixture(scope="session")
def bundled() -> Path:
    return bundled_root()


@pytest.fixture(scope="session")
def manifest(bundled: Path) -> dict:
    return json.loads((bundled / "manifest.json").read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def goldens(bundled: Path) -> Path:
    return bundled / "goldens"


@pytest.fixture()
def replay_gateway() -> ProviderGateway:
    return ProviderGateway(ProviderConfig(mode="replay"), store=FixtureStore(bundled_store_root()))


@pytest.fixture()
def session_store(tmp_path: Path) -> SessionStore:
    return SessionStore(tmp_path / "sessions")


def load_bundled_spec(bundled: Path, name: str):
    return parse_spec((bundled / "inputs" / name).read_text(encoding="utf-8"))


def load_bundled_references(bundled: Path, name: str) -> list[Candidate]:
    rows = json.loads((bundled / "inputs" / name).read_text(encoding="utf-8"))
    return [Candidate(label=row["label"], text=row["text"], origin="reference") for row in rows]


@pytest.fixture()
def pot_scenario(bundled: Path, manifest: dict) -> dict:
    scenario = manifest["scenarios"]["shared_pot_idiom"]
    return {
        "spec": load_bundled_spec(bundled, "spec_shared_pot.json"),
        "segment": SourceSegment(text=scenario["source"]),
        "references": load_bundled_references(bundled, "refs_shared_pot.json"),
        "scenario": scenario,
    }
