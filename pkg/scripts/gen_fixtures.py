#!/usr/bin/env python3
"""Regenerate the bundled fixture snapshot.

The snapshot makes the whole pipeline runnable offline and bit-reproducibly.
Chat entries hold canned multi-candidate responses for the canonical demo
scenarios. Embedding entries hold synthetic unit vectors constructed so that
each candidate's cosine similarity against its scenario's source reproduces
the scenario's canonical 3-decimal score: the candidate vector is built as

    v = c * u + sqrt(1 - c^2) * w

with u the source's unit vector, w a unit vector orthogonal to u derived from
the candidate text, and c the target raw score. Raw scores carry a small
per-text jitter (within ±4e-4, so rounding at 3 decimals is unaffected) so
that distinct texts never tie exactly; identical texts share one
content-addressed entry and therefore tie exactly.

Run from the repository root:

    python3 scripts/gen_fixtures.py
"""

from __future__ import annotations

import hashlib
import json
import shutil
import sys
from pathlib import Path

import numpy as np

REPO = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(REPO / "src"))

from specmt.fixtures import bundled_root  # noqa: E402
from specmt.gateway import FixtureStore, parse_candidates  # noqa: E402
from specmt.model import (  # noqa: E402
    DynamicEquivalence,
    LanguagePair,
    SourceSegment,
    spec_from_dict,
)
from specmt.prompts import (  # noqa: E402
    build_baseline,
    build_dynamic_equivalence,
    build_spec_conditioned,
)
from specmt.ranking import cosine  # noqa: E402
from specmt.gateway import EmbeddingVector  # noqa: E402

CHAT_MODEL = "gpt-4"
EMBED_MODEL = "text-embedding-ada-002"
DIMENSION = 1536
JITTER = 4e-4

# ---------------------------------------------------------------------------
# Scenario data. Candidate rows are (label, text, canonical 3-decimal score).
# ---------------------------------------------------------------------------

COSMETICS_SOURCE = (
    "私たちが開発したファンデーションはあなたの自然な美しさを引き立てます。"
    "シームレスに肌に溶け込み、まるで素肌そのもののような仕上がりを提供します。"
)
POT_SOURCE = "私たちは同じ釜の飯を食べた仲です。"
SINGER_SOURCE = "彼女の歌声は美空ひばりを彷彿とさせる。"

COSMETICS_SPEC = {
    "source_lang": "ja",
    "target_lang": "en",
    "purpose": "To market our own brand of cosmetics and to be displayed on our website",
    "target_audience": "Women in their 20s",
}
POT_SPEC = {
    "source_lang": "ja",
    "target_lang": "en",
    "purpose": (
        "Use natural expressions that can be understood by English speakers "
        "who are not very familiar with Japanese culture."
    ),
    "target_audience": "General English-speaking audience.",
}
SINGER_SPEC = {
    "source_lang": "ja",
    "target_lang": "en",
    "purpose": "Make the sentence resonate with readers outside Japan.",
    "target_audience": "General English-speaking audience.",
}

COSMETICS_ROWS = [
    ("DL", "Our foundations enhance your natural beauty. They blend seamlessly into the skin and provide a finish that looks like your skin itself.", 0.861),
    ("GT", "Our foundations are designed to enhance your natural beauty. It blends seamlessly into the skin and provides a finish that looks like bare skin itself.", 0.868),
    ("GPT", "The foundation we developed enhances your natural beauty. It seamlessly blends into your skin, providing a finish that feels just like your own bare skin.", 0.873),
    ("v1", "Our newly developed foundation enhances your natural beauty. It blends seamlessly into your skin, providing a finish that’s just like your own bare skin.", 0.870),
    ("v2", "Experience the natural beauty enhancement with our specially designed foundation. Its unique formulation blends effortlessly into your skin, giving the impression of flawless, bare skin.", 0.863),
    ("v3", "The foundation we’ve created serves to amplify your inherent beauty. Seamlessly melting into your skin, it leaves you with a finish indistinguishable from your natural skin.", 0.875),
]

POT_ROWS = [
    ("DL", "We are friends who ate out of the same pot.", 0.772),
    ("GT", "We ate rice from the same pot.", 0.727),
    ("GPT", "We ate rice from the same pot.", 0.727),
    ("v1", "We have shared the same pot of rice.", 0.743),
    ("v2", "We have been through thick and thin together.", 0.759),
    ("v3", "We’ve broken bread together.", 0.744),
]

SINGER_ROWS = [
    ("DL", "Her singing voice is reminiscent of Hibari Misora.", 0.876),
    ("GT", "Her singing voice is reminiscent of Hibari Misora.", 0.876),
    ("GPT", "Her singing voice reminds me of Misora Hibari.", 0.873),
    ("v1", "Her singing voice evokes memories of Judy Garland.", 0.830),
    ("v2", "Her singing voice is reminiscent of Billie Holiday.", 0.823),
    ("v3", "Listening to her sing, one can’t help but think of Ella Fitzgerald.", 0.826),
]

SUBSTITUTION_FRAME = "Her singing voice is reminiscent of {ENTITY}."
SUBSTITUTION_ROWS = [
    ("Hibari Misora", "Her singing voice is reminiscent of Hibari Misora.", 0.876),
    ("Judy Garland", "Her singing voice is reminiscent of Judy Garland.", 0.826),
    ("Billie Holiday", "Her singing voice is reminiscent of Billie Holiday.", 0.823),
    ("Ella Fitzgerald", "Her singing voice is reminiscent of Ella Fitzgerald.", 0.833),
]

# Canned chat responses. The three-candidate responses deliberately use three
# different enumeration styles the parser must handle (numbered with quotes,
# plain numbered, v-prefixed with a preamble).

COSMETICS_CHAT_3 = (
    '1. "Our newly developed foundation enhances your natural beauty. It blends seamlessly into your skin, providing a finish that’s just like your own bare skin."\n'
    '2. "Experience the natural beauty enhancement with our specially designed foundation. Its unique formulation blends effortlessly into your skin, giving the impression of flawless, bare skin."\n'
    '3. "The foundation we’ve created serves to amplify your inherent beauty. Seamlessly melting into your skin, it leaves you with a finish indistinguishable from your natural skin."'
)

POT_CHAT_3 = (
    "1. We have shared the same pot of rice.\n"
    "2. We have been through thick and thin together.\n"
    "3. We’ve broken bread together."
)

SINGER_CHAT_3 = (
    "Here are three dynamically equivalent translations:\n"
    "\n"
    "v1: Her singing voice evokes memories of Judy Garland.\n"
    "v2: Her singing voice is reminiscent of Billie Holiday.\n"
    "v3: Listening to her sing, one can’t help but think of Ella Fitzgerald.\n"
)


def _seed(*parts: str) -> int:
    digest = hashlib.sha256("\x00".join(parts).encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big")


def _unit(values: np.ndarray) -> np.ndarray:
    return values / np.linalg.norm(values)


def source_vector(scenario: str) -> np.ndarray:
    rng = np.random.default_rng(_seed("source", scenario))
    return _unit(rng.standard_normal(DIMENSION))


def jitter_for(text: str) -> float:
    digest = hashlib.sha256(("jitter\x00" + text).encode("utf-8")).digest()
    fraction = int.from_bytes(digest[:8], "big") / float(1 << 64)
    return (2.0 * fraction - 1.0) * JITTER


def candidate_vector(u: np.ndarray, text: str, printed: float) -> tuple[np.ndarray, float]:
    target = printed + jitter_for(text)
    rng = np.random.default_rng(_seed("candidate", text))
    raw = rng.standard_normal(DIMENSION)
    w = raw - np.dot(raw, u) * u
    w = _unit(w)
    v = target * u + np.sqrt(1.0 - target * target) * w
    return v, target


def check_roundtrip(u: np.ndarray, v: np.ndarray, printed: float) -> None:
    a = EmbeddingVector(values=tuple(u.tolist()), model_id=EMBED_MODEL)
    b = EmbeddingVector(values=tuple(v.tolist()), model_id=EMBED_MODEL)
    score = cosine(a, b)
    assert format(score, ".3f") == format(printed, ".3f"), (score, printed)


def main() -> None:
    root = bundled_root()
    store_dir = root / "store"
    inputs_dir = root / "inputs"
    if store_dir.exists():
        shutil.rmtree(store_dir)
    store_dir.mkdir(parents=True)
    inputs_dir.mkdir(parents=True, exist_ok=True)
    store = FixtureStore(store_dir)

    pair = LanguagePair(source_lang="ja", target_lang="en")
    scenarios: dict[str, dict] = {}

    # -- embeddings ---------------------------------------------------------

    def put_embeddings(scenario: str, source_text: str, rows) -> list[dict]:
        u = source_vector(scenario)
        store.put("embed", EMBED_MODEL, source_text, [float(x) for x in u])
        entries = []
        seen: dict[str, float] = {}
        for label, text, printed in rows:
            if text in seen:
                assert seen[text] == printed, (text, printed, seen[text])
            else:
                v, _ = candidate_vector(u, text, printed)
                check_roundtrip(u, v, printed)
                store.put("embed", EMBED_MODEL, text, [float(x) for x in v])
                seen[text] = printed
            entries.append({"label": label, "text": text, "score": printed})
        return entries

    cosmetics_entries = put_embeddings("cosmetics_marketing", COSMETICS_SOURCE, COSMETICS_ROWS)
    pot_entries = put_embeddings("shared_pot_idiom", POT_SOURCE, POT_ROWS)
    singer_entries = put_embeddings(
        "singer_dynamic_equivalence", SINGER_SOURCE, SINGER_ROWS + SUBSTITUTION_ROWS
    )

    # -- chat ---------------------------------------------------------------

    cosmetics_spec = spec_from_dict(COSMETICS_SPEC)
    pot_spec = spec_from_dict(POT_SPEC)
    cosmetics_segment = SourceSegment(text=COSMETICS_SOURCE)
    pot_segment = SourceSegment(text=POT_SOURCE)
    singer_segment = SourceSegment(text=SINGER_SOURCE)
    de = DynamicEquivalence()

    chat_entries = [
        # one prompt asking for three candidates, per scenario
        (build_spec_conditioned(cosmetics_segment, cosmetics_spec, 3).text, COSMETICS_CHAT_3, 3,
         [row[1] for row in COSMETICS_ROWS[3:]]),
        (build_spec_conditioned(pot_segment, pot_spec, 3).text, POT_CHAT_3, 3,
         [row[1] for row in POT_ROWS[3:]]),
        (build_dynamic_equivalence(singer_segment, de, pair, 3).text, SINGER_CHAT_3, 3,
         [row[1] for row in SINGER_ROWS[3:]]),
        # single-candidate prompts so default CLI invocations replay too
        (build_spec_conditioned(cosmetics_segment, cosmetics_spec, 1).text,
         COSMETICS_ROWS[5][1], 1, [COSMETICS_ROWS[5][1]]),
        (build_spec_conditioned(pot_segment, pot_spec, 1).text,
         POT_ROWS[4][1], 1, [POT_ROWS[4][1]]),
        (build_dynamic_equivalence(singer_segment, de, pair, 1).text,
         SUBSTITUTION_ROWS[3][1], 1, [SUBSTITUTION_ROWS[3][1]]),
        # bare baseline prompts
        (build_baseline(cosmetics_segment, pair).text, COSMETICS_ROWS[2][1], 1, [COSMETICS_ROWS[2][1]]),
        (build_baseline(pot_segment, pair).text, POT_ROWS[2][1], 1, [POT_ROWS[2][1]]),
        (build_baseline(singer_segment, pair).text, SINGER_ROWS[2][1], 1, [SINGER_ROWS[2][1]]),
    ]
    for prompt, response, n, expected in chat_entries:
        assert parse_candidates(response, n) == expected, (prompt[:60], expected)
        store.put("chat", CHAT_MODEL, prompt, response)

    # -- canonical inputs -----------------------------------------------------

    def write_json(path: Path, payload) -> None:
        path.write_text(json.dumps(payload, ensure_ascii=False, indent=2) + "\n", encoding="utf-8")

    write_json(inputs_dir / "spec_cosmetics.json", COSMETICS_SPEC)
    write_json(inputs_dir / "spec_shared_pot.json", POT_SPEC)
    write_json(inputs_dir / "spec_singer.json", SINGER_SPEC)
    for name, rows in (
        ("refs_cosmetics.json", COSMETICS_ROWS),
        ("refs_shared_pot.json", POT_ROWS),
        ("refs_singer.json", SINGER_ROWS),
    ):
        write_json(
            inputs_dir / name,
            [{"label": label, "text": text} for label, text, _ in rows[:3]],
        )
    (inputs_dir / "entities_singers.txt").write_text(
        "".join(f"{label}\n" for label, _, _ in SUBSTITUTION_ROWS), encoding="utf-8"
    )

    # -- manifest -------------------------------------------------------------

    scenarios["cosmetics_marketing"] = {
        "description": "Marketing copy for a cosmetics foundation, conditioned on purpose and audience; three generated candidates ranked against three reference engine translations.",
        "source": COSMETICS_SOURCE,
        "spec_file": "inputs/spec_cosmetics.json",
        "refs_file": "inputs/refs_cosmetics.json",
        "strategy": "spec_conditioned",
        "candidates": cosmetics_entries,
        "expected_ranks": {"DL": 6, "GT": 4, "GPT": 2, "v1": 3, "v2": 5, "v3": 1},
    }
    scenarios["shared_pot_idiom"] = {
        "description": "Culture-bound idiom about shared hardship; spec-conditioned prompting asked to produce natural English rather than a literal rendering.",
        "source": POT_SOURCE,
        "spec_file": "inputs/spec_shared_pot.json",
        "refs_file": "inputs/refs_shared_pot.json",
        "strategy": "spec_conditioned",
        "candidates": pot_entries[:6],
        "expected_ranks": {"DL": 1, "GT": 5, "GPT": 5, "v1": 4, "v2": 2, "v3": 3},
    }
    scenarios["singer_dynamic_equivalence"] = {
        "description": "Sentence naming a famous Japanese singer; dynamic-equivalence prompting substitutes a singer familiar to the target culture.",
        "source": SINGER_SOURCE,
        "spec_file": "inputs/spec_singer.json",
        "refs_file": "inputs/refs_singer.json",
        "strategy": "dynamic_equivalence",
        "candidates": singer_entries[: len(SINGER_ROWS)],
        "expected_ranks": {"DL": 1, "GT": 1, "GPT": 2, "v1": 3, "v2": 5, "v3": 4},
    }
    scenarios["singer_substitution"] = {
        "description": "Frame-normalized entity substitution: only the singer's name varies inside a fixed sentence frame, isolating the entity's contribution to similarity.",
        "source": SINGER_SOURCE,
        "frame": SUBSTITUTION_FRAME,
        "entities_file": "inputs/entities_singers.txt",
        "candidates": [
            {"label": label, "text": text, "score": printed}
            for label, text, printed in SUBSTITUTION_ROWS
        ],
        "expected_ranks": {
            "Hibari Misora": 1,
            "Judy Garland": 3,
            "Billie Holiday": 4,
            "Ella Fitzgerald": 2,
        },
    }

    manifest = {
        "chat_model": CHAT_MODEL,
        "embed_model": EMBED_MODEL,
        "dimension": DIMENSION,
        "score_precision": 3,
        "note": (
            "Deterministic offline snapshot. Embedding vectors are synthetic unit "
            "vectors constructed so each candidate's cosine against its scenario "
            "source reproduces the canonical 3-decimal score; they are not real "
            "provider output. Regenerate with scripts/gen_fixtures.py."
        ),
        "scenarios": scenarios,
    }
    write_json(root / "manifest.json", manifest)

    n_entries = len(list(store_dir.glob("*.json")))
    print(f"wrote {n_entries} store entries under {store_dir}")
    print(f"manifest: {root / 'manifest.json'}")


if __name__ == "__main__":
    main()
