"""Command-line surface over the translation pipeline.

Exit codes are part of the contract so CI can tell failure classes apart:
1 usage, 2 validation, 3 provider/fixture, 4 persistence. Reports go to
stdout; session ids and diagnostics go to stderr.
"""

from __future__ import annotations

import json
import os
import socket
import sys
from pathlib import Path

import click

from .errors import (
    ProviderError,
    SessionStoreError,
    SpecmtError,
    UnknownSessionError,
    ValidationError,
)
from .fixtures import bundled_store_root
from .gateway import (
    DEFAULT_BASE_URL,
    DEFAULT_CHAT_MODEL,
    DEFAULT_EMBED_MODEL,
    FixtureStore,
    MODES,
    ProviderConfig,
    ProviderGateway,
)
from .model import (
    DynamicEquivalence,
    ExemplarPair,
    SourceSegment,
    Baseline,
    SpecConditioned,
    parse_spec,
)
from .ranking import Candidate, render_report_table, report_to_dict, substitution_analysis
from .sessions import SessionStore, emit_report, record_selection, run_session

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_PROVIDER = 3
EXIT_PERSISTENCE = 4

CONFIG_ENV = "SPECMT_CONFIG"

_CONFIG_KEYS = (
    "mode",
    "chat_base_url",
    "embed_base_url",
    "chat_model",
    "embed_model",
    "fixtures_dir",
    "sessions_dir",
    "format",
)

_STRATEGY_CHOICES = ("baseline", "spec", "dynamic-equivalence")


def _load_config_file(path: str | None) -> dict:
    resolved = path or os.environ.get(CONFIG_ENV)
    if not resolved:
        return {}
    file = Path(resolved)
    if not file.exists():
        raise click.UsageError(f"config file not found: {resolved}")
    try:
        data = json.loads(file.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read config file {resolved}: {exc}")
    unknown = sorted(set(data) - set(_CONFIG_KEYS))
    if unknown:
        raise click.UsageError(f"unknown config keys: {', '.join(unknown)}")
    return data


def _resolve(flag, config: dict, key: str, default):
    if flag is not None:
        return flag
    if key in config:
        return config[key]
    return default


def _build_gateway(config: dict, mode, fixtures_dir) -> ProviderGateway:
    mode = _resolve(mode, config, "mode", "replay")
    if mode not in MODES:
        raise click.UsageError(f"mode must be one of {', '.join(MODES)}")
    fixtures = Path(_resolve(fixtures_dir, config, "fixtures_dir", bundled_store_root()))
    provider = ProviderConfig(
        mode=mode,
        chat_base_url=_resolve(None, config, "chat_base_url", DEFAULT_BASE_URL),
        embed_base_url=_resolve(None, config, "embed_base_url", DEFAULT_BASE_URL),
        chat_model=_resolve(None, config, "chat_model", DEFAULT_CHAT_MODEL),
        embed_model=_resolve(None, config, "embed_model", DEFAULT_EMBED_MODEL),
    )
    store = FixtureStore(fixtures) if mode in ("replay", "record") else None
    return ProviderGateway(provider, store)


def _session_store(config: dict, sessions_dir) -> SessionStore:
    return SessionStore(Path(_resolve(sessions_dir, config, "sessions_dir", "sessions")))


def _read_source(source: str | None, source_file: str | None) -> str:
    if (source is None) == (source_file is None):
        raise click.UsageError("provide the source text either inline or via --source-file")
    if source is not None:
        return source
    path = Path(source_file)
    if not path.exists():
        raise click.UsageError(f"source file not found: {source_file}")
    text = path.read_text(encoding="utf-8")
    return text[:-1] if text.endswith("\n") else text


def _read_references(path: str | None) -> list[Candidate]:
    if path is None:
        return []
    file = Path(path)
    if not file.exists():
        raise click.UsageError(f"references file not found: {path}")
    try:
        data = json.loads(file.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise click.UsageError(f"references file is not valid JSON: {exc}")
    if not isinstance(data, list):
        raise click.UsageError("references file must be a JSON array of {label, text} objects")
    return [Candidate(label=item["label"], text=item["text"], origin="reference") for item in data]


def _read_exemplars(path: str | None) -> tuple[ExemplarPair, ...] | None:
    if path is None:
        return None
    file = Path(path)
    if not file.exists():
        raise click.UsageError(f"exemplars file not found: {path}")
    data = json.loads(file.read_text(encoding="utf-8"))
    return tuple(
        ExemplarPair(
            source_phrase=item["source_phrase"],
            target_phrase=item["target_phrase"],
            rationale=item.get("rationale", ""),
        )
        for item in data
    )


def _print_report(report_dict: dict, record_report, fmt: str) -> None:
    if fmt == "json":
        click.echo(json.dumps(report_dict, ensure_ascii=False, indent=2))
    else:
        click.echo(render_report_table(record_report))


@click.group(name="specmt")
@click.option("--config", "config_path", type=str, default=None, help="Path to a JSON config file.")
@click.pass_context
def cli(ctx, config_path):
    """Specification-conditioned translation with cosine-similarity reranking."""

    ctx.obj = _load_config_file(config_path)


@cli.command("translate")
@click.argument("spec_file", type=str)
@click.argument("source", required=False)
@click.option("--source-file", type=str, default=None, help="Read the source segment from a file.")
@click.option("--strategy", type=click.Choice(_STRATEGY_CHOICES), default="spec", show_default=True)
@click.option("--n", type=int, default=1, show_default=True, help="Number of candidates to generate.")
@click.option("--refs", "refs_file", type=str, default=None, help="JSON array of reference candidates.")
@click.option("--target-culture", default=None, help="Culture for dynamic-equivalence substitution.")
@click.option("--exemplars", "exemplars_file", type=str, default=None, help="JSON exemplar list for dynamic equivalence.")
@click.option("--multi-call", is_flag=True, help="Issue n independent generation calls instead of one multi-candidate prompt.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default=None)
@click.option("--mode", type=click.Choice(MODES), default=None)
@click.option("--fixtures-dir", type=str, default=None)
@click.option("--sessions-dir", type=str, default=None)
@click.pass_context
def cmd_translate(ctx, spec_file, source, source_file, strategy, n, refs_file, target_culture,
                  exemplars_file, multi_call, fmt, mode, fixtures_dir, sessions_dir):
    """Translate one segment under a translation specification and rank the
    candidates against the source by cosine similarity."""

    config = ctx.obj
    spec_path = Path(spec_file)
    if not spec_path.exists():
        raise click.UsageError(f"spec file not found: {spec_file}")
    spec = parse_spec(spec_path.read_text(encoding="utf-8"))
    segment = SourceSegment(text=_read_source(source, source_file))
    references = _read_references(refs_file)

    if strategy == "baseline":
        chosen = Baseline()
    elif strategy == "spec":
        chosen = SpecConditioned()
    else:
        kwargs = {}
        exemplars = _read_exemplars(exemplars_file)
        if exemplars is not None:
            kwargs["exemplars"] = exemplars
        if target_culture is not None:
            kwargs["target_culture"] = target_culture
        chosen = DynamicEquivalence(**kwargs)

    gateway = _build_gateway(config, mode, fixtures_dir)
    store = _session_store(config, sessions_dir)
    record = run_session(
        spec, segment, chosen, n, references, gateway=gateway, store=store, multi_call=multi_call
    )
    click.echo(f"session: {record.session_id}", err=True)
    _print_report(report_to_dict(record.report), record.report, _resolve(fmt, config, "format", "table"))


@cli.command("substitute")
@click.option("--frame", required=True, help="Sentence frame containing the {ENTITY} slot exactly once.")
@click.option("--entities", "entities_file", required=True, type=str, help="File with one entity per line.")
@click.option("--source", default=None, help="Source text to score against.")
@click.option("--source-file", type=str, default=None)
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default=None)
@click.option("--mode", type=click.Choice(MODES), default=None)
@click.option("--fixtures-dir", type=str, default=None)
@click.pass_context
def cmd_substitute(ctx, frame, entities_file, source, source_file, fmt, mode, fixtures_dir):
    """Substitute each entity into the frame and rank the renderings by
    cosine similarity against the source."""

    config = ctx.obj
    entities_path = Path(entities_file)
    if not entities_path.exists():
        raise click.UsageError(f"entities file not found: {entities_file}")
    entities = [line.strip() for line in entities_path.read_text(encoding="utf-8").splitlines() if line.strip()]
    source_text = _read_source(source, source_file)

    gateway = _build_gateway(config, mode, fixtures_dir)
    segment = SourceSegment(text=source_text)
    source_vec = gateway.embed(source_text)
    report = substitution_analysis(frame, entities, segment, source_vec, gateway.embed)
    _print_report(report_to_dict(report), report, _resolve(fmt, config, "format", "table"))


@cli.command("select")
@click.argument("session_id")
@click.argument("label")
@click.option("--edit", "edit_file", type=str, default=None, help="File with the edited candidate text.")
@click.option("--sessions-dir", type=str, default=None)
@click.pass_context
def cmd_select(ctx, session_id, label, edit_file, sessions_dir):
    """Record which candidate the translator picked for a session."""

    config = ctx.obj
    edited_text = None
    if edit_file is not None:
        edit_path = Path(edit_file)
        if not edit_path.exists():
            raise click.UsageError(f"edit file not found: {edit_file}")
        text = edit_path.read_text(encoding="utf-8")
        edited_text = text[:-1] if text.endswith("\n") else text
    store = _session_store(config, sessions_dir)
    record = record_selection(store, session_id, label, edited_text)
    click.echo(f"selected {record.selection.label} for session {record.session_id}", err=True)


@cli.command("report")
@click.argument("session_id")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table", show_default=True)
@click.option("--sessions-dir", type=str, default=None)
@click.pass_context
def cmd_report(ctx, session_id, fmt, sessions_dir):
    """Re-emit the stored report for a session."""

    store = _session_store(ctx.obj, sessions_dir)
    click.echo(emit_report(store, session_id, fmt), nl=False)


@cli.command("serve")
@click.option("--port", type=int, default=8787, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--mode", type=click.Choice(MODES), default=None)
@click.option("--fixtures-dir", type=str, default=None)
@click.option("--sessions-dir", type=str, default=None)
@click.option("--static-dir", type=str, default=None, help="Serve a built workbench from this directory.")
@click.pass_context
def cmd_serve(ctx, port, host, mode, fixtures_dir, sessions_dir, static_dir):
    """Run the HTTP service (and optionally the workbench UI)."""

    import uvicorn

    from .service import create_app

    config = ctx.obj
    gateway = _build_gateway(config, mode, fixtures_dir)
    store = _session_store(config, sessions_dir)
    app = create_app(store, gateway, static_dir=static_dir)

    # Surface an occupied port as a provider/infrastructure failure (exit 3)
    # instead of uvicorn's generic shutdown.
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe.bind((host, port))
    except OSError as exc:
        raise ProviderError(f"cannot bind {host}:{port}: {exc}", code="serve.bind_failed") from exc
    finally:
        probe.close()
    uvicorn.run(app, host=host, port=port, log_level="info")


def main(argv: list[str] | None = None) -> int:
    """Entry point with the documented exit-code taxonomy."""

    try:
        cli.main(args=argv, standalone_mode=False)
        return EXIT_OK
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.ClickException as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return EXIT_USAGE
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return EXIT_USAGE
    except (ProviderError,) as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        return EXIT_PROVIDER
    except (SessionStoreError,) as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        return EXIT_PERSISTENCE
    except (ValidationError, UnknownSessionError, SpecmtError) as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
