"""Operator command line: serve, ingest, export, report, simulate."""

from __future__ import annotations

import json
import sys

import click

from .core import EngineConfig, Modality
from .corpus import write_export
from .engine import GameEngine
from .errors import EngineError
from .simulate import SimProfile, run_simulation


def _fail(exc: EngineError) -> "click.ClickException":
    return click.ClickException(f"{exc.code}: {exc}")


def build_engine_from_config(config: dict, default_store: str) -> GameEngine:
    """Engine per a serve-config dict; a seed switches on test-mode determinism."""
    from .store import LogicalClock

    cfg = EngineConfig.from_dict(config.get("engine", {}))
    seed = config.get("seed")
    return GameEngine(
        path=config.get("store", default_store), cfg=cfg, seed=seed,
        clock=LogicalClock() if seed is not None else None,
        deterministic_tokens=seed is not None)


@click.group()
@click.option("--store", "store_path", envvar="MOODGAME_STORE",
              default="moodgame-events.jsonl", show_default=True,
              help="Path of the append-only event journal.")
@click.pass_context
def main(ctx: click.Context, store_path: str) -> None:
    """Mood-annotation game: engine operations."""
    ctx.obj = store_path


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True),
              help="JSON config: host, port, store, admin_token, engine{...}, seed.")
@click.option("--host", default=None)
@click.option("--port", default=None, type=int)
@click.pass_obj
def serve(store_path: str, config_path: str | None, host: str | None,
          port: int | None) -> None:
    """Run the HTTP API."""
    import uvicorn

    from .api import create_app

    config = {}
    if config_path:
        with open(config_path, "r", encoding="utf-8") as fh:
            config = json.load(fh)
    try:
        engine = build_engine_from_config(config, store_path)
    except EngineError as exc:
        raise _fail(exc)
    app = create_app(engine, admin_token=config.get("admin_token"),
                     static_dir=config.get("static_dir"))
    uvicorn.run(app, host=host or config.get("host", "127.0.0.1"),
                port=port or config.get("port", 8000))


@main.command()
@click.option("--file", "file_path", required=True, type=click.Path(exists=True))
@click.option("--modality", required=True,
              type=click.Choice([m.value for m in Modality]))
@click.pass_obj
def ingest(store_path: str, file_path: str, modality: str) -> None:
    """Load a line-delimited corpus file into the store."""
    try:
        engine = GameEngine(path=store_path)
        count = engine.ingest_file(file_path, modality)
    except EngineError as exc:
        raise _fail(exc)
    click.echo(f"loaded {count} snippets")


@main.command()
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--modality", default=None,
              type=click.Choice([m.value for m in Modality]))
@click.pass_obj
def export(store_path: str, out_path: str, modality: str | None) -> None:
    """Write all validated annotations as line-delimited JSON."""
    try:
        engine = GameEngine(path=store_path)
        with open(out_path, "w", encoding="utf-8") as fh:
            count = write_export(engine.store, fh, modality)
    except EngineError as exc:
        raise _fail(exc)
    click.echo(f"exported {count} validated annotations to {out_path}")


@main.command()
@click.option("--format", "fmt", default="table",
              type=click.Choice(["table", "records"]), show_default=True)
@click.pass_obj
def report(store_path: str, fmt: str) -> None:
    """Print corpus-wide annotation statistics."""
    try:
        engine = GameEngine(path=store_path)
        stats = engine.stats_report().as_dict()
    except EngineError as exc:
        raise _fail(exc)
    if fmt == "records":
        click.echo(json.dumps(stats, sort_keys=True))
        return
    width = max(len(k) for k in stats)
    for key, value in stats.items():
        shown = f"{value:.3f}" if isinstance(value, float) else value
        click.echo(f"{key:<{width}}  {shown}")


@main.command()
@click.option("--players", required=True, type=int)
@click.option("--games", required=True, type=int)
@click.option("--dist", "dist_path", required=True, type=click.Path(exists=True),
              help="JSON file mapping label -> probability; '__unique__' draws "
                   "a fresh junk label each time.")
@click.option("--seed", required=True, type=int)
@click.option("--snippets-per-game", default=10, show_default=True, type=int)
@click.option("--modality", default=Modality.TEXT.value,
              type=click.Choice([m.value for m in Modality]), show_default=True)
@click.pass_obj
def simulate(store_path: str, players: int, games: int, dist_path: str,
             seed: int, snippets_per_game: int, modality: str) -> None:
    """Drive the full engine with synthetic players; deterministic per seed."""
    with open(dist_path, "r", encoding="utf-8") as fh:
        dist = json.load(fh)
    profile = SimProfile(players=players, label_dist=dist, games_per_player=games,
                         snippets_per_game=snippets_per_game, seed=seed)
    try:
        _, summary = run_simulation(profile, Modality(modality),
                                    store_path=store_path)
    except EngineError as exc:
        raise _fail(exc)
    for key, value in summary.as_dict().items():
        click.echo(f"{key}: {value}")


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
