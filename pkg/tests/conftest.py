from __future__ import annotations

import pytest

from moodgame.core import EngineConfig, Modality
from moodgame.engine import GameEngine
from moodgame.simulate import synthetic_corpus
from moodgame.store import LogicalClock


@pytest.fixture
def cfg() -> EngineConfig:
    return EngineConfig()


def make_engine(seed: int = 0, cfg: EngineConfig | None = None,
                path: str | None = None, corpus_size: int = 0,
                modality: Modality = Modality.TEXT) -> GameEngine:
    """In-memory deterministic engine, optionally preloaded with a corpus."""
    engine = GameEngine(path=path, cfg=cfg, clock=LogicalClock(), seed=seed,
                        deterministic_tokens=True)
    if corpus_size:
        engine.store.add_snippets(synthetic_corpus(corpus_size, modality))
    return engine


def activated_player(engine: GameEngine, n: int = 1, privacy: bool = False):
    """Register and activate one player; returns their auth token."""
    _, activation = engine.accounts.register(
        email=f"player{n}@example.test", age=25, languages=["en"],
        info_sheet_ack=True, display_name=f"player-{n}")
    auth = engine.accounts.activate(activation)
    if privacy:
        engine.accounts.update_profile(auth.player, privacy=True)
    return auth


def play_one_game(engine: GameEngine, player: str, labels: list[str],
                  modality: Modality = Modality.TEXT, mood: int = 3):
    """Start a game, answer len(labels) snippets, end it; returns the summary."""
    session = engine.sessions.start_game(player, modality, mood)
    for label in labels:
        snippet, _ = engine.sessions.next_snippet(session)
        engine.sessions.submit_response(session, snippet.id, label)
    return engine.sessions.end_game(session)


@pytest.fixture
def engine() -> GameEngine:
    return make_engine(seed=7, corpus_size=3)
