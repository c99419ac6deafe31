"""Deterministic synthetic-player simulation through the real engine.

The simulator never touches engine internals: players register, activate,
start games, get served, respond, and end, exactly like humans over the API.
With a fixed seed the run is fully deterministic — including journal bytes —
because the engine is built with a logical clock and seeded token source.

The label distribution may include the reserved key ``__unique__``, whose
probability mass produces a fresh junk label on every draw.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass

from .core import EngineConfig, Modality, Snippet
from .engine import GameEngine
from .errors import EmptyCorpusError, InvalidProfileError
from .store import LogicalClock

UNIQUE_LABEL = "__unique__"


@dataclass(frozen=True)
class SimProfile:
    players: int
    label_dist: dict[str, float]
    games_per_player: int
    snippets_per_game: int = 10
    seed: int = 0


@dataclass
class SimSummary:
    players: int
    games: int
    responses: int
    promotions: int
    promoted_snippets: int
    distinct_labels: int
    total_points: int
    max_final: int
    badges_awarded: int
    seed: int

    def as_dict(self) -> dict:
        return self.__dict__.copy()


def validate_profile(profile: SimProfile) -> SimProfile:
    if profile.players < 1:
        raise InvalidProfileError("players must be >= 1")
    if profile.games_per_player < 1:
        raise InvalidProfileError("games_per_player must be >= 1")
    if profile.snippets_per_game < 1:
        raise InvalidProfileError("snippets_per_game must be >= 1")
    if not profile.label_dist:
        raise InvalidProfileError("label distribution is empty")
    if any(p < 0 for p in profile.label_dist.values()):
        raise InvalidProfileError("label probabilities must be non-negative")
    total = sum(profile.label_dist.values())
    if not math.isclose(total, 1.0, abs_tol=1e-9):
        raise InvalidProfileError(f"label probabilities sum to {total}, expected 1")
    return profile


class _LabelSampler:
    def __init__(self, dist: dict[str, float], rng: random.Random):
        self._items = sorted(dist.items())
        self._rng = rng
        self._junk_seq = 0

    def draw(self) -> str:
        roll = self._rng.random()
        acc = 0.0
        chosen = self._items[-1][0]
        for label, prob in self._items:
            acc += prob
            if roll < acc:
                chosen = label
                break
        if chosen == UNIQUE_LABEL:
            self._junk_seq += 1
            return f"junk-{self._junk_seq:06d}"
        return chosen


def build_sim_engine(store_path: str | None = None,
                     cfg: EngineConfig | None = None,
                     seed: int = 0) -> GameEngine:
    """An engine whose every run with the same inputs is byte-reproducible."""
    return GameEngine(path=store_path, cfg=cfg, clock=LogicalClock(),
                      seed=seed, deterministic_tokens=True)


def run_simulation(profile: SimProfile, modality: Modality = Modality.TEXT,
                   store_path: str | None = None, cfg: EngineConfig | None = None,
                   corpus: list[Snippet] | None = None,
                   engine: GameEngine | None = None) -> tuple[GameEngine, SimSummary]:
    validate_profile(profile)
    engine = engine or build_sim_engine(store_path, cfg, profile.seed)
    if corpus:
        engine.store.add_snippets(corpus)
    if not engine.store.active_snippet_ids(modality):
        raise EmptyCorpusError(f"no active {modality.value} snippets to simulate over")

    rng = engine.rng
    sampler = _LabelSampler(profile.label_dist, rng)
    tokens = []
    for i in range(profile.players):
        _, activation = engine.accounts.register(
            email=f"sim-player-{i + 1}@example.test", age=30,
            languages=["en"], info_sheet_ack=True,
            display_name=f"sim-{i + 1}")
        tokens.append(engine.accounts.activate(activation))

    responses = 0
    total_points = 0
    max_final = 0
    for _ in range(profile.games_per_player):
        for auth in tokens:
            session = engine.sessions.start_game(
                auth.player, modality, rng.randint(1, 5))
            for _ in range(profile.snippets_per_game):
                snippet, _counted = engine.sessions.next_snippet(session)
                breakdown, _msgs, _badges = engine.sessions.submit_response(
                    session, snippet.id, sampler.draw())
                responses += 1
                total_points += breakdown.final
                max_final = max(max_final, breakdown.final)
            engine.sessions.end_game(session)

    exported = engine.export_validated(modality)
    badge_count = sum(
        1 for event in engine.store.events() if event.kind == "badge_award")
    labels = {event.payload["label"] for event in engine.store.events()
              if event.kind == "response" and event.payload["counted"]}
    summary = SimSummary(
        players=profile.players,
        games=profile.players * profile.games_per_player,
        responses=responses,
        promotions=len(exported),
        promoted_snippets=len({r["snippet_id"] for r in exported}),
        distinct_labels=len(labels),
        total_points=total_points,
        max_final=max_final,
        badges_awarded=badge_count,
        seed=profile.seed,
    )
    return engine, summary


def synthetic_corpus(count: int, modality: Modality = Modality.TEXT,
                     prefix: str = "snippet") -> list[Snippet]:
    """Simple numbered corpus for simulations and tests."""
    if modality is Modality.TEXT:
        return [Snippet(id=f"{prefix}-{i + 1:05d}", modality=modality,
                        payload=f"sample text passage number {i + 1}")
                for i in range(count)]
    return [Snippet(id=f"{prefix}-{i + 1:05d}", modality=modality,
                    payload=f"media/{modality.value}/{prefix}-{i + 1:05d}.dat")
            for i in range(count)]
