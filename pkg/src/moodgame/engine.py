"""Facade wiring the store, accounts, sessions, and progression together.

Construct one GameEngine per process. For tests and simulations pass a
LogicalClock, a seed, and deterministic_tokens=True to make every run —
including the journal bytes — reproducible.
"""

from __future__ import annotations

import random

from .accounts import AccountService, MailTransport
from .aggregator import ValidatedAnnotation
from .core import EngineConfig, Modality
from .progression import BadgeProgress, LeaderboardEntry
from .session import SessionEngine
from .store import Clock, Store


class GameEngine:
    def __init__(self, path: str | None = None, cfg: EngineConfig | None = None,
                 clock: Clock | None = None, seed: int | None = None,
                 store: Store | None = None, mail: MailTransport | None = None,
                 deterministic_tokens: bool = False, fsync: bool = False):
        self.store = store or Store(path=path, cfg=cfg, clock=clock, fsync=fsync)
        self.rng = random.Random(seed)
        token_source = None
        if deterministic_tokens:
            token_source = lambda: f"tok-{self.rng.getrandbits(160):040x}"
        self.accounts = AccountService(self.store, mail=mail, token_source=token_source)
        self.sessions = SessionEngine(self.store, self.rng)

    @property
    def cfg(self) -> EngineConfig:
        return self.store.cfg

    # -- popularity and promotion ------------------------------------------

    def popularity_share(self, snippet_id: str, label: str) -> float:
        self.store.get_snippet(snippet_id)
        return self.store.state.aggregator.popularity_share(snippet_id, label)

    def evaluate_promotions(self, snippet_id: str) -> list[ValidatedAnnotation]:
        """Promote any label of the snippet now past the threshold."""
        with self.store.transaction() as txn:
            self.store.get_snippet(snippet_id)
            now = self.store.clock.now()
            fresh = self.store.state.aggregator.detect_promotions(
                snippet_id, self.cfg, now)
            for annotation in fresh:
                txn.stage("promotion", annotation.as_dict())
            return fresh

    def export_validated(self, modality: Modality | str | None = None) -> list[dict]:
        from .corpus import export_records
        return export_records(self.store, modality)

    # -- progression reads ------------------------------------------------------

    def leaderboard(self, modality: Modality | str | None = None,
                    limit: int | None = None) -> list[LeaderboardEntry]:
        scope = None if modality is None else Modality.parse(modality)
        with self.store.transaction():
            return self.store.state.progression.leaderboard(
                scope, limit or self.cfg.leaderboard_size)

    def compute_rank(self, player: str,
                     modality: Modality | str | None = None) -> int | None:
        scope = None if modality is None else Modality.parse(modality)
        with self.store.transaction():
            return self.store.state.progression.compute_rank(player, scope)

    def badge_progress(self, player: str) -> list[BadgeProgress]:
        with self.store.transaction():
            return self.store.state.progression.badge_progress(player)

    def stats_view(self, player: str) -> dict:
        """Profile-page statistics for one player, all scopes."""
        with self.store.transaction():
            progression = self.store.state.progression
            stats = progression.stats_for(player)
            account = self.store.get_account(player)

            def scope_view(scope, modality):
                return {
                    "total_score": scope.total_score,
                    "highest_game_score": scope.highest_game_score,
                    "highest_word_score": scope.highest_word_score,
                    "games_played": scope.games_played,
                    "snippets_answered": scope.snippets_answered,
                    "scoring_words": scope.scoring_words,
                    "unique_words": scope.unique_words,
                    "rank": None if account.guest
                    else progression.compute_rank(player, modality),
                }

            return {
                "player": player,
                "overall": scope_view(stats.overall, None),
                "by_modality": {
                    m.value: scope_view(s, m)
                    for m, s in sorted(stats.by_modality.items())
                },
                "badges": [
                    {"badge": name, "awarded_at": at}
                    for name, at in sorted(stats.badges.items(), key=lambda kv: kv[1])
                ],
            }

    # -- operator helpers -----------------------------------------------------------

    def ingest_file(self, path: str, modality: Modality | str) -> int:
        from .corpus import ingest
        return ingest(self.store, path, Modality.parse(modality))

    def stats_report(self):
        from .stats import stats_report
        return stats_report(self.store)

    def reconcile(self) -> list[str]:
        return self.store.reconcile()

    def close(self) -> None:
        self.store.close()
