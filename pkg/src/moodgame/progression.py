"""Badges, per-player statistics, ranks, and leaderboards.

Statistics are kept twice: one global scope and one scope per modality, so
each game mode gets its own board while badges run on the global counters.
Awards are permanent; guests accumulate stats for their session views but
never earn badges and never appear on a board.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .core import Modality, PlayerAccount
from .errors import UnknownPlayerError


class Metric(str, Enum):
    GAMES_PLAYED = "games_played"
    SNIPPETS_IN_ONE_GAME = "snippets_in_one_game"
    TOTAL_SNIPPETS = "total_snippets"
    SCORING_WORDS = "scoring_words"
    UNIQUE_WORDS = "unique_words"
    LEADERBOARD_ENTRY = "leaderboard_entry"
    ALL_BADGES = "all_badges"


@dataclass(frozen=True)
class BadgeDefinition:
    name: str
    metric: Metric
    threshold: int


WHOLE_ENCHILADA = "The Whole Enchilada"

BADGES: tuple[BadgeDefinition, ...] = (
    BadgeDefinition("Newbie", Metric.GAMES_PLAYED, 1),
    BadgeDefinition("Adventurer", Metric.GAMES_PLAYED, 10),
    BadgeDefinition("100 Meter Sprint", Metric.SNIPPETS_IN_ONE_GAME, 10),
    BadgeDefinition("Explorer", Metric.GAMES_PLAYED, 50),
    BadgeDefinition("Marathon Runner", Metric.SNIPPETS_IN_ONE_GAME, 50),
    BadgeDefinition("Precious Gem", Metric.SCORING_WORDS, 50),
    BadgeDefinition("Special Snowflake", Metric.UNIQUE_WORDS, 50),
    BadgeDefinition("Crème de la Crème", Metric.LEADERBOARD_ENTRY, 1),
    BadgeDefinition("Around the World", Metric.TOTAL_SNIPPETS, 1000),
    BadgeDefinition(WHOLE_ENCHILADA, Metric.ALL_BADGES, 9),
)


@dataclass
class ScopeStats:
    """Counters for one scope (global or a single modality)."""

    total_score: int = 0
    highest_game_score: int = 0
    highest_word_score: int = 0
    games_played: int = 0
    snippets_answered: int = 0
    scoring_words: int = 0
    max_snippets_in_one_game: int = 0
    unique_labels: set[str] = field(default_factory=set)
    score_reached_at: float = 0.0

    @property
    def unique_words(self) -> int:
        return len(self.unique_labels)

    def as_dict(self) -> dict:
        return {
            "total_score": self.total_score,
            "highest_game_score": self.highest_game_score,
            "highest_word_score": self.highest_word_score,
            "games_played": self.games_played,
            "snippets_answered": self.snippets_answered,
            "scoring_words": self.scoring_words,
            "max_snippets_in_one_game": self.max_snippets_in_one_game,
            "unique_labels": sorted(self.unique_labels),
            "score_reached_at": self.score_reached_at,
        }


@dataclass
class UserStats:
    player: str
    overall: ScopeStats = field(default_factory=ScopeStats)
    by_modality: dict[Modality, ScopeStats] = field(default_factory=dict)
    badges: dict[str, float] = field(default_factory=dict)  # name -> awarded_at

    def scope(self, modality: Modality | None) -> ScopeStats:
        if modality is None:
            return self.overall
        return self.by_modality.setdefault(Modality.parse(modality), ScopeStats())


@dataclass(frozen=True)
class LeaderboardEntry:
    rank: int
    player: str
    display_name: str
    avatar: str | None
    total_score: int


@dataclass(frozen=True)
class BadgeProgress:
    badge: BadgeDefinition
    current: int
    earned: bool
    earned_at: float | None


class Progression:
    """Incrementally maintained stats book over the shared account registry."""

    def __init__(self, accounts: dict[str, PlayerAccount], leaderboard_size: int = 10):
        self._accounts = accounts
        self._stats: dict[str, UserStats] = {}
        self.leaderboard_size = leaderboard_size

    def stats_for(self, player: str) -> UserStats:
        if player not in self._accounts:
            raise UnknownPlayerError(f"no such player: {player}")
        return self._stats.setdefault(player, UserStats(player))

    def known_players(self) -> list[str]:
        return sorted(self._stats)

    # -- event application -------------------------------------------------

    def on_response(self, player: str, modality: Modality, label: str, final: int,
                    p: int, counted: bool, game_snippet_count: int,
                    game_score_after: int, now: float) -> None:
        stats = self.stats_for(player)
        for scope in (stats.overall, stats.scope(modality)):
            scope.total_score += final
            scope.score_reached_at = now
            scope.snippets_answered += 1
            scope.max_snippets_in_one_game = max(
                scope.max_snippets_in_one_game, game_snippet_count)
            scope.highest_game_score = max(scope.highest_game_score, game_score_after)
            scope.highest_word_score = max(scope.highest_word_score, final)
            if counted:
                if p >= 1:
                    scope.scoring_words += 1
                scope.unique_labels.add(label)

    def on_game_end(self, player: str, modality: Modality) -> None:
        stats = self.stats_for(player)
        stats.overall.games_played += 1
        stats.scope(modality).games_played += 1

    def award(self, player: str, badge: str, at: float) -> None:
        """Permanent and idempotent; first award timestamp wins."""
        self.stats_for(player).badges.setdefault(badge, at)

    # -- badges -------------------------------------------------------------

    def _metric_value(self, player: str, metric: Metric, held: set[str]) -> int:
        overall = self.stats_for(player).overall
        if metric is Metric.GAMES_PLAYED:
            return overall.games_played
        if metric is Metric.SNIPPETS_IN_ONE_GAME:
            return overall.max_snippets_in_one_game
        if metric is Metric.TOTAL_SNIPPETS:
            return overall.snippets_answered
        if metric is Metric.SCORING_WORDS:
            return overall.scoring_words
        if metric is Metric.UNIQUE_WORDS:
            return overall.unique_words
        if metric is Metric.LEADERBOARD_ENTRY:
            rank = self.compute_rank(player)
            return 1 if rank is not None and rank <= self.leaderboard_size else 0
        if metric is Metric.ALL_BADGES:
            return len(held - {WHOLE_ENCHILADA})
        raise ValueError(metric)

    def detect_badges(self, player: str) -> list[str]:
        """Unearned badges whose metric now meets its threshold (no award)."""
        account = self._accounts.get(player)
        if account is None or account.guest or player not in self._stats:
            return []
        fresh: list[str] = []
        while True:
            held = set(self._stats[player].badges) | set(fresh)
            new = [
                b.name for b in BADGES
                if b.name not in held
                and self._metric_value(player, b.metric, held) >= b.threshold
            ]
            if not new:
                return fresh
            fresh.extend(new)

    def badge_progress(self, player: str) -> list[BadgeProgress]:
        stats = self.stats_for(player)
        held = set(stats.badges)
        return [
            BadgeProgress(
                badge=b,
                current=min(self._metric_value(player, b.metric, held), b.threshold)
                if b.name not in stats.badges else b.threshold,
                earned=b.name in stats.badges,
                earned_at=stats.badges.get(b.name),
            )
            for b in BADGES
        ]

    # -- ranks and boards ----------------------------------------------------

    def _board_eligible(self, player: str, modality: Modality | None) -> bool:
        account = self._accounts.get(player)
        if account is None or account.guest or account.privacy:
            return False
        stats = self._stats.get(player)
        return stats is not None and stats.scope(modality).games_played >= 1

    def _ordering(self, modality: Modality | None,
                  include: set[str] = frozenset()) -> list[tuple[str, ScopeStats]]:
        rows = []
        for player, stats in self._stats.items():
            if not (self._board_eligible(player, modality) or player in include):
                continue
            scope = stats.scope(modality)
            if scope.games_played < 1:
                continue
            rows.append((player, scope))
        # Ties go to whoever reached the score first.
        rows.sort(key=lambda row: (-row[1].total_score, row[1].score_reached_at, row[0]))
        return rows

    def compute_rank(self, player: str, modality: Modality | None = None) -> int | None:
        """1-based rank over public players (plus the asker); None if unranked."""
        stats = self.stats_for(player)
        if stats.scope(modality).games_played < 1:
            return None
        account = self._accounts[player]
        if account.guest:
            return None
        for i, (candidate, _) in enumerate(self._ordering(modality, include={player})):
            if candidate == player:
                return i + 1
        return None

    def leaderboard(self, modality: Modality | None = None,
                    limit: int = 10) -> list[LeaderboardEntry]:
        entries = []
        for i, (player, scope) in enumerate(self._ordering(modality)[:limit]):
            account = self._accounts[player]
            entries.append(LeaderboardEntry(
                rank=i + 1,
                player=player,
                display_name=account.label_for_display,
                avatar=account.avatar,
                total_score=scope.total_score,
            ))
        return entries

    def neighbors(self, player: str, modality: Modality | None = None,
                  window: int = 2) -> list[LeaderboardEntry]:
        """Players ranked around the asker, asker included."""
        ordering = self._ordering(modality, include={player})
        idx = next((i for i, row in enumerate(ordering) if row[0] == player), None)
        if idx is None:
            return []
        lo = max(0, idx - window)
        out = []
        for i, (candidate, scope) in enumerate(ordering[lo:idx + window + 1], start=lo):
            account = self._accounts[candidate]
            out.append(LeaderboardEntry(
                rank=i + 1,
                player=candidate,
                display_name=account.label_for_display,
                avatar=account.avatar,
                total_score=scope.total_score,
            ))
        return out

    # -- snapshots -------------------------------------------------------------

    def stats_snapshot(self) -> dict:
        out: dict = {}
        for player in sorted(self._stats):
            stats = self._stats[player]
            out[player] = {
                "overall": stats.overall.as_dict(),
                "by_modality": {
                    m.value: s.as_dict() for m, s in sorted(stats.by_modality.items())
                },
                "badges": dict(sorted(stats.badges.items())),
            }
        return out
