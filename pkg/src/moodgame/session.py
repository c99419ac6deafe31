"""One play-through of the labeling game.

A session starts with a 1-to-5 mood self-assessment, then loops: serve a
random snippet the player has never answered (across all their sessions),
accept a free-text label, score it against the pre-response tallies, and
hand back motivator messages plus any badges earned. Once a player has
answered every active snippet of the modality, further serves repeat
snippets, score flat points, and freeze the popularity tallies.

The engine serializes all mutation through the store's transaction lock, so
one session is single-writer and cross-snippet tallies are linearized.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from typing import TYPE_CHECKING

from .core import Modality, Snippet, normalize_label
from .errors import (
    EmptyCorpusError,
    InactiveSnippetError,
    InvalidMoodRatingError,
    SessionAlreadyActiveError,
    SessionEndedError,
    SnippetNotServedError,
    AccountNotActivatedError,
)
from .scoring import ScoreBreakdown, score_response

if TYPE_CHECKING:  # pragma: no cover
    from .store import Store

ACTIVE = "active"
ENDED = "ended"


class MotivatorKind(str, Enum):
    CHEER = "cheer"
    SCORE_EXPLAINER = "score_explainer"
    NEW_LABEL_EDUCATION = "new_label_education"
    END_OF_GAME_ENCOURAGEMENT = "end_of_game_encouragement"
    BADGE_PROGRESS = "badge_progress"
    HIGH_QUALITY_PRAISE = "high_quality_praise"


@dataclass(frozen=True)
class MotivatorMessage:
    kind: MotivatorKind
    text: str
    data: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"kind": self.kind.value, "text": self.text, "data": self.data}

    @classmethod
    def from_dict(cls, raw: dict) -> "MotivatorMessage":
        return cls(MotivatorKind(raw["kind"]), raw["text"], raw.get("data", {}))


@dataclass(frozen=True)
class Response:
    session: str
    snippet: str
    raw_label: str
    label: str
    breakdown: ScoreBreakdown
    counted: bool
    at: float


@dataclass
class GameSession:
    id: str
    player: str
    modality: Modality
    mood_rating: int
    started_at: float
    served: list[str] = field(default_factory=list)
    responses: list[Response] = field(default_factory=list)
    game_score: int = 0
    state: str = ACTIVE
    ended_at: float | None = None
    # (snippet_id, counted) of the one served-but-unanswered snippet.
    pending: tuple[str, bool] | None = None
    badges_earned: list[str] = field(default_factory=list)
    summary: dict | None = None


@dataclass(frozen=True)
class GameSummary:
    session: str
    game_score: int
    total_score: int
    rank: int | None
    modality_rank: int | None
    nearby: list[dict]
    badges_earned: list[str]
    badge_progress: list[dict]
    message: MotivatorMessage

    def as_dict(self) -> dict:
        return {
            "session": self.session,
            "game_score": self.game_score,
            "total_score": self.total_score,
            "rank": self.rank,
            "modality_rank": self.modality_rank,
            "nearby": self.nearby,
            "badges_earned": self.badges_earned,
            "badge_progress": self.badge_progress,
            "message": self.message.as_dict(),
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "GameSummary":
        return cls(
            session=raw["session"],
            game_score=raw["game_score"],
            total_score=raw["total_score"],
            rank=raw["rank"],
            modality_rank=raw["modality_rank"],
            nearby=raw["nearby"],
            badges_earned=raw["badges_earned"],
            badge_progress=raw["badge_progress"],
            message=MotivatorMessage.from_dict(raw["message"]),
        )


class SessionEngine:
    """Orchestrates games against a store; one instance per process."""

    def __init__(self, store: "Store", rng: random.Random | None = None):
        self.store = store
        self.rng = rng or random.Random()

    @property
    def cfg(self):
        return self.store.cfg

    def _session(self, session: "GameSession | str") -> GameSession:
        session_id = session.id if isinstance(session, GameSession) else session
        return self.store.get_session(session_id)

    # -- game lifecycle ----------------------------------------------------

    def start_game(self, player: str, modality: Modality | str,
                   mood_rating: int) -> GameSession:
        modality = Modality.parse(modality)
        if not isinstance(mood_rating, int) or isinstance(mood_rating, bool) \
                or not 1 <= mood_rating <= 5:
            raise InvalidMoodRatingError(f"mood rating must be 1..5, got {mood_rating!r}")
        with self.store.transaction() as txn:
            account = self.store.get_account(player)
            if not account.can_play:
                raise AccountNotActivatedError(f"account {player} cannot start games")
            if self.store.state.active_session.get((player, modality.value)):
                raise SessionAlreadyActiveError(
                    f"player {player} already has an active {modality.value} game")
            session_id = self.store.next_session_id()
            txn.stage("session_start", {
                "session": session_id, "player": player,
                "modality": modality.value, "mood_rating": mood_rating,
            })
            txn.stage("survey", {
                "session": session_id, "player": player,
                "modality": modality.value, "mood_rating": mood_rating,
            })
        return self.store.get_session(session_id)

    def next_snippet(self, session: "GameSession | str") -> tuple[Snippet, bool]:
        """Serve a random unanswered snippet; repeats only after exhaustion.

        Requesting a new snippet abandons a pending unanswered one without
        penalty. The serve itself is ephemeral: nothing is journaled until
        the player responds.
        """
        with self.store.transaction():
            live = self._session(session)
            if live.state == ENDED:
                raise SessionEndedError(f"session {live.id} already ended")
            active = self.store.active_snippet_ids(live.modality)
            if not active:
                raise EmptyCorpusError(f"no active {live.modality.value} snippets")
            answered = self.store.answered_set(live.player, live.modality)
            unanswered = len(active) - len(answered)
            if unanswered > 0:
                snippet_id = self._sample_unanswered(active, answered, unanswered)
                counted = True
            else:
                snippet_id = self.rng.choice(active)
                counted = False
            account = self.store.get_account(live.player)
            if account.guest and not self.cfg.guests_count_in_tallies:
                counted = False
            live.served.append(snippet_id)
            live.pending = (snippet_id, counted)
            return self.store.get_snippet(snippet_id), counted

    def _sample_unanswered(self, active: list[str], answered: set[str],
                           unanswered: int) -> str:
        # Uniform over the unanswered set; rejection sampling keeps the
        # common case O(1) and we only materialize the set when it is small.
        if unanswered <= 8:
            pool = [s for s in active if s not in answered]
            return self.rng.choice(pool)
        while True:
            snippet_id = self.rng.choice(active)
            if snippet_id not in answered:
                return snippet_id

    def submit_response(
        self, session: "GameSession | str", snippet_id: str, raw_label: str,
    ) -> tuple[ScoreBreakdown, list[MotivatorMessage], list[str]]:
        """Record and score one label; returns (breakdown, motivators, new badges)."""
        with self.store.transaction() as txn:
            live = self._session(session)
            if live.state == ENDED:
                raise SessionEndedError(f"session {live.id} already ended")
            if live.pending is None or live.pending[0] != snippet_id:
                raise SnippetNotServedError(
                    f"snippet {snippet_id} is not the pending serve of session {live.id}")
            label = normalize_label(raw_label, self.cfg.max_label_length)
            snippet = self.store.get_snippet(snippet_id)
            if not snippet.active:
                raise InactiveSnippetError(f"snippet {snippet_id} is inactive")
            counted = live.pending[1]

            p_before, a_before = self.store.state.aggregator.peek(snippet_id, label)
            breakdown = score_response(p_before, a_before, counted, self.cfg)
            score_before = live.game_score

            txn.stage("response", {
                "session": live.id, "player": live.player,
                "modality": live.modality.value, "snippet": snippet_id,
                "raw_label": raw_label, "label": label, "counted": counted,
                "breakdown": breakdown.as_dict(),
            })
            promoted_at = self.store.clock.now()
            for annotation in self.store.state.aggregator.detect_promotions(
                    snippet_id, self.cfg, promoted_at):
                txn.stage("promotion", annotation.as_dict())
            new_badges = self.store.state.progression.detect_badges(live.player)
            for name in new_badges:
                txn.stage("badge_award", {
                    "player": live.player, "badge": name, "session": live.id,
                })
            messages = self._motivators(breakdown, new_badges, score_before,
                                        live.game_score, live.player)
        return breakdown, messages, new_badges

    def end_game(self, session: "GameSession | str") -> GameSummary:
        """End a session and summarize it; ending twice returns the same summary."""
        with self.store.transaction() as txn:
            live = self._session(session)
            if live.state == ENDED:
                return GameSummary.from_dict(live.summary)
            end_event = txn.stage("session_end", {
                "session": live.id, "player": live.player,
                "modality": live.modality.value, "summary": None,
            })
            for name in self.store.state.progression.detect_badges(live.player):
                txn.stage("badge_award", {
                    "player": live.player, "badge": name, "session": live.id,
                })
            summary = self._build_summary(live)
            # The summary travels inside the end event so that replayed
            # stores answer a repeated end_game identically.
            end_event.payload["summary"] = summary.as_dict()
            live.summary = summary.as_dict()
            return summary

    def _build_summary(self, live: GameSession) -> GameSummary:
        progression = self.store.state.progression
        account = self.store.get_account(live.player)
        stats = progression.stats_for(live.player)
        if account.guest:
            rank = modality_rank = None
            nearby: list[dict] = []
            progress: list[dict] = []
        else:
            rank = progression.compute_rank(live.player)
            modality_rank = progression.compute_rank(live.player, live.modality)
            nearby = [
                {"rank": e.rank, "player": e.player, "display_name": e.display_name,
                 "total_score": e.total_score}
                for e in progression.neighbors(live.player)
            ]
            progress = [
                {"badge": row.badge.name, "metric": row.badge.metric.value,
                 "threshold": row.badge.threshold, "current": row.current,
                 "earned": row.earned}
                for row in progression.badge_progress(live.player)
            ]
        message = MotivatorMessage(
            MotivatorKind.END_OF_GAME_ENCOURAGEMENT,
            "Thanks for playing! Play another round to climb the rankings.",
            {"game_score": live.game_score, "rank": rank},
        )
        return GameSummary(
            session=live.id,
            game_score=live.game_score,
            total_score=stats.overall.total_score,
            rank=rank,
            modality_rank=modality_rank,
            nearby=nearby,
            badges_earned=list(live.badges_earned),
            badge_progress=progress,
            message=message,
        )

    # -- motivators ----------------------------------------------------------

    def _motivators(self, breakdown: ScoreBreakdown, new_badges: list[str],
                    score_before: int, score_after: int,
                    player: str) -> list[MotivatorMessage]:
        messages = []
        if breakdown.p > 0:
            text = (f"You earned {breakdown.final} points — {breakdown.p} "
                    f"player{'s' if breakdown.p != 1 else ''} gave this label before you.")
        elif breakdown.counted:
            text = f"You earned {breakdown.final} points."
        else:
            text = (f"You earned {breakdown.final} points. You have answered every "
                    "snippet, so replays score flat points.")
        messages.append(MotivatorMessage(MotivatorKind.SCORE_EXPLAINER, text, {
            "final": breakdown.final, "p": breakdown.p, "a": breakdown.a,
            "base": breakdown.base, "m_percent": breakdown.m_percent,
            "hq_applied": breakdown.hq_applied, "counted": breakdown.counted,
        }))
        if breakdown.counted and breakdown.p == 0:
            messages.append(MotivatorMessage(
                MotivatorKind.NEW_LABEL_EDUCATION,
                f"You entered a new label for this snippet — {breakdown.base} base "
                "points. Match labels other players pick to earn bonus points.",
                {"base": breakdown.base},
            ))
        if breakdown.hq_applied:
            messages.append(MotivatorMessage(
                MotivatorKind.HIGH_QUALITY_PRAISE,
                "Nearly everyone agrees with you — high-quality bonus applied!",
                {"p": breakdown.p, "a": breakdown.a},
            ))
        if breakdown.final >= 2 * self.cfg.base_points or \
                score_after // 1000 > score_before // 1000:
            messages.append(MotivatorMessage(
                MotivatorKind.CHEER,
                "Great answer! Your score is climbing — keep going!",
                {"game_score": score_after},
            ))
        for name in new_badges:
            messages.append(MotivatorMessage(
                MotivatorKind.BADGE_PROGRESS,
                f"Badge earned: {name}!",
                {"badge": name},
            ))
        return messages
