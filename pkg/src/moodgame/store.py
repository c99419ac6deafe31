"""Durable engine state: an append-only journal plus replayable caches.

The journal is the source of truth. Each line is one transaction — a JSON
object carrying the events that commit together (a response plus the
promotions and badge awards it triggered, for example). Tallies, stats,
sessions, and promotions are in-memory caches rebuilt by replaying the
journal, so crash recovery is simply replay; a torn final line is discarded,
which makes every transaction all-or-nothing.

Writers are serialized behind one lock, which linearizes tallies per snippet
(and globally): the (p, a) a caller reads inside a transaction is exactly the
value at its commit position. Readers take the same lock briefly and only
ever see committed state.

Journal record kinds beyond gameplay (``account``, ``account_update``,
``snippet``, ``token``, ``token_used``) persist the registries; the six
gameplay kinds drive every derived counter.
"""

from __future__ import annotations

import json
import os
import re
import threading
import time
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Iterator

from .aggregator import Aggregator, ValidatedAnnotation
from .core import EngineConfig, Modality, PlayerAccount, Snippet, validate_config
from .errors import (
    DuplicateIdError,
    StorageFailureError,
    TokenInvalidError,
    UnknownPlayerError,
    UnknownSessionError,
    UnknownSnippetError,
)
from .progression import Progression
from .scoring import ScoreBreakdown
from .session import ENDED, GameSession, Response

GAMEPLAY_KINDS = ("response", "session_start", "session_end",
                  "badge_award", "promotion", "survey")
REGISTRY_KINDS = ("account", "account_update", "snippet", "token", "token_used")


class Clock:
    """Wall-clock time source; swap for LogicalClock in tests and simulations."""

    def now(self) -> float:
        return time.time()


class LogicalClock(Clock):
    """Deterministic clock: every call advances by a fixed step."""

    def __init__(self, start: float = 0.0, step: float = 1.0):
        self._next = start
        self._step = step

    def now(self) -> float:
        value = self._next
        self._next += self._step
        return value


@dataclass(frozen=True)
class EventRecord:
    """One committed event; event ids are strictly increasing."""

    event_id: int
    kind: str
    payload: dict
    at: float

    def as_dict(self) -> dict:
        return {"event_id": self.event_id, "kind": self.kind,
                "at": self.at, "payload": self.payload}


def _encode_txn(events: list[EventRecord]) -> str:
    return json.dumps({"txn": [e.as_dict() for e in events]},
                      sort_keys=True, separators=(",", ":")) + "\n"


class Journal:
    """Append-only transaction log; memory-backed when no path is given."""

    def __init__(self, path: str | None = None, fsync: bool = False):
        self.path = path
        self.fsync = fsync
        self._lines: list[str] = []
        self._fh = None
        if path:
            self._fh = open(path, "a", encoding="utf-8")

    def append(self, events: list[EventRecord]) -> None:
        line = _encode_txn(events)
        if self._fh is not None:
            try:
                self._fh.write(line)
                self._fh.flush()
                if self.fsync:
                    os.fsync(self._fh.fileno())
            except OSError as exc:
                raise StorageFailureError(f"journal append failed: {exc}") from exc
        else:
            self._lines.append(line)

    def raw_lines(self) -> list[str]:
        if self.path:
            if not os.path.exists(self.path):
                return []
            with open(self.path, "r", encoding="utf-8") as fh:
                return fh.readlines()
        return list(self._lines)

    def replay(self) -> Iterator[list[EventRecord]]:
        """Yield committed transactions; a torn final line is dropped."""
        lines = self.raw_lines()
        for index, line in enumerate(lines):
            try:
                doc = json.loads(line)
            except json.JSONDecodeError:
                if index == len(lines) - 1:
                    return  # torn tail from a crash mid-append
                raise StorageFailureError(
                    f"corrupt journal line {index + 1}") from None
            yield [
                EventRecord(e["event_id"], e["kind"], e["payload"], e["at"])
                for e in doc["txn"]
            ]

    def close(self) -> None:
        if self._fh is not None:
            self._fh.close()
            self._fh = None


_ACCOUNT_ID = re.compile(r"^u(\d+)$")
_SESSION_ID = re.compile(r"^s(\d+)$")
_AUTO_SNIPPET_ID = re.compile(r"^auto-(\d+)$")


class GameState:
    """Every derived cache; mutated exclusively through apply()."""

    def __init__(self, cfg: EngineConfig):
        self.cfg = cfg
        self.accounts: dict[str, PlayerAccount] = {}
        self.accounts_by_email: dict[str, str] = {}
        self.snippets: dict[str, Snippet] = {}
        self.modality_active: dict[Modality, list[str]] = {m: [] for m in Modality}
        self.sessions: dict[str, GameSession] = {}
        self.active_session: dict[tuple[str, str], str] = {}
        self.answered: dict[tuple[str, str], set[str]] = {}
        self.aggregator = Aggregator()
        self.progression = Progression(self.accounts, cfg.leaderboard_size)
        self.tokens: dict[str, dict] = {}
        self.surveys: list[dict] = []
        self.last_event_id = 0
        self.account_seq = 0
        self.session_seq = 0
        self.snippet_seq = 0

    # -- appliers ---------------------------------------------------------

    def apply(self, event: EventRecord) -> None:
        if event.event_id <= self.last_event_id:
            return  # duplicate replay is a no-op
        handler = getattr(self, f"_apply_{event.kind}", None)
        if handler is None:
            raise StorageFailureError(f"unknown event kind: {event.kind}")
        handler(event.payload, event.at)
        self.last_event_id = event.event_id

    def _apply_account(self, payload: dict, at: float) -> None:
        account = PlayerAccount(
            id=payload["id"],
            email=payload.get("email"),
            activated=payload.get("activated", False),
            guest=payload.get("guest", False),
            age=payload.get("age"),
            languages=list(payload.get("languages", [])),
            privacy=payload.get("privacy", False),
            avatar=payload.get("avatar"),
            display_name=payload.get("display_name"),
            info_sheet_acknowledged=payload.get("info_sheet_acknowledged", False),
            password_hash=payload.get("password_hash"),
            created_at=at,
        )
        self.accounts[account.id] = account
        if account.email:
            self.accounts_by_email[account.email] = account.id
        match = _ACCOUNT_ID.match(account.id)
        if match:
            self.account_seq = max(self.account_seq, int(match.group(1)))

    def _apply_account_update(self, payload: dict, at: float) -> None:
        account = self.accounts[payload["id"]]
        for key, value in payload["changes"].items():
            setattr(account, key, value)

    def _apply_token(self, payload: dict, at: float) -> None:
        self.tokens[payload["token"]] = dict(payload)

    def _apply_token_used(self, payload: dict, at: float) -> None:
        self.tokens.pop(payload["token"], None)

    def _apply_snippet(self, payload: dict, at: float) -> None:
        snippet = Snippet(
            id=payload["id"],
            modality=Modality(payload["modality"]),
            payload=payload["payload"],
            title=payload.get("title"),
            source=payload.get("source"),
            active=payload.get("active", True),
        )
        self.snippets[snippet.id] = snippet
        if snippet.active:
            self.modality_active[snippet.modality].append(snippet.id)
        match = _AUTO_SNIPPET_ID.match(snippet.id)
        if match:
            self.snippet_seq = max(self.snippet_seq, int(match.group(1)))

    def _apply_session_start(self, payload: dict, at: float) -> None:
        session = GameSession(
            id=payload["session"],
            player=payload["player"],
            modality=Modality(payload["modality"]),
            mood_rating=payload["mood_rating"],
            started_at=at,
        )
        self.sessions[session.id] = session
        self.active_session[(session.player, session.modality.value)] = session.id
        match = _SESSION_ID.match(session.id)
        if match:
            self.session_seq = max(self.session_seq, int(match.group(1)))

    def _apply_survey(self, payload: dict, at: float) -> None:
        self.surveys.append(dict(payload))

    def _apply_response(self, payload: dict, at: float) -> None:
        session = self.sessions[payload["session"]]
        breakdown = ScoreBreakdown(**payload["breakdown"])
        response = Response(
            session=session.id, snippet=payload["snippet"],
            raw_label=payload["raw_label"], label=payload["label"],
            breakdown=breakdown, counted=payload["counted"], at=at,
        )
        self.aggregator.record_response(
            payload["player"], payload["snippet"], payload["label"],
            payload["counted"], raw_label=payload["raw_label"],
        )
        if not session.served or session.served[-1] != response.snippet:
            session.served.append(response.snippet)
        session.responses.append(response)
        session.game_score += breakdown.final
        session.pending = None
        key = (payload["player"], payload["modality"])
        self.answered.setdefault(key, set()).add(payload["snippet"])
        self.progression.on_response(
            player=payload["player"], modality=session.modality,
            label=payload["label"], final=breakdown.final, p=breakdown.p,
            counted=payload["counted"], game_snippet_count=len(session.responses),
            game_score_after=session.game_score, now=at,
        )

    def _apply_promotion(self, payload: dict, at: float) -> None:
        self.aggregator.promote(ValidatedAnnotation(
            snippet_id=payload["snippet_id"], label=payload["label"],
            share=payload["share"], responders=payload["responders"],
            promoted_at=payload["promoted_at"],
        ))

    def _apply_badge_award(self, payload: dict, at: float) -> None:
        self.progression.award(payload["player"], payload["badge"], at)
        session_id = payload.get("session")
        if session_id and session_id in self.sessions:
            self.sessions[session_id].badges_earned.append(payload["badge"])

    def _apply_session_end(self, payload: dict, at: float) -> None:
        session = self.sessions[payload["session"]]
        session.state = ENDED
        session.ended_at = at
        session.pending = None
        session.summary = payload.get("summary")
        self.active_session.pop((session.player, session.modality.value), None)
        self.progression.on_game_end(session.player, session.modality)


class _Transaction:
    def __init__(self, store: "Store"):
        self._store = store
        self.events: list[EventRecord] = []

    def stage(self, kind: str, payload: dict) -> EventRecord:
        """Apply an event to the caches now; it is journaled at commit."""
        event = EventRecord(
            event_id=self._store.state.last_event_id + 1,
            kind=kind, payload=payload, at=self._store.clock.now(),
        )
        self._store.state.apply(event)
        self.events.append(event)
        return event


class Store:
    """Single-node durable store; all public methods are thread-safe."""

    def __init__(self, path: str | None = None, cfg: EngineConfig | None = None,
                 clock: Clock | None = None, fsync: bool = False):
        self.cfg = validate_config(cfg or EngineConfig())
        self.clock = clock or Clock()
        self._lock = threading.RLock()
        self._journal = Journal(path, fsync=fsync)
        self._broken = False
        self.state = GameState(self.cfg)
        for txn in self._journal.replay():
            for event in txn:
                self.state.apply(event)

    # -- transactions --------------------------------------------------------

    @contextmanager
    def transaction(self):
        """Serialize a read-compute-commit block; events stage atomically.

        The journal line is written after the block completes, so a crash
        loses the whole transaction and never exposes partial state on
        recovery. An exception after staging poisons the store (memory and
        journal could disagree); reopening replays the journal and heals it.
        """
        with self._lock:
            if self._broken:
                raise StorageFailureError("store is poisoned; reopen to recover")
            txn = _Transaction(self)
            try:
                yield txn
            except BaseException:
                if txn.events:
                    self._broken = True
                raise
            if txn.events:
                try:
                    self._journal.append(txn.events)
                except StorageFailureError:
                    self._broken = True
                    raise

    def commit(self, staged: list[tuple[str, dict]]) -> list[EventRecord]:
        with self.transaction() as txn:
            return [txn.stage(kind, payload) for kind, payload in staged]

    # -- id generation (reads are replay-consistent via the appliers) --------

    def next_account_id(self) -> str:
        return f"u{self.state.account_seq + 1}"

    def next_session_id(self) -> str:
        return f"s{self.state.session_seq + 1}"

    def next_snippet_id(self) -> str:
        return f"auto-{self.state.snippet_seq + 1:06d}"

    # -- registries ------------------------------------------------------------

    def get_account(self, player: str) -> PlayerAccount:
        with self._lock:
            account = self.state.accounts.get(player)
            if account is None:
                raise UnknownPlayerError(f"no such player: {player}")
            return account

    def account_by_email(self, email: str) -> PlayerAccount | None:
        with self._lock:
            player = self.state.accounts_by_email.get(email)
            return self.state.accounts.get(player) if player else None

    def get_snippet(self, snippet_id: str) -> Snippet:
        with self._lock:
            snippet = self.state.snippets.get(snippet_id)
            if snippet is None:
                raise UnknownSnippetError(f"no such snippet: {snippet_id}")
            return snippet

    def get_session(self, session_id: str) -> GameSession:
        with self._lock:
            session = self.state.sessions.get(session_id)
            if session is None:
                raise UnknownSessionError(f"no such session: {session_id}")
            return session

    def active_snippet_ids(self, modality: Modality) -> list[str]:
        with self._lock:
            return self.state.modality_active[Modality.parse(modality)]

    def answered_set(self, player: str, modality: Modality) -> set[str]:
        with self._lock:
            return self.state.answered.get(
                (player, Modality.parse(modality).value), set())

    def add_snippets(self, snippets: list[Snippet]) -> int:
        """Store validated snippets; identical re-adds are skipped.

        A conflicting record under an existing id raises DuplicateIdError.
        """
        with self.transaction() as txn:
            seen: set[str] = set()
            added = 0
            for snippet in snippets:
                snippet.validate()
                if snippet.id in seen:
                    raise DuplicateIdError(f"duplicate snippet id in batch: {snippet.id}")
                seen.add(snippet.id)
                existing = self.state.snippets.get(snippet.id)
                if existing is not None:
                    if existing == snippet:
                        continue
                    raise DuplicateIdError(
                        f"snippet id already stored with different content: {snippet.id}")
                txn.stage("snippet", {
                    "id": snippet.id, "modality": snippet.modality.value,
                    "payload": snippet.payload, "title": snippet.title,
                    "source": snippet.source, "active": snippet.active,
                })
                added += 1
            return added

    # -- tokens -----------------------------------------------------------------

    def put_token(self, token: str, purpose: str, player: str,
                  ttl_seconds: float, guest: bool = False) -> dict:
        with self.transaction() as txn:
            record = {
                "token": token, "purpose": purpose, "player": player,
                "expires_at": self.clock.now() + ttl_seconds, "guest": guest,
            }
            txn.stage("token", record)
            return record

    def resolve_token(self, token: str, purpose: str) -> dict:
        with self._lock:
            record = self.state.tokens.get(token)
            if record is None or record["purpose"] != purpose:
                raise TokenInvalidError("unknown or wrong-purpose token")
            if record["expires_at"] < self.clock.now():
                raise TokenInvalidError("token expired")
            return record

    def consume_token(self, token: str) -> None:
        with self.transaction() as txn:
            txn.stage("token_used", {"token": token})

    # -- event access --------------------------------------------------------------

    def events(self) -> list[EventRecord]:
        with self._lock:
            out: list[EventRecord] = []
            for txn in self._journal.replay():
                out.extend(txn)
            return out

    def close(self) -> None:
        self._journal.close()

    # -- snapshots -------------------------------------------------------------------

    def dump(self) -> dict:
        """Deterministic JSON-able snapshot of all replay-derived state."""
        with self._lock:
            sessions = {}
            for session_id in sorted(self.state.sessions):
                s = self.state.sessions[session_id]
                sessions[session_id] = {
                    "player": s.player, "modality": s.modality.value,
                    "mood_rating": s.mood_rating, "state": s.state,
                    "game_score": s.game_score,
                    "started_at": s.started_at, "ended_at": s.ended_at,
                    "responses": [
                        {"snippet": r.snippet, "raw_label": r.raw_label,
                         "label": r.label, "counted": r.counted, "at": r.at,
                         "breakdown": r.breakdown.as_dict()}
                        for r in s.responses
                    ],
                    "badges_earned": list(s.badges_earned),
                    "summary": s.summary,
                }
            return {
                "accounts": {
                    player: {
                        "email": a.email, "activated": a.activated, "guest": a.guest,
                        "age": a.age, "languages": list(a.languages),
                        "privacy": a.privacy, "avatar": a.avatar,
                        "display_name": a.display_name,
                        "info_sheet_acknowledged": a.info_sheet_acknowledged,
                    }
                    for player, a in sorted(self.state.accounts.items())
                },
                "snippets": {
                    snippet_id: {
                        "modality": s.modality.value, "payload": s.payload,
                        "title": s.title, "source": s.source, "active": s.active,
                    }
                    for snippet_id, s in sorted(self.state.snippets.items())
                },
                "tallies": self.state.aggregator.tally_snapshot(),
                "promotions": self.state.aggregator.promotion_snapshot(),
                "stats": self.state.progression.stats_snapshot(),
                "sessions": sessions,
                "answered": {
                    f"{player}:{modality}": sorted(ids)
                    for (player, modality), ids in sorted(self.state.answered.items())
                },
                "surveys": self.state.surveys,
            }

    # -- reconciliation -----------------------------------------------------------------

    def reconcile(self) -> list[str]:
        """Brute-force recount of the journal versus the live caches.

        Recomputes tallies, promotions, per-player stats, and badge sets with
        logic independent of the incremental appliers, and reports every
        divergence. A healthy store reports none.
        """
        with self._lock:
            return _recount_divergences(self)


def _recount_divergences(store: Store) -> list[str]:
    cfg = store.cfg
    responders: dict[str, set[str]] = {}
    label_players: dict[str, dict[str, set[str]]] = {}
    promotions: dict[tuple[str, str], dict] = {}
    stats: dict[str, dict] = {}
    session_acc: dict[str, dict] = {}
    badge_log: dict[str, dict[str, float]] = {}

    def scope_row() -> dict:
        return {"total_score": 0, "highest_game_score": 0, "highest_word_score": 0,
                "games_played": 0, "snippets_answered": 0, "scoring_words": 0,
                "max_snippets_in_one_game": 0, "unique_labels": set(),
                "score_reached_at": 0.0}

    def stat_scopes(player: str, modality: str) -> list[dict]:
        row = stats.setdefault(player, {"overall": scope_row(), "by_modality": {}})
        return [row["overall"], row["by_modality"].setdefault(modality, scope_row())]

    for event in store.events():
        if event.kind == "response":
            p = event.payload
            bd = p["breakdown"]
            if p["counted"]:
                responders.setdefault(p["snippet"], set()).add(p["player"])
                label_players.setdefault(p["snippet"], {}).setdefault(
                    p["label"], set()).add(p["player"])
                a = len(responders[p["snippet"]])
                if a >= cfg.min_responders_for_promotion:
                    for label, players in label_players[p["snippet"]].items():
                        share = len(players) / a
                        key = (p["snippet"], label)
                        if share >= cfg.consensus_threshold and key not in promotions:
                            promotions[key] = {"share": share, "responders": a}
            acc = session_acc.setdefault(p["session"], {"count": 0, "score": 0})
            acc["count"] += 1
            acc["score"] += bd["final"]
            for scope in stat_scopes(p["player"], p["modality"]):
                scope["total_score"] += bd["final"]
                scope["score_reached_at"] = event.at
                scope["snippets_answered"] += 1
                scope["max_snippets_in_one_game"] = max(
                    scope["max_snippets_in_one_game"], acc["count"])
                scope["highest_game_score"] = max(scope["highest_game_score"], acc["score"])
                scope["highest_word_score"] = max(scope["highest_word_score"], bd["final"])
                if p["counted"]:
                    if bd["p"] >= 1:
                        scope["scoring_words"] += 1
                    scope["unique_labels"].add(p["label"])
        elif event.kind == "session_end":
            p = event.payload
            for scope in stat_scopes(p["player"], p["modality"]):
                scope["games_played"] += 1
        elif event.kind == "badge_award":
            p = event.payload
            badge_log.setdefault(p["player"], {}).setdefault(p["badge"], event.at)

    issues: list[str] = []

    live_tallies = store.state.aggregator.tally_snapshot()
    expected_tallies = {
        snippet_id: {
            "a": len(players),
            "labels": {label: sorted(members)
                       for label, members in sorted(label_players.get(snippet_id, {}).items())},
        }
        for snippet_id, players in sorted(responders.items())
    }
    if expected_tallies != live_tallies:
        for snippet_id in sorted(set(expected_tallies) | set(live_tallies)):
            if expected_tallies.get(snippet_id) != live_tallies.get(snippet_id):
                issues.append(f"tally divergence on snippet {snippet_id}")

    live_promotions = {
        (snippet_id, label): {"share": ann["share"], "responders": ann["responders"]}
        for snippet_id, labels in store.state.aggregator.promotion_snapshot().items()
        for label, ann in labels.items()
    }
    for key in sorted(set(promotions) | set(live_promotions)):
        if promotions.get(key) != live_promotions.get(key):
            issues.append(f"promotion divergence on {key[0]}/{key[1]}")

    live_stats = store.state.progression.stats_snapshot()
    expected_stats = {
        player: {
            "overall": {**row["overall"],
                        "unique_labels": sorted(row["overall"]["unique_labels"])},
            "by_modality": {
                modality: {**scope, "unique_labels": sorted(scope["unique_labels"])}
                for modality, scope in sorted(row["by_modality"].items())
            },
            "badges": dict(sorted(badge_log.get(player, {}).items())),
        }
        for player, row in sorted(stats.items())
    }
    for player in sorted(set(expected_stats) | set(live_stats)):
        expected = expected_stats.get(player)
        live = live_stats.get(player)
        if live is not None and expected is None and not any(
                live["overall"][k] for k in ("total_score", "snippets_answered",
                                             "games_played")) and not live["badges"]:
            continue  # stats row created lazily but never written to
        if expected != live:
            issues.append(f"stats divergence for player {player}")
    return issues
