"""Per-snippet popularity tallies and threshold promotion of labels.

The aggregator tracks, for each snippet, which distinct players contributed
which normalized labels. A label whose share p/a reaches the consensus
threshold (with enough responders) is promoted to a validated annotation;
promotion is permanent even if later responses dilute the share.

This class is pure bookkeeping: existence/active checks and locking belong
to the store that owns it, and mutations happen only through
``record_response`` and ``promote`` so that journal replay reproduces the
exact same state.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .core import EngineConfig


@dataclass(frozen=True)
class LabelTally:
    snippet_id: str
    label: str
    p: int


@dataclass(frozen=True)
class SnippetTally:
    snippet_id: str
    a: int


@dataclass(frozen=True)
class ValidatedAnnotation:
    snippet_id: str
    label: str
    share: float
    responders: int
    promoted_at: float

    def as_dict(self) -> dict:
        return {
            "snippet_id": self.snippet_id,
            "label": self.label,
            "share": self.share,
            "responders": self.responders,
            "promoted_at": self.promoted_at,
        }


class Aggregator:
    def __init__(self) -> None:
        # snippet_id -> set of players with >= 1 counted response
        self._responders: dict[str, set[str]] = {}
        # snippet_id -> label -> set of players who contributed it
        self._label_players: dict[str, dict[str, set[str]]] = {}
        # snippet_id -> label -> Counter of raw label forms
        self._raw_forms: dict[str, dict[str, Counter]] = {}
        # snippet_id -> label -> ValidatedAnnotation
        self._promoted: dict[str, dict[str, ValidatedAnnotation]] = {}

    # -- reads ----------------------------------------------------------

    def peek(self, snippet_id: str, label: str) -> tuple[int, int]:
        """Current (p, a) for a label on a snippet."""
        players = self._label_players.get(snippet_id, {}).get(label, ())
        return len(players), len(self._responders.get(snippet_id, ()))

    def snippet_tally(self, snippet_id: str) -> SnippetTally:
        return SnippetTally(snippet_id, len(self._responders.get(snippet_id, ())))

    def label_tallies(self, snippet_id: str) -> list[LabelTally]:
        by_label = self._label_players.get(snippet_id, {})
        return [LabelTally(snippet_id, label, len(players))
                for label, players in sorted(by_label.items())]

    def popularity_share(self, snippet_id: str, label: str) -> float:
        p, a = self.peek(snippet_id, label)
        return p / a if a else 0.0

    # -- writes (store-serialized) ---------------------------------------

    def record_response(self, player: str, snippet_id: str, label: str,
                        counted: bool, raw_label: str | None = None) -> tuple[int, int]:
        """Apply one response; returns the (p, a) that stood before it.

        Uncounted responses leave every tally untouched. The read and the
        increment are one step; the owning store serializes callers.
        """
        p_before, a_before = self.peek(snippet_id, label)
        if not counted:
            return p_before, a_before
        self._responders.setdefault(snippet_id, set()).add(player)
        self._label_players.setdefault(snippet_id, {}).setdefault(label, set()).add(player)
        forms = self._raw_forms.setdefault(snippet_id, {}).setdefault(label, Counter())
        forms[raw_label if raw_label is not None else label] += 1
        return p_before, a_before

    def detect_promotions(self, snippet_id: str, cfg: EngineConfig,
                          now: float) -> list[ValidatedAnnotation]:
        """Labels that newly qualify for promotion, without promoting them."""
        a = len(self._responders.get(snippet_id, ()))
        if a < cfg.min_responders_for_promotion:
            return []
        already = self._promoted.get(snippet_id, {})
        fresh = []
        for label, players in sorted(self._label_players.get(snippet_id, {}).items()):
            if label in already:
                continue
            share = len(players) / a
            if share >= cfg.consensus_threshold:
                fresh.append(ValidatedAnnotation(snippet_id, label, share, a, now))
        return fresh

    def promote(self, annotation: ValidatedAnnotation) -> None:
        """Register a promotion; permanent and idempotent per (snippet, label)."""
        self._promoted.setdefault(annotation.snippet_id, {}).setdefault(
            annotation.label, annotation)

    # -- exports ----------------------------------------------------------

    def validated(self, snippet_ids: set[str] | None = None) -> list[ValidatedAnnotation]:
        """All promoted annotations, ordered by snippet then descending share."""
        records = []
        for snippet_id, labels in self._promoted.items():
            if snippet_ids is not None and snippet_id not in snippet_ids:
                continue
            records.extend(labels.values())
        records.sort(key=lambda r: (r.snippet_id, -r.share, r.label))
        return records

    def most_common_raw(self, snippet_id: str, label: str) -> str:
        """Most frequent raw spelling of a label; ties go lexicographically."""
        forms = self._raw_forms.get(snippet_id, {}).get(label)
        if not forms:
            return label
        return sorted(forms.items(), key=lambda kv: (-kv[1], kv[0]))[0][0]

    # -- snapshots (reconciliation / isolation checks) --------------------

    def tally_snapshot(self, snippet_ids: set[str] | None = None) -> dict:
        """JSON-able dump of all tallies, stable under key ordering."""
        out: dict = {}
        keys = self._responders.keys() if snippet_ids is None else snippet_ids
        for snippet_id in sorted(keys):
            if snippet_id not in self._responders:
                continue
            out[snippet_id] = {
                "a": len(self._responders[snippet_id]),
                "labels": {
                    label: sorted(players)
                    for label, players in sorted(
                        self._label_players.get(snippet_id, {}).items())
                },
            }
        return out

    def promotion_snapshot(self) -> dict:
        return {
            snippet_id: {label: ann.as_dict() for label, ann in sorted(labels.items())}
            for snippet_id, labels in sorted(self._promoted.items())
        }
