"""Corpus-wide annotation statistics and the expected-contribution metric."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .errors import NegativeInputError
from .store import Store


@dataclass(frozen=True)
class AnnotationStats:
    users: int
    guests: int
    snippets: int
    distinct_labels: int
    annotations: int
    label_user_associations: int
    avg_responses_per_label: float
    avg_users_per_label: float
    surveys: int
    badges_awarded: int
    badges_per_user: float

    def as_dict(self) -> dict:
        return asdict(self)


def stats_report(store: Store) -> AnnotationStats:
    """Compute every statistic by a full pass over the event log."""
    users = guests = snippets = annotations = surveys = badges = 0
    labels: set[str] = set()
    label_user_pairs: set[tuple[str, str]] = set()
    for event in store.events():
        if event.kind == "account":
            if event.payload.get("guest"):
                guests += 1
            else:
                users += 1
        elif event.kind == "snippet":
            snippets += 1
        elif event.kind == "survey":
            surveys += 1
        elif event.kind == "badge_award":
            badges += 1
        elif event.kind == "response" and event.payload["counted"]:
            annotations += 1
            labels.add(event.payload["label"])
            label_user_pairs.add((event.payload["label"], event.payload["player"]))
    distinct = len(labels)
    return AnnotationStats(
        users=users,
        guests=guests,
        snippets=snippets,
        distinct_labels=distinct,
        annotations=annotations,
        label_user_associations=len(label_user_pairs),
        avg_responses_per_label=annotations / distinct if distinct else 0.0,
        avg_users_per_label=len(label_user_pairs) / distinct if distinct else 0.0,
        surveys=surveys,
        badges_awarded=badges,
        badges_per_user=badges / users if users else 0.0,
    )


def expected_contribution(throughput: float, avg_play: float) -> float:
    """Snippets one player is expected to contribute over their lifetime.

    throughput: snippets labeled per player-hour.
    avg_play: hours a player spends on the game, lifetime.
    """
    if throughput < 0 or avg_play < 0:
        raise NegativeInputError(
            f"throughput and avg_play must be >= 0, got {throughput}, {avg_play}")
    return throughput * avg_play
