"""Shared domain types, label normalization, and engine configuration.

Everything here is pure and stateless; the other modules build on these
types without adding behavior to them.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, fields
from enum import Enum

from .errors import (
    ConfigOutOfRangeError,
    EmptyLabelError,
    LabelTooLongError,
    WrongModalityPayloadError,
)


class Modality(str, Enum):
    """Media kind of a snippet and of a game mode; never mixed."""

    TEXT = "text"
    AUDIO = "audio"
    VIDEO = "video"

    @classmethod
    def parse(cls, value: "Modality | str") -> "Modality":
        if isinstance(value, Modality):
            return value
        try:
            return cls(str(value).strip().lower())
        except ValueError:
            raise WrongModalityPayloadError(f"unknown modality: {value!r}") from None


@dataclass
class Snippet:
    """One annotatable content unit: a text body or a media reference."""

    id: str
    modality: Modality
    payload: str
    title: str | None = None
    source: str | None = None
    active: bool = True

    def validate(self) -> "Snippet":
        if self.modality is Modality.TEXT:
            if not self.payload or not self.payload.strip():
                raise WrongModalityPayloadError(
                    f"snippet {self.id!r}: text payload is empty"
                )
        else:
            if not self.payload or not self.payload.strip():
                raise WrongModalityPayloadError(
                    f"snippet {self.id!r}: media reference is empty"
                )
        return self


@dataclass
class PlayerAccount:
    """A registered player or an anonymous guest.

    Guests carry no email and are never activated; registered accounts must
    activate before they can play.
    """

    id: str
    email: str | None = None
    activated: bool = False
    guest: bool = False
    age: int | None = None
    languages: list[str] = field(default_factory=list)
    privacy: bool = False
    avatar: str | None = None
    display_name: str | None = None
    info_sheet_acknowledged: bool = False
    password_hash: str | None = None
    created_at: float = 0.0

    @property
    def can_play(self) -> bool:
        return self.guest or self.activated

    @property
    def label_for_display(self) -> str:
        if self.display_name:
            return self.display_name
        if self.email:
            return self.email.split("@", 1)[0]
        return self.id


@dataclass(frozen=True)
class EngineConfig:
    """Tunable game parameters; see validate_config for the legal ranges."""

    base_points: int = 100
    per_match_bonus: int = 10
    multiplier_activation_count: int = 100
    multiplier_scale: int = 1000
    high_quality_share: float = 0.90
    high_quality_factor: float = 2.0
    consensus_threshold: float = 0.25
    min_responders_for_promotion: int = 5
    leaderboard_size: int = 10
    max_label_length: int = 64
    # Whether anonymous guest responses feed the popularity tallies.
    guests_count_in_tallies: bool = True

    @classmethod
    def from_dict(cls, overrides: dict) -> "EngineConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(overrides) - known
        if unknown:
            raise ConfigOutOfRangeError(sorted(unknown)[0], "unknown config field")
        return validate_config(cls(**overrides))


def validate_config(cfg: EngineConfig) -> EngineConfig:
    """Return cfg unchanged iff every invariant holds, else raise.

    Raises ConfigOutOfRangeError naming the first offending field.
    """
    checks = [
        ("base_points", cfg.base_points > 0),
        ("per_match_bonus", cfg.per_match_bonus >= 0),
        ("multiplier_activation_count", cfg.multiplier_activation_count >= 1),
        ("multiplier_scale", cfg.multiplier_scale > 0),
        ("high_quality_share", 0 < cfg.high_quality_share <= 1),
        ("high_quality_factor", cfg.high_quality_factor >= 1),
        ("consensus_threshold", 0 < cfg.consensus_threshold <= 1),
        ("consensus_threshold", cfg.consensus_threshold <= cfg.high_quality_share),
        ("min_responders_for_promotion", cfg.min_responders_for_promotion >= 1),
        ("leaderboard_size", cfg.leaderboard_size >= 1),
        ("max_label_length", cfg.max_label_length >= 1),
    ]
    for name, ok in checks:
        if not ok:
            raise ConfigOutOfRangeError(name)
    return cfg


_WS_RUN = re.compile(r"\s+")


def normalize_label(raw: str, max_length: int = 64) -> str:
    """Canonical form of a free-text label, used as the popularity match key.

    Case-folds, trims, and collapses internal whitespace runs to one space,
    so labels differing only in case or spacing tally together. Idempotent.
    """
    normalized = _WS_RUN.sub(" ", (raw or "").casefold()).strip()
    if not normalized:
        raise EmptyLabelError("label is empty after normalization")
    if len(normalized) > max_length:
        raise LabelTooLongError(
            f"label is {len(normalized)} chars, max is {max_length}"
        )
    return normalized
