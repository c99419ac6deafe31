"""Crowdsourced mood-annotation game engine.

Players label text/audio/video snippets with free-text mood words; agreement
with other players earns points, multipliers, and badges, and labels that
cross a consensus threshold become validated annotations of the corpus.
"""

from .aggregator import Aggregator, LabelTally, SnippetTally, ValidatedAnnotation
from .core import (
    EngineConfig,
    Modality,
    PlayerAccount,
    Snippet,
    normalize_label,
    validate_config,
)
from .engine import GameEngine
from .errors import EngineError
from .progression import BADGES, BadgeDefinition, LeaderboardEntry, UserStats
from .scoring import ScoreBreakdown, compute_base, compute_multiplier, score_response
from .session import GameSession, GameSummary, MotivatorKind, MotivatorMessage, Response
from .stats import AnnotationStats, expected_contribution, stats_report
from .store import Clock, EventRecord, LogicalClock, Store

__version__ = "0.1.0"

__all__ = [
    "Aggregator",
    "AnnotationStats",
    "BADGES",
    "BadgeDefinition",
    "Clock",
    "EngineConfig",
    "EngineError",
    "EventRecord",
    "GameEngine",
    "GameSession",
    "GameSummary",
    "LabelTally",
    "LeaderboardEntry",
    "LogicalClock",
    "Modality",
    "MotivatorKind",
    "MotivatorMessage",
    "PlayerAccount",
    "Response",
    "ScoreBreakdown",
    "Snippet",
    "SnippetTally",
    "Store",
    "UserStats",
    "ValidatedAnnotation",
    "compute_base",
    "compute_multiplier",
    "expected_contribution",
    "normalize_label",
    "score_response",
    "stats_report",
    "validate_config",
]
