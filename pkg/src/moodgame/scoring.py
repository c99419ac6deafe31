"""Pure points computation for a single response.

A counted response earns ``base_points`` plus ``per_match_bonus`` for every
distinct player who already gave the same label on the snippet (p). Once at
least ``multiplier_activation_count`` players share the label, a percentage
multiplier m = (p / a) * multiplier_scale kicks in, where a is the number of
distinct players who labeled the snippet at all; the base is then scaled by
max(1, m / 100) so the multiplier can never reduce a score. A response whose
post-response share of the snippet exceeds ``high_quality_share`` earns the
extra ``high_quality_factor``. Uncounted replays (a player who has exhausted
the corpus) score a flat base with no bonuses.

Arithmetic on the multiplier path runs on exact rationals and the final
score is rounded half-up to an integer, so scores are reproducible and
monotone in p.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .core import EngineConfig
from .errors import InvalidTallyError


@dataclass(frozen=True)
class ScoreBreakdown:
    """Staged computation of one response's points.

    p: distinct prior players with the same normalized label on the snippet.
    a: distinct players who labeled the snippet at all, before this response.
    """

    p: int
    a: int
    base: int
    m_percent: float
    multiplier_factor: float
    hq_applied: bool
    counted: bool
    final: int

    def as_dict(self) -> dict:
        return asdict(self)


def _round_half_up(value: Fraction) -> int:
    # floor(value + 1/2); Fraction // int yields an exact integer Fraction.
    return int((2 * value + 1) // 2)


def compute_base(p: int, cfg: EngineConfig) -> int:
    """Base points: flat award plus a bonus per prior matching player."""
    if p < 0:
        raise InvalidTallyError(f"negative match count p={p}")
    return cfg.base_points + cfg.per_match_bonus * p


def compute_multiplier(p: int, a: int, cfg: EngineConfig) -> float:
    """Multiplier percentage, 0 while below the activation player count."""
    if p < 0 or p > a:
        raise InvalidTallyError(f"invalid tally p={p}, a={a}")
    if a > 0 and p >= cfg.multiplier_activation_count:
        return p * cfg.multiplier_scale / a
    return 0.0


def score_response(p: int, a: int, counted: bool, cfg: EngineConfig) -> ScoreBreakdown:
    """Score one response from the pre-response tallies.

    The caller must capture (p, a) atomically with recording the response;
    this function itself is pure.
    """
    if p < 0 or p > a:
        raise InvalidTallyError(f"invalid tally p={p}, a={a}")
    if not counted:
        return ScoreBreakdown(
            p=p, a=a, base=cfg.base_points, m_percent=0.0, multiplier_factor=1.0,
            hq_applied=False, counted=False, final=cfg.base_points,
        )

    base = compute_base(p, cfg)
    m_percent = compute_multiplier(p, a, cfg)
    # The responder's own label participates in the share being rewarded.
    hq_applied = a > 0 and (p + 1) / (a + 1) > cfg.high_quality_share
    if m_percent == 0.0 and not hq_applied:
        return ScoreBreakdown(
            p=p, a=a, base=base, m_percent=0.0, multiplier_factor=1.0,
            hq_applied=False, counted=True, final=base,
        )

    factor = Fraction(1)
    if m_percent > 0.0:
        factor = max(Fraction(1), Fraction(p * cfg.multiplier_scale, a * 100))
    total = base * factor
    if hq_applied:
        total *= Fraction(cfg.high_quality_factor)
    return ScoreBreakdown(
        p=p, a=a, base=base, m_percent=m_percent, multiplier_factor=float(factor),
        hq_applied=hq_applied, counted=True, final=_round_half_up(total),
    )
