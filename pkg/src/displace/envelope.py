"""Feasible cutoff intervals per level and the displacement maximizer.

Boost feasibility only gets harder as the cutoff rises, suppress
feasibility only easier, so each side's feasible cutoffs form a half line
and their overlap an integer interval.  Binary searches recover the
endpoints; an outer search over the level finds the largest level whose
interval is nonempty.
"""

from dataclasses import dataclass, field

import numpy as np

from .demand import compute_demand_vectors
from .election import BoundarySets, HonestScores, boundary_sets_fast
from .errors import EmptyBoundaryError, LevelOutOfRangeError
from .oracle import boost_feasible, suppress_feasible
from .scoring import PrefixCapacities, ScoringVector, segment_capacities


@dataclass(frozen=True)
class EnvelopeResult:
    """Feasibility of one displacement level.

    ``b_min``/``b_max`` bound the cutoffs where both sides are feasible
    (present only when the level is feasible).  ``boost_b_max`` and
    ``suppress_b_min`` are the per-side endpoints inside the search window,
    kept even when the sides fail to overlap; they are what envelope plots
    show.
    """

    feasible: bool
    level: int
    b_min: int | None = None
    b_max: int | None = None
    boost_b_max: int | None = None
    suppress_b_min: int | None = None


@dataclass(frozen=True)
class DisplacementResult:
    """Largest achievable level with its certified cutoff interval."""

    k_star: int
    b_min_star: int | None = None
    b_max_star: int | None = None
    per_level: dict = field(default_factory=dict)


def cutoff_bounds(scores: HonestScores, boundary: BoundarySets, ballots, p: ScoringVector):
    """Search window for cutoffs: no feasible cutoff exists outside it."""
    if boundary.level == 0:
        raise EmptyBoundaryError("cutoff bounds need a positive level")
    s = scores.scores
    low = min(int(s[t]) for t in boundary.weak_winners) + ballots * p.values[-1]
    high = max(int(s[o]) for o in boundary.outsiders_star) + ballots * p.values[0]
    return low, high


def level_capacities(p: ScoringVector, ballots, level):
    """Boost-pool and suppress-pool capacities for one level."""
    caps_high = segment_capacities(p, ballots, level, "top")
    caps_low = segment_capacities(p, ballots, level, "bottom")
    return caps_high, caps_low


def feasible_envelope_at_level(
    scores: HonestScores,
    boundary: BoundarySets,
    caps_high: PrefixCapacities,
    caps_low: PrefixCapacities,
    bounds,
) -> EnvelopeResult:
    """Find the feasible cutoff interval at one level by dual binary search."""
    level = boundary.level
    b_low, b_high = bounds

    def boost_ok(cutoff):
        return boost_feasible(compute_demand_vectors(scores, boundary, cutoff), caps_high)

    def suppress_ok(cutoff):
        return suppress_feasible(compute_demand_vectors(scores, boundary, cutoff), caps_low)

    if not boost_ok(b_low):
        return EnvelopeResult(feasible=False, level=level)
    lo, hi = b_low, b_high
    while lo < hi:  # invariant: boost_ok(lo); find the largest feasible cutoff
        mid = (lo + hi + 1) // 2
        if boost_ok(mid):
            lo = mid
        else:
            hi = mid - 1
    boost_max = lo

    if not suppress_ok(b_high):
        return EnvelopeResult(feasible=False, level=level, boost_b_max=boost_max)
    lo, hi = b_low, b_high
    while lo < hi:  # invariant: suppress_ok(hi); find the smallest feasible cutoff
        mid = (lo + hi) // 2
        if suppress_ok(mid):
            hi = mid
        else:
            lo = mid + 1
    suppress_min = lo

    if suppress_min > boost_max:
        return EnvelopeResult(
            feasible=False, level=level, boost_b_max=boost_max, suppress_b_min=suppress_min
        )
    return EnvelopeResult(
        feasible=True,
        level=level,
        b_min=suppress_min,
        b_max=boost_max,
        boost_b_max=boost_max,
        suppress_b_min=suppress_min,
    )


def _level_zero_result(scores: HonestScores, ballots, p: ScoringVector) -> EnvelopeResult:
    # no constraints at level 0; report the widest window as the interval
    s = scores.scores
    low = int(s.min()) + ballots * p.values[-1]
    high = int(s.max()) + ballots * p.values[0]
    return EnvelopeResult(
        feasible=True, level=0, b_min=low, b_max=high, boost_b_max=high, suppress_b_min=low
    )


def evaluate_level(scores: HonestScores, p: ScoringVector, committee, ballots, level) -> EnvelopeResult:
    """Boundary sets, capacities, window, and envelope for one level."""
    if level == 0:
        return _level_zero_result(scores, ballots, p)
    boundary = boundary_sets_fast(scores, committee, level)
    caps_high, caps_low = level_capacities(p, ballots, level)
    bounds = cutoff_bounds(scores, boundary, ballots, p)
    return feasible_envelope_at_level(scores, boundary, caps_high, caps_low, bounds)


def maximize_displacement(
    scores: HonestScores,
    p: ScoringVector,
    committee,
    ballots,
    strategy="binary",
    collect_levels=False,
) -> DisplacementResult:
    """Largest feasible displacement level for a coalition of ``ballots``.

    ``strategy="binary"`` assumes level feasibility is downward closed and
    probes O(log k) levels.  ``strategy="linear"`` scans every level from
    the top and needs no such assumption; it exists as a cross-check.
    """
    x = scores.num_candidates
    if p.num_positions != x:
        raise LevelOutOfRangeError(
            f"scoring vector length {p.num_positions} differs from candidate count {x}"
        )
    if not 1 <= committee <= x - 1:
        raise LevelOutOfRangeError(f"committee size {committee} must be in [1, {x - 1}]")
    p.check_budget(max(1, ballots))
    cap = min(committee, x - committee)
    per_level = {}

    if ballots == 0:
        # zero coalition mass cannot create the strict one-unit gap
        result = _level_zero_result(scores, 0, p)
        if collect_levels:
            per_level[0] = result
        return DisplacementResult(k_star=0, per_level=per_level)

    def probe(level):
        res = evaluate_level(scores, p, committee, ballots, level)
        per_level[level] = res
        return res

    if strategy == "linear":
        for level in range(cap, -1, -1):
            res = probe(level)
            if res.feasible:
                return _finish(level, res, per_level)
        raise AssertionError("level 0 is feasible by convention")
    if strategy != "binary":
        raise ValueError(f"unknown strategy {strategy!r}")

    lo, hi = 0, cap
    best = probe(0)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        res = probe(mid)
        if res.feasible:
            lo = mid
            best = res
        else:
            hi = mid - 1
    if collect_levels:
        for level in range(cap + 1):
            if level not in per_level:
                per_level[level] = evaluate_level(scores, p, committee, ballots, level)
    return _finish(lo, best, per_level)


def _finish(level, res: EnvelopeResult, per_level) -> DisplacementResult:
    if level == 0:
        return DisplacementResult(k_star=0, per_level=per_level)
    return DisplacementResult(
        k_star=level, b_min_star=res.b_min, b_max_star=res.b_max, per_level=per_level
    )


def envelope_sweep(scores: HonestScores, p: ScoringVector, committee, ballots):
    """EnvelopeResult for every level 0..min(k, x-k), in order."""
    cap = min(committee, scores.num_candidates - committee)
    if ballots == 0:
        return [_level_zero_result(scores, 0, p)] + [
            EnvelopeResult(feasible=False, level=lv) for lv in range(1, cap + 1)
        ]
    return [evaluate_level(scores, p, committee, ballots, lv) for lv in range(cap + 1)]
