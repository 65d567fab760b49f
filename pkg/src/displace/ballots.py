"""Explicit manipulative ballots realizing a certified displacement.

The feasibility oracles only certify that suitable aggregates exist.  This
module produces them: a witness aggregate is extended to the coalition's
full score mass (water-filling in level space), decomposed into per-ballot
permutations of the segment ladder (nested layers, with an exact search as
fallback), and assembled into complete rankings with the targeted outsiders
on top, the targeted weak winners at the bottom, and everyone else in
honest order in between.  A recount verifier checks the one-unit gap that
makes the displacement robust to any tie-breaking.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from .demand import compute_demand_vectors
from .election import BoundarySets, HonestScores, honest_order
from .errors import (
    InfeasibleInputError,
    InternalRealizationFailure,
    LengthMismatchError,
    NotCertifiedError,
    NotRealizableError,
)
from .oracle import (
    ap_demand_feasible,
    ap_tolerance_feasible,
    lattice_adjust_down,
    lattice_adjust_up,
    realizable,
)
from .scoring import (
    PrefixCapacities,
    ScoringVector,
    aggregate_capacities,
    extract_ap_ladder,
)

_FALLBACK_MAX_LENGTH = 9
_FALLBACK_NODE_CAP = 500_000


@dataclass(frozen=True)
class Realization:
    """Per-ballot score assignments whose coordinatewise sum is the aggregate."""

    assignments: tuple  # m tuples of k' scores, indexed by target position

    def aggregate(self):
        return tuple(sum(col) for col in zip(*self.assignments))


@dataclass(frozen=True)
class BallotSet:
    """Complete rankings for each coalition ballot."""

    rankings: tuple


@dataclass(frozen=True)
class VerificationReport:
    """Recount of a manipulation attempt.

    ``separated`` certifies the strict one-unit gap.  ``displaced_count``
    and ``outsiders_in_top_k`` are evaluated under adversarial tie-breaking
    (ties resolved in favor of honest winners).
    """

    separated: bool
    min_outsider_final: int
    max_weak_winner_final: int
    outsiders_in_top_k: int
    displaced_count: int


def _prefix_ok(levels_desc, fcaps):
    run = 0
    for t, v in enumerate(levels_desc):
        run += v
        if run > fcaps[t]:
            return False
    return True


def _extend_levels(start, fcaps):
    """Raise minima of ``start`` until the total hits ``fcaps[-1]``.

    ``fcaps`` must be concave cumulative capacities with the start vector
    prefix-feasible; the returned vector dominates the start coordinatewise
    and is a base (total mass exact, prefixes respected).
    """
    k = len(start)
    w = list(start)
    target = fcaps[-1]
    total = sum(w)
    if total > target or not _prefix_ok(sorted(w, reverse=True), fcaps):
        raise InfeasibleInputError("start vector is not prefix-feasible")
    while total < target:
        mn = min(w)
        group = [i for i in range(k) if w[i] == mn]
        above = sorted((v for v in w if v > mn), reverse=True)
        room = target - total
        # largest uniform raise that keeps every prefix constraint
        delta = room // len(group) if room >= len(group) else 0
        if above:
            delta = min(delta, above[-1] - mn)
        s_above = sum(above)
        for j in range(1, len(group) + 1):
            t = len(above) + j
            bound = (fcaps[t - 1] - s_above - j * mn) // j
            if bound < delta:
                delta = bound
        if delta >= 1:
            for i in group:
                w[i] += delta
            total += delta * len(group)
            continue
        # final sub-group step: raise `room` members of the group by one
        if room >= len(group):
            raise InternalRealizationFailure("water-filling stalled below the target mass")
        for i in group[:room]:
            w[i] += 1
        total += room
    if not _prefix_ok(sorted(w, reverse=True), fcaps):
        raise InternalRealizationFailure("water-filling left the capacity region")
    return w


def _level_caps(caps: PrefixCapacities):
    base = caps.baseline_total
    g = caps.step
    return [(int(f) - (t + 1) * base) // g for t, f in enumerate(caps.prefix)]


def extend_to_base(demand, caps: PrefixCapacities):
    """Dominating aggregate of full mass: ``y >= demand`` with total ``caps.total``.

    The demand must already sit in the reachable residue class and be
    prefix-feasible.  A single ballot has exactly one base worth returning,
    its own score vector, so that case is answered directly.
    """
    q = np.asarray(demand, dtype=np.int64)
    if len(q) != caps.length:
        raise LengthMismatchError(f"demand length {len(q)} != {caps.length}")
    if np.any((q - caps.residue) % caps.step != 0):
        raise InfeasibleInputError("demand is not in the reachable residue class")
    if caps.ballot_count == 1:
        supply = caps.rank_supply()
        if np.any(np.sort(q)[::-1] > supply):
            raise InfeasibleInputError("demand exceeds the single ballot's scores")
        if not np.all(supply >= q):
            # rank-by-rank dominance needs the demand sorted the same way
            raise InfeasibleInputError("single-ballot demand must be nonincreasing")
        return supply.copy()
    g = caps.step
    base = caps.baseline_total
    levels = [(int(v) - base) // g for v in q]
    fcaps = _level_caps(caps)
    filled = _extend_levels(levels, fcaps)
    return np.asarray([base + g * v for v in filled], dtype=np.int64)


def dominated_base(tolerance, caps: PrefixCapacities):
    """Realization-ready aggregate with ``y <= tolerance`` coordinatewise.

    Mirror of :func:`extend_to_base` through the reflection
    ``level -> max_level - level``, which swaps domination direction while
    staying inside the same capacity geometry.
    """
    u = np.asarray(tolerance, dtype=np.int64)
    if len(u) != caps.length:
        raise LengthMismatchError(f"tolerance length {len(u)} != {caps.length}")
    if np.any((u - caps.residue) % caps.step != 0):
        raise InfeasibleInputError("tolerance is not in the reachable residue class")
    if caps.ballot_count == 1:
        asc = caps.rank_supply()[::-1]
        if not np.all(asc <= u):
            raise InfeasibleInputError("single-ballot tolerance must dominate the ascending scores")
        return asc.copy()
    g = caps.step
    base = caps.baseline_total
    k = caps.length
    fcaps = _level_caps(caps)
    ceil_levels = [(int(v) - base) // g for v in u]
    top = fcaps[0]
    reflected = [top - c for c in ceil_levels]
    ref_caps = [ (t + 1) * top - (fcaps[-1] - (fcaps[k - t - 2] if k - t - 2 >= 0 else 0)) for t in range(k)]
    filled = _extend_levels(reflected, ref_caps)
    return np.asarray([base + g * (top - v) for v in filled], dtype=np.int64)


def _multiset_assignment(ladder_scores, aggregate):
    order = np.argsort(-np.asarray(aggregate))
    supply = sorted(ladder_scores, reverse=True)
    out = [0] * len(aggregate)
    for rank, pos in enumerate(order):
        out[pos] = supply[rank]
    return tuple(out)


def _greedy_layers(ladders, aggregate):
    k = len(aggregate)
    g = ladders[0].step
    base = sum(lad.baseline for lad in ladders)
    if any((v - base) % g for v in aggregate):
        return None
    remaining = [(v - base) // g for v in aggregate]
    if any(v < 0 for v in remaining):
        return None
    height = max(max(lad.levels) for lad in ladders)
    counts = [
        [sum(1 for lv in lad.levels if lv >= h) for h in range(1, height + 1)]
        for lad in ladders
    ]
    eligible = [list(range(k)) for _ in ladders]
    heights = [[0] * k for _ in ladders]
    for h in range(1, height + 1):
        for v in range(len(ladders)):
            need = counts[v][h - 1]
            chosen = sorted(eligible[v], key=lambda i: (-remaining[i], i))[:need]
            for i in chosen:
                heights[v][i] += 1
                remaining[i] -= 1
            eligible[v] = chosen
    if any(remaining):
        return None
    return [
        tuple(lad.baseline + lad.step * heights[v][i] for i in range(k))
        for v, lad in enumerate(ladders)
    ]


def _exact_search(ladders, aggregate):
    """Backtracking decomposition, exact but guarded to small lengths."""
    k = len(aggregate)
    if k > _FALLBACK_MAX_LENGTH:
        return None
    m = len(ladders)
    scores = [lad.scores() for lad in ladders]
    suffix_caps = []
    for idx in range(m + 1):
        rest = scores[idx:]
        if rest:
            pref = [0] * k
            for r in rest:
                run = 0
                for t in range(k):
                    run += r[t]
                    pref[t] += run
            lo = sum(r[-1] for r in rest)
            hi = sum(r[0] for r in rest)
            suffix_caps.append((pref, lo, hi))
        else:
            suffix_caps.append(None)
    budget = [_FALLBACK_NODE_CAP]

    def remainder_ok(rem, idx):
        info = suffix_caps[idx]
        if info is None:
            return all(v == 0 for v in rem)
        pref, lo, hi = info
        if any(v < lo or v > hi for v in rem):
            return False
        if sum(rem) != pref[-1]:
            return False
        run = 0
        for t, v in enumerate(sorted(rem, reverse=True)):
            run += v
            if run > pref[t]:
                return False
        if idx == m - 1:
            return sorted(rem) == sorted(scores[idx])
        return True

    def rec(rem, idx):
        if idx == m:
            return []
        budget[0] -= 1
        if budget[0] < 0:
            return None
        r = scores[idx]
        tried = set()
        # sorted pairing first: largest score to largest remainder
        order = sorted(range(k), key=lambda i: (-rem[i], i))
        paired = [0] * k
        rs = sorted(r, reverse=True)
        for rank, i in enumerate(order):
            paired[i] = rs[rank]
        for perm in itertools.chain([tuple(paired)], set(itertools.permutations(r))):
            if perm in tried:
                continue
            tried.add(perm)
            nxt = tuple(a - b for a, b in zip(rem, perm))
            if not remainder_ok(nxt, idx + 1):
                continue
            tail = rec(nxt, idx + 1)
            if tail is not None:
                return [perm] + tail
        return None

    if not remainder_ok(tuple(aggregate), 0):
        return None
    return rec(tuple(int(v) for v in aggregate), 0)


def realize_ap(aggregate, ladders) -> Realization:
    """Decompose an aggregate into per-ballot permutations of the ladders.

    Greedy nested-layer selection handles the common case; its output is
    verified and an exact backtracking search covers anything the greedy
    rule misses.  Raises :class:`NotRealizableError` when the aggregate
    fails the realizability precondition and
    :class:`InternalRealizationFailure` when no decomposition is found.
    """
    y = tuple(int(v) for v in aggregate)
    if not ladders:
        raise InfeasibleInputError("need at least one ladder")
    caps = aggregate_capacities(list(ladders))
    if len(y) != caps.length:
        raise LengthMismatchError(f"aggregate length {len(y)} != {caps.length}")
    if not realizable(y, caps):
        raise NotRealizableError(f"aggregate {y} fails the realizability test")
    if caps.ballot_count == 1:
        lad = ladders[0]
        return Realization(assignments=(_multiset_assignment(lad.scores(), y),))
    result = _greedy_layers(list(ladders), y)
    if result is not None and _realization_valid(result, ladders, y):
        return Realization(assignments=tuple(result))
    result = _exact_search(list(ladders), y)
    if result is not None and _realization_valid(result, ladders, y):
        return Realization(assignments=tuple(result))
    raise InternalRealizationFailure(
        f"aggregate {y} passed the feasibility test but admits no decomposition"
    )


def _realization_valid(assignments, ladders, aggregate):
    for row, lad in zip(assignments, ladders):
        if sorted(row) != sorted(lad.scores()):
            return False
    return all(sum(col) == want for col, want in zip(zip(*assignments), aggregate))


def construct_ballots(
    scores: HonestScores,
    boundary: BoundarySets,
    p: ScoringVector,
    ballots,
    cutoff,
    caps_high: PrefixCapacities | None = None,
    caps_low: PrefixCapacities | None = None,
) -> BallotSet:
    """Build coalition rankings certifying the displacement at ``cutoff``.

    The (level, cutoff) pair must have been certified feasible; this is
    rechecked and :class:`NotCertifiedError` raised otherwise.
    """
    x = scores.num_candidates
    level = boundary.level
    m = ballots
    if m < 1:
        raise InfeasibleInputError("need at least one coalition ballot")
    order = honest_order(scores)
    if level == 0:
        ranking = tuple(int(c) for c in order)
        return BallotSet(rankings=(ranking,) * m)

    ladder_high = extract_ap_ladder(p.top_segment(level))
    ladder_low = extract_ap_ladder(p.bottom_segment(level))
    if caps_high is None:
        caps_high = aggregate_capacities([ladder_high] * m)
    if caps_low is None:
        caps_low = aggregate_capacities([ladder_low] * m)

    demand = compute_demand_vectors(scores, boundary, cutoff)
    if not ap_demand_feasible(demand.boost, caps_high) or not ap_tolerance_feasible(
        demand.tolerance, caps_low
    ):
        raise NotCertifiedError(f"cutoff {cutoff} is not feasible at level {level}")

    boost_hat = lattice_adjust_up(demand.boost, caps_high.step, caps_high.residue)
    y_high = extend_to_base(boost_hat, caps_high)
    top_real = realize_ap(y_high, [ladder_high] * m)

    tol_hat = lattice_adjust_down(demand.tolerance, caps_low.step, caps_low.residue)
    y_low = dominated_base(tol_hat, caps_low)
    bottom_real = realize_ap(y_low, [ladder_low] * m)

    middle = [int(c) for c in order if int(c) not in set(boundary.outsiders_star) | set(boundary.weak_winners)]
    rankings = []
    for v in range(m):
        top_scores = top_real.assignments[v]
        top_order = sorted(range(level), key=lambda i: (-top_scores[i], i))
        top_block = [demand.boost_candidates[i] for i in top_order]
        bottom_scores = bottom_real.assignments[v]
        bottom_order = sorted(range(level), key=lambda i: (-bottom_scores[i], i))
        bottom_block = [demand.tolerance_candidates[i] for i in bottom_order]
        rankings.append(tuple(top_block + middle + bottom_block))
    return BallotSet(rankings=tuple(rankings))


def recount(scores: HonestScores, ballots: BallotSet, p: ScoringVector):
    """Final scores after adding the coalition's ballots."""
    final = scores.scores.astype(np.int64).copy()
    points = np.asarray(p.values, dtype=np.int64)
    for ranking in ballots.rankings:
        final[np.asarray(ranking, dtype=np.intp)] += points
    return final


def verify_manipulation(
    scores: HonestScores,
    ballots: BallotSet,
    p: ScoringVector,
    committee,
    boundary: BoundarySets,
    cutoff,
) -> VerificationReport:
    """Recount and report the displacement actually achieved.

    The separation check uses the targeted boundary sets; the displaced
    count simulates adversarial tie-breaking, ranking honest winners ahead
    of outsiders whenever final scores tie.
    """
    final = recount(scores, ballots, p)
    honest = honest_order(scores)
    honest_top = set(int(c) for c in honest[:committee])
    if boundary.level:
        min_out = min(int(final[c]) for c in boundary.outsiders_star)
        max_weak = max(int(final[c]) for c in boundary.weak_winners)
        separated = min_out >= max_weak + 1
    else:
        min_out, max_weak = 0, -1
        separated = True
    prio = scores.priority()
    x = scores.num_candidates
    against_outsiders = np.asarray(
        [0 if c in honest_top else 1 for c in range(x)], dtype=np.int64
    )
    adv_order = np.lexsort((prio, against_outsiders, -final))
    adv_top = set(int(c) for c in adv_order[:committee])
    displaced = len(honest_top - adv_top)
    outsiders_in = boundary.level if separated else displaced
    return VerificationReport(
        separated=separated,
        min_outsider_final=min_out,
        max_weak_winner_final=max_weak,
        outsiders_in_top_k=outsiders_in,
        displaced_count=displaced,
    )
