"""Exact feasibility oracles for coalition score aggregates.

The centerpiece is a prefix-and-congruence test: an aggregate passes when
its sorted prefix sums stay under the coalition's cumulative capacities and
every coordinate lies in the single residue class reachable by the ladder
family.  For a single ballot the test instead compares rank by rank, since
one ballot can only hand out its exact score multiset.

Where the tests are exact
-------------------------
For families of identical ladders (the only kind the displacement solver
builds: every coalition ballot uses the same rule) the tests are exact in
all regimes exercised by the test suite: any family at levels up to three
targets, strictly decreasing segments, and two-valued segments at any size.
Families with three or more distinct values, repeated values, four or more
targets, and exactly two ballots can admit prefix-and-congruence points
that no pair of permutations produces; the ballot constructor verifies its
output, so such corner aggregates surface as explicit errors rather than
wrong ballots.  For mixed-step families only the necessary test
:func:`mixed_step_necessary` is available.
"""

import numpy as np

from .demand import DemandPair
from .errors import LengthMismatchError, SumsetTooLargeError
from .scoring import PrefixCapacities

DEFAULT_SUMSET_CAP = 10**6


def lattice_adjust_up(values, step, residue):
    """Raise each entry to the nearest value in the residue class at or above it."""
    v = np.asarray(values, dtype=np.int64)
    return v + (residue - v) % step


def lattice_adjust_down(values, step, residue):
    """Lower each entry to the nearest value in the residue class at or below it."""
    v = np.asarray(values, dtype=np.int64)
    return v - (v - residue) % step


def block_hlp_member(aggregate, caps: PrefixCapacities) -> bool:
    """Majorization membership: sorted prefix bounds plus exact total."""
    y = np.asarray(aggregate, dtype=np.int64)
    if len(y) != caps.length:
        raise LengthMismatchError(f"aggregate length {len(y)} != {caps.length}")
    if len(y) == 0:
        return True
    desc = np.sort(y)[::-1]
    run = np.cumsum(desc)
    if int(run[-1]) != caps.total:
        return False
    return bool(np.all(run <= caps.prefix))


def ap_demand_feasible(demand, caps: PrefixCapacities) -> bool:
    """Can some realizable aggregate dominate ``demand`` coordinatewise?

    The demand is first rounded up into the reachable residue class; the
    adjusted vector must fit under the prefix capacities with total at most
    the coalition's mass.  A single ballot is compared rank by rank against
    its own score multiset instead, which is the exact condition there.
    """
    q = np.asarray(demand, dtype=np.int64)
    if len(q) != caps.length:
        raise LengthMismatchError(f"demand length {len(q)} != {caps.length}")
    if len(q) == 0:
        return True
    adjusted = lattice_adjust_up(q, caps.step, caps.residue)
    desc = np.sort(adjusted)[::-1]
    if caps.ballot_count == 1:
        return bool(np.all(desc <= caps.rank_supply()))
    run = np.cumsum(desc)
    if int(run[-1]) > caps.total:
        return False
    return bool(np.all(run <= caps.prefix))


def ap_tolerance_feasible(tolerance, caps: PrefixCapacities) -> bool:
    """Can some realizable aggregate stay under ``tolerance`` coordinatewise?

    Mirror image of :func:`ap_demand_feasible`: round the bounds down into
    the residue class, then require every group of the ``t`` smallest bounds
    to absorb the mass that cannot go anywhere else, which is the total
    minus the capacity of the other ``k' - t`` coordinates.  (Testing the
    slack vector ``total - bounds`` against the same prefix capacities looks
    tempting but is not equivalent: it already misclassifies a single
    ballot's own score vector as soon as three targets are in play.)
    """
    u = np.asarray(tolerance, dtype=np.int64)
    if len(u) != caps.length:
        raise LengthMismatchError(f"tolerance length {len(u)} != {caps.length}")
    k = len(u)
    if k == 0:
        return True
    adjusted = np.sort(lattice_adjust_down(u, caps.step, caps.residue))
    if caps.ballot_count == 1:
        asc_supply = caps.rank_supply()[::-1]
        return bool(np.all(asc_supply <= adjusted))
    # total - prefix[k-t-1] is the least mass the t smallest coordinates take
    ext = np.concatenate([np.zeros(1, dtype=np.int64), caps.prefix])
    floors = caps.total - ext[k - 1::-1]
    return bool(np.all(np.cumsum(adjusted) >= floors))


def boost_feasible(demand: DemandPair, caps_high: PrefixCapacities) -> bool:
    """Boost side of a cutoff: outsider demands against the top-segment pool."""
    return ap_demand_feasible(demand.boost, caps_high)


def suppress_feasible(demand: DemandPair, caps_low: PrefixCapacities) -> bool:
    """Suppress side of a cutoff: winner tolerances against the bottom-segment pool."""
    return ap_tolerance_feasible(demand.tolerance, caps_low)


def realizable(aggregate, caps: PrefixCapacities) -> bool:
    """Is the aggregate producible by per-ballot permutations of the ladders?

    For one ballot this is multiset equality with the ladder's scores.  For
    coalitions it is the prefix-and-congruence test; see the module notes
    for the exactness boundary.
    """
    y = np.asarray(aggregate, dtype=np.int64)
    if len(y) != caps.length:
        raise LengthMismatchError(f"aggregate length {len(y)} != {caps.length}")
    if len(y) == 0:
        return True
    if caps.ballot_count == 1:
        return bool(np.array_equal(np.sort(y)[::-1], caps.rank_supply()))
    if not block_hlp_member(y, caps):
        return False
    return bool(np.all((y - caps.residue) % caps.step == 0))


def mixed_step_necessary(aggregate, ladders, sumset_cap=DEFAULT_SUMSET_CAP) -> bool:
    """Necessary check for families whose steps may differ.

    Requires majorization under the family's prefix capacities and every
    coordinate to lie in the iterated sumset of the per-ballot value sets.
    Passing does not certify realizability.
    """
    y = [int(v) for v in aggregate]
    length = ladders[0].length
    if any(lad.length != length for lad in ladders):
        raise LengthMismatchError("ladders disagree on length")
    if len(y) != length:
        raise LengthMismatchError(f"aggregate length {len(y)} != {length}")
    prefix = np.zeros(length, dtype=np.int64)
    for lad in ladders:
        prefix = prefix + np.cumsum(np.asarray(lad.scores(), dtype=np.int64))
    desc = np.sort(np.asarray(y, dtype=np.int64))[::-1]
    run = np.cumsum(desc)
    if int(run[-1]) != int(prefix[-1]) or np.any(run > prefix):
        return False
    sumset = {0}
    for lad in ladders:
        values = lad.value_set()
        sumset = {s + v for s in sumset for v in values}
        if len(sumset) > sumset_cap:
            raise SumsetTooLargeError(f"sumset exceeded {sumset_cap} elements")
    return all(v in sumset for v in y)


def value_sumset(ladders, sumset_cap=DEFAULT_SUMSET_CAP):
    """Iterated sumset of per-ballot distinct values (capped)."""
    sumset = {0}
    for lad in ladders:
        values = lad.value_set()
        sumset = {s + v for s in sumset for v in values}
        if len(sumset) > sumset_cap:
            raise SumsetTooLargeError(f"sumset exceeded {sumset_cap} elements")
    return sumset
