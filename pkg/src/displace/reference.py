"""Naive brute-force oracles used to validate the fast path at desk scale.

Everything here enumerates exhaustively on purpose: these functions are the
independent ground truth the exact oracles are measured against, so they
must stay free of the structure they are checking.
"""

import itertools

import numpy as np

from .election import HonestScores, boundary_sets, honest_order
from .errors import TooLargeError
from .scoring import ScoringVector

BRUTE_MAX_BALLOTS = 3
BRUTE_MAX_LENGTH = 5
BRUTE_MAX_CANDIDATES = 7
BRUTE_MAX_COALITION = 2


def brute_force_realizable_set(ladders):
    """Every aggregate obtainable as a sum of per-ballot permutations."""
    if len(ladders) > BRUTE_MAX_BALLOTS:
        raise TooLargeError(f"at most {BRUTE_MAX_BALLOTS} ladders supported")
    length = ladders[0].length
    if length > BRUTE_MAX_LENGTH:
        raise TooLargeError(f"at most length {BRUTE_MAX_LENGTH} supported")
    acc = {(0,) * length}
    for lad in ladders:
        perms = set(itertools.permutations(lad.scores()))
        acc = {tuple(a + b for a, b in zip(base, p)) for base in acc for p in perms}
    return acc


def _delta_table(p: ScoringVector):
    """Score delta of every ranking of x candidates, as an (x!, x) array."""
    x = p.num_positions
    points = np.asarray(p.values, dtype=np.int64)
    rankings = list(itertools.permutations(range(x)))
    table = np.zeros((len(rankings), x), dtype=np.int64)
    for row, ranking in enumerate(rankings):
        table[row, list(ranking)] = points
    return table


def brute_force_k_star(scores: HonestScores, p: ScoringVector, ballots, committee):
    """Exhaustive maximum displacement over all coalition ballot multisets.

    Coalition profiles are enumerated up to permutation of the colluders
    (the aggregate deltas are symmetric).  A level counts as achieved when
    some profile separates the canonical boundary sets by the strict
    one-unit gap.
    """
    x = scores.num_candidates
    if x > BRUTE_MAX_CANDIDATES:
        raise TooLargeError(f"at most {BRUTE_MAX_CANDIDATES} candidates supported")
    if ballots > BRUTE_MAX_COALITION:
        raise TooLargeError(f"at most {BRUTE_MAX_COALITION} coalition ballots supported")
    if ballots == 0:
        return 0
    order = honest_order(scores)
    cap = min(committee, x - committee)
    table = _delta_table(p)
    base = scores.scores

    best = 0
    for level in range(cap, 0, -1):
        bounds = boundary_sets(order, committee, level)
        out = np.asarray(bounds.outsiders_star, dtype=np.intp)
        weak = np.asarray(bounds.weak_winners, dtype=np.intp)
        if _level_achievable(base, table, out, weak, ballots):
            best = level
            break
    return best


def _level_achievable(base, table, out, weak, ballots):
    if ballots == 1:
        finals_out = base[out] + table[:, out]
        finals_weak = base[weak] + table[:, weak]
        ok = finals_out.min(axis=1) >= finals_weak.max(axis=1) + 1
        return bool(ok.any())
    # ballots == 2: multisets {i, j} with j >= i, chunked over i
    n = len(table)
    out_part = table[:, out]
    weak_part = table[:, weak]
    for i in range(n):
        finals_out = base[out] + out_part[i] + out_part[i:]
        finals_weak = base[weak] + weak_part[i] + weak_part[i:]
        ok = finals_out.min(axis=1) >= finals_weak.max(axis=1) + 1
        if ok.any():
            return True
    return False
