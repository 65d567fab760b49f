"""Boost demands and suppression tolerances induced by a cutoff."""

from dataclasses import dataclass, field

import numpy as np

from .election import BoundarySets, HonestScores


@dataclass(frozen=True, eq=False)
class DemandPair:
    """Ordered demand vectors at one cutoff.

    ``boost[i]`` is the i-th largest extra score an outsider needs to reach
    the cutoff; ``boost_candidates[i]`` names that outsider.  ``tolerance``
    is sorted nondecreasing and holds how much more score each weak winner
    may absorb while staying strictly below the cutoff.  Tolerances are kept
    unclamped: a negative entry means that winner already meets or exceeds
    the cutoff, which no nonnegative contribution can undo.  Clamping at
    zero would hide exactly that infeasibility from the suppress oracle.
    """

    boost: np.ndarray = field(repr=False)
    tolerance: np.ndarray = field(repr=False)
    boost_candidates: tuple
    tolerance_candidates: tuple
    cutoff: int
    level: int


def compute_demand_vectors(scores: HonestScores, boundary: BoundarySets, cutoff) -> DemandPair:
    """Map a cutoff to sorted demand vectors plus candidate index maps."""
    s = scores.scores
    out = np.asarray(boundary.outsiders_star, dtype=np.intp)
    weak = np.asarray(boundary.weak_winners, dtype=np.intp)
    boost = np.maximum(0, cutoff - s[out]) if len(out) else np.zeros(0, dtype=np.int64)
    tol = (cutoff - 1 - s[weak]) if len(weak) else np.zeros(0, dtype=np.int64)
    b_idx = np.argsort(-boost, kind="stable")
    t_idx = np.argsort(tol, kind="stable")
    boost = np.ascontiguousarray(boost[b_idx], dtype=np.int64)
    tol = np.ascontiguousarray(tol[t_idx], dtype=np.int64)
    boost.setflags(write=False)
    tol.setflags(write=False)
    return DemandPair(
        boost=boost,
        tolerance=tol,
        boost_candidates=tuple(int(c) for c in out[b_idx]),
        tolerance_candidates=tuple(int(c) for c in weak[t_idx]),
        cutoff=int(cutoff),
        level=boundary.level,
    )
