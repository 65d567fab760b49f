"""Honest profiles, tallies, the tie-broken order, and boundary sets."""

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BudgetOverflowError,
    LengthMismatchError,
    LevelOutOfRangeError,
)
from .scoring import INT64_HEADROOM, ScoringVector


@dataclass(frozen=True)
class Profile:
    """A multiset of complete rankings over candidates ``0..x-1``."""

    num_candidates: int
    ballots: tuple  # of (multiplicity, ranking) pairs

    def __post_init__(self):
        full = frozenset(range(self.num_candidates))
        for mult, ranking in self.ballots:
            if mult < 1:
                raise ValueError(f"multiplicity {mult} must be positive")
            if frozenset(ranking) != full or len(ranking) != self.num_candidates:
                raise ValueError(f"ranking {ranking} is not a permutation of 0..x-1")

    @property
    def num_voters(self):
        return sum(mult for mult, _ in self.ballots)


def make_profile(rankings, num_candidates=None) -> Profile:
    """Collapse an iterable of rankings into a Profile with multiplicities."""
    counts = {}
    x = num_candidates
    for r in rankings:
        r = tuple(int(c) for c in r)
        if x is None:
            x = len(r)
        counts[r] = counts.get(r, 0) + 1
    if x is None:
        raise ValueError("empty ranking list needs an explicit candidate count")
    return Profile(
        num_candidates=x,
        ballots=tuple((mult, ranking) for ranking, mult in sorted(counts.items())),
    )


@dataclass(frozen=True, eq=False)
class HonestScores:
    """Total honest scores per candidate plus the tie priority.

    ``tie_priority`` is a permutation of candidate ids; lower priority value
    wins ties.  ``None`` means "candidate id ascending", which avoids
    materializing an identity array for very large elections.
    """

    scores: np.ndarray = field(repr=False)
    tie_priority: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        scores = np.ascontiguousarray(self.scores, dtype=np.int64)
        scores.setflags(write=False)
        object.__setattr__(self, "scores", scores)
        if self.tie_priority is not None:
            tp = np.ascontiguousarray(self.tie_priority, dtype=np.int64)
            if len(tp) != len(scores):
                raise LengthMismatchError("tie priority length differs from scores")
            tp.setflags(write=False)
            object.__setattr__(self, "tie_priority", tp)

    @property
    def num_candidates(self):
        return len(self.scores)

    def priority(self):
        if self.tie_priority is not None:
            return self.tie_priority
        return np.arange(self.num_candidates, dtype=np.int64)


@dataclass(frozen=True)
class BoundarySets:
    """The canonical displacement targets at one level.

    ``outsiders_star`` holds the ``level`` strongest outsiders, strongest
    first.  ``weak_winners`` holds the ``level`` weakest winners, weakest
    first.
    """

    outsiders_star: tuple
    weak_winners: tuple
    level: int
    committee: int


def tally(profile: Profile, scoring: ScoringVector) -> HonestScores:
    """Sum positional scores over all ballots (with multiplicities)."""
    if scoring.num_positions != profile.num_candidates:
        raise LengthMismatchError(
            f"scoring vector length {scoring.num_positions} differs from "
            f"candidate count {profile.num_candidates}"
        )
    n = profile.num_voters
    peak = max(abs(v) for v in scoring.values) if scoring.values else 0
    if n * peak >= INT64_HEADROOM:
        raise BudgetOverflowError(f"{n} voters with peak score {peak} exceed the integer budget")
    scores = np.zeros(profile.num_candidates, dtype=np.int64)
    points = np.asarray(scoring.values, dtype=np.int64)
    for mult, ranking in profile.ballots:
        scores[np.asarray(ranking, dtype=np.intp)] += mult * points
    return HonestScores(scores=scores)


def honest_order(scores: HonestScores) -> np.ndarray:
    """Candidates best first: score descending, ties by priority ascending."""
    # lexsort uses the last key as primary
    order = np.lexsort((scores.priority(), -scores.scores))
    return order.astype(np.int64)


def boundary_sets(order, committee, level) -> BoundarySets:
    """Slice the canonical boundary sets out of a best-first order."""
    x = len(order)
    k = committee
    if not 1 <= k <= x - 1:
        raise LevelOutOfRangeError(f"committee size {k} must be in [1, {x - 1}]")
    if not 0 <= level <= min(k, x - k):
        raise LevelOutOfRangeError(
            f"level {level} must be in [0, {min(k, x - k)}]"
        )
    outsiders = tuple(int(c) for c in order[k:k + level])
    weak = tuple(int(c) for c in order[k - level:k][::-1])
    return BoundarySets(outsiders_star=outsiders, weak_winners=weak, level=level, committee=k)


def boundary_sets_fast(scores: HonestScores, committee, level) -> BoundarySets:
    """Boundary sets by linear-time selection instead of a full sort.

    Equivalent to ``boundary_sets(honest_order(scores), committee, level)``
    but only ever orders the ``committee ± level`` boundary region, which is
    what keeps very large elections cheap.
    """
    x = scores.num_candidates
    k = committee
    if not 1 <= k <= x - 1:
        raise LevelOutOfRangeError(f"committee size {k} must be in [1, {x - 1}]")
    if not 0 <= level <= min(k, x - k):
        raise LevelOutOfRangeError(f"level {level} must be in [0, {min(k, x - k)}]")
    if level == 0:
        return BoundarySets(outsiders_star=(), weak_winners=(), level=0, committee=k)
    need = k + level
    top = _select_best(scores, need)
    outsiders = tuple(int(c) for c in top[k:need])
    weak = tuple(int(c) for c in top[k - level:k][::-1])
    return BoundarySets(outsiders_star=outsiders, weak_winners=weak, level=level, committee=k)


def _select_best(scores: HonestScores, count):
    """Ids of the ``count`` best candidates, best first, exact under ties."""
    s = scores.scores
    x = len(s)
    if count >= x:
        return honest_order(scores)
    # value of the count-th largest score
    cut = np.partition(s, x - count)[x - count]
    above = np.flatnonzero(s > cut)
    at = np.flatnonzero(s == cut)
    if scores.tie_priority is not None:
        at = at[np.argsort(scores.tie_priority[at], kind="stable")]
    take = count - len(above)
    chosen = np.concatenate([above, at[:take]])
    prio = scores.priority()
    chosen = chosen[np.lexsort((prio[chosen], -s[chosen]))]
    return chosen.astype(np.int64)
