"""Positional scoring vectors, score ladders, and coalition prefix capacities.

A positional rule awards ``values[r]`` points to the candidate ranked at
position ``r`` of a ballot.  For displacement analysis only two slices of a
coalition ballot matter: the top segment (what it can give the targeted
outsiders) and the bottom segment (what it must dump on the targeted weak
winners).  Each segment is summarized as a ladder ``score = baseline +
step * level`` and a coalition of ballots as cumulative prefix capacities.
"""

from dataclasses import dataclass, field
from math import gcd

import numpy as np

from .errors import (
    BudgetOverflowError,
    EmptyVectorError,
    LengthMismatchError,
    NotNonincreasingError,
    StepMismatchError,
)

INT64_HEADROOM = 2**62  # stay a factor of 2 below the int64 ceiling


def _check_nonincreasing(values):
    for i in range(1, len(values)):
        if values[i] > values[i - 1]:
            raise NotNonincreasingError(i)


@dataclass(frozen=True)
class ScoringVector:
    """Integer points per ballot position, nonincreasing."""

    values: tuple

    @property
    def num_positions(self):
        return len(self.values)

    def top_segment(self, count):
        """The ``count`` highest positional scores, best first."""
        return self.values[:count]

    def bottom_segment(self, count):
        """The ``count`` lowest positional scores, best first."""
        return self.values[len(self.values) - count:]

    def check_budget(self, ballots):
        """Reject coalition sizes whose score mass could overflow int64."""
        peak = max(abs(self.values[0]), abs(self.values[-1]))
        if ballots * peak * max(1, len(self.values)) >= INT64_HEADROOM:
            raise BudgetOverflowError(
                f"{ballots} ballots with peak score {peak} exceed the integer budget"
            )


def validate_scoring_vector(values) -> ScoringVector:
    """Build a :class:`ScoringVector`, rejecting empty or increasing input."""
    values = tuple(int(v) for v in values)
    if not values:
        raise EmptyVectorError("scoring vector is empty")
    _check_nonincreasing(values)
    return ScoringVector(values)


def scoring_from_spec(spec, num_candidates) -> ScoringVector:
    """Parse a scoring-rule shorthand into a vector of length ``num_candidates``.

    Recognized forms: ``borda``, ``plurality``, ``kapproval:<t>``,
    ``truncborda:<t>``, ``321``, ``scaled:<g>:<rule>``, and an explicit
    ``vec:3,2,1,0``.
    """
    x = num_candidates
    if x < 1:
        raise EmptyVectorError("need at least one candidate")
    name, _, rest = spec.partition(":")
    if name == "borda":
        return validate_scoring_vector(range(x - 1, -1, -1))
    if name == "plurality":
        return validate_scoring_vector([1] + [0] * (x - 1))
    if name == "kapproval":
        t = int(rest)
        if not 1 <= t <= x:
            raise ValueError(f"kapproval threshold {t} out of range for x={x}")
        return validate_scoring_vector([1] * t + [0] * (x - t))
    if name == "truncborda":
        t = int(rest)
        if not 1 <= t <= x - 1:
            raise ValueError(f"truncation point {t} out of range for x={x}")
        return validate_scoring_vector(list(range(t, 0, -1)) + [0] * (x - t))
    if name == "321":
        # positions in thirds scored 3/2/1, last position 0
        if x == 1:
            return validate_scoring_vector([3])
        return validate_scoring_vector([3 - (3 * r) // (x - 1) for r in range(x)])
    if name == "scaled":
        factor, _, inner = rest.partition(":")
        base = scoring_from_spec(inner, x)
        return validate_scoring_vector([int(factor) * v for v in base.values])
    if name == "vec":
        return validate_scoring_vector([int(v) for v in rest.split(",")])
    raise ValueError(f"unknown scoring rule {spec!r}")


@dataclass(frozen=True)
class APLadder:
    """One ballot segment in baseline/step/level form.

    Scores reconstruct as ``baseline + step * level``, with levels
    nonincreasing and nonnegative.  The step is always the gcd of the
    pairwise score differences; a smaller divisor would weaken the
    congruence class and admit aggregates no ballot permutation can
    produce.  Constant segments use step 1 with all levels zero.
    """

    baseline: int
    step: int
    levels: tuple

    @property
    def length(self):
        return len(self.levels)

    def scores(self):
        """Reconstructed segment scores, nonincreasing."""
        return tuple(self.baseline + self.step * l for l in self.levels)

    def value_set(self):
        """Distinct segment scores."""
        return {self.baseline + self.step * l for l in set(self.levels)}


def extract_ap_ladder(segment) -> APLadder:
    """Decompose a nonincreasing integer segment into ladder form."""
    segment = tuple(int(v) for v in segment)
    if not segment:
        raise EmptyVectorError("segment is empty")
    _check_nonincreasing(segment)
    baseline = segment[-1]
    step = 0
    for a, b in zip(segment, segment[1:]):
        step = gcd(step, a - b)
    if step == 0:
        step = 1
    levels = tuple((v - baseline) // step for v in segment)
    return APLadder(baseline=baseline, step=step, levels=levels)


@dataclass(frozen=True, eq=False)
class PrefixCapacities:
    """Aggregate score supply of a coalition's ladder family.

    ``prefix[t-1]`` is the most total score any ``t`` targets can jointly
    receive; ``total`` equals ``prefix[-1]`` and is the fixed mass the
    coalition must hand out.  ``residue`` is the congruence class
    (mod ``step``) that every realizable aggregate coordinate lies in.
    """

    prefix: np.ndarray = field(repr=False)
    total: int
    step: int
    residue: int
    baseline_total: int
    ballot_count: int

    @property
    def length(self):
        return len(self.prefix)

    def rank_supply(self):
        """Per-rank aggregate scores, best first (the prefix increments)."""
        return np.diff(self.prefix, prepend=0)


def aggregate_capacities(ladders) -> PrefixCapacities:
    """Sum per-ballot prefix capacities for a common-step ladder family."""
    if not ladders:
        raise EmptyVectorError("need at least one ladder")
    first = ladders[0]
    step = first.step
    length = first.length
    for lad in ladders:
        if lad.length != length:
            raise LengthMismatchError(
                f"ladder lengths differ: {lad.length} vs {length}"
            )
        if lad.step != step:
            raise StepMismatchError(f"ladder steps differ: {lad.step} vs {step}")
    identical = all(lad is first or lad == first for lad in ladders)
    m = len(ladders)
    if identical:
        per = np.cumsum(np.asarray(first.scores(), dtype=object))
        prefix_obj = m * per
        baseline_total = m * first.baseline
    else:
        prefix_obj = np.zeros(length, dtype=object)
        baseline_total = 0
        for lad in ladders:
            prefix_obj = prefix_obj + np.cumsum(np.asarray(lad.scores(), dtype=object))
            baseline_total += lad.baseline
    peak = max(abs(int(prefix_obj[-1])), abs(int(prefix_obj[0])))
    if peak >= INT64_HEADROOM:
        raise BudgetOverflowError(f"aggregate capacity {peak} exceeds the integer budget")
    prefix = prefix_obj.astype(np.int64)
    prefix.setflags(write=False)
    return PrefixCapacities(
        prefix=prefix,
        total=int(prefix[-1]),
        step=step,
        residue=baseline_total % step,
        baseline_total=baseline_total,
        ballot_count=m,
    )


def segment_capacities(vector: ScoringVector, ballots, level, side) -> PrefixCapacities:
    """Capacities of ``ballots`` identical copies of a scoring-vector segment.

    ``side`` is ``"top"`` for the boost pool (highest ``level`` scores) or
    ``"bottom"`` for the suppress pool (lowest ``level`` scores).
    """
    if side == "top":
        seg = vector.top_segment(level)
    elif side == "bottom":
        seg = vector.bottom_segment(level)
    else:
        raise ValueError(f"side must be 'top' or 'bottom', got {side!r}")
    ladder = extract_ap_ladder(seg)
    return aggregate_capacities([ladder] * ballots)
