"""Profile and score generation plus preference-file ingestion."""

import re
from dataclasses import dataclass

import numpy as np

from .election import HonestScores, Profile, make_profile
from .errors import (
    CountMismatchError,
    IncompleteRankingError,
    InvalidDispersionError,
    MalformedLineError,
)


@dataclass(frozen=True)
class MallowsConfig:
    num_candidates: int
    num_voters: int
    dispersion: float
    reference: tuple | None = None
    seed: int = 0


def sample_mallows(config: MallowsConfig) -> Profile:
    """Draw rankings from the Mallows distribution by repeated insertion.

    Item ``i`` of the reference order is inserted at position ``j`` (0-based
    from the top of the partial ranking) with probability proportional to
    ``dispersion ** (i - j)``, which yields ranking probabilities
    proportional to ``dispersion ** kendall_tau(ranking, reference)``.
    Exact, O(x^2) per ballot, and deterministic for a fixed seed.
    """
    phi = config.dispersion
    if not 0.0 < phi <= 1.0:
        raise InvalidDispersionError(f"dispersion {phi} outside (0, 1]")
    x = config.num_candidates
    n = config.num_voters
    reference = config.reference or tuple(range(x))
    if sorted(reference) != list(range(x)):
        raise ValueError("reference must be a permutation of 0..x-1")
    rng = np.random.default_rng(np.random.PCG64(config.seed))

    # positions_all[v, i]: insertion slot of item i for voter v
    positions_all = np.zeros((n, x), dtype=np.intp)
    for i in range(1, x):
        weights = phi ** np.arange(i, -1, -1, dtype=np.float64)
        cdf = np.cumsum(weights)
        cdf /= cdf[-1]
        draws = rng.random(n)
        positions_all[:, i] = np.searchsorted(cdf, draws, side="right")

    rankings = []
    for v in range(n):
        ranking = []
        for i in range(x):
            ranking.insert(positions_all[v, i], reference[i])
        rankings.append(tuple(ranking))
    return make_profile(rankings, num_candidates=x)


def gen_synthetic_scores(num_candidates, distribution="uniform:0:1000000", seed=0) -> HonestScores:
    """Deterministic integer score array, sorted nonincreasing.

    ``distribution`` is ``uniform:<lo>:<hi>`` (half-open range) or
    ``zipf:<s>``.  No tallying happens; the array stands in for the honest
    totals of an arbitrarily large electorate.
    """
    x = num_candidates
    if x < 1:
        raise ValueError("need at least one candidate")
    rng = np.random.default_rng(np.random.PCG64(seed))
    name, _, rest = str(distribution).partition(":")
    if name == "uniform":
        lo_s, _, hi_s = rest.partition(":")
        lo, hi = int(lo_s or 0), int(hi_s or 1000000)
        scores = rng.integers(lo, hi, size=x, dtype=np.int64)
    elif name == "zipf":
        s = float(rest or 1.1)
        scores = rng.zipf(s, size=x).astype(np.int64)
    else:
        raise ValueError(f"unknown distribution {distribution!r}")
    scores[::-1].sort()  # nonincreasing by candidate id
    return HonestScores(scores=scores)


_COUNT_RE = re.compile(r"#\s*NUMBER\s+ALTERNATIVES\s*:\s*(\d+)", re.IGNORECASE)
_VOTERS_RE = re.compile(r"#\s*NUMBER\s+VOTERS\s*:\s*(\d+)", re.IGNORECASE)


def parse_preflib(text):
    """Parse strict complete-order preference data (the SOC flavor).

    Returns ``(profile, id_map)`` where ``id_map`` maps original candidate
    ids to the dense ids ``0..x-1`` used by the profile.  Ties (braces) and
    incomplete rankings are rejected.
    """
    declared = None
    declared_voters = None
    raw_lines = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            match = _COUNT_RE.search(stripped)
            if match:
                declared = int(match.group(1))
            match = _VOTERS_RE.search(stripped)
            if match:
                declared_voters = int(match.group(1))
            continue
        raw_lines.append((lineno, stripped))

    entries = []
    seen_ids = set()
    for lineno, line in raw_lines:
        if "{" in line or "}" in line:
            raise IncompleteRankingError(f"line {lineno}: ties are not supported")
        head, sep, tail = line.partition(":")
        if not sep:
            raise MalformedLineError(lineno, f"line {lineno}: missing ':' separator")
        try:
            mult = int(head.strip())
        except ValueError:
            raise MalformedLineError(lineno, f"line {lineno}: bad multiplicity {head!r}")
        if mult < 1:
            raise MalformedLineError(lineno, f"line {lineno}: multiplicity must be positive")
        try:
            ids = [int(tok.strip()) for tok in tail.split(",") if tok.strip()]
        except ValueError:
            raise MalformedLineError(lineno, f"line {lineno}: bad candidate id")
        if len(set(ids)) != len(ids):
            raise IncompleteRankingError(f"line {lineno}: repeated candidate")
        entries.append((lineno, mult, ids))
        seen_ids.update(ids)

    if not entries:
        if declared is None:
            raise CountMismatchError("no alternatives declared and no data lines")
        id_map = {i: i - 1 for i in range(1, declared + 1)}
        return Profile(num_candidates=declared, ballots=()), id_map

    if declared is not None and len(seen_ids) != declared:
        raise CountMismatchError(
            f"declared {declared} alternatives but saw {len(seen_ids)}"
        )
    id_map = {orig: dense for dense, orig in enumerate(sorted(seen_ids))}
    x = len(id_map)
    ballots = []
    for lineno, mult, ids in entries:
        if len(ids) != x:
            raise IncompleteRankingError(
                f"line {lineno}: ranking lists {len(ids)} of {x} candidates"
            )
        ballots.append((mult, tuple(id_map[i] for i in ids)))
    profile = Profile(num_candidates=x, ballots=tuple(ballots))
    if declared_voters is not None and profile.num_voters != declared_voters:
        raise CountMismatchError(
            f"declared {declared_voters} voters but multiplicities sum to {profile.num_voters}"
        )
    return profile, id_map
