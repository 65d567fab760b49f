"""GreedyPromote: the myopic constructive baseline.

Each coalition ballot promotes one outsider: the strongest candidate
currently outside the Top-k (ties toward larger honest score).  That target
takes the top position; everyone else is ranked so the currently strongest
candidates sit lowest, which is the most suppressive completion.  The
scoreboard updates after every ballot.  Unlike the exact solver the greedy
offers no strict-gap certificate, so its displacement is measured by a
straight recount under the default tie priority.
"""

import numpy as np

from .ballots import BallotSet
from .election import HonestScores, honest_order
from .scoring import ScoringVector


def greedy_promote(scores: HonestScores, p: ScoringVector, ballots, committee):
    """Cast ``ballots`` greedy ballots; return (displaced count, ballot set)."""
    x = scores.num_candidates
    honest = scores.scores
    prio = scores.priority()
    current = honest.astype(np.int64).copy()
    points = np.asarray(p.values, dtype=np.int64)
    honest_top = set(int(c) for c in honest_order(scores)[:committee])
    rankings = []
    for _ in range(ballots):
        order = np.lexsort((prio, -current))
        winners = set(int(c) for c in order[:committee])
        outsiders = [int(c) for c in order if int(c) not in winners]
        if outsiders:
            # strongest outsider by current score, ties toward larger honest score
            target = max(
                outsiders,
                key=lambda c: (current[c], honest[c], -prio[c]),
            )
        else:
            target = int(order[0])
        rest = [c for c in range(x) if c != target]
        is_winner = {c: (c in winners) for c in rest}
        # current leaders go to the bottom positions; outsiders break ties upward
        rest.sort(key=lambda c: (int(current[c]), is_winner[c], -int(prio[c])))
        ranking = tuple([target] + rest)
        rankings.append(ranking)
        current[np.asarray(ranking, dtype=np.intp)] += points
    final_order = np.lexsort((prio, -current))
    final_top = set(int(c) for c in final_order[:committee])
    displaced = len(honest_top - final_top)
    return displaced, BallotSet(rankings=tuple(rankings))
