"""Single-winner rules and assignment rules.

The distortion-oriented rules share one preprocessing step: every candidate
is replaced by as many clones as their plurality score, which balances the
instance so that voter and candidate counts agree.  A rule is then run on
the cloned profile and the winning clone is mapped back to its origin.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .eating import EatingConfig, FractionalAssignment, run_eating
from .matching import build_domination_graph, has_fractional_perfect_matching
from .profiles import CloneExpansion, PreferenceProfile, clone_expand, plurality_scores


def _plurality_cloned(p: PreferenceProfile) -> CloneExpansion:
    # every voter contributes one clone, so the expanded profile has n candidates
    return clone_expand(p, plurality_scores(p))


def _check_voter_order(p: PreferenceProfile, order: Sequence[int] | None) -> tuple[int, ...]:
    if order is None:
        return tuple(range(p.n))
    order = tuple(order)
    if sorted(order) != list(range(p.n)):
        raise ValueError("order must be a permutation of all voters")
    return order


def plurality_veto(p: PreferenceProfile, order: Sequence[int] | None = None) -> int:
    """Clone by plurality score, then let the first n-1 voters in ``order``
    each strike their least preferred remaining clone.  The origin of the
    clone left standing wins."""
    order = _check_voter_order(p, order)
    ce = _plurality_cloned(p)
    alive = [True] * ce.expanded.m
    for voter in order[: p.n - 1]:
        for e in reversed(ce.expanded.rankings[voter]):
            if alive[e]:
                alive[e] = False
                break
    last = alive.index(True)
    return ce.origin[last]


def plurality_matching_winners(p: PreferenceProfile) -> frozenset[int]:
    """Candidates with a clone whose domination graph in the cloned profile
    admits a fractional perfect matching."""
    ce = _plurality_cloned(p)
    winners: set[int] = set()
    for e in range(ce.expanded.m):
        if ce.origin[e] in winners:
            continue
        g = build_domination_graph(ce.expanded, e)
        if has_fractional_perfect_matching(g):
            winners.add(ce.origin[e])
    return frozenset(winners)


def _expanded_tie_break(
    ce: CloneExpansion, tie_break: Sequence[int] | None
) -> tuple[int, ...] | None:
    """Lift a tie-break order over original candidates to the clones."""
    if tie_break is None:
        return None
    tie_break = tuple(tie_break)
    if sorted(tie_break) != list(range(ce.original.m)):
        raise ValueError("tie_break must be a permutation of all candidates")
    return tuple(e for c in tie_break for e in ce.clones[c])


def composite_distortion_rule(
    p: PreferenceProfile, tie_break: Sequence[int] | None = None
) -> int:
    """Clone by plurality score, consume clones worst-first until one remains,
    and return that clone's origin.

    Equivalently: the last candidate of the full sequential committee built on
    the reversed cloned profile.
    """
    ce = _plurality_cloned(p)
    expanded = ce.expanded
    if expanded.m == 1:
        return ce.origin[0]
    cfg = EatingConfig(
        direction="eat-worst",
        stop_eliminations=expanded.m,
        tie_break=_expanded_tie_break(ce, tie_break),
    )
    trace = run_eating(expanded, cfg)
    last = trace.eliminated_order()[-1]
    return ce.origin[last]


def serial_dictatorship(
    p: PreferenceProfile,
    order: Sequence[int] | None = None,
    k: int | None = None,
) -> dict[int, int]:
    """Voters pick their favourite remaining candidate one at a time.

    Only the first k picks happen (default: as many as fit), and the
    resulting voter -> candidate map is returned.
    """
    order = _check_voter_order(p, order)
    if k is None:
        k = min(p.n, p.m)
    if not 0 <= k <= min(p.n, p.m):
        raise ValueError(f"cannot match {k} pairs with {p.n} voters and {p.m} candidates")
    taken = [False] * p.m
    matching: dict[int, int] = {}
    for voter in order[:k]:
        for c in p.rankings[voter]:
            if not taken[c]:
                taken[c] = True
                matching[voter] = c
                break
    return matching


def random_priority(
    p: PreferenceProfile,
    k: int | None = None,
    seed: int = 0,
    samples: int = 1000,
) -> FractionalAssignment:
    """Monte Carlo average of serial dictatorship over uniform voter orders.

    ``shares[i][c]`` is the fraction of sampled orders in which voter i ends
    up with candidate c, an exact rational with denominator ``samples``.
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = random.Random(seed)
    counts = [[0] * p.m for _ in range(p.n)]
    base = list(range(p.n))
    for _ in range(samples):
        order = base[:]
        rng.shuffle(order)
        for voter, c in serial_dictatorship(p, order, k).items():
            counts[voter][c] += 1
    shares = tuple(
        tuple(Fraction(counts[i][c], samples) for c in range(p.m)) for i in range(p.n)
    )
    return FractionalAssignment(shares)
