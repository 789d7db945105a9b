"""Preference profiles and the basic operations every other module builds on.

A profile is a list of strict rankings over a common candidate set.  Candidates
are handled as integer indices everywhere; display names live alongside in
``candidate_names`` and only matter for parsing and printing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class PreferenceProfile:
    """An ordinal election: ``rankings[i]`` is voter i's strict order, best first.

    Every ranking must be a permutation of ``range(m)`` where
    ``m == len(candidate_names)``.
    """

    rankings: tuple[tuple[int, ...], ...]
    candidate_names: tuple[str, ...]

    def __post_init__(self) -> None:
        m = len(self.candidate_names)
        if m == 0:
            raise ValueError("profile needs at least one candidate")
        if len(self.rankings) == 0:
            raise ValueError("profile needs at least one voter")
        for name in self.candidate_names:
            # names must survive a round trip through the text format
            if not name or any(ch.isspace() for ch in name) or ">" in name or "," in name:
                raise ValueError(f"bad candidate name: {name!r}")
        if len(set(self.candidate_names)) != m:
            raise ValueError("duplicate candidate names")
        full = frozenset(range(m))
        for i, ranking in enumerate(self.rankings):
            if len(ranking) != m or frozenset(ranking) != full:
                raise ValueError(f"ranking of voter {i} is not a permutation of 0..{m - 1}")

    @classmethod
    def of(
        cls,
        rankings: Iterable[Iterable[int]],
        candidate_names: Sequence[str] | None = None,
    ) -> "PreferenceProfile":
        """Build a profile from index rankings, defaulting names to c1, c2, ..."""
        rk = tuple(tuple(r) for r in rankings)
        if candidate_names is None:
            m = len(rk[0]) if rk else 0
            candidate_names = tuple(f"c{j + 1}" for j in range(m))
        return cls(rk, tuple(candidate_names))

    @property
    def n(self) -> int:
        return len(self.rankings)

    @property
    def m(self) -> int:
        return len(self.candidate_names)

    def positions(self) -> tuple[tuple[int, ...], ...]:
        """``positions()[i][c]`` is the rank of candidate c for voter i, 0 = best."""
        cached = self.__dict__.get("_positions")
        if cached is None:
            pos = []
            for ranking in self.rankings:
                row = [0] * self.m
                for rank, c in enumerate(ranking):
                    row[c] = rank
                pos.append(tuple(row))
            cached = tuple(pos)
            object.__setattr__(self, "_positions", cached)
        return cached

    def prefers(self, voter: int, a: int, b: int) -> bool:
        """True iff voter ranks a strictly above b."""
        pos = self.positions()[voter]
        return pos[a] < pos[b]

    def name_index(self, name: str) -> int:
        try:
            return self.candidate_names.index(name)
        except ValueError:
            raise KeyError(f"unknown candidate name: {name!r}") from None


def reverse_profile(p: PreferenceProfile) -> PreferenceProfile:
    """Flip every ranking, so each voter's worst candidate becomes their best."""
    return PreferenceProfile(
        tuple(tuple(reversed(r)) for r in p.rankings),
        p.candidate_names,
    )


def plurality_scores(p: PreferenceProfile) -> tuple[int, ...]:
    """Number of first-place appearances of each candidate."""
    scores = [0] * p.m
    for ranking in p.rankings:
        scores[ranking[0]] += 1
    return tuple(scores)


def top_choice(p: PreferenceProfile, voter: int) -> int:
    return p.rankings[voter][0]


def bottom_choice(p: PreferenceProfile, voter: int, remaining: frozenset[int] | None = None) -> int:
    """Voter's least preferred candidate, restricted to ``remaining`` if given."""
    ranking = p.rankings[voter]
    if remaining is None:
        return ranking[-1]
    if not remaining:
        raise ValueError("remaining set is empty")
    for c in reversed(ranking):
        if c in remaining:
            return c
    raise ValueError("remaining contains no candidate of the profile")


@dataclass(frozen=True)
class CloneExpansion:
    """A profile rewritten over clones of the original candidates.

    ``frequency[c]`` copies of candidate c appear in the expanded profile;
    candidates with frequency zero are deleted.  ``origin[e]`` maps expanded
    candidate e back to the original index, and ``clones[c]`` lists the
    expanded indices of c's copies in ranking order.
    """

    original: PreferenceProfile
    expanded: PreferenceProfile
    frequency: tuple[int, ...]
    origin: tuple[int, ...]
    clones: tuple[tuple[int, ...], ...]


def clone_expand(p: PreferenceProfile, frequency: Sequence[int]) -> CloneExpansion:
    """Replace each candidate c by ``frequency[c]`` adjacent clones.

    Each voter ranks the clone block of c exactly where c was, clones in
    index order within the block.  Candidates with zero frequency disappear
    from every ranking.  At least one frequency must be positive.
    """
    if len(frequency) != p.m:
        raise ValueError("frequency vector length must match the candidate count")
    if any(f < 0 for f in frequency):
        raise ValueError("frequencies must be nonnegative")
    if sum(frequency) == 0:
        raise ValueError("at least one candidate must keep a positive frequency")

    clones: list[tuple[int, ...]] = []
    origin: list[int] = []
    names: list[str] = []
    next_id = 0
    for c, f in enumerate(frequency):
        block = tuple(range(next_id, next_id + f))
        clones.append(block)
        next_id += f
        for k in range(f):
            origin.append(c)
            names.append(f"{p.candidate_names[c]}#{k + 1}")

    expanded_rankings = tuple(
        tuple(e for c in ranking for e in clones[c]) for ranking in p.rankings
    )
    expanded = PreferenceProfile(expanded_rankings, tuple(names))
    return CloneExpansion(p, expanded, tuple(frequency), tuple(origin), tuple(clones))


def dominated_set(p: PreferenceProfile, c: int, voters: Iterable[int]) -> frozenset[int]:
    """Candidates that some voter in ``voters`` ranks weakly below c (c included)."""
    pos = p.positions()
    out: set[int] = set()
    for i in voters:
        cutoff = pos[i][c]
        out.update(p.rankings[i][cutoff:])
    return frozenset(out)


@dataclass(frozen=True)
class SolidCoalition:
    """A voter group that ranks the candidate set ``prefix_set`` above everything else.

    ``supporters`` is the maximal such group: every voter whose top
    ``len(prefix)`` candidates are exactly ``prefix``.
    """

    prefix_set: frozenset[int]
    supporters: frozenset[int]


def solid_coalitions(p: PreferenceProfile) -> tuple[SolidCoalition, ...]:
    """All candidate prefixes with their maximal supporter set, in first-appearance order."""
    supporters: dict[frozenset[int], set[int]] = {}
    order: list[frozenset[int]] = []
    for i, ranking in enumerate(p.rankings):
        for r in range(1, p.m + 1):
            prefix = frozenset(ranking[:r])
            if prefix not in supporters:
                supporters[prefix] = set()
                order.append(prefix)
            supporters[prefix].add(i)
    return tuple(SolidCoalition(pref, frozenset(supporters[pref])) for pref in order)


def all_profiles(n: int, m: int, candidate_names: Sequence[str] | None = None) -> Iterable[PreferenceProfile]:
    """Every profile with n voters over m candidates, in lexicographic order.

    There are (m!)^n of them, so keep n and m tiny.
    """
    perms = list(itertools.permutations(range(m)))
    for combo in itertools.product(perms, repeat=n):
        yield PreferenceProfile.of(combo, candidate_names)
