"""Domination graphs, fractional perfect matchings, and their certificates.

The central question: given a candidate c, can the voters be fractionally
matched to candidates so that every voter only uses candidates they rank
weakly below c, every voter hands out total weight 1, and every candidate
receives exactly n/m?  Scaling by m turns this into an integral max-flow
problem: voter supply m, candidate capacity n, and a perfect matching exists
iff the max flow is n*m.

When no matching exists, a Hall-style deficiency witness falls out of the
min cut: a voter set N' whose jointly dominated candidates D satisfy
|D| < m*|N'|/n.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .profiles import PreferenceProfile, dominated_set


class Dinic:
    """Max flow with integer capacities, deterministic given insertion order."""

    def __init__(self, num_nodes: int) -> None:
        self.graph: list[list[list[int]]] = [[] for _ in range(num_nodes)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        # forward edge stores [target, capacity, index of reverse edge]
        self.graph[u].append([v, cap, len(self.graph[v])])
        self.graph[v].append([u, 0, len(self.graph[u]) - 1])

    def _bfs(self, s: int, t: int) -> bool:
        self.level = [-1] * len(self.graph)
        self.level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _ in self.graph[u]:
                if cap > 0 and self.level[v] < 0:
                    self.level[v] = self.level[u] + 1
                    queue.append(v)
        return self.level[t] >= 0

    def _dfs(self, u: int, t: int, pushed: int) -> int:
        if u == t:
            return pushed
        while self.it[u] < len(self.graph[u]):
            edge = self.graph[u][self.it[u]]
            v, cap, rev = edge
            if cap > 0 and self.level[v] == self.level[u] + 1:
                flowed = self._dfs(v, t, min(pushed, cap))
                if flowed > 0:
                    edge[1] -= flowed
                    self.graph[v][rev][1] += flowed
                    return flowed
            self.it[u] += 1
        return 0

    def max_flow(self, s: int, t: int) -> int:
        total = 0
        while self._bfs(s, t):
            self.it = [0] * len(self.graph)
            while True:
                pushed = self._dfs(s, t, 1 << 62)
                if pushed == 0:
                    break
                total += pushed
        return total

    def reachable_in_residual(self, s: int) -> frozenset[int]:
        """Nodes reachable from s using edges with leftover capacity."""
        seen = {s}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _ in self.graph[u]:
                if cap > 0 and v not in seen:
                    seen.add(v)
                    queue.append(v)
        return frozenset(seen)


@dataclass(frozen=True)
class DominationGraph:
    """Bipartite graph for candidate c: voter i is adjacent to every candidate
    they rank weakly below c (always including c itself)."""

    candidate: int
    n: int
    m: int
    edges: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if len(self.edges) != self.n:
            raise ValueError("need one edge set per voter")
        for i, adj in enumerate(self.edges):
            if self.candidate not in adj:
                raise ValueError(f"voter {i} must be adjacent to the pivot candidate")
            if any(c < 0 or c >= self.m for c in adj):
                raise ValueError("edge endpoint out of range")


def build_domination_graph(p: PreferenceProfile, c: int) -> DominationGraph:
    pos = p.positions()
    edges = tuple(
        frozenset(p.rankings[i][pos[i][c]:]) for i in range(p.n)
    )
    return DominationGraph(c, p.n, p.m, edges)


@dataclass(frozen=True)
class FlowNetwork:
    """The scaled bipartite network: every left node supplies ``left_supply``
    units, every right node absorbs at most ``right_cap``."""

    num_left: int
    num_right: int
    edges: tuple[frozenset[int], ...]
    left_supply: int
    right_cap: int

    def solve(self) -> tuple[int, Dinic]:
        source = 0
        sink = self.num_left + self.num_right + 1
        dinic = Dinic(sink + 1)
        big = self.left_supply
        for i in range(self.num_left):
            dinic.add_edge(source, 1 + i, self.left_supply)
        for i in range(self.num_left):
            for c in sorted(self.edges[i]):
                dinic.add_edge(1 + i, 1 + self.num_left + c, big)
        for c in range(self.num_right):
            dinic.add_edge(1 + self.num_left + c, sink, self.right_cap)
        value = dinic.max_flow(source, sink)
        return value, dinic


def domination_flow_network(g: DominationGraph) -> FlowNetwork:
    return FlowNetwork(g.n, g.m, g.edges, left_supply=g.m, right_cap=g.n)


def has_fractional_perfect_matching(g: DominationGraph) -> bool:
    """True iff weight 1 per voter can be spread over dominated candidates
    with every candidate receiving exactly n/m."""
    net = domination_flow_network(g)
    value, _ = net.solve()
    return value == g.n * g.m


def fractional_matching(g: DominationGraph) -> tuple[tuple[Fraction, ...], ...] | None:
    """The matching itself, row i giving voter i's weights, or None if infeasible."""
    net = domination_flow_network(g)
    value, dinic = net.solve()
    if value != g.n * g.m:
        return None
    rows = []
    for i in range(g.n):
        row = [Fraction(0)] * g.m
        for v, cap, _ in dinic.graph[1 + i]:
            if 1 + g.n <= v < 1 + g.n + g.m:
                sent = g.m - cap  # original capacity minus residual
                if sent > 0:
                    row[v - 1 - g.n] = Fraction(sent, g.m)
        rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class CutWitness:
    """A Hall violation: the voters in ``voters`` jointly dominate only
    ``dominated``, and |dominated| < m * |voters| / n."""

    voters: frozenset[int]
    dominated: frozenset[int]

    def validate(self, p: PreferenceProfile, c: int) -> None:
        if not self.voters:
            raise ValueError("witness voter set is empty")
        if self.dominated != dominated_set(p, c, self.voters):
            raise ValueError("dominated set does not match the profile")
        # strict inequality, cross-multiplied to stay in integers
        if len(self.dominated) * p.n >= p.m * len(self.voters):
            raise ValueError("witness does not violate the Hall condition")


def extract_deficiency_witness(p: PreferenceProfile, c: int) -> CutWitness | None:
    """A deficient voter set for candidate c, or None when a matching exists.

    The witness is read off the min cut: voters still reachable from the
    source in the residual network.
    """
    g = build_domination_graph(p, c)
    net = domination_flow_network(g)
    value, dinic = net.solve()
    if value == g.n * g.m:
        return None
    reachable = dinic.reachable_in_residual(0)
    voters = frozenset(i for i in range(g.n) if 1 + i in reachable)
    witness = CutWitness(voters, dominated_set(p, c, voters))
    witness.validate(p, c)
    return witness


def max_bipartite_matching(adjacency: Sequence[Iterable[int]]) -> dict[int, int]:
    """Maximum one-to-one matching, left index -> right index, by augmenting paths."""
    adj = [sorted(set(row)) for row in adjacency]
    match_right: dict[int, int] = {}

    def try_assign(i: int, visited: set[int]) -> bool:
        for c in adj[i]:
            if c in visited:
                continue
            visited.add(c)
            if c not in match_right or try_assign(match_right[c], visited):
                match_right[c] = i
                return True
        return False

    for i in range(len(adj)):
        try_assign(i, set())
    return {i: c for c, i in match_right.items()}


def hall_check_bruteforce(g: DominationGraph) -> bool:
    """Check |D(N')| >= m|N'|/n over all nonempty voter subsets directly."""
    if g.n > 20:
        raise ValueError("subset enumeration is limited to 20 voters")
    masks = [0] * g.n
    for i, adj in enumerate(g.edges):
        for c in adj:
            masks[i] |= 1 << c
    for sub in range(1, 1 << g.n):
        union = 0
        size = 0
        for i in range(g.n):
            if sub >> i & 1:
                union |= masks[i]
                size += 1
        if union.bit_count() * g.n < g.m * size:
            return False
    return True
