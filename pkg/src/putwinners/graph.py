"""Weighted majority graphs, tiers, and the digraph algorithms the RP code needs.

Public functions take :class:`DiGraph` values. The solvers work on a faster
representation: a tuple of successor bitmasks (``succ[v]`` has bit ``u`` set
when ``v -> u`` is locked). The ``*_mask`` helpers operate on that form.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .core import Profile, pairwise_margins

Edge = tuple[int, int]


@functools.total_ordering
class _NoPath:
    """Induced weight when no path exists; orders below every number."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NO_PATH"

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash("NO_PATH")


NO_PATH = _NoPath()


@dataclass(frozen=True)
class WeightedMajorityGraph:
    """Signed pairwise margins; ``weights[a, b] == -weights[b, a]``."""

    m: int
    weights: np.ndarray

    def weight(self, a: int, b: int) -> int:
        return int(self.weights[a, b])

    def nonnegative_edges(self) -> list[Edge]:
        """Edges of the nonnegative WMG; both directions when the margin is 0."""
        return [(a, b) for a in range(self.m) for b in range(self.m)
                if a != b and self.weights[a, b] >= 0]

    def to_text(self) -> str:
        """``a b w`` lines for every ordered pair, for fixtures and debugging."""
        return "".join(f"{a} {b} {self.weight(a, b)}\n"
                       for a in range(self.m) for b in range(self.m) if a != b)


def build_wmg(profile: Profile) -> WeightedMajorityGraph:
    w = pairwise_margins(profile)
    w.setflags(write=False)
    return WeightedMajorityGraph(profile.m, w)


@dataclass(frozen=True)
class Tier:
    weight: int
    edges: tuple[Edge, ...]


class TierPartition:
    """Nonnegative WMG edges grouped by weight, heaviest tier first.

    Edges inside a tier are sorted by ``(source, target)``.
    """

    def __init__(self, tiers: Iterable[Tier]):
        self.tiers = tuple(tiers)
        self.tier_of = {e: t for t, tier in enumerate(self.tiers) for e in tier.edges}

    def __len__(self):
        return len(self.tiers)

    def __iter__(self) -> Iterator[Tier]:
        return iter(self.tiers)

    def __getitem__(self, i) -> Tier:
        return self.tiers[i]

    @property
    def weights(self) -> list[int]:
        return [t.weight for t in self.tiers]

    def to_text(self) -> str:
        lines = []
        for t, tier in enumerate(self.tiers, 1):
            lines.append(f"# tier {t} weight {tier.weight}")
            lines += [f"{a} {b} {tier.weight}" for a, b in tier.edges]
        return "\n".join(lines) + "\n"


def tier_partition(wmg: WeightedMajorityGraph) -> TierPartition:
    by_weight: dict[int, list[Edge]] = {}
    for a, b in wmg.nonnegative_edges():
        by_weight.setdefault(wmg.weight(a, b), []).append((a, b))
    return TierPartition(Tier(w, tuple(sorted(by_weight[w])))
                         for w in sorted(by_weight, reverse=True))


@dataclass(frozen=True)
class DiGraph:
    """Vertices ``0 .. m-1`` and a set of directed edges (no self-loops)."""

    m: int
    edges: frozenset = frozenset()

    def __post_init__(self):
        edges = frozenset((int(a), int(b)) for a, b in self.edges)
        for a, b in edges:
            if a == b:
                raise ValueError(f"self-loop on {a}")
            if not (0 <= a < self.m and 0 <= b < self.m):
                raise ValueError(f"edge {(a, b)} out of range for m={self.m}")
        object.__setattr__(self, "edges", edges)

    def with_edges(self, extra: Iterable[Edge]) -> "DiGraph":
        return DiGraph(self.m, self.edges | frozenset(extra))

    def succ_masks(self) -> tuple[int, ...]:
        succ = [0] * self.m
        for a, b in self.edges:
            succ[a] |= 1 << b
        return tuple(succ)

    def is_acyclic(self) -> bool:
        return all(len(c) == 1 for c in scc_decompose(self)[0])


# -- bitmask primitives ------------------------------------------------------

def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def reach_mask(succ, start: int) -> int:
    """Bitmask of vertices reachable from ``start`` (including itself)."""
    seen = frontier = 1 << start
    while frontier:
        nxt = 0
        for v in iter_bits(frontier):
            nxt |= succ[v]
        frontier = nxt & ~seen
        seen |= frontier
    return seen


def creates_cycle_mask(succ, u: int, v: int) -> bool:
    return u == v or bool(reach_mask(succ, v) >> u & 1)


def sources_mask(succ, m: int) -> int:
    has_pred = 0
    for s in succ:
        has_pred |= s
    return ((1 << m) - 1) & ~has_pred


def add_edge(succ: tuple[int, ...], u: int, v: int) -> tuple[int, ...]:
    out = list(succ)
    out[u] |= 1 << v
    return tuple(out)


def tarjan_masks(succ, m: int) -> list[int]:
    """Strongly connected components as vertex bitmasks (iterative Tarjan)."""
    index = [-1] * m
    low = [0] * m
    on_stack = [False] * m
    stack: list[int] = []
    comps: list[int] = []
    counter = 0
    for root in range(m):
        if index[root] != -1:
            continue
        work = [(root, list(iter_bits(succ[root])))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, children = work[-1]
            if children:
                w = children.pop()
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, list(iter_bits(succ[w]))))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                comp = 0
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp |= 1 << w
                    if w == v:
                        break
                comps.append(comp)
    return comps


# -- public graph operations -------------------------------------------------

def creates_cycle(g: DiGraph, e: Edge) -> bool:
    """Whether adding ``e`` to the acyclic graph ``g`` closes a directed cycle."""
    u, v = e
    return creates_cycle_mask(g.succ_masks(), u, v)


def scc_decompose(g: DiGraph) -> tuple[list[frozenset], frozenset]:
    """Split ``g`` into SCCs and bridge edges (edges joining two SCCs).

    SCCs are returned sorted by their smallest vertex.
    """
    comps = tarjan_masks(g.succ_masks(), g.m)
    comp_of = {}
    for c in comps:
        for v in iter_bits(c):
            comp_of[v] = c
    sccs = sorted((frozenset(iter_bits(c)) for c in comps), key=min)
    bridges = frozenset(e for e in g.edges if comp_of[e[0]] != comp_of[e[1]])
    return sccs, bridges


def sources(g: DiGraph) -> set[int]:
    """Vertices of indegree 0."""
    return set(iter_bits(sources_mask(g.succ_masks(), g.m)))


def induced_weight(wmg: WeightedMajorityGraph, g: DiGraph, a: int, b: int):
    """Widest-path value from ``a`` to ``b`` in ``g`` under WMG weights.

    The value of a path is its minimum edge weight; the result is the
    maximum over all ``a -> b`` paths, or :data:`NO_PATH`.
    """
    if a == b:
        raise ValueError("induced weight needs two distinct vertices")
    adj: dict[int, list[int]] = {}
    for u, v in g.edges:
        adj.setdefault(u, []).append(v)
    # Bottleneck Dijkstra: settle vertices in decreasing order of best value.
    best = {a: None}  # None marks "unbounded" at the source
    settled = set()
    while True:
        frontier = [(v, val) for v, val in best.items() if v not in settled]
        if not frontier:
            return NO_PATH
        v, val = max(frontier, key=lambda kv: (kv[1] is None, kv[1] if kv[1] is not None else 0))
        if v == b:
            return val
        settled.add(v)
        for u in adj.get(v, ()):
            w = wmg.weight(v, u)
            cand = w if val is None else min(val, w)
            if u not in settled and (u not in best or best[u] < cand):
                best[u] = cand
