"""All winners of Ranked Pairs under every tiebreaking order.

Two searches are provided. The naive one locks one edge of the heaviest
pending tier per step. The maximal-children (MC) one processes a whole tier
per step, branching over every maximal acyclic way to add that tier's edges,
optionally splitting the work across strongly connected components.

Locked graphs are held as tuples of successor bitmasks, with a parallel
integer edge mask (bit ``a * m + b`` for edge ``a -> b``) used as cache key.
"""

from __future__ import annotations

import itertools
from typing import Callable, Iterable

import numpy as np

from .core import Profile
from .graph import (
    DiGraph,
    TierPartition,
    add_edge,
    build_wmg,
    creates_cycle_mask,
    iter_bits,
    reach_mask,
    sources_mask,
    tarjan_masks,
    tier_partition,
)
from .priority import mask_priority, push_order
from .report import WinnerReport, _Recorder
from .stv import resolve_samples

DEFAULT_SAMPLES = 200


def _edge_bit(m: int, e) -> int:
    return 1 << (e[0] * m + e[1])


def _mask_edges(m: int, mask: int) -> frozenset:
    return frozenset(divmod(i, m) for i in iter_bits(mask))


def _graph_from(m: int, mask: int) -> DiGraph:
    return DiGraph(m, _mask_edges(m, mask))


def _succ_from_edges(m: int, edges) -> tuple[int, ...]:
    succ = [0] * m
    for a, b in edges:
        succ[a] |= 1 << b
    return tuple(succ)


# -- maximal children ----------------------------------------------------------

def _max_children(m: int, succ, mask: int, tier, prune=None, priority=None, limit=None):
    """Maximal children of (succ, tier) as a list of (succ, edge mask).

    Tier edges are decided in order: an edge that closes a cycle is skipped,
    any other is either locked or left out. Leaving an edge out is only
    explored while the edges still undecided could yet close a cycle through
    it, and a leaf is kept when every left-out edge does. Each maximal child
    is therefore produced exactly once.

    ``prune(succ)`` returning True drops a partial child and everything
    below it. ``priority(succ)`` orders the two branches. The search stops
    early once ``limit`` children are found.
    """
    # a pair's two directions are decided back to back
    tier = sorted((e for e in tier if not mask & _edge_bit(m, e)),
                  key=lambda e: (min(e), max(e), e[0] > e[1]))
    children = []
    stack = [(succ, mask, 0, ())]
    while stack:
        succ, mask, i, left_out = stack.pop()
        if prune is not None and prune(succ):
            continue
        while i < len(tier) and creates_cycle_mask(succ, *tier[i]):
            i += 1
        if i == len(tier):
            if all(creates_cycle_mask(succ, *e) for e in left_out):
                children.append((succ, mask))
                if limit is not None and len(children) >= limit:
                    break
            continue
        e = tier[i]
        branches = [(add_edge(succ, *e), mask | _edge_bit(m, e), i + 1, left_out)]
        # leaving e out needs a path back from its head to its tail in the end
        skipped = left_out + (e,)
        hope = list(succ)
        for a, b in tier[i + 1:]:
            if not creates_cycle_mask(succ, a, b):
                hope[a] |= 1 << b
        if all(reach_mask(hope, b) >> a & 1 for a, b in skipped):
            branches.append((succ, mask, i + 1, skipped))
        values = None if priority is None else [priority(b[0]) for b in branches]
        stack.extend(push_order(branches, values))
    return children


def _max_children_scc(m: int, succ, mask: int, tier, prune=None, priority=None):
    """Same result as :func:`_max_children`, assembled per strongly connected component."""
    tier = tuple(e for e in tier if not mask & _edge_bit(m, e))
    h = list(succ)
    for a, b in tier:
        h[a] |= 1 << b
    comps = tarjan_masks(h, m)
    if len(comps) == 1:
        return _max_children(m, succ, mask, tier, prune, priority)
    comp_of = {}
    for c in comps:
        for v in iter_bits(c):
            comp_of[v] = c
    base_mask = mask
    inside: dict[int, list] = {}
    for e in tier:
        ca, cb = comp_of[e[0]], comp_of[e[1]]
        if ca != cb:
            base_mask |= _edge_bit(m, e)  # bridge edge, never on a cycle
        else:
            inside.setdefault(ca, []).append(e)
    per_comp = []
    for comp, edges in sorted(inside.items()):
        sub_succ = tuple(succ[v] & comp if comp >> v & 1 else 0 for v in range(m))
        sub_mask = 0
        for v in iter_bits(comp):
            for u in iter_bits(sub_succ[v]):
                sub_mask |= 1 << (v * m + u)
        kids = _max_children(m, sub_succ, sub_mask, edges)
        per_comp.append([k_mask & ~sub_mask for _, k_mask in kids])
    children = []
    for combo in itertools.product(*per_comp):
        full = base_mask
        for added in combo:
            full |= added
        children.append((_succ_from_edges(m, _mask_edges(m, full)), full))
    return children


def _check_input(g: DiGraph, t: Iterable) -> tuple:
    if not g.is_acyclic():
        raise ValueError("max children need an acyclic base graph")
    t = tuple(sorted({(int(a), int(b)) for a, b in t}))
    for a, b in t:
        if a == b or not (0 <= a < g.m and 0 <= b < g.m):
            raise ValueError(f"invalid edge {(a, b)}")
    return t


def max_children(g: DiGraph, t: Iterable) -> set[DiGraph]:
    """Every maximal child of ``(g, t)``.

    A maximal child adds a subset of ``t`` to ``g``, stays acyclic, and
    cannot take any further edge of ``t`` without closing a cycle.
    """
    t = _check_input(g, t)
    m = g.m
    mask = sum(_edge_bit(m, e) for e in g.edges)
    kids = _max_children(m, g.succ_masks(), mask, t)
    return {_graph_from(m, k) for _, k in kids}


def max_children_scc(g: DiGraph, t: Iterable) -> set[DiGraph]:
    """:func:`max_children` computed via SCC decomposition of ``g + t``.

    Edges of ``t`` between components are always added; each component's
    maximal children are found independently (edges of ``g`` inside it are
    already locked) and combined by Cartesian product.
    """
    t = _check_input(g, t)
    m = g.m
    mask = sum(_edge_bit(m, e) for e in g.edges)
    kids = _max_children_scc(m, g.succ_masks(), mask, t)
    return {_graph_from(m, k) for _, k in kids}


# -- searches ----------------------------------------------------------------

class _Search:
    """State shared by both RP searches for one profile."""

    def __init__(self, profile: Profile, priority, scorer, samples, seed,
                 prune, cache, max_cache, max_nodes):
        if profile.m < 1:
            raise ValueError("profile has no alternatives")
        self.m = profile.m
        self.tiers = tier_partition(build_wmg(profile))
        self.rec = _Recorder()
        self.report = self.rec.report
        self.prio = mask_priority(priority, profile, "rp", scorer)
        self.prune_on = prune
        self.cache_on = cache
        self.max_cache = max_cache
        self.max_nodes = max_nodes
        self.visited: set = set()
        self.nodes = 0
        k = resolve_samples(samples, DEFAULT_SAMPLES)
        if k:
            rng = np.random.default_rng(seed)
            for top in _sample_runs(self.m, self.tiers, k, rng):
                for w in iter_bits(top):
                    self.rec.add(w, 0)
                if top & (top - 1):
                    self.report.multi_source = True
            self.report.samples = k

    def priority_of(self, succ) -> float | None:
        if self.prio is None:
            return None
        return self.prio(sources_mask(succ, self.m), self.rec.mask)

    def prune(self, succ) -> bool:
        """Both pruning rules; rule (ii) records its winner."""
        top = sources_mask(succ, self.m)
        if not top & (top - 1):
            self.rec.add(top.bit_length() - 1, self.nodes)
            return True
        return top & ~self.rec.mask == 0

    def leaf(self, succ):
        top = sources_mask(succ, self.m)
        if top & (top - 1):
            self.report.multi_source = True
        for w in iter_bits(top):
            self.rec.add(w, self.nodes)

    def enter(self, key) -> bool:
        """Count a pop; False means skip it (budget, cache)."""
        self.nodes += 1
        if self.cache_on:
            if key in self.visited:
                self.report.cache_hits += 1
                return False
            if self.max_cache is not None and len(self.visited) >= self.max_cache:
                self.visited.clear()
                self.report.cache_clears += 1
            self.visited.add(key)
        return True

    def pruned(self, succ) -> bool:
        if self.prune_on and self.prune(succ):
            self.report.nodes_pruned += 1
            return True
        return False

    def out_of_budget(self) -> bool:
        if self.max_nodes is not None and self.nodes >= self.max_nodes:
            self.report.complete = False
            return True
        return False

    def push(self, stack, children):
        values = None
        if self.prio is not None:
            values = [self.priority_of(c[0]) for c in children]
        stack.extend(push_order(children, values))

    def finish(self) -> WinnerReport:
        self.report.nodes_expanded = self.nodes
        return self.rec.finish()


def solve_put_rp_naive(profile: Profile, *, priority: str = "none", scorer=None,
                       samples=0, seed=None, prune: bool = True, cache: bool = True,
                       max_cache: int | None = None,
                       max_nodes: int | None = None) -> WinnerReport:
    """PUT winners of Ranked Pairs, locking one edge per search step.

    Each step takes the heaviest tier with an edge that can still be locked
    without a cycle and branches on which such edge is locked next.
    Options are as for :func:`putwinners.stv.solve_put_stv`; ``samples="auto"``
    means 200 runs. Candidate winners for the priority are the sources of
    the locked graph.
    """
    s = _Search(profile, priority, scorer, samples, seed, prune, cache, max_cache, max_nodes)
    m, tiers = s.m, s.tiers
    stack = [((0,) * m, 0, 0)]
    while stack:
        if s.out_of_budget():
            break
        succ, mask, t = stack.pop()
        if not s.enter(mask) or s.pruned(succ):
            continue
        addable = ()
        while t < len(tiers):
            addable = tuple(e for e in tiers[t].edges
                            if not mask & _edge_bit(m, e) and not creates_cycle_mask(succ, *e))
            if addable:
                break
            t += 1
        if not addable:
            s.leaf(succ)
            continue
        children = [(add_edge(succ, *e), mask | _edge_bit(m, e), t) for e in addable]
        s.push(stack, children)
    return s.finish()


def solve_put_rp_mc(profile: Profile, *, scc: bool = True, priority: str = "none",
                    scorer=None, samples=0, seed=None, prune: bool = True,
                    cache: bool = True, max_cache: int | None = None,
                    max_nodes: int | None = None) -> WinnerReport:
    """PUT winners of Ranked Pairs, one whole tier per search step.

    Children of a state are its maximal children for the heaviest pending
    tier. ``scc=True`` computes them per strongly connected component.
    Other options as in :func:`solve_put_rp_naive`.
    """
    s = _Search(profile, priority, scorer, samples, seed, prune, cache, max_cache, max_nodes)
    m, tiers = s.m, s.tiers
    children_of = _max_children_scc if scc else _max_children
    inner_prune = s.prune if prune else None
    inner_prio = s.priority_of if s.prio is not None else None
    stack = [((0,) * m, 0, 0)]
    while stack:
        if s.out_of_budget():
            break
        succ, mask, t = stack.pop()
        if not s.enter(mask) or s.pruned(succ):
            continue
        if t == len(tiers):
            s.leaf(succ)
            continue
        kids = children_of(m, succ, mask, tiers[t].edges, inner_prune, inner_prio)
        s.push(stack, [(k_succ, k_mask, t + 1) for k_succ, k_mask in kids])
    return s.finish()


# -- sampling ----------------------------------------------------------------

def _run_rp(m: int, tiers: TierPartition, rng) -> int:
    succ = (0,) * m
    for tier in tiers:
        for i in rng.permutation(len(tier.edges)):
            a, b = tier.edges[i]
            if not creates_cycle_mask(succ, a, b):
                succ = add_edge(succ, a, b)
    return sources_mask(succ, m)


def _sample_runs(m: int, tiers: TierPartition, k: int, rng):
    for _ in range(k):
        yield _run_rp(m, tiers, rng)


def sample_rp(profile: Profile, k: int = DEFAULT_SAMPLES, seed=None) -> set[int]:
    """Union of RP winners over ``k`` runs, each shuffling every tier uniformly."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if profile.m == 0:
        return set()
    rng = np.random.default_rng(seed)
    tiers = tier_partition(build_wmg(profile))
    out: set[int] = set()
    for top in _sample_runs(profile.m, tiers, k, rng):
        out.update(iter_bits(top))
    return out
