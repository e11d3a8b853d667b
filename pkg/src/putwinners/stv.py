"""All winners of STV under every tiebreaking order, by pruned depth-first search.

A search state is the set of remaining alternatives, held as a bitmask.
Expanding a state eliminates, in turn, each alternative tied for the lowest
plurality score.
"""

from __future__ import annotations

import numpy as np

from .core import Profile
from .graph import iter_bits
from .priority import mask_priority, push_order
from .report import WinnerReport, _Recorder

SAMPLES_PER_ALTERNATIVE = 20


def _plurality(votes, mask: int, m: int) -> list[int]:
    scores = [0] * m
    for count, ranking in votes:
        for a in ranking:
            if mask >> a & 1:
                scores[a] += count
                break
    return scores


def _lowest(votes, mask: int, m: int) -> list[int]:
    """Alternatives in ``mask`` tied for the lowest plurality score, ascending."""
    scores = _plurality(votes, mask, m)
    alive = list(iter_bits(mask))
    low = min(scores[a] for a in alive)
    return [a for a in alive if scores[a] == low]


def _run_fixed_order(votes, m: int, rank: list[int]) -> int:
    """STV winner when ties eliminate the tied alternative with the largest ``rank``."""
    mask = (1 << m) - 1
    while mask & (mask - 1):
        tied = _lowest(votes, mask, m)
        mask &= ~(1 << max(tied, key=lambda a: rank[a]))
    return mask.bit_length() - 1


def _sample_winners(profile: Profile, k: int, rng):
    for _ in range(k):
        order = rng.permutation(profile.m)
        rank = [0] * profile.m
        for pos, a in enumerate(order):
            rank[int(a)] = pos
        yield _run_fixed_order(profile.votes, profile.m, rank)


def sample_stv(profile: Profile, k: int, seed=None) -> set[int]:
    """Union of STV winners over ``k`` uniformly random tiebreaking orders.

    Each run draws a priority order over alternatives (numpy ``default_rng``)
    and, whenever several alternatives tie for last, eliminates the one
    ranked lowest in that order. Always a subset of the PUT winners.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if profile.m == 0:
        return set()
    rng = np.random.default_rng(seed)
    return set(_sample_winners(profile, k, rng))


def resolve_samples(samples, default: int) -> int:
    if samples in ("auto", "default"):
        return default
    samples = int(samples)
    if samples < 0:
        raise ValueError("sample count must be non-negative")
    return samples


def solve_put_stv(profile: Profile, *, priority: str = "none", scorer=None,
                  samples=0, seed=None, prune: bool = True, cache: bool = True,
                  max_cache: int | None = None, max_nodes: int | None = None) -> WinnerReport:
    """Compute every alternative that wins STV under some tiebreaking.

    Parameters
    ----------
    priority : {"none", "lp", "lpml"}
        Order in which tied eliminations are explored. With ``"none"`` the
        eliminated alternative is tried in increasing index order.
    scorer : object with ``scores(profile, context)``, optional
        Winner-probability model for ``"lpml"``; uniform when omitted.
        Scores are computed once on the full profile.
    samples : int or "auto"
        Random tiebreaking runs before the search; ``"auto"`` means ``20 m``.
    prune : bool
        Skip states whose remaining alternatives are all known winners.
    cache : bool
        Skip states already expanded. ``max_cache`` bounds the visited set;
        it is cleared when full.
    max_nodes : int, optional
        Stop after this many node expansions; the report is then marked
        incomplete and holds the winners found so far.
    """
    m = profile.m
    if m < 1:
        raise ValueError("profile has no alternatives")
    votes = profile.votes
    rec = _Recorder()
    report = rec.report
    prio = mask_priority(priority, profile, "stv", scorer)

    k = resolve_samples(samples, SAMPLES_PER_ALTERNATIVE * m)
    if k:
        rng = np.random.default_rng(seed)
        for w in _sample_winners(profile, k, rng):
            rec.add(w, 0)
        report.samples = k

    visited: set[int] = set()
    stack = [(1 << m) - 1]
    nodes = 0
    while stack:
        if max_nodes is not None and nodes >= max_nodes:
            report.complete = False
            break
        state = stack.pop()
        nodes += 1
        if not state & (state - 1):
            rec.add(state.bit_length() - 1, nodes)
            continue
        if cache and state in visited:
            report.cache_hits += 1
            continue
        if prune and state & ~rec.mask == 0:
            report.nodes_pruned += 1
            continue
        if cache:
            if max_cache is not None and len(visited) >= max_cache:
                visited.clear()
                report.cache_clears += 1
            visited.add(state)
        children = [state & ~(1 << c) for c in _lowest(votes, state, m)]
        values = None if prio is None else [prio(ch, rec.mask) for ch in children]
        stack.extend(push_order(children, values))

    report.nodes_expanded = nodes
    return rec.finish()
