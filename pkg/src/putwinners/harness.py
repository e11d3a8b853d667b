"""Brute-force oracles, hard-profile mining, and the benchmark runner."""

from __future__ import annotations

import csv
import io
import itertools
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .core import Profile, generate_impartial_culture, plurality_scores
from .graph import DiGraph, build_wmg, induced_weight, tier_partition
from .report import DiscoveryLog, alpha_discovery  # noqa: F401  (re-exported)

STV_ORACLE_CAP = 7
RP_ORACLE_CAP = 5
HARD_RULE_VERSION = "branch-v1"
BENCH_SCHEMA_VERSION = 1


class ResourceCapError(RuntimeError):
    """An input exceeds a configured size cap."""


def _check_cap(profile: Profile, cap: int | None, default: int):
    cap = default if cap is None else cap
    if profile.m > cap:
        raise ResourceCapError(f"m={profile.m} exceeds the oracle cap of {cap}")


def brute_force_stv(profile: Profile, cap: int | None = None) -> set[int]:
    """PUT-STV winners by trying every elimination order.

    An order is valid when each eliminated alternative has a minimal
    plurality score among those still standing. Only
    :func:`putwinners.core.plurality_scores` is shared with the solver.
    """
    _check_cap(profile, cap, STV_ORACLE_CAP)
    m = profile.m
    if m < 1:
        raise ValueError("profile has no alternatives")
    winners = set()
    for order in itertools.permutations(range(m)):
        remaining = set(range(m))
        for loser in order[:-1]:
            scores = plurality_scores(profile, remaining)
            if scores[loser] != min(scores.values()):
                break
            remaining.discard(loser)
        else:
            winners.add(order[-1])
    return winners


def ranking_graph(wmg, ranking) -> DiGraph:
    """Every nonnegative-WMG edge that agrees with ``ranking``."""
    pos = {a: i for i, a in enumerate(ranking)}
    return DiGraph(wmg.m, frozenset(e for e in wmg.nonnegative_edges() if pos[e[0]] < pos[e[1]]))


def is_rp_outcome(wmg, ranking) -> bool:
    """Whether ``ranking`` is a possible Ranked Pairs outcome.

    Checks that for every ``i`` above ``j`` the widest ``i -> j`` path in the
    ranking's graph weighs at least the margin of ``j`` over ``i``.
    """
    g = ranking_graph(wmg, ranking)
    for x, i in enumerate(ranking):
        for j in ranking[x + 1:]:
            if not induced_weight(wmg, g, i, j) >= wmg.weight(j, i):
                return False
    return True


def brute_force_rp(profile: Profile, cap: int | None = None) -> set[int]:
    """PUT-RP winners: tops of every ranking that passes :func:`is_rp_outcome`."""
    _check_cap(profile, cap, RP_ORACLE_CAP)
    if profile.m < 1:
        raise ValueError("profile has no alternatives")
    wmg = build_wmg(profile)
    return {r[0] for r in itertools.permutations(range(profile.m)) if is_rp_outcome(wmg, r)}


# -- hard profiles -------------------------------------------------------------

def stv_branches(profile: Profile) -> bool:
    """True if some reachable STV round has two or more alternatives tied for last."""
    from .stv import _lowest

    m = profile.m
    stack, seen = [(1 << m) - 1], set()
    while stack:
        state = stack.pop()
        if not state & (state - 1) or state in seen:
            continue
        seen.add(state)
        lowest = _lowest(profile.votes, state, m)
        if len(lowest) > 1:
            return True
        stack.append(state & ~(1 << lowest[0]))
    return False


def rp_branches(profile: Profile) -> bool:
    """True if some tier, on some reachable path, has two or more maximal children."""
    from .rp import _max_children

    m = profile.m
    tiers = tier_partition(build_wmg(profile))
    succ, mask = (0,) * m, 0
    for tier in tiers:
        kids = _max_children(m, succ, mask, tier.edges, limit=2)
        if len(kids) > 1:
            return True
        succ, mask = kids[0]
    return False


def is_hard(profile: Profile, rule: str) -> bool:
    if rule == "stv":
        return stv_branches(profile)
    if rule == "rp":
        return rp_branches(profile)
    raise ValueError(f"unknown rule {rule!r}")


def mine_hard_profiles(m: int, n: int, count: int, seed: int, rule: str,
                       max_tries: int | None = None) -> list[Profile]:
    """Impartial-culture profiles on which the search must branch on a tie.

    Candidate ``i`` is drawn with seed ``(seed, i)``; the first ``count``
    hard ones are kept, so the output depends only on the arguments.
    """
    out = []
    max_tries = max_tries if max_tries is not None else 1000 * max(count, 1)
    for i in range(max_tries):
        if len(out) == count:
            break
        p = generate_impartial_culture(m, n, np.random.SeedSequence([seed, i]).generate_state(1)[0])
        if is_hard(p, rule):
            out.append(p)
    if len(out) < count:
        raise RuntimeError(f"found only {len(out)} hard profiles in {max_tries} draws")
    return out


# -- benchmark runner ----------------------------------------------------------

@dataclass
class BenchRecord:
    profile_id: str
    rule: str
    config: str
    total_time: float
    discovery_time_100: float
    discovery_node_100: int
    nodes_expanded: int
    nodes_pruned: int
    cache_hits: int
    winners: list = field(default_factory=list)
    schema_version: int = BENCH_SCHEMA_VERSION


BENCH_COLUMNS = ["schema_version", "profile_id", "rule", "config", "total_time",
                 "discovery_time_100", "discovery_node_100", "nodes_expanded",
                 "nodes_pruned", "cache_hits", "winners"]

_SOLVER_KEYS = ("priority", "samples", "seed", "prune", "cache", "max_cache", "max_nodes")


def solve(profile: Profile, rule: str, algo: str | None = None, scc: bool = True, **options):
    """Dispatch to the solver selected by ``rule`` and ``algo``."""
    from .rp import solve_put_rp_mc, solve_put_rp_naive
    from .stv import solve_put_stv

    if rule == "stv":
        if algo not in (None, "dfs"):
            raise ValueError(f"algorithm {algo!r} is not available for stv")
        return solve_put_stv(profile, **options)
    if rule == "rp":
        if algo in (None, "mc"):
            return solve_put_rp_mc(profile, scc=scc, **options)
        if algo == "ndfs":
            return solve_put_rp_naive(profile, **options)
        raise ValueError(f"algorithm {algo!r} is not available for rp")
    raise ValueError(f"unknown rule {rule!r}")


def _run_cell(args) -> BenchRecord:
    pid, profile, name, config = args
    opts = {k: config[k] for k in _SOLVER_KEYS if k in config}
    if "scorer" in config:
        opts["scorer"] = config["scorer"]
    rep = solve(profile, config["rule"], config.get("algo"), config.get("scc", True), **opts)
    last = rep.discoveries[-1] if rep.discoveries else None
    return BenchRecord(
        profile_id=pid, rule=config["rule"], config=name,
        total_time=rep.total_time,
        discovery_time_100=last.time if last else 0.0,
        discovery_node_100=last.node if last else 0,
        nodes_expanded=rep.nodes_expanded, nodes_pruned=rep.nodes_pruned,
        cache_hits=rep.cache_hits, winners=sorted(rep.winners))


def run_bench(inputs, configs, jobs: int = 1) -> list[BenchRecord]:
    """Run every (profile, configuration) cell.

    ``inputs`` is a sequence of ``(profile_id, Profile)``; ``configs`` maps a
    configuration name to solver options (``rule``, ``algo``, ``scc`` and
    any solver keyword). Records come back in input order, profiles outer.
    """
    if isinstance(configs, dict):
        configs = list(configs.items())
    cells = [(pid, p, name, cfg) for pid, p in inputs for name, cfg in configs]
    if jobs > 1 and cells:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(c) for c in cells]


def _row(rec: BenchRecord) -> dict:
    row = asdict(rec)
    row["winners"] = " ".join(map(str, rec.winners))
    return row


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for rec in records:
        writer.writerow(_row(rec))
    return buf.getvalue()


def records_to_json(records) -> str:
    return json.dumps({"schema_version": BENCH_SCHEMA_VERSION,
                       "columns": BENCH_COLUMNS,
                       "records": [_row(r) for r in records]}, indent=2)


def aggregate(records) -> dict[str, dict[str, float]]:
    """Mean of each numeric column, per configuration."""
    by_config: dict[str, list[BenchRecord]] = {}
    for r in records:
        by_config.setdefault(r.config, []).append(r)
    numeric = ["total_time", "discovery_time_100", "discovery_node_100",
               "nodes_expanded", "nodes_pruned", "cache_hits"]
    return {name: {col: statistics.fmean(getattr(r, col) for r in recs) for col in numeric}
            for name, recs in by_config.items()}
