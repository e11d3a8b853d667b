"""Feasibility ILPs deciding whether one alternative is an STV or RP PUT winner.

No solver is bundled. Models are emitted as CPLEX-LP text, and
:func:`check_assignment` evaluates a 0/1 assignment exactly, which is
enough to validate the formulations by enumeration on small inputs.

RP variables (``t`` is a 1-based tier index, ``K`` the number of tiers):

* ``x_t{t}_{i}_{j}``: some ``i -> j`` path uses locked edges from tiers ``<= t``.
* ``y_t{t}_{i}_{j}_{k}``: some ``i -> k`` path passes through ``j`` at level ``t``.

STV variables (rounds ``r = 1 .. m-1``, vote groups ``v``):

* ``e_{c}_r{r}``: ``c`` is eliminated in round ``r``.
* ``rem_{c}_r{r}``: ``c`` is still standing at the start of round ``r``.
* ``h_{v}_{c}_r{r}``: ``c`` is group ``v``'s top remaining choice in round ``r``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .core import Profile
from .graph import build_wmg, tier_partition

SENSES = ("<=", ">=", "=")


@dataclass(frozen=True)
class Constraint:
    name: str
    terms: tuple[tuple[str, int], ...]
    sense: str
    rhs: int

    def lhs(self, asg: Mapping[str, int]) -> int:
        return sum(c * asg[v] for v, c in self.terms)

    def holds(self, asg: Mapping[str, int]) -> bool:
        lhs = self.lhs(asg)
        if self.sense == "<=":
            return lhs <= self.rhs
        if self.sense == ">=":
            return lhs >= self.rhs
        return lhs == self.rhs


@dataclass
class IlpModel:
    """Binary variables and named linear constraints, no objective."""

    name: str = "model"
    variables: list[str] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)

    def __post_init__(self):
        self._vars = set(self.variables)
        self._names = {c.name for c in self.constraints}

    def add_var(self, name: str) -> str:
        if name in self._vars:
            raise ValueError(f"duplicate variable {name}")
        self._vars.add(name)
        self.variables.append(name)
        return name

    def add(self, name: str, terms: Iterable[tuple[str, int]], sense: str, rhs: int):
        """Add ``sum(coef * var) <sense> rhs``; repeated variables are merged."""
        if sense not in SENSES:
            raise ValueError(f"bad sense {sense!r}")
        if name in self._names:
            raise ValueError(f"duplicate constraint name {name}")
        merged: dict[str, int] = {}
        for var, coef in terms:
            if var not in self._vars:
                raise ValueError(f"constraint {name} uses undeclared variable {var}")
            merged[var] = merged.get(var, 0) + coef
        merged = {v: c for v, c in merged.items() if c}
        self._names.add(name)
        self.constraints.append(Constraint(name, tuple(merged.items()), sense, rhs))

    def without(self, *names: str) -> "IlpModel":
        """Copy of the model minus the named constraints."""
        drop = set(names)
        return IlpModel(self.name, list(self.variables),
                        [c for c in self.constraints if c.name not in drop])

    def to_json(self) -> str:
        return json.dumps({
            "name": self.name,
            "variables": self.variables,
            "constraints": [{"name": c.name, "terms": [list(t) for t in c.terms],
                             "sense": c.sense, "rhs": c.rhs} for c in self.constraints],
        })

    @classmethod
    def from_json(cls, text: str) -> "IlpModel":
        data = json.loads(text)
        model = cls(data.get("name", "model"))
        for v in data["variables"]:
            model.add_var(v)
        for c in data["constraints"]:
            model.add(c["name"], [(v, int(k)) for v, k in c["terms"]], c["sense"], int(c["rhs"]))
        return model


def check_assignment(model: IlpModel, asg: Mapping[str, int]) -> list[str]:
    """Names of the constraints ``asg`` violates; empty when all hold."""
    missing = [v for v in model.variables if v not in asg]
    if missing:
        raise ValueError(f"assignment misses {len(missing)} variables, e.g. {missing[0]}")
    bad = [v for v in model.variables if asg[v] not in (0, 1)]
    if bad:
        raise ValueError(f"non-binary value for {bad[0]}")
    return [c.name for c in model.constraints if not c.holds(asg)]


def _format_terms(terms) -> str:
    out = []
    for i, (var, coef) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        body = var if mag == 1 else f"{mag} {var}"
        if i == 0:
            out.append(body if sign == "+" else f"- {body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def emit_lp_text(model: IlpModel) -> str:
    """CPLEX-LP text: empty objective, ``Subject To``, ``Binary``, ``End``."""
    lines = [f"\\ {model.name}", "Minimize", " obj:", "Subject To"]
    for c in model.constraints:
        lhs = _format_terms(c.terms) if c.terms else "0 " + model.variables[0]
        lines.append(f" {c.name}: {lhs} {c.sense} {c.rhs}")
    lines.append("Binary")
    lines += [f" {v}" for v in model.variables]
    lines.append("End")
    return "\n".join(lines) + "\n"


# -- Ranked Pairs ----------------------------------------------------------------

def _x(t, i, j):
    return f"x_t{t}_{i}_{j}"


def _y(t, i, j, k):
    return f"y_t{t}_{i}_{j}_{k}"


def build_rp_ilp(profile: Profile, target: int) -> IlpModel:
    """Feasible iff ``target`` is a Ranked Pairs winner under some tiebreaking.

    The final-level ``x`` variables encode a total order whose ranking graph
    must admit, for every ``i`` above ``j`` with ``(j, i)`` in tier ``t``, an
    ``i -> j`` path through tiers ``<= t``; ``target`` must be on top.
    """
    m = profile.m
    if not 0 <= target < m:
        raise ValueError(f"target {target} out of range for m={m}")
    tiers = tier_partition(build_wmg(profile))
    K = len(tiers)
    tier_no = {e: t + 1 for e, t in tiers.tier_of.items()}
    model = IlpModel(f"rp_target_{target}")
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
    triples = [(i, j, k) for i, j, k in itertools.permutations(range(m), 3)]
    levels = range(1, K + 1)
    for t in levels:
        for i, j in pairs:
            model.add_var(_x(t, i, j))
    for t in levels:
        for i, j, k in triples:
            model.add_var(_y(t, i, j, k))
    if K == 0:
        return model

    # target on top: nobody reaches it
    model.add("win", [(_x(K, j, target), 1) for j in range(m) if j != target], "=", 0)
    # i above j needs an i -> j path by the tier of (j, i)
    for (j, i), t in sorted(tier_no.items(), key=lambda kv: (kv[1], kv[0])):
        if t < K:
            model.add(f"lockpath_t{t}_{i}_{j}", [(_x(t, i, j), 1), (_x(K, i, j), -1)], ">=", 0)
    for i, j in pairs:
        if i < j:
            model.add(f"asym_{i}_{j}", [(_x(K, i, j), 1), (_x(K, j, i), 1)], "=", 1)
    for i, j, k in triples:
        model.add(f"trans_{i}_{j}_{k}",
                  [(_x(K, i, j), 1), (_x(K, j, k), 1), (_x(K, i, k), -1)], "<=", 1)
    for t in range(1, K):
        for i, j in pairs:
            model.add(f"mono_t{t}_{i}_{j}", [(_x(t + 1, i, j), 1), (_x(t, i, j), -1)], ">=", 0)
    for t in levels:
        for i, j, k in triples:
            y = _y(t, i, j, k)
            model.add(f"ylb_t{t}_{i}_{j}_{k}",
                      [(y, 1), (_x(t, i, j), -1), (_x(t, j, k), -1)], ">=", -1)
            model.add(f"yub1_t{t}_{i}_{j}_{k}", [(y, 1), (_x(t, i, j), -1)], "<=", 0)
            model.add(f"yub2_t{t}_{i}_{j}_{k}", [(y, 1), (_x(t, j, k), -1)], "<=", 0)
    for t in levels:
        for i, k in pairs:
            direct = tier_no.get((i, k))
            if direct is not None and direct <= t < K:
                model.add(f"edge_t{t}_{i}_{k}", [(_x(t, i, k), 1), (_x(K, i, k), -1)], ">=", 0)
            mids = [j for j in range(m) if j not in (i, k)]
            for j in mids:
                model.add(f"close_t{t}_{i}_{j}_{k}", [(_x(t, i, k), 1), (_y(t, i, j, k), -1)], ">=", 0)
            ub = [(_x(t, i, k), 1)] + [(_y(t, i, j, k), -1) for j in mids]
            if direct is not None and direct <= t:
                ub.append((_x(K, i, k), -1))
            model.add(f"reach_t{t}_{i}_{k}", ub, "<=", 0)
    return model


def _reach_closure(m: int, edges) -> set[tuple[int, int]]:
    reach = {(a, b) for a, b in edges}
    for j in range(m):
        for i in range(m):
            if (i, j) in reach:
                for k in range(m):
                    if (j, k) in reach:
                        reach.add((i, k))
    return {(i, k) for i, k in reach if i != k}


def ranking_to_assignment(profile: Profile, ranking: Sequence[int]) -> dict[str, int]:
    """0/1 values for :func:`build_rp_ilp` induced by a ranking.

    ``x_t*_i_j`` is 1 exactly when the ranking's graph (nonnegative-WMG edges
    agreeing with the ranking) has an ``i -> j`` path through tiers ``<= t``;
    each ``y`` is the AND of its two ``x`` legs.
    """
    m = profile.m
    if sorted(ranking) != list(range(m)):
        raise ValueError(f"{ranking!r} is not a permutation of 0..{m - 1}")
    tiers = tier_partition(build_wmg(profile))
    pos = {a: p for p, a in enumerate(ranking)}
    asg: dict[str, int] = {}
    edges: list = []
    for t, tier in enumerate(tiers, 1):
        edges += [e for e in tier.edges if pos[e[0]] < pos[e[1]]]
        reach = _reach_closure(m, edges)
        for i in range(m):
            for j in range(m):
                if i != j:
                    asg[_x(t, i, j)] = int((i, j) in reach)
        for i, j, k in itertools.permutations(range(m), 3):
            asg[_y(t, i, j, k)] = int((i, j) in reach and (j, k) in reach)
    return asg


# -- STV ---------------------------------------------------------------------------

def _e(c, r):
    return f"e_{c}_r{r}"


def _rem(c, r):
    return f"rem_{c}_r{r}"


def _h(v, c, r):
    return f"h_{v}_{c}_r{r}"


def build_stv_ilp(profile: Profile, target: int) -> IlpModel:
    """Feasible iff ``target`` survives some valid STV elimination sequence.

    Each round eliminates one standing alternative whose plurality score is
    no larger than any other standing alternative's. Scores are linear
    expressions in the ``h`` indicators; the comparison is switched off with
    big-M = n when its premise does not hold. Requires complete rankings.
    """
    m, n = profile.m, profile.n
    if not 0 <= target < m:
        raise ValueError(f"target {target} out of range for m={m}")
    if not profile.is_complete:
        raise ValueError("the STV model needs complete rankings (SOC)")
    model = IlpModel(f"stv_target_{target}")
    rounds = range(1, m)
    alts = range(m)
    groups = list(enumerate(profile.votes))
    for r in rounds:
        for c in alts:
            model.add_var(_e(c, r))
    for r in rounds:
        for c in alts:
            model.add_var(_rem(c, r))
    for r in rounds:
        for v, _ in groups:
            for c in alts:
                model.add_var(_h(v, c, r))
    if m == 1:
        return model

    model.add("win", [(_e(target, r), 1) for r in rounds], "=", 0)
    for r in rounds:
        model.add(f"one_r{r}", [(_e(c, r), 1) for c in alts], "=", 1)
        for c in alts:
            # rem_{c,r} = 1 - (eliminated before r)
            model.add(f"remdef_{c}_r{r}", [(_rem(c, r), 1)] + [(_e(c, q), 1) for q in range(1, r)],
                      "=", 1)
            model.add(f"alive_{c}_r{r}", [(_e(c, r), 1), (_rem(c, r), -1)], "<=", 0)
    for r in rounds:
        for v, (_, ranking) in groups:
            for p, c in enumerate(ranking):
                h = _h(v, c, r)
                above = ranking[:p]
                model.add(f"hrem_{v}_{c}_r{r}", [(h, 1), (_rem(c, r), -1)], "<=", 0)
                for d in above:
                    model.add(f"hblk_{v}_{c}_{d}_r{r}", [(h, 1), (_rem(d, r), 1)], "<=", 1)
                model.add(f"hlb_{v}_{c}_r{r}",
                          [(h, 1), (_rem(c, r), -1)] + [(_rem(d, r), 1) for d in above], ">=", 0)
    for r in rounds:
        for c in alts:
            for d in alts:
                if c == d:
                    continue
                # score(c) - score(d) <= n (2 - e_{c,r} - rem_{d,r})
                terms = [(_h(v, c, r), cnt) for v, (cnt, _) in groups]
                terms += [(_h(v, d, r), -cnt) for v, (cnt, _) in groups]
                terms += [(_e(c, r), n), (_rem(d, r), n)]
                model.add(f"minsc_{c}_{d}_r{r}", terms, "<=", 2 * n)
    return model


def elimination_to_assignment(profile: Profile, order: Sequence[int]) -> dict[str, int]:
    """0/1 values for :func:`build_stv_ilp` from an elimination order.

    ``order`` lists all alternatives; the first ``m - 1`` are eliminated in
    that sequence and the last one wins.
    """
    m = profile.m
    if sorted(order) != list(range(m)):
        raise ValueError(f"{order!r} is not a permutation of 0..{m - 1}")
    asg: dict[str, int] = {}
    standing = set(range(m))
    for r in range(1, m):
        for c in range(m):
            asg[_e(c, r)] = int(order[r - 1] == c)
            asg[_rem(c, r)] = int(c in standing)
        for v, (_, ranking) in enumerate(profile.votes):
            top = next((a for a in ranking if a in standing), None)
            for c in range(m):
                asg[_h(v, c, r)] = int(c == top)
        standing.discard(order[r - 1])
    return asg
