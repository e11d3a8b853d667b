"""Preference profiles, Preflib I/O, synthetic generation and score functions.

Alternatives are identified by 0-based index. Preflib files use 1-based
indices; they are shifted on ingestion and shifted back on emission.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np


class ProfileError(ValueError):
    """A profile violates a structural invariant."""


class PreflibParseError(ValueError):
    """Malformed Preflib text. ``lineno`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        if lineno:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class UnsupportedFormatError(PreflibParseError):
    """Preflib data with ties (TOC/TOI) or other unsupported content."""


@dataclass(frozen=True)
class Profile:
    """A multiset of strict (possibly truncated) rankings over ``m`` alternatives.

    Parameters
    ----------
    m : int
        Number of alternatives, indexed ``0 .. m-1``.
    votes : sequence of (count, ranking)
        Each ranking is a sequence of distinct alternative indices, most
        preferred first. Rankings shorter than ``m`` are truncated.
    alt_names : sequence of str, optional
        Display names; defaults to ``"a0" .. "a{m-1}"``.
    """

    m: int
    votes: tuple[tuple[int, tuple[int, ...]], ...]
    alt_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.m < 0:
            raise ProfileError(f"m must be non-negative, got {self.m}")
        votes = tuple((int(c), tuple(int(a) for a in r)) for c, r in self.votes)
        for count, ranking in votes:
            if count < 1:
                raise ProfileError(f"vote count must be >= 1, got {count}")
            if len(set(ranking)) != len(ranking):
                raise ProfileError(f"duplicate alternative in ranking {ranking}")
            for a in ranking:
                if not 0 <= a < self.m:
                    raise ProfileError(f"alternative {a} out of range for m={self.m}")
        names = tuple(self.alt_names) or tuple(f"a{i}" for i in range(self.m))
        if len(names) != self.m:
            raise ProfileError(f"expected {self.m} names, got {len(names)}")
        object.__setattr__(self, "votes", votes)
        object.__setattr__(self, "alt_names", names)

    @classmethod
    def from_rankings(cls, rankings: Iterable[Sequence[int]], m: int | None = None,
                      alt_names: Sequence[str] = ()) -> "Profile":
        """Build a profile with one count-1 group per ranking."""
        rankings = [tuple(r) for r in rankings]
        if m is None:
            m = 1 + max((a for r in rankings for a in r), default=-1)
        return cls(m, tuple((1, r) for r in rankings), tuple(alt_names))

    @property
    def n(self) -> int:
        return sum(c for c, _ in self.votes)

    @property
    def is_complete(self) -> bool:
        """True when every ranking lists all ``m`` alternatives (SOC)."""
        return all(len(r) == self.m for _, r in self.votes)

    def expanded(self) -> list[tuple[int, ...]]:
        """One ranking per voter."""
        return [r for c, r in self.votes for _ in range(c)]

    def to_preflib(self) -> str:
        return dump_preflib(self)

    def __str__(self):
        names = self.alt_names
        parts = [f"{c}x({'>'.join(names[a] for a in r)})" for c, r in self.votes]
        return f"Profile(m={self.m}, n={self.n}, [{', '.join(parts)}])"


def parse_preflib(text: str) -> Profile:
    """Parse Preflib SOC/SOI text into a :class:`Profile`.

    Lines starting with ``#`` and blank lines are skipped. Ties (``{...}``)
    raise :class:`UnsupportedFormatError`.
    """
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise PreflibParseError("empty input")
    pos = 0

    def take():
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise PreflibParseError("unexpected end of input", last)
        item = lines[pos]
        pos += 1
        return item

    def ints(lineno, fields):
        try:
            return [int(f) for f in fields]
        except ValueError:
            raise PreflibParseError(f"expected integers, got {','.join(fields)!r}", lineno) from None

    lineno, line = take()
    (m,) = ints(lineno, [line])
    if m < 0:
        raise PreflibParseError("negative alternative count", lineno)
    names: dict[int, str] = {}
    for _ in range(m):
        lineno, line = take()
        idx, _, name = line.partition(",")
        (idx,) = ints(lineno, [idx])
        if not 1 <= idx <= m or idx in names:
            raise PreflibParseError(f"bad alternative index {idx}", lineno)
        names[idx] = name.strip()
    lineno, line = take()
    header = ints(lineno, line.split(","))
    if len(header) != 3:
        raise PreflibParseError("expected 'n,sum_of_counts,unique_orders'", lineno)
    header_lineno = lineno

    votes = []
    while pos < len(lines):
        lineno, line = take()
        if "{" in line or "}" in line:
            raise UnsupportedFormatError("rankings with ties are not supported", lineno)
        fields = line.split(",")
        nums = ints(lineno, fields)
        if len(nums) < 1 or nums[0] < 1:
            raise PreflibParseError("vote line needs a positive count", lineno)
        ranking = [a - 1 for a in nums[1:]]
        if len(set(ranking)) != len(ranking):
            raise ProfileError(f"line {lineno}: duplicate alternative in ranking")
        if any(not 0 <= a < m for a in ranking):
            raise PreflibParseError("alternative index out of range", lineno)
        votes.append((nums[0], tuple(ranking)))

    total = sum(c for c, _ in votes)
    if header[1] != total or header[2] != len(votes):
        raise PreflibParseError(
            f"header declares {header[1]} votes in {header[2]} orders, "
            f"found {total} in {len(votes)}", header_lineno)
    return Profile(m, tuple(votes), tuple(names[i] for i in range(1, m + 1)))


def dump_preflib(profile: Profile) -> str:
    """Serialize to Preflib SOC/SOI text (inverse of :func:`parse_preflib`)."""
    out = [str(profile.m)]
    out += [f"{i + 1},{name}" for i, name in enumerate(profile.alt_names)]
    out.append(f"{profile.n},{profile.n},{len(profile.votes)}")
    out += [",".join(str(x) for x in (c, *(a + 1 for a in r))) for c, r in profile.votes]
    return "\n".join(out) + "\n"


def generate_impartial_culture(m: int, n: int, seed: int) -> Profile:
    """Draw ``n`` complete rankings uniformly from the ``m!`` orders.

    Uses ``numpy.random.default_rng(seed)`` (PCG64) and one
    ``rng.permutation(m)`` per voter, so the result is a pure function of
    ``(m, n, seed)`` across platforms.
    """
    if m < 1 or n < 1:
        raise ValueError(f"need m >= 1 and n >= 1, got m={m}, n={n}")
    rng = np.random.default_rng(seed)
    return Profile(m, tuple((1, tuple(int(a) for a in rng.permutation(m))) for _ in range(n)))


def plurality_scores(profile: Profile, remaining: Iterable[int]) -> dict[int, int]:
    """Plurality score of every alternative in ``remaining``.

    A vote counts for its highest-ranked remaining alternative. Exhausted
    truncated votes count for nobody.
    """
    remaining = set(remaining)
    if not remaining:
        raise ValueError("remaining set is empty")
    if any(not 0 <= a < profile.m for a in remaining):
        raise ValueError("remaining contains an out-of-range alternative")
    scores = dict.fromkeys(sorted(remaining), 0)
    for count, ranking in profile.votes:
        for a in ranking:
            if a in remaining:
                scores[a] += count
                break
    return scores


def pairwise_margins(profile: Profile) -> np.ndarray:
    """``M[a, b]`` = #votes with a above b minus #votes with b above a.

    In a truncated vote every ranked alternative beats every unranked one;
    two unranked alternatives are incomparable.
    """
    m = profile.m
    prefers = np.zeros((m, m), dtype=np.int64)
    for count, ranking in profile.votes:
        unranked = [a for a in range(m) if a not in set(ranking)]
        for i, a in enumerate(ranking):
            for b in ranking[i + 1:]:
                prefers[a, b] += count
            for b in unranked:
                prefers[a, b] += count
    return prefers - prefers.T


def positional_matrix(profile: Profile) -> np.ndarray:
    """``P[a, p]`` = number of votes placing ``a`` at 0-based position ``p``."""
    mat = np.zeros((profile.m, profile.m), dtype=np.int64)
    for count, ranking in profile.votes:
        for p, a in enumerate(ranking):
            mat[a, p] += count
    return mat


@dataclass(frozen=True)
class ScoreVector:
    """Per-alternative scores, each an array indexed by alternative."""

    plurality: np.ndarray
    borda: np.ndarray
    k_approval: np.ndarray
    copeland: np.ndarray
    maximin: np.ndarray
    k: int

    def as_matrix(self) -> np.ndarray:
        """``m x 5`` matrix, columns in field order."""
        return np.column_stack([self.plurality, self.borda, self.k_approval,
                                self.copeland, self.maximin])


def default_k(m: int) -> int:
    return max(1, -(-m // 2))


def score_features(profile: Profile, k: int | None = None) -> ScoreVector:
    """Plurality, Borda, k-approval, Copeland and maximin scores.

    ``k`` defaults to ``ceil(m / 2)``. Unranked alternatives of a truncated
    vote get Borda weight 0.
    """
    m = profile.m
    k = default_k(m) if k is None else k
    if m and not 1 <= k <= m:
        raise ValueError(f"k must lie in [1, {m}], got {k}")
    pos = positional_matrix(profile)
    weights = np.arange(m - 1, -1, -1, dtype=np.int64)
    margins = pairwise_margins(profile)
    off_diag = ~np.eye(m, dtype=bool)
    copeland = (np.sign(margins) * off_diag).sum(axis=1)
    if m > 1:
        maximin = np.where(off_diag, margins, np.iinfo(np.int64).max).min(axis=1)
    else:
        maximin = np.zeros(m, dtype=np.int64)
    return ScoreVector(
        plurality=pos[:, 0].copy() if m else np.zeros(0, dtype=np.int64),
        borda=pos @ weights,
        k_approval=pos[:, :k].sum(axis=1),
        copeland=copeland,
        maximin=maximin,
        k=k,
    )
