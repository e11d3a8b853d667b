"""Local-priority functions for ordering search children, and the scorers behind LPML.

Feature layout (version 1), for a profile over ``m`` alternatives::

    positional matrix (m*m, row-major) | WMG margins (m*m, row-major) |
    plurality (m) | Borda (m) | k-approval (m) | Copeland (m) | maximin (m) |
    [rp only] in-degree (m) | out-degree (m)

Degrees are taken in the nonnegative WMG. The per-alternative slice used by
:class:`LinearScorer` for alternative ``a`` is::

    positional row a (m) | WMG row a (m) | plurality, Borda, k-approval,
    Copeland, maximin of a | [rp] in-degree, out-degree of a

so it has ``2m + 5`` entries (``2m + 7`` for rp).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import Profile, pairwise_margins, positional_matrix, score_features

FEATURE_VERSION = 1
CONTEXTS = ("stv", "rp")


class ScorerLoadError(ValueError):
    """Weight file is malformed or does not match the profile."""


def lp_priority(candidates: Iterable[int], known_winners: Iterable[int]) -> int:
    """Number of candidate winners not yet known; larger means explore first."""
    return len(set(candidates) - set(known_winners))


def lpml_priority(candidates: Iterable[int], known_winners: Iterable[int],
                  scores: Sequence[float] | Mapping[int, float]) -> float:
    """Sum of winner probabilities over the unknown candidates.

    ``scores[a]`` is the scorer's probability that ``a`` is a winner; bind a
    scorer to a profile with ``scorer.scores(profile)`` first. Summation runs
    in increasing alternative order with ``math.fsum`` so results are
    reproducible.
    """
    unknown = sorted(set(candidates) - set(known_winners))
    return math.fsum(float(scores[a]) for a in unknown)


@dataclass(frozen=True)
class FeatureVector:
    values: np.ndarray
    m: int
    context: str

    def per_alternative(self) -> np.ndarray:
        """``m x d`` matrix; row ``a`` is alternative ``a``'s slice."""
        m = self.m
        v = self.values
        pos = v[: m * m].reshape(m, m)
        wmg = v[m * m: 2 * m * m].reshape(m, m)
        tail = v[2 * m * m:].reshape(-1, m).T
        return np.hstack([pos, wmg, tail])

    def __len__(self):
        return len(self.values)


def feature_length(m: int, context: str) -> int:
    return 2 * m * m + (7 if context == "rp" else 5) * m


def slice_length(m: int, context: str) -> int:
    return 2 * m + (7 if context == "rp" else 5)


def extract_features(profile: Profile, context: str = "stv", k: int | None = None) -> FeatureVector:
    if context not in CONTEXTS:
        raise ValueError(f"context must be one of {CONTEXTS}, got {context!r}")
    m = profile.m
    margins = pairwise_margins(profile)
    sv = score_features(profile, k) if m else None
    parts = [positional_matrix(profile).ravel(), margins.ravel()]
    if m:
        parts += [sv.plurality, sv.borda, sv.k_approval, sv.copeland, sv.maximin]
    if context == "rp" and m:
        nonneg = (margins >= 0) & ~np.eye(m, dtype=bool)
        parts += [nonneg.sum(axis=0), nonneg.sum(axis=1)]
    values = np.concatenate(parts).astype(np.float64) if parts else np.zeros(0)
    return FeatureVector(values, m, context)


def _sigmoid(z: np.ndarray) -> np.ndarray:
    return 1.0 / (1.0 + np.exp(-z))


class UniformScorer:
    """Every alternative gets probability 0.5."""

    def scores(self, profile: Profile, context: str = "stv") -> np.ndarray:
        return np.full(profile.m, 0.5)


class BordaScorer:
    """Borda score divided by its maximum ``n (m - 1)``."""

    def scores(self, profile: Profile, context: str = "stv") -> np.ndarray:
        top = profile.n * (profile.m - 1)
        if top == 0:
            return np.full(profile.m, 0.5)
        return score_features(profile).borda / top


class LinearScorer:
    """``sigmoid(w . slice_a + bias)`` over each alternative's feature slice."""

    def __init__(self, weights, bias: float, m: int, context: str = "stv",
                 version: int = FEATURE_VERSION):
        self.weights = np.asarray(weights, dtype=np.float64)
        self.bias = float(bias)
        self.m = int(m)
        self.context = context
        self.version = version
        if context not in CONTEXTS:
            raise ScorerLoadError(f"unknown context {context!r}")
        if version != FEATURE_VERSION:
            raise ScorerLoadError(f"feature layout version {version} unsupported")
        if self.weights.shape != (slice_length(self.m, context),):
            raise ScorerLoadError(
                f"expected {slice_length(self.m, context)} weights for m={self.m} "
                f"({context}), got {self.weights.size}")

    def check(self, profile: Profile):
        if profile.m != self.m:
            raise ScorerLoadError(
                f"weights are for m={self.m}, profile has m={profile.m}")

    def scores(self, profile: Profile, context: str | None = None) -> np.ndarray:
        self.check(profile)
        feats = extract_features(profile, self.context).per_alternative()
        # dot products in fixed left-to-right order for cross-platform stability
        z = np.array([math.fsum(row * self.weights) for row in feats]) + self.bias
        return _sigmoid(z)

    def dump(self) -> str:
        lines = [f"version {self.version}", f"m {self.m}", f"context {self.context}",
                 f"bias {self.bias!r}"]
        lines += [repr(float(w)) for w in self.weights]
        return "\n".join(lines) + "\n"


def load_scorer(path, m: int | None = None) -> LinearScorer:
    """Read a weight file.

    Format: ``version <int>``, ``m <int>``, ``context <stv|rp>``,
    ``bias <float>``, then one float per line for each slice entry. Floats
    are parsed with ``float()``, which round-trips ``repr`` output exactly.
    Passing ``m`` checks it against the file up front.
    """
    text = Path(path).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    header = {}
    try:
        for key in ("version", "m", "context", "bias"):
            k, _, val = lines[len(header)].partition(" ")
            if k != key:
                raise ScorerLoadError(f"expected '{key}' line, got {lines[len(header)]!r}")
            header[key] = val.strip()
        weights = [float(x) for x in lines[4:]]
        scorer = LinearScorer(weights, float(header["bias"]), int(header["m"]),
                              header["context"], int(header["version"]))
    except (IndexError, ValueError) as exc:
        if isinstance(exc, ScorerLoadError):
            raise
        raise ScorerLoadError(f"malformed weight file {path}: {exc}") from None
    if m is not None and m != scorer.m:
        raise ScorerLoadError(f"weights are for m={scorer.m}, profile has m={m}")
    return scorer


def mask_priority(priority: str, profile: Profile, context: str, scorer=None):
    """Priority callable over (candidate mask, known-winner mask), or None.

    Used by the solvers, which keep alternative sets as bitmasks.
    """
    if priority == "none":
        return None
    if priority == "lp":
        return lambda cand, known: bin(cand & ~known).count("1")
    if priority == "lpml":
        scores = (scorer if scorer is not None else UniformScorer()).scores(profile, context)
        scores = [float(s) for s in scores]

        def lpml(cand, known):
            unknown = cand & ~known
            return math.fsum(scores[a] for a in range(len(scores)) if unknown >> a & 1)
        return lpml
    raise ValueError(f"unknown priority {priority!r}; expected none, lp or lpml")


def push_order(children: list, priority_values: list | None) -> list:
    """Order in which to push ``children`` so pops come out best-first.

    Pop order is decreasing priority; ties (and the no-priority case) pop
    in the children's given order.
    """
    idx = range(len(children))
    if priority_values is None:
        return [children[i] for i in reversed(idx)]
    ranked = sorted(idx, key=lambda i: (priority_values[i], -i))
    return [children[i] for i in ranked]
