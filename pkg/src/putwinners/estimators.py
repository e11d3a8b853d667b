"""scikit-learn style wrappers around the solvers and the feature extractor.

``fit`` takes one profile and stores the PUT winners; ``predict`` maps a
list of profiles to their winner sets. ``get_params``/``set_params`` and
``clone`` work as for any scikit-learn estimator, so solver settings can be
swept with the usual tooling.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .core import Profile
from .priority import extract_features, feature_length
from .rp import solve_put_rp_mc, solve_put_rp_naive
from .stv import solve_put_stv


def check_profile(X, m: int | None = None) -> Profile:
    """Coerce ``X`` to a :class:`Profile`.

    Accepts a profile, a sequence of rankings, or a 2-D integer array with
    one complete ranking per row.
    """
    if isinstance(X, Profile):
        profile = X
    else:
        if isinstance(X, np.ndarray):
            if X.ndim != 2:
                raise ValueError(f"expected a 2-D array of rankings, got shape {X.shape}")
            X = X.tolist()
        rankings = [tuple(int(a) for a in r) for r in X]
        profile = Profile.from_rankings(rankings, m)
    if profile.m < 1:
        raise ValueError("profile has no alternatives")
    if m is not None and profile.m != m:
        raise ValueError(f"expected m={m}, got m={profile.m}")
    return profile


def check_profiles(Xs) -> list[Profile]:
    if isinstance(Xs, Profile):
        return [Xs]
    return [check_profile(X) for X in Xs]


class _PutSolver(BaseEstimator):
    def _solve(self, profile):
        raise NotImplementedError

    def fit(self, X, y=None):
        """Solve one profile; sets ``winners_`` and ``report_``."""
        self.report_ = self._solve(check_profile(X))
        self.winners_ = self.report_.winners
        return self

    def predict(self, Xs) -> list[frozenset]:
        """Winner set of each profile in ``Xs``."""
        return [self._solve(p).winners for p in check_profiles(Xs)]

    def fit_predict(self, X, y=None) -> frozenset:
        return self.fit(X).winners_

    def _options(self):
        return dict(priority=self.priority, scorer=self.scorer, samples=self.samples,
                    seed=self.seed, prune=self.prune, cache=self.cache,
                    max_cache=self.max_cache, max_nodes=self.max_nodes)


class PutSTV(_PutSolver):
    """PUT winners under STV. Parameters mirror :func:`~putwinners.stv.solve_put_stv`."""

    def __init__(self, priority="none", scorer=None, samples=0, seed=None,
                 prune=True, cache=True, max_cache=None, max_nodes=None):
        self.priority = priority
        self.scorer = scorer
        self.samples = samples
        self.seed = seed
        self.prune = prune
        self.cache = cache
        self.max_cache = max_cache
        self.max_nodes = max_nodes

    def _solve(self, profile):
        return solve_put_stv(profile, **self._options())


class PutRP(_PutSolver):
    """PUT winners under Ranked Pairs.

    ``algo="mc"`` selects the maximal-children search (``scc`` toggles the
    component split); ``algo="ndfs"`` the edge-at-a-time search.
    """

    def __init__(self, algo="mc", scc=True, priority="none", scorer=None, samples=0,
                 seed=None, prune=True, cache=True, max_cache=None, max_nodes=None):
        self.algo = algo
        self.scc = scc
        self.priority = priority
        self.scorer = scorer
        self.samples = samples
        self.seed = seed
        self.prune = prune
        self.cache = cache
        self.max_cache = max_cache
        self.max_nodes = max_nodes

    def _solve(self, profile):
        if self.algo == "mc":
            return solve_put_rp_mc(profile, scc=self.scc, **self._options())
        if self.algo == "ndfs":
            return solve_put_rp_naive(profile, **self._options())
        raise ValueError(f"unknown algo {self.algo!r}; expected 'mc' or 'ndfs'")


class ProfileFeatures(TransformerMixin, BaseEstimator):
    """Profiles to fixed-length feature rows (see :mod:`putwinners.priority`).

    ``fit`` records ``m`` from the first profile; ``transform`` rejects
    profiles of a different size.
    """

    def __init__(self, context="stv", k=None):
        self.context = context
        self.k = k

    def fit(self, Xs, y=None):
        profiles = check_profiles(Xs)
        if not profiles:
            raise ValueError("need at least one profile")
        self.m_ = profiles[0].m
        self.n_features_out_ = feature_length(self.m_, self.context)
        return self

    def transform(self, Xs) -> np.ndarray:
        check_is_fitted(self, "m_")
        rows = [extract_features(check_profile(p, self.m_), self.context, self.k).values
                for p in check_profiles(Xs)]
        return np.vstack(rows) if rows else np.zeros((0, self.n_features_out_))


def winners_matrix(winner_sets: Sequence[frozenset], m: int) -> np.ndarray:
    """0/1 indicator rows, e.g. as targets for training a winner-probability model."""
    out = np.zeros((len(winner_sets), m), dtype=np.int8)
    for i, ws in enumerate(winner_sets):
        out[i, sorted(ws)] = 1
    return out
