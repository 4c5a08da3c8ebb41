"""Gaussian random utility model: noisy scores ranked in descending order.

Item ``i`` has true utility ``mu[i-1]``. An agent observes
``score_i ~ Normal(mean_i, sigma**2)`` independently and ranks items by
descending score. An anchored human shifts each item's mean towards the
utility of the slot the algorithm placed it in.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import perm as P
from .mallows import check_weight


def default_utilities(n: int) -> np.ndarray:
    """Utilities spaced linearly from 1 down to 0 (``[1.0]`` when ``n == 1``)."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n == 1:
        return np.ones(1)
    return (n - np.arange(1, n + 1)) / (n - 1)


@dataclass(frozen=True)
class RumSpec:
    utilities: tuple[float, ...]
    sigma: float
    anchor_weight: float = 0.0

    def __post_init__(self):
        mu = np.asarray(self.utilities, dtype=float)
        if mu.ndim != 1 or mu.size == 0:
            raise ValueError("utilities must be a non-empty vector")
        if np.any(np.diff(mu) >= 0):
            raise ValueError(f"utilities must be strictly descending, got {mu.tolist()}")
        if not self.sigma >= 0:
            raise ValueError(f"sigma must be non-negative, got {self.sigma}")
        object.__setattr__(self, "utilities", tuple(float(x) for x in mu))
        object.__setattr__(self, "anchor_weight", check_weight(self.anchor_weight))

    @classmethod
    def linear(cls, n: int, sigma: float, anchor_weight: float = 0.0) -> "RumSpec":
        return cls(tuple(default_utilities(n)), sigma, anchor_weight)

    @property
    def n(self) -> int:
        return len(self.utilities)


def anchored_means(spec: RumSpec, algo_perm) -> np.ndarray:
    """Per-item means ``(1 - w) * mu_i + w * mu_j``, ``j`` the slot of item ``i`` in ``algo_perm``."""
    algo_perm = P.as_permutation(algo_perm)
    if len(algo_perm) != spec.n:
        raise P.UniverseError(f"{algo_perm} is not over the universe 1..{spec.n}")
    return anchored_means_batch(spec, np.array([algo_perm]))[0]


def anchored_means_batch(spec: RumSpec, algo_perms: np.ndarray) -> np.ndarray:
    mu = np.asarray(spec.utilities)
    w = spec.anchor_weight
    slot_utility = mu[P.rank_array(algo_perms)]
    return (1.0 - w) * mu[None, :] + w * slot_utility


def sample_scores(means, sigma: float, rng: np.random.Generator) -> np.ndarray:
    """Independent ``Normal(mean, sigma**2)`` draws; broadcasts over leading axes."""
    means = np.asarray(means, dtype=float)
    if sigma == 0:
        return means.copy()
    return means + sigma * rng.standard_normal(means.shape)


def rank_by_scores_batch(scores: np.ndarray) -> np.ndarray:
    """Row-wise descending-score ordering as item ids; ties go to the lower id."""
    scores = np.atleast_2d(scores)
    return np.argsort(-scores, axis=1, kind="stable") + 1


def rank_by_scores(scores) -> P.Permutation:
    return tuple(rank_by_scores_batch(np.asarray(scores, dtype=float))[0].tolist())
