"""Mallows distribution over permutations and its anchored variant.

The plain model puts mass ``exp(-phi * d(center, p)) / Z`` on each permutation
``p``. The anchored variant, used for a human who has seen the algorithm's
ranking ``a``, replaces the distance with the blend
``(1 - w) * d(center, p) + w * d(a, p)`` and renormalises for that ``a``.
Anchoring always conditions on the full realised ranking, not only the
presented prefix.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np
from scipy.special import logsumexp

from . import perm as P
from .perm import Permutation

# Upper bound on floats held by one conditional-table chunk.
CHUNK_FLOATS = 4_000_000


@dataclass(frozen=True)
class MallowsSpec:
    """Mallows parameters: universe size, accuracy ``phi`` and central ordering.

    The center defaults to the identity ``(1, ..., n)``; other centers are
    accepted but the rest of the package assumes item 1 is the best item.
    """

    n: int
    phi: float
    center: Permutation = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not self.phi > 0:
            raise ValueError(f"phi must be positive, got {self.phi}")
        center = P.identity(self.n) if self.center is None else P.as_permutation(self.center)
        if len(center) != self.n:
            raise P.UniverseError(f"center {center} does not have length n={self.n}")
        object.__setattr__(self, "center", center)


def check_weight(w: float) -> float:
    w = float(w)
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"anchor weight must lie in [0, 1], got {w}")
    return w


def _check_perm(spec: MallowsSpec, p) -> Permutation:
    p = P.as_permutation(p)
    if len(p) != spec.n:
        raise P.UniverseError(f"{p} is not over the universe 1..{spec.n}")
    return p


# --- normalising constants -------------------------------------------------


def log_mallows_normalizer(n: int, phi: float) -> float:
    """``log Z`` via the insertion-position product ``prod_i sum_{j<i} exp(-j phi)``."""
    total = 0.0
    for i in range(1, n + 1):
        total += logsumexp(-phi * np.arange(i))
    return float(total)


def mallows_normalizer(n: int, phi: float) -> float:
    """Normalising constant ``Z(n, phi)`` from the product formula."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n > P.ENUMERATION_CAP:
        raise ValueError(f"n={n} exceeds the enumeration cap of {P.ENUMERATION_CAP}")
    return float(np.exp(log_mallows_normalizer(n, phi)))


def mallows_normalizer_enumerated(n: int, phi: float) -> float:
    """``Z(n, phi)`` by summing over every permutation (cross-check for the product form)."""
    perms = P.permutation_array(n)
    d = P.pair_disorder(perms).sum(axis=1)
    return float(np.exp(logsumexp(-phi * d)))


# --- probability tables ----------------------------------------------------


@dataclass(frozen=True)
class PmfTable:
    """Probabilities of every permutation of ``1..n`` in lexicographic order."""

    perms: tuple[Permutation, ...]
    probs: np.ndarray
    context: Mapping[str, object] = field(default_factory=dict)

    def __getitem__(self, p) -> float:
        return float(self.probs[self._index[tuple(p)]])

    def __len__(self):
        return len(self.perms)

    def __iter__(self) -> Iterator[tuple[Permutation, float]]:
        return iter(zip(self.perms, (float(x) for x in self.probs)))

    @property
    def _index(self) -> dict[Permutation, int]:
        cache = self.__dict__.get("_index_cache")
        if cache is None:
            cache = {p: i for i, p in enumerate(self.perms)}
            object.__setattr__(self, "_index_cache", cache)
        return cache

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["permutation", "probability"])
        for p, prob in self:
            writer.writerow([P.to_string(p), repr(prob)])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PmfTable":
        rows = list(csv.DictReader(io.StringIO(text)))
        perms = tuple(P.from_string(r["permutation"]) for r in rows)
        probs = np.array([float(r["probability"]) for r in rows])
        return cls(perms, probs)


def normalise(log_w: np.ndarray) -> np.ndarray:
    return np.exp(log_w - logsumexp(log_w, axis=-1, keepdims=True))


def mallows_table(spec: MallowsSpec) -> PmfTable:
    perms = P.permutation_array(spec.n)
    center = np.asarray(spec.center)[None, :]
    d = P.distance_matrix(center, perms)[0]
    probs = normalise(-spec.phi * d)
    return PmfTable(tuple(map(tuple, perms.tolist())), probs,
                    {"center": spec.center, "phi": spec.phi})


def mallows_pmf(spec: MallowsSpec, p) -> float:
    p = _check_perm(spec, p)
    d = P.kendall_tau(spec.center, p)
    return float(np.exp(-spec.phi * d - log_mallows_normalizer(spec.n, spec.phi)))


def anchored_log_weights(spec: MallowsSpec, algo_perms: np.ndarray, w: float,
                         perms: np.ndarray | None = None) -> np.ndarray:
    """Unnormalised log-probabilities ``(len(algo_perms), n!)`` of the anchored law."""
    w = check_weight(w)
    if perms is None:
        perms = P.permutation_array(spec.n)
    algo_perms = np.atleast_2d(algo_perms)
    d_center = P.distance_matrix(np.asarray(spec.center)[None, :], perms)[0]
    dist = (1.0 - w) * d_center[None, :]
    if w > 0:
        dist = dist + w * P.distance_matrix(algo_perms, perms)
    else:
        dist = np.broadcast_to(dist, (algo_perms.shape[0], perms.shape[0]))
    return -spec.phi * dist


def anchored_table(spec: MallowsSpec, algo_perm, w: float) -> PmfTable:
    algo_perm = _check_perm(spec, algo_perm)
    perms = P.permutation_array(spec.n)
    probs = normalise(anchored_log_weights(spec, np.array([algo_perm]), w, perms))[0]
    return PmfTable(tuple(map(tuple, perms.tolist())), probs,
                    {"center": spec.center, "phi": spec.phi, "anchor": algo_perm, "w": w})


def anchored_pmf(spec: MallowsSpec, algo_perm, w: float, p) -> float:
    """Probability of ``p`` for a human anchored with weight ``w`` on ``algo_perm``."""
    algo_perm = _check_perm(spec, algo_perm)
    p = _check_perm(spec, p)
    return anchored_table(spec, algo_perm, w)[p]


# --- sampling --------------------------------------------------------------


def sample_mallows_batch(spec: MallowsSpec, size: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``size`` permutations by repeated insertion; returns an ``(size, n)`` array.

    Items are inserted in center order. Placing the ``i``-th item (0-based) at
    slot ``j`` of the ``i + 1`` available creates ``i - j`` inversions, so the
    slot is drawn with probability proportional to ``exp(-phi * (i - j))``.
    """
    n = spec.n
    out = np.zeros((size, n), dtype=np.int64)
    cols = np.arange(n)
    for i, item in enumerate(spec.center):
        logits = -spec.phi * (i - np.arange(i + 1))
        cdf = np.cumsum(normalise(logits))
        slot = np.minimum(np.searchsorted(cdf, rng.random(size), side="right"), i)
        shifted = np.concatenate([np.zeros((size, 1), dtype=np.int64), out[:, :-1]], axis=1)
        before = cols[None, :] < slot[:, None]
        out = np.where(before, out, np.where(cols[None, :] == slot[:, None], item, shifted))
    return out


def sample_mallows(spec: MallowsSpec, rng: np.random.Generator) -> Permutation:
    return tuple(sample_mallows_batch(spec, 1, rng)[0].tolist())


def sample_anchored_batch(spec: MallowsSpec, algo_perms: np.ndarray, w: float,
                          rng: np.random.Generator) -> np.ndarray:
    """One anchored draw per row of ``algo_perms`` by inverse CDF over the exact table."""
    P.check_enumerable(spec.n)
    w = check_weight(w)
    algo_perms = np.atleast_2d(np.asarray(algo_perms, dtype=np.int64))
    perms = P.permutation_array(spec.n)
    u = rng.random(algo_perms.shape[0])
    if w == 0:
        cdf = np.cumsum(normalise(anchored_log_weights(spec, perms[:1], 0.0, perms)[0]))
        idx = np.searchsorted(cdf, u, side="right")
        return perms[np.minimum(idx, len(perms) - 1)]

    keys = P.lex_index(algo_perms)
    uniq, inverse = np.unique(keys, return_inverse=True)
    picked = np.empty(algo_perms.shape[0], dtype=np.int64)
    step = max(1, CHUNK_FLOATS // len(perms))
    for start in range(0, len(uniq), step):
        block = uniq[start:start + step]
        cdf = np.cumsum(normalise(anchored_log_weights(spec, perms[block], w, perms)), axis=1)
        rows = np.nonzero((inverse >= start) & (inverse < start + len(block)))[0]
        local = cdf[inverse[rows] - start]
        picked[rows] = (local <= u[rows, None]).sum(axis=1)
    return perms[np.minimum(picked, len(perms) - 1)]


def sample_anchored(spec: MallowsSpec, algo_perm, w: float, rng: np.random.Generator) -> Permutation:
    algo_perm = _check_perm(spec, algo_perm)
    return tuple(sample_anchored_batch(spec, np.array([algo_perm]), w, rng)[0].tolist())
