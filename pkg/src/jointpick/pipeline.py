"""The top-k selection pipeline and its success probabilities.

The algorithm ranks all ``n`` items and presents its top ``k``; the human
picks, among those, the item it ranks highest. Success means picking item 1.
Three success rates are tracked for every configuration:

* ``p_joint``: the pipeline itself;
* ``p_algo``: the algorithm alone (its top item);
* ``p_human``: the human alone, i.e. the pipeline at ``k = n``. When the human
  is anchored this human still anchors on the algorithm's ranking.
  ``p_human_independent`` reports the unanchored human for reference.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, fields
from typing import Union

import numpy as np

from . import mallows as M
from . import perm as P
from . import rum as R

# Monte Carlo draws are generated in chunks of this many trials.
CHUNK = 200_000


@dataclass(frozen=True)
class MallowsAgents:
    phi_a: float
    phi_h: float


@dataclass(frozen=True)
class RumAgents:
    sigma_a: float
    sigma_h: float
    utilities: tuple[float, ...] | None = None


Model = Union[MallowsAgents, RumAgents]


@dataclass(frozen=True)
class PipelineConfig:
    n: int
    k: int
    model: Model
    weight: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"k={self.k} out of range 1..{self.n}")
        object.__setattr__(self, "weight", M.check_weight(self.weight))
        if not isinstance(self.model, (MallowsAgents, RumAgents)):
            raise TypeError(f"unsupported model {self.model!r}")
        # building the specs validates the model parameters
        self.algo_spec(), self.human_spec()

    @property
    def is_mallows(self) -> bool:
        return isinstance(self.model, MallowsAgents)

    def algo_spec(self):
        if self.is_mallows:
            return M.MallowsSpec(self.n, self.model.phi_a)
        return R.RumSpec(self._utilities(), self.model.sigma_a)

    def human_spec(self):
        if self.is_mallows:
            return M.MallowsSpec(self.n, self.model.phi_h)
        return R.RumSpec(self._utilities(), self.model.sigma_h, self.weight)

    def _utilities(self) -> tuple[float, ...]:
        mu = self.model.utilities
        if mu is None:
            return tuple(R.default_utilities(self.n))
        if len(mu) != self.n:
            raise ValueError(f"{len(mu)} utilities given for n={self.n}")
        return tuple(mu)


@dataclass(frozen=True)
class TrialOutcome:
    joint_pick: int
    algo_pick: int
    human_pick: int
    algo_perm: P.Permutation
    human_perm: P.Permutation


@dataclass(frozen=True)
class SuccessEstimate:
    """Success probabilities with standard errors (zero for exact values)."""

    config: PipelineConfig
    p_joint: float
    p_algo: float
    p_human: float
    p_human_independent: float
    se_joint: float = 0.0
    se_algo: float = 0.0
    se_human: float = 0.0
    se_human_independent: float = 0.0
    trials: int = 0
    batches: int = 0
    seed: int | None = None
    batch_std_joint: float = 0.0
    batch_std_algo: float = 0.0

    @property
    def exact(self) -> bool:
        return self.trials == 0

    @property
    def complementary(self) -> bool:
        return self.p_joint > max(self.p_algo, self.p_human)

    def to_row(self) -> dict:
        return estimate_to_row(self)


# --- pipeline mechanics ----------------------------------------------------


def joint_picks(algo_perms: np.ndarray, human_perms: np.ndarray, k: int) -> np.ndarray:
    """Item chosen by the human among each algorithm's top ``k`` (row-wise)."""
    algo_perms = np.atleast_2d(algo_perms)
    ranks_h = P.rank_array(human_perms)
    shown = algo_perms[:, :k]
    shown_ranks = np.take_along_axis(ranks_h, shown - 1, axis=1)
    return shown[np.arange(shown.shape[0]), np.argmin(shown_ranks, axis=1)]


def joint_pick(algo_perm, human_perm, k: int) -> int:
    shown = P.top_k(P.as_permutation(algo_perm), k)
    return min(shown, key=tuple(human_perm).index)


def _draw(config: PipelineConfig, size: int, rng: np.random.Generator):
    """Algorithm rankings, human rankings and independent-human rankings."""
    a_spec, h_spec = config.algo_spec(), config.human_spec()
    w = config.weight
    if config.is_mallows:
        algo = M.sample_mallows_batch(a_spec, size, rng)
        if w == 0:
            human = M.sample_mallows_batch(h_spec, size, rng)
            return algo, human, human
        human = M.sample_anchored_batch(h_spec, algo, w, rng)
        return algo, human, M.sample_mallows_batch(h_spec, size, rng)

    mu = np.asarray(a_spec.utilities)
    algo = R.rank_by_scores_batch(R.sample_scores(np.broadcast_to(mu, (size, len(mu))), a_spec.sigma, rng))
    noise = h_spec.sigma * rng.standard_normal((size, len(mu)))
    indep = R.rank_by_scores_batch(mu[None, :] + noise)
    if w == 0:
        return algo, indep, indep
    human = R.rank_by_scores_batch(R.anchored_means_batch(h_spec, algo) + noise)
    return algo, human, indep


def run_trial(config: PipelineConfig, rng: np.random.Generator) -> TrialOutcome:
    algo, human, _ = _draw(config, 1, rng)
    a, h = tuple(algo[0].tolist()), tuple(human[0].tolist())
    return TrialOutcome(joint_pick(a, h, config.k), a[0], h[0], a, h)


# --- exact oracle ----------------------------------------------------------


def exact_success(config: PipelineConfig) -> SuccessEstimate:
    """Success probabilities by summing over every (algorithm, human) ranking pair.

    Mallows models only; ``n`` must be within the enumeration cap.
    """
    if not config.is_mallows:
        raise TypeError("the exact oracle only supports Mallows models")
    n, k, w = config.n, config.k, config.weight
    P.check_enumerable(n)
    a_spec, h_spec = config.algo_spec(), config.human_spec()
    perms = P.permutation_array(n)
    ranks = P.rank_array(perms)
    prob_a = M.mallows_table(a_spec).probs
    prob_h0 = M.mallows_table(h_spec).probs
    human_first = perms[:, 0] == 1

    p_joint = p_human = 0.0
    step = max(1, M.CHUNK_FLOATS // (len(perms) * k))
    for start in range(0, len(perms), step):
        block = perms[start:start + step]
        if w == 0:
            cond = np.broadcast_to(prob_h0, (len(block), len(perms)))
        else:
            cond = M.normalise(M.anchored_log_weights(h_spec, block, w, perms))
        shown = block[:, :k]
        # (block, humans, k): human's rank of every shown item
        shown_ranks = ranks[:, shown - 1].transpose(1, 0, 2)
        has_best = (shown == 1).any(axis=1)
        best_rank = ranks[:, 0][None, :]
        wins = has_best[:, None] & (best_rank <= shown_ranks.min(axis=2))
        weights = prob_a[start:start + step]
        p_joint += float(weights @ (cond * wins).sum(axis=1))
        p_human += float(weights @ cond[:, human_first].sum(axis=1))

    p_algo = float(prob_a[perms[:, 0] == 1].sum())
    p_human0 = float(prob_h0[human_first].sum())
    return SuccessEstimate(config, p_joint, p_algo, p_human, p_human0)


# --- Monte Carlo -----------------------------------------------------------


def _count_batch(config: PipelineConfig, trials: int, rng: np.random.Generator) -> np.ndarray:
    """Success counts ``[joint, algo, human, human_independent]`` for one batch."""
    counts = np.zeros(4, dtype=np.int64)
    done = 0
    while done < trials:
        size = min(CHUNK, trials - done)
        algo, human, indep = _draw(config, size, rng)
        counts += [
            int((joint_picks(algo, human, config.k) == 1).sum()),
            int((algo[:, 0] == 1).sum()),
            int((joint_picks(algo, human, config.n) == 1).sum()),
            int((indep[:, 0] == 1).sum()),
        ]
        done += size
    return counts


def _std_err(p: float, trials: int) -> float:
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


def estimate_success(config: PipelineConfig, trials: int, seed: int,
                     batches: int = 1) -> SuccessEstimate:
    """Monte Carlo success rates from ``batches`` runs of ``trials`` draws each.

    Batch ``b`` draws from ``numpy.random.default_rng(seed + b)``, so results
    are reproducible and batches may run in any order. Standard errors are
    binomial over all draws; ``batch_std_*`` is the spread across batches.
    """
    if trials < 1 or batches < 1:
        raise ValueError("trials and batches must be positive")
    per_batch = np.array([_count_batch(config, trials, np.random.default_rng(seed + b))
                          for b in range(batches)])
    total = trials * batches
    p = per_batch.sum(axis=0) / total
    rates = per_batch / trials
    spread = rates.std(axis=0, ddof=1) if batches > 1 else np.zeros(4)
    return SuccessEstimate(
        config, float(p[0]), float(p[1]), float(p[2]), float(p[3]),
        *(_std_err(float(x), total) for x in p),
        trials=total, batches=batches, seed=seed,
        batch_std_joint=float(spread[0]), batch_std_algo=float(spread[1]),
    )


# --- CSV rows --------------------------------------------------------------

ROW_FIELDS = [
    "model", "n", "k", "phi_a", "phi_h", "sigma_a", "sigma_h", "weight",
    "p_joint", "p_algo", "p_human", "p_human_independent",
    "se_joint", "se_algo", "se_human", "se_human_independent",
    "batch_std_joint", "batch_std_algo", "trials", "batches", "seed",
]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def estimate_record(est: SuccessEstimate) -> dict:
    """Typed flat record of ``est`` in ``ROW_FIELDS`` order (``None`` for unused fields)."""
    cfg = est.config
    model = cfg.model
    row = {
        "model": "mallows" if cfg.is_mallows else "rum",
        "n": cfg.n, "k": cfg.k,
        "phi_a": getattr(model, "phi_a", None), "phi_h": getattr(model, "phi_h", None),
        "sigma_a": getattr(model, "sigma_a", None), "sigma_h": getattr(model, "sigma_h", None),
        "weight": cfg.weight,
    }
    for f in fields(SuccessEstimate):
        if f.name in ROW_FIELDS:
            row[f.name] = getattr(est, f.name)
    return {key: row[key] for key in ROW_FIELDS}


def estimate_to_row(est: SuccessEstimate) -> dict:
    return {key: _fmt(v) for key, v in estimate_record(est).items()}


def estimate_from_row(row: dict) -> SuccessEstimate:
    def num(key, cast=float):
        return cast(row[key]) if row[key] != "" else None

    if row["model"] == "mallows":
        model = MallowsAgents(num("phi_a"), num("phi_h"))
    else:
        model = RumAgents(num("sigma_a"), num("sigma_h"))
    config = PipelineConfig(int(row["n"]), int(row["k"]), model, float(row["weight"]))
    values = {f.name: num(f.name, int if f.type in ("int", "int | None") else float)
              for f in fields(SuccessEstimate) if f.name in ROW_FIELDS}
    return SuccessEstimate(config, **values)


def estimates_to_csv(estimates) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=ROW_FIELDS, lineterminator="\n")
    writer.writeheader()
    for est in estimates:
        writer.writerow(est.to_row())
    return buf.getvalue()


def estimates_from_csv(text: str) -> list[SuccessEstimate]:
    return [estimate_from_row(row) for row in csv.DictReader(io.StringIO(text))]
