"""Experiment runners producing the figure datasets.

Each runner returns a :class:`FigureDataset`: flat rows plus metadata. Rows
hold plain Python scalars so they serialise to CSV and parse back unchanged.
Stochastic runners derive every configuration's seed from the run seed and
the configuration's position in the sweep, so output is reproducible.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from . import charts
from . import closed_form as CF
from .pipeline import (MallowsAgents, PipelineConfig, RumAgents, estimate_success,
                       exact_success)

WEIGHTS = (0.0, 0.25, 0.5, 0.75, 1.0)
#: Noise level used for RUM sweeps when none is given (utilities span [0, 1]).
DEFAULT_SIGMA = 0.5
# Seeds of successive sweep configurations are this far apart so batch seeds never overlap.
SEED_STRIDE = 1000


@dataclass
class FigureDataset:
    name: str
    figure: str
    columns: list[str]
    rows: list[dict]
    metadata: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_fmt(row[c]) for c in self.columns])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str, name: str = "", figure: str = "") -> "FigureDataset":
        reader = csv.reader(io.StringIO(text))
        columns = next(reader)
        rows = [{c: _parse(v) for c, v in zip(columns, line)} for line in reader]
        return cls(name, figure, columns, rows)

    def metadata_json(self) -> str:
        return json.dumps({"name": self.name, "figure": self.figure, **self.metadata},
                          indent=2, sort_keys=True)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _parse(text: str):
    if text in ("true", "false"):
        return text == "true"
    try:
        return int(text)
    except ValueError:
        return float(text)


def provenance(name: str, params: dict) -> str:
    digest = hashlib.sha1(json.dumps(params, sort_keys=True).encode()).hexdigest()[:12]
    return f"jointpick-{__version__}+{name}.{digest}"


def _meta(name: str, figure: str, params: dict) -> dict:
    return {"params": params, "provenance": provenance(name, params), "figure": figure}


# --- Mallows anchoring sweep ----------------------------------------------

MALLOWS_ANCHOR_COLUMNS = [
    "k", "weight", "p_joint_exact", "p_algo_exact", "p_human_exact", "p_human_independent_exact",
    "p_joint_mc", "p_algo_mc", "p_human_mc", "se_joint_mc", "batch_std_joint_mc",
    "complementary_exact",
]


def run_figure_mallows_anchoring(n: int = 5, phi: float = 1.0, weights=WEIGHTS,
                                 trials: int = 50_000, batches: int = 10,
                                 seed: int = 0) -> FigureDataset:
    """Success rate against ``k`` for several anchor weights, equal accuracy.

    Every point carries the exact value and a batched Monte Carlo replicate.
    ``trials=0`` skips the simulation.
    """
    rows = []
    index = 0
    for w in weights:
        for k in range(1, n + 1):
            cfg = PipelineConfig(n, k, MallowsAgents(phi, phi), w)
            ex = exact_success(cfg)
            row = {"k": k, "weight": float(w), "p_joint_exact": ex.p_joint,
                   "p_algo_exact": ex.p_algo, "p_human_exact": ex.p_human,
                   "p_human_independent_exact": ex.p_human_independent}
            if trials:
                mc = estimate_success(cfg, trials, seed + SEED_STRIDE * index, batches)
                row.update(p_joint_mc=mc.p_joint, p_algo_mc=mc.p_algo, p_human_mc=mc.p_human,
                           se_joint_mc=mc.se_joint, batch_std_joint_mc=mc.batch_std_joint)
            else:
                row.update(p_joint_mc=math.nan, p_algo_mc=math.nan, p_human_mc=math.nan,
                           se_joint_mc=math.nan, batch_std_joint_mc=math.nan)
            # the k=1 pipeline is the algorithm alone and k=n the (possibly anchored) human
            row["complementary_exact"] = ex.p_joint > max(ex.p_algo, ex.p_human)
            rows.append(row)
            index += 1
    params = {"n": n, "phi": phi, "weights": list(weights), "trials": trials,
              "batches": batches, "seed": seed}
    return FigureDataset("mallows-anchor", "2", MALLOWS_ANCHOR_COLUMNS, rows,
                         _meta("mallows-anchor", "2", params))


# --- RUM anchoring sweep ---------------------------------------------------

RUM_ANCHOR_COLUMNS = [
    "k", "weight", "sigma", "p_joint", "p_algo", "p_human", "p_human_independent",
    "se_joint", "se_algo", "se_human", "batch_std_joint", "diff_vs_algo", "se_diff",
]


def run_figure_rum_anchoring(n: int = 5, sigma: float = DEFAULT_SIGMA, weights=WEIGHTS,
                             trials: int = 50_000, batches: int = 10,
                             seed: int = 0) -> FigureDataset:
    """Random-utility counterpart of the Mallows anchoring sweep (Monte Carlo only)."""
    rows = []
    index = 0
    for w in weights:
        for k in range(1, n + 1):
            cfg = PipelineConfig(n, k, RumAgents(sigma, sigma), w)
            mc = estimate_success(cfg, trials, seed + SEED_STRIDE * index, batches)
            rows.append({
                "k": k, "weight": float(w), "sigma": float(sigma),
                "p_joint": mc.p_joint, "p_algo": mc.p_algo, "p_human": mc.p_human,
                "p_human_independent": mc.p_human_independent,
                "se_joint": mc.se_joint, "se_algo": mc.se_algo, "se_human": mc.se_human,
                "batch_std_joint": mc.batch_std_joint,
                "diff_vs_algo": mc.p_joint - mc.p_algo,
                "se_diff": math.hypot(mc.se_joint, mc.se_algo),
            })
            index += 1
    params = {"n": n, "sigma": sigma, "weights": list(weights), "trials": trials,
              "batches": batches, "seed": seed, "utilities": "linear [1..0]"}
    return FigureDataset("rum-anchor", "4", RUM_ANCHOR_COLUMNS, rows,
                         _meta("rum-anchor", "4", params))


# --- RUM accuracy contour --------------------------------------------------

RUM_CONTOUR_COLUMNS = [
    "sigma_a", "sigma_h", "p_joint", "p_algo", "p_human", "se_joint", "se_algo", "se_human",
    "gap", "se_gap", "complementary",
]


def rum_cell(n: int, k: int, sigma_a: float, sigma_h: float, trials: int, seed: int) -> dict:
    """One contour cell; complementary means the gap exceeds three standard errors."""
    mc = estimate_success(PipelineConfig(n, k, RumAgents(sigma_a, sigma_h)), trials, seed)
    best_solo, se_solo = max((mc.p_algo, mc.se_algo), (mc.p_human, mc.se_human))
    gap = mc.p_joint - best_solo
    se_gap = math.hypot(mc.se_joint, se_solo)
    return {"sigma_a": float(sigma_a), "sigma_h": float(sigma_h),
            "p_joint": mc.p_joint, "p_algo": mc.p_algo, "p_human": mc.p_human,
            "se_joint": mc.se_joint, "se_algo": mc.se_algo, "se_human": mc.se_human,
            "gap": gap, "se_gap": se_gap, "complementary": gap > 3 * se_gap}


def run_figure_rum_contour(n: int = 10, k: int = 2, sigmas=None, trials: int = 100_000,
                           seed: int = 0) -> FigureDataset:
    """Complementarity over a grid of algorithm and human noise levels."""
    if sigmas is None:
        sigmas = np.round(np.linspace(0.04, 0.52, 13), 6)
    sigmas = [float(s) for s in sigmas]
    rows = []
    index = 0
    for sa in sigmas:
        for sh in sigmas:
            rows.append(rum_cell(n, k, sa, sh, trials, seed + SEED_STRIDE * index))
            index += 1
    params = {"n": n, "k": k, "sigmas": sigmas, "trials": trials, "seed": seed,
              "utilities": "linear [1..0]"}
    return FigureDataset("rum-contour", "3", RUM_CONTOUR_COLUMNS, rows,
                         _meta("rum-contour", "3", params))


def rum_asymmetry(n: int = 10, k: int = 2, bases=(0.05, 0.08, 0.1), offset: float = 0.3,
                  trials: int = 400_000, seed: int = 0) -> FigureDataset:
    """Gap with the more accurate agent as human versus as algorithm.

    For each diagonal noise level ``s`` the noisier agent gets ``s * (1 + offset)``.
    ``human_advantage`` is the first gap minus the second.
    """
    rows = []
    for i, s in enumerate(bases):
        other = s * (1 + offset)
        strong_h = rum_cell(n, k, other, s, trials, seed + SEED_STRIDE * (2 * i))
        strong_a = rum_cell(n, k, s, other, trials, seed + SEED_STRIDE * (2 * i + 1))
        adv = strong_h["gap"] - strong_a["gap"]
        se = math.hypot(strong_h["se_gap"], strong_a["se_gap"])
        rows.append({"sigma_strong": float(s), "sigma_weak": float(other),
                     "gap_strong_human": strong_h["gap"], "gap_strong_algo": strong_a["gap"],
                     "p_joint_strong_human": strong_h["p_joint"],
                     "p_joint_strong_algo": strong_a["p_joint"],
                     "human_advantage": adv, "se_advantage": se})
    params = {"n": n, "k": k, "bases": list(bases), "offset": offset, "trials": trials,
              "seed": seed}
    return FigureDataset("rum-asymmetry", "3", list(rows[0]), rows,
                         _meta("rum-asymmetry", "3", params))


# --- closed-form region ----------------------------------------------------


def run_region_figure(phi_range=(0.1, 3.0), resolution: int = 60) -> FigureDataset:
    points = CF.complementarity_grid(tuple(phi_range), resolution)
    rows = [dict(zip(CF.REGION_FIELDS, _point_values(p))) for p in points]
    params = {"phi_range": list(phi_range), "resolution": resolution}
    return FigureDataset("mallows-region", "1", list(CF.REGION_FIELDS), rows,
                         _meta("mallows-region", "1", params))


def _point_values(p: CF.RegionPoint):
    return [getattr(p, f) for f in CF.REGION_FIELDS]


# --- rendering -------------------------------------------------------------


def render_svg(ds: FigureDataset) -> str:
    if ds.name == "mallows-anchor":
        base = ds.rows[0]["p_algo_exact"]
        return charts.line_chart(ds.rows, "k", "p_joint_exact", "weight", base,
                                 title="Mallows, anchoring sweep")
    if ds.name == "rum-anchor":
        base = float(np.mean(ds.column("p_algo")))
        return charts.line_chart(ds.rows, "k", "p_joint", "weight", base,
                                 title="Random utility, anchoring sweep")
    if ds.name == "rum-contour":
        # axes show noise; lower-left is most accurate here
        return charts.heatmap(ds.rows, "sigma_a", "sigma_h", "p_joint", "complementary",
                              title="Random utility, complementarity region")
    if ds.name == "mallows-region":
        return charts.heatmap(ds.rows, "phi_a", "phi_h", "p_joint", "complementary",
                              {"hum_better_region": "red", "alg_better_region": "white"},
                              title="Mallows n=3, k=2")
    raise ValueError(f"no chart for dataset {ds.name!r}")


FIGURES = {
    "mallows-anchor": run_figure_mallows_anchoring,
    "rum-anchor": run_figure_rum_anchoring,
    "rum-contour": run_figure_rum_contour,
    "mallows-region": run_region_figure,
}
