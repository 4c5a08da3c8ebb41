"""Closed-form success probabilities for three items with two presented.

Everything here assumes unanchored Mallows agents, ``n = 3`` and ``k = 2``.
``pc`` is the joint success rate, ``ph``/``pa`` the solo rates. The sign
tests ``hum_better`` and ``alg_better`` are the numerators of ``pc - ph`` and
``pc - pa`` with their positive factors cleared.
"""

from __future__ import annotations

import csv
import io
from dataclasses import astuple, dataclass, fields
from typing import Iterator

import numpy as np
from numpy import exp


def z3(phi):
    """Mallows normaliser for three items."""
    return 1 + 2 * exp(-phi) + 2 * exp(-2 * phi) + exp(-3 * phi)


def ph(phi):
    """Probability a lone agent with accuracy ``phi`` ranks item 1 first."""
    return (1 + exp(-phi)) / z3(phi)


pa = ph


def pc(phi_a, phi_h):
    """Joint success probability of the pipeline."""
    a, h = phi_a, phi_h
    num = (1 + exp(-h) + exp(-2 * h) + 2 * exp(-a) + exp(-2 * a) + exp(-a - 2 * h)
           + 3 * exp(-a - h) + 2 * exp(-2 * a - h))
    return num / (z3(a) * z3(h))


def hum_better_expr(phi_a, phi_h):
    a, h = phi_a, phi_h
    return exp(a + h) + exp(2 * a) - exp(h) - exp(2 * h)


def alg_better_expr(phi_a, phi_h):
    a, h = phi_a, phi_h
    return -exp(a + h) - exp(a + 2 * h) - exp(a) + 2 * exp(2 * h) + exp(3 * h)


def hum_better(phi_a: float, phi_h: float) -> bool:
    """True when the pipeline beats the human alone."""
    return bool(hum_better_expr(phi_a, phi_h) > 0)


def alg_better(phi_a: float, phi_h: float) -> bool:
    """True when the pipeline beats the algorithm alone."""
    return bool(alg_better_expr(phi_a, phi_h) > 0)


def human_stronger_band(phi_a: float, phi_h: float) -> bool:
    """More-accurate-human band ``phi_h > phi_a >= max(phi_h / 1.3, phi_h - 0.3)``."""
    return phi_h > phi_a >= max(phi_h / 1.3, phi_h - 0.3)


def algorithm_stronger_band(phi_a: float, phi_h: float, factor: float = 1.1) -> bool:
    """More-accurate-algorithm band ``phi_h <= phi_a <= factor * phi_h`` with ``phi_h <= 1``."""
    return phi_h <= 1.0 and phi_h <= phi_a <= factor * phi_h


def asymmetry_gap(phi_1: float, phi_2: float) -> float:
    """``pc`` with the stronger agent as human minus ``pc`` with it as algorithm."""
    return float(pc(phi_2, phi_1) - pc(phi_1, phi_2))


def asymmetry_check(phi_1: float, phi_2: float) -> bool:
    if not phi_1 > phi_2:
        raise ValueError(f"need phi_1 > phi_2, got {phi_1} and {phi_2}")
    return asymmetry_gap(phi_1, phi_2) > 0


@dataclass(frozen=True)
class RegionPoint:
    phi_a: float
    phi_h: float
    p_joint: float
    p_algo: float
    p_human: float
    complementary: bool
    hum_better_region: bool
    alg_better_region: bool


def region_point(phi_a: float, phi_h: float) -> RegionPoint:
    p_joint, p_algo, p_human = float(pc(phi_a, phi_h)), float(pa(phi_a)), float(ph(phi_h))
    return RegionPoint(
        float(phi_a), float(phi_h), p_joint, p_algo, p_human,
        p_joint > max(p_algo, p_human),
        human_stronger_band(phi_a, phi_h), algorithm_stronger_band(phi_a, phi_h),
    )


def complementarity_grid(phi_range: tuple[float, float] = (0.1, 3.0),
                         resolution: int = 50) -> Iterator[RegionPoint]:
    """Evaluate the closed forms on a ``resolution x resolution`` grid (rows by ``phi_a``)."""
    lo, hi = phi_range
    if not 0 < lo <= hi:
        raise ValueError(f"phi range must be positive, got {phi_range}")
    axis = np.linspace(lo, hi, resolution)
    for phi_a in axis:
        for phi_h in axis:
            yield region_point(phi_a, phi_h)


REGION_FIELDS = [f.name for f in fields(RegionPoint)]


def region_to_csv(points) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(REGION_FIELDS)
    for p in points:
        writer.writerow([repr(v) if isinstance(v, float) else str(v).lower() for v in astuple(p)])
    return buf.getvalue()


def region_from_csv(text: str) -> list[RegionPoint]:
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        out.append(RegionPoint(*(
            (row[name] == "true") if f.type == "bool" else float(row[name])
            for name, f in zip(REGION_FIELDS, fields(RegionPoint))
        )))
    return out
