"""Good, bad and neutral ranking pairs, and the best-item swap between them.

A pair ``(a, h)`` of algorithm and human rankings is *good* when the
pipeline picks item 1 but the algorithm alone would not, and *bad* when the
algorithm alone picks item 1 but the pipeline does not. Swapping item 1 with
the algorithm's top item in both rankings sends every good pair to a bad
pair; this module checks that claim exhaustively for small ``n`` and weighs
the two classes under Mallows probabilities.
"""

from __future__ import annotations

import enum
import json
from dataclasses import asdict, dataclass, field

import numpy as np

from . import mallows as M
from . import perm as P
from .pipeline import MallowsAgents, PipelineConfig, exact_success, joint_pick, joint_picks


class EventClass(enum.Enum):
    GOOD = "good"
    BAD = "bad"
    NEUTRAL = "neutral"


def _pair(algo_perm, human_perm, k: int):
    a, h = P.as_permutation(algo_perm), P.as_permutation(human_perm)
    P.check_same_universe(a, h)
    if not 1 <= k <= len(a):
        raise ValueError(f"k={k} out of range 1..{len(a)}")
    return a, h


def classify_event(algo_perm, human_perm, k: int) -> EventClass:
    """Classify by running the pipeline on the pair."""
    a, h = _pair(algo_perm, human_perm, k)
    joint_ok = joint_pick(a, h, k) == 1
    algo_ok = a[0] == 1
    if joint_ok and not algo_ok:
        return EventClass.GOOD
    if algo_ok and not joint_ok:
        return EventClass.BAD
    return EventClass.NEUTRAL


def _best_reached_through_hidden(a, h, k) -> bool:
    """Item 1 is shown and everything the human prefers to it is hidden."""
    shown = set(a[:k])
    m = h.index(1)
    return 1 in shown and all(x not in shown for x in h[:m])


def classify_event_by_cases(algo_perm, human_perm, k: int) -> EventClass:
    """Classify from the case conditions on positions, without simulating a pick.

    Good: the algorithm does not rank item 1 first but shows it, and either the
    human ranks item 1 first or every item the human ranks above it is hidden.
    Bad: the algorithm ranks item 1 first, the human does not, and it is not the
    case that everything the human ranks above item 1 is hidden.
    """
    a, h = _pair(algo_perm, human_perm, k)
    shown = a[:k]
    if a[0] != 1 and 1 in shown:
        if h[0] == 1 or _best_reached_through_hidden(a, h, k):
            return EventClass.GOOD
    if a[0] == 1 and h[0] != 1 and not _best_reached_through_hidden(a, h, k):
        return EventClass.BAD
    return EventClass.NEUTRAL


def best_item_map(algo_perm, human_perm, k: int) -> tuple[P.Permutation, P.Permutation]:
    """Swap item 1 with the algorithm's top item in both rankings of a good pair."""
    a, h = _pair(algo_perm, human_perm, k)
    if classify_event(a, h, k) is not EventClass.GOOD:
        raise ValueError(f"({P.to_string(a)}, {P.to_string(h)}) is not a good event for k={k}")
    top = a[0]
    return P.swap_items(a, 1, top), P.swap_items(h, 1, top)


def inverse_best_item_map(algo_perm, human_perm, k: int) -> tuple[P.Permutation, P.Permutation]:
    """Send a bad pair back to the good pair it came from.

    The partner of item 1 is the human's first item when the algorithm shows
    it, and otherwise the human's highest-ranked item among those shown.
    """
    a, h = _pair(algo_perm, human_perm, k)
    if classify_event(a, h, k) is not EventClass.BAD:
        raise ValueError(f"({P.to_string(a)}, {P.to_string(h)}) is not a bad event for k={k}")
    shown = set(a[:k])
    if h[0] in shown:
        partner = h[0]
    else:
        partner = next(x for x in h if x in shown)
    return P.swap_items(a, 1, partner), P.swap_items(h, 1, partner)


@dataclass
class BijectionReport:
    n: int
    k: int
    good_count: int = 0
    bad_count: int = 0
    map_is_injective: bool = True
    inverse_recovers: bool = True
    images_are_bad: bool = True
    preimages_are_good: bool = True
    classifier_disagreements: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.good_count == self.bad_count and self.map_is_injective
                and self.inverse_recovers and self.images_are_bad
                and self.preimages_are_good and self.classifier_disagreements == 0
                and not self.counterexamples)

    def to_json(self) -> str:
        data = asdict(self)
        data["counterexamples"] = [[P.to_string(a), P.to_string(h)] for a, h in self.counterexamples]
        data["ok"] = self.ok
        return json.dumps(data, indent=2)


def verify_bijection(n: int, k: int, max_counterexamples: int = 20) -> BijectionReport:
    """Check the good-to-bad swap map over all ``n!**2`` ranking pairs."""
    P.check_enumerable(n)
    if not 1 <= k < n:
        raise ValueError(f"k must satisfy 1 <= k < n, got k={k}, n={n}")
    report = BijectionReport(n, k)
    perms = list(P.enumerate_permutations(n))
    good, bad = [], []
    for a in perms:
        for h in perms:
            cls = classify_event(a, h, k)
            if cls is not classify_event_by_cases(a, h, k):
                report.classifier_disagreements += 1
                _note(report, (a, h), max_counterexamples)
            if cls is EventClass.GOOD:
                good.append((a, h))
            elif cls is EventClass.BAD:
                bad.append((a, h))
    report.good_count, report.bad_count = len(good), len(bad)

    images = set()
    for pair in good:
        image = best_item_map(*pair, k)
        if classify_event(*image, k) is not EventClass.BAD:
            report.images_are_bad = False
            _note(report, pair, max_counterexamples)
            continue
        if image in images:
            report.map_is_injective = False
            _note(report, pair, max_counterexamples)
        images.add(image)
        if inverse_best_item_map(*image, k) != pair:
            report.inverse_recovers = False
            _note(report, pair, max_counterexamples)

    for pair in bad:
        pre = inverse_best_item_map(*pair, k)
        if classify_event(*pre, k) is not EventClass.GOOD:
            report.preimages_are_good = False
            _note(report, pair, max_counterexamples)
        elif best_item_map(*pre, k) != pair:
            report.inverse_recovers = False
            _note(report, pair, max_counterexamples)
    return report


def _note(report: BijectionReport, pair, limit: int) -> None:
    if len(report.counterexamples) < limit:
        report.counterexamples.append(pair)


def mapping_inversion_deltas(n: int, k: int) -> list[tuple[int, int]]:
    """Change in inversion count ``(algorithm, human)`` under the swap, per good pair."""
    P.check_enumerable(n)
    ident = P.identity(n)
    out = []
    for a in P.enumerate_permutations(n):
        if a[0] == 1 or 1 not in a[:k]:
            continue
        for h in P.enumerate_permutations(n):
            if classify_event(a, h, k) is EventClass.GOOD:
                a2, h2 = best_item_map(a, h, k)
                out.append((P.kendall_tau(ident, a2) - P.kendall_tau(ident, a),
                            P.kendall_tau(ident, h2) - P.kendall_tau(ident, h)))
    return out


def event_class_matrix(n: int, k: int) -> np.ndarray:
    """``(n!, n!)`` array of +1 (good), -1 (bad), 0 (neutral) over lexicographic pairs."""
    perms = P.permutation_array(n)
    N = len(perms)
    algo = np.repeat(perms, N, axis=0)
    human = np.tile(perms, (N, 1))
    joint_ok = joint_picks(algo, human, k) == 1
    algo_ok = algo[:, 0] == 1
    cls = joint_ok.astype(np.int8) - algo_ok.astype(np.int8)
    return cls.reshape(N, N)


def event_mass_comparison(n: int, k: int, phi_a: float, phi_h: float,
                          w: float = 0.0) -> tuple[float, float]:
    """Total Mallows probability of good pairs and of bad pairs."""
    P.check_enumerable(n)
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    perms = P.permutation_array(n)
    prob_a = M.mallows_table(M.MallowsSpec(n, phi_a)).probs
    cond = M.normalise(M.anchored_log_weights(M.MallowsSpec(n, phi_h), perms, w, perms))
    joint = prob_a[:, None] * cond
    cls = event_class_matrix(n, k)
    return float(joint[cls == 1].sum()), float(joint[cls == -1].sum())


def mass_gap_matches_oracle(n: int, k: int, phi_a: float, phi_h: float, w: float = 0.0) -> float:
    """``|(good - bad) - (p_joint - p_algo)|`` against the exact pipeline oracle."""
    good, bad = event_mass_comparison(n, k, phi_a, phi_h, w)
    est = exact_success(PipelineConfig(n, k, MallowsAgents(phi_a, phi_h), w))
    return abs((good - bad) - (est.p_joint - est.p_algo))
