"""Top-k human-algorithm selection: exact and simulated success probabilities."""

__version__ = "0.1.0"

from .perm import enumerate_permutations, kendall_tau, swap_items, top_k  # noqa: E402
from .mallows import (MallowsSpec, anchored_pmf, mallows_normalizer, mallows_pmf,  # noqa: E402
                      sample_anchored, sample_mallows)
from .rum import RumSpec, anchored_means, default_utilities, rank_by_scores, sample_scores  # noqa: E402
from .pipeline import (MallowsAgents, PipelineConfig, RumAgents, SuccessEstimate,  # noqa: E402
                       TrialOutcome, estimate_success, exact_success, run_trial)
from .events import (BijectionReport, EventClass, best_item_map, classify_event,  # noqa: E402
                     event_mass_comparison, verify_bijection)

__all__ = [
    "enumerate_permutations", "kendall_tau", "swap_items", "top_k",
    "MallowsSpec", "anchored_pmf", "mallows_normalizer", "mallows_pmf",
    "sample_anchored", "sample_mallows",
    "RumSpec", "anchored_means", "default_utilities", "rank_by_scores", "sample_scores",
    "MallowsAgents", "PipelineConfig", "RumAgents", "SuccessEstimate", "TrialOutcome",
    "estimate_success", "exact_success", "run_trial",
    "BijectionReport", "EventClass", "best_item_map", "classify_event",
    "event_mass_comparison", "verify_bijection",
]
