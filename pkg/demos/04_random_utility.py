"""Gaussian random-utility agents: noisy scores around linear utilities.

No closed form here, so everything is Monte Carlo with standard errors.
"""
from jointpick.experiments import rum_asymmetry, rum_cell
from jointpick.pipeline import PipelineConfig, RumAgents, estimate_success

# %% Equal noise on the diagonal, ten items, two shown
for i, s in enumerate((0.3, 0.5, 0.8)):
    c = rum_cell(10, 2, s, s, 200_000, seed=1000 * i)
    print(f"sigma={s}: joint={c['p_joint']:.4f} best alone={max(c['p_algo'], c['p_human']):.4f}"
          f"  gap/se={c['gap'] / c['se_gap']:.1f}")

# %% Full anchoring removes the benefit
for k in (1, 2, 3):
    est = estimate_success(PipelineConfig(5, k, RumAgents(0.5, 0.5), 1.0), 100_000, seed=k)
    print(f"w=1 k={k}: joint={est.p_joint:.4f} algo={est.p_algo:.4f}")

# %% Stronger human versus stronger algorithm at low noise
for row in rum_asymmetry(bases=(0.05, 0.1), trials=200_000).rows:
    print(f"sigma {row['sigma_strong']:.2f} vs {row['sigma_weak']:.3f}: "
          f"human advantage {row['human_advantage']:+.4f} (se {row['se_advantage']:.4f})")
