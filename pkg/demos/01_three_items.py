"""Three items, two shown: when does the pair beat either agent alone?

Run with ``python demos/01_three_items.py``; writes ``region.svg`` next to it.
"""
from pathlib import Path

import numpy as np

from jointpick import closed_form as CF
from jointpick.experiments import render_svg, run_region_figure
from jointpick.pipeline import MallowsAgents, PipelineConfig, exact_success

# %% Equal accuracy: the pipeline wins
for phi in (0.25, 1.0, 3.0):
    print(f"phi={phi:<5} alone={CF.ph(phi):.4f}  together={CF.pc(phi, phi):.4f}")

# %% The closed forms agree with brute-force enumeration
est = exact_success(PipelineConfig(3, 2, MallowsAgents(0.7, 1.8)))
print("closed form", CF.pc(0.7, 1.8), "enumeration", est.p_joint)

# %% Who should be the stronger partner?
for strong, weak in [(1.5, 0.5), (2.0, 1.0)]:
    print(f"stronger human:  {CF.pc(weak, strong):.4f}   stronger algorithm: {CF.pc(strong, weak):.4f}")

# %% Complementarity map
ds = run_region_figure((0.1, 3.0), 60)
share = np.mean(ds.column("complementary"))
print(f"{share:.0%} of the grid is complementary")
out = Path(__file__).with_name("region.svg")
out.write_text(render_svg(ds))
print("wrote", out)
