"""
Inclusions between multiplier classes
=====================================

Raising p or lowering q only makes it harder to be a multiplier, so a bound
at (4, 2) also bounds the norm at (3, 2.5). We also look at the ratio of
the (p, p) and (p, 1) norms for a few random matrices.
"""

import numpy as np

from schurmult import SearchConfig, explore_open_problem, run_inclusion_check

cfg = SearchConfig(seed=2)
rep = run_inclusion_check((4, 2), (3, 2.5), 5, cfg, size=3)
for r in rep.rows:
    print(f"trial {r['trial']}: lower(3,2.5) = {r['lower']:.5f}   upper(4,2) = {r['upper']:.5f}")

rep = explore_open_problem(1.5, 3, cfg, size=3)
print("ratios (p,p)/(p,1):", np.round(rep.column("ratio"), 4))
print("flagged:", rep.column("flagged"))
