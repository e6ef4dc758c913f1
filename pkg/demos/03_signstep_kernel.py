"""
A kernel that is not a Schur multiplier
=======================================

phi(s, t) = 1 when s + t >= 0 is bounded, yet the multipliers obtained by
averaging it over finer and finer grids have growing norms.
"""

import numpy as np

from schurmult import (SearchConfig, discretize_kernel, run_kernel_growth, signstep_kernel,
                       uniform_partition)

k = signstep_kernel((-1.0, 1.0))
p = uniform_partition(-1.0, 1.0, 4)
# rows follow t, columns follow s
print(discretize_kernel(k, p, p))

rep = run_kernel_growth(k, 1.0, [2, 4, 8, 16, 32], (2, 2), SearchConfig())
lows = rep.column("lower")
for n, v in zip(rep.column("size"), lows):
    print(f"n = {n:3d}   lower bound {v:.6f}")

# doubling the grid adds a roughly constant amount
print("increments:", np.round(np.diff(lows), 4))
