"""
Mixed operator norms
====================

How big is a matrix as a map from l_p to l_q? Only a handful of exponent
pairs have closed forms; everywhere else we squeeze the answer between a
power-iteration lower bound and a certified upper bound.
"""

import numpy as np

from schurmult import SearchConfig, opnorm, opnorm_exact, opnorm_power_lower

a = np.array([[1.0, 2.0], [0.0, 1.0]])

# p = 1: the largest column norm
print("||A||_{1->2}   =", opnorm_exact(a, (1, 2)), "  sqrt(5) =", np.sqrt(5))

# q = inf: the largest row norm in the conjugate exponent
print("||A||_{3->inf} =", opnorm_exact(a, (3, "inf")))

# (3, 2) has no closed form
print("closed form at (3, 2):", opnorm_exact(a, (3, 2)))

est = opnorm(a, (3, 2), SearchConfig(seed=1))
print(f"(3, 2): {est.lower:.12f} <= ||A|| <= {est.upper:.12f}   via {est.methods}")

# the witness is a unit vector of l_3 attaining the lower bound
x = est.witness
print("witness", x, " |x|_3 =", np.sum(np.abs(x) ** 3) ** (1 / 3))

# the signed power iteration never goes downhill
b = np.random.default_rng(0).standard_normal((6, 6))
low = opnorm_power_lower(b, (4, 1.5))
print(f"6x6 random, (4, 1.5): lower bound {low.lower:.6f} (upper {low.upper})")
