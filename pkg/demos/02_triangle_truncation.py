"""
Triangular truncation grows like log n
======================================

Keeping the upper triangle of a matrix is a Schur multiplier. Its norm on
B(l_2^n) is unbounded in n; the antisymmetric Hilbert matrix 1/(i-j) is the
classical witness, and a local ascent from it pins the norm down.
"""

import numpy as np

from schurmult import SearchConfig, hilbert_witness, run_triangle_growth, triangle_matrix

print(triangle_matrix(4))

h = hilbert_witness(64)
print("||H_64||_2 =", np.linalg.norm(h, 2), " (pi =", np.pi, ")")

rep = run_triangle_growth([8, 16, 32, 64, 128], (2, 2), SearchConfig())
for row in rep.rows:
    print(f"n = {row['size']:4d}   ||T_n|| >= {row['lower']:.6f}   ln n = {np.log(row['size']):.3f}")

print("fit:", rep.fit)
# the slope sits near 1/pi
print("1/pi =", 1 / np.pi)
