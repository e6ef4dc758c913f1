"""
Bounding a multiplier from both sides
=====================================

A witness A gives ||m o A|| / ||A|| from below. A factorization
m_ij = <x_j, y_i> over a probability space gives
max ||x_j||_p * max ||y_i||_q' from above. The dual trace formula is a
second route to a lower bound.
"""

import numpy as np

from schurmult import SearchConfig, certificate_value, duality_report, factorization_solve

cfg = SearchConfig(seed=7)
m = np.random.default_rng(7).standard_normal((3, 3))

rep = duality_report(m, (4, 2), cfg)
print(f"direct lower {rep.direct.lower:.6f}  {rep.direct.methods}")
print(f"dual lower   {rep.dual.lower:.6f}  {rep.dual.methods}")
print(f"upper        {rep.upper:.6f}   gap {rep.gap:.3%}")

# the identity mask has norm 1: orthonormal functions on two atoms do it
cert = factorization_solve(np.eye(2), (2, 2), atoms=2, cfg=cfg)
print("weights", cert.atom_weights, " value", certificate_value(cert, (2, 2)))
print(cert.product())
