# Twisted transcendental lattices of a torus and of its Kummer surface.

import numpy as np

from kummerlat.kummer import (
    TORUS, build_mukai_model, sample_geometric_interpretation, transcendental_lattice,
    twisted_kernel, verify_twisted_isometry,
)
from kummerlat.scenario import sample_twisted_bfield

M = build_mukai_model()
rng = np.random.default_rng(3)

for n in (2, 3, 4):
    g = sample_geometric_interpretation(rng)
    _, T = transcendental_lattice(TORUS.h2_lattice(), [g.omega1, g.omega2])
    B = sample_twisted_bfield(rng, T, n)
    tk = twisted_kernel(T, B, n)
    rep = verify_twisted_isometry(g, B, M)
    print(f"n={n}: kernel index {tk.index}, torus Gram {rep.torus_gram}, "
          f"Kummer Gram {rep.kummer_gram}, isometry {rep.passed}")

# the B-field has to be pi_* B / 2, not pi_* B
rep = verify_twisted_isometry(g, B, M, b_override=M.pi_star(B))
print("with pi_* B instead:", rep.passed)
