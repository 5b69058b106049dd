# The orthogonal complement of an induced positive 4-plane has no (-2)-vectors,
# unless the B_Z/2 shift is dropped from the B-field.

from fractions import Fraction

import numpy as np

from kummerlat.enumeration import roots_in_complement
from kummerlat.kummer import (
    build_mukai_model, induced_four_plane, orbifold_map, sample_geometric_interpretation,
)

M = build_mukai_model()
rng = np.random.default_rng(7)

for k in range(5):
    g = sample_geometric_interpretation(rng)
    res = roots_in_complement(M, induced_four_plane(g, M))
    print(f"sample {k}: volume {g.volume}, complement {res.complement_signature}, "
          f"roots {len(res.roots)}")

# positive control
B, _, _ = orbifold_map(g, M)
bad = induced_four_plane(g, M, b_override=B - M.named["B_Z"] * Fraction(1, 2))
res = roots_in_complement(M, bad)
print("without B_Z/2:", len(res.roots), "roots, e.g.", [str(x) for x in res.roots[0]])
