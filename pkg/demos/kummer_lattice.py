# Walk through the Kummer lattice, its glue to H^2 and the rank-24 model.
# Run with:  python3 demos/kummer_lattice.py

from kummerlat.kummer import (
    TORUS, build_glue_map, build_kummer_lattice, build_mukai_model, glue_h2, k_lattice,
)
from kummerlat.lattice import discriminant_form, determinant, is_even_unimodular, signature

# %% the torus
H2T = TORUS.h2_lattice()
print("H^2(T):", signature(H2T), "even unimodular:", is_even_unimodular(H2T))

# %% the two halves of H^2(X): K = H^2(T)(2) and the Kummer lattice
K, Pi = k_lattice(), build_kummer_lattice()
print("K   rank", K.rank, "det", determinant(K))
print("Pi  rank", Pi.rank, "det", determinant(Pi))

DK, DPi = discriminant_form(K), discriminant_form(Pi)
print("discriminant groups", DK.elementary_divisors, DPi.elementary_divisors)

# %% gamma is an anti-isometry, so gluing gives an even unimodular lattice
gamma = build_glue_map()
print("glue check:", gamma.check())
H2X, basis = glue_h2()
print("H^2(X):", signature(H2X), "even unimodular:", is_even_unimodular(H2X))

# %% the model of H*(X) in which everything else lives
M = build_mukai_model()
print(M.certification())
n = M.named
print("<u0,u> =", M.ambient_pair(n["u0"], n["u"]), " B_Z^2 =", M.ambient_pair(n["B_Z"], n["B_Z"]))
