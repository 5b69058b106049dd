# Central charges on a hyperbolic Neron-Severi lattice: the omega^2 > 2
# criterion, a wall crossing along a path, and the winding of a lambda-loop.

from fractions import Fraction

from kummerlat.stability import (
    ChamberPoint, MukaiVector, PathInChamber, central_charge, hyperbolic_ns,
    lift_path_winding, sufficiency_check, wall_crossings,
)

U = hyperbolic_ns()

for omega in [(2, 1), (1, 1), (1, Fraction(3, 4))]:
    p = ChamberPoint((0, 0), omega)
    r = sufficiency_check(p, U)
    w2 = U.ns_pair(omega, omega)
    print(f"omega^2 = {w2}: {r.status}", "" if r.delta is None else
          f"by {tuple(map(str, r.delta.as_tuple()))} with Z = {tuple(map(str, r.charge))}")

# Z of a spherical object at a boundary point
v = MukaiVector(1, (0, 0), 1)
print("Z(1,0,1) at omega=(1,1):", central_charge(ChamberPoint((0, 0), (1, 1)), v, U))

# %% walls between the skyscraper and a curve class
path = PathInChamber([ChamberPoint((0, 0), (3, 1)), ChamberPoint((0, 0), (1, 2))])
for e in wall_crossings(path, [(0, 0, 0, 1), (0, 1, -1, 0)], U):
    print("wall at t =", e.t, "on segment", e.segment, "signs", e.sign_before, "->", e.sign_after)

# %% lambda goes 0 -> 2: one turn of the double shift
p = ChamberPoint((0, 0), (1, 1))
print("winding:", lift_path_winding(PathInChamber([p, p], (0, 2)), U).winding)
