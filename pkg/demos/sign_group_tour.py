"""Walk through the rank-one sign group: relations, a finite-dimensional simple, its cohomology."""

from cherednik_dirac import CherednikParams, catalog, simple_quotient, standard_module
from cherednik_dirac.cohomology import dirac_cohomology, hstar_cohomology, hstar_homology
from cherednik_dirac.vogan import PBWAlgebra

G, T = catalog("cyclic", 2)

# x·y in normal form: y on the left, then the group, then x
P = CherednikParams(G, T, 1, {"s0": "1/5"})
H = PBWAlgebra(P)
print("x*y =", H.to_str(H.normalize([("x", 0), ("y", 0)])))

# the lowering factor k - c[k odd] vanishes at k = 3 when c = 3
P3 = CherednikParams(G, T, 1, {"s0": 3})
L = simple_quotient(standard_module("triv", P3, 8))
print("L(triv) blocks:", L.dims, "finite:", L.finite)

print("H^p(h*, L):", hstar_cohomology(L).by_degree())
print("H_p(h*, L):", hstar_homology(L).by_degree())

D = dirac_cohomology(L)
for part in D.to_json()["parts"]:
    strand, parity = part["key"]
    print(f"H_D strand {strand} ({parity}):", part["multiplicities"])
