"""Find unitary parameters for the dihedral group of order 6 and check the Hodge identities there."""

from cherednik_dirac import CherednikParams, catalog, contravariant_form, standard_module
from cherednik_dirac.cherednik_modules import unitarity_scan
from cherednik_dirac.cohomology import hodge_check
from cherednik_dirac.reflection_groups import ParamC

G, T = catalog("dihedral", 3)
DEGREE = 6

for sigma in T.labels:
    scan = unitarity_scan(G, T, ("1/10", "1/2", "1", "3/2"), degree=DEGREE, sigma=sigma)
    print(sigma, {r["c"]: r["unitary"] for r in scan})

P = CherednikParams(G, T, 1, ParamC.uniform(G, "1/10"))
for sigma in T.labels:
    M = standard_module(sigma, P, DEGREE)
    out = hodge_check(M, contravariant_form(M))
    failing = [k for k, v in out.items() if v is False]
    print(f"M({sigma}) at c=1/10:", "all identities hold" if out["holds"] else failing)
