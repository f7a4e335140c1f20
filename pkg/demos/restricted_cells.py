"""
At t = 0 the centre is large.  This script finds low-degree central
elements, checks the decomposition of the delta-closed invariants, and
sweeps the parameter to watch the cells of the dihedral group split.
"""

import json

from cherednik_dirac import CherednikParams, catalog
from cherednik_dirac.cells import cell_sweep, center_probe
from cherednik_dirac.reflection_groups import ParamC
from cherednik_dirac.vogan import find_central_elements, verify_vogan_decomposition

G, T = catalog("dihedral", 3)
P = CherednikParams(G, T, 0, ParamC.uniform(G, "1/3"))

Z = find_central_elements(P, 2)
print("central elements by weight:", {w: len(v) for w, v in sorted(Z.by_weight.items())})
print("centre modulo the invariant ideals:", center_probe(P, 2, Z))

cert = verify_vogan_decomposition(P, 1)
print("kernel", cert["kernel_dim"], "= image", cert["image_dim"], "+ class sums", cert["delta_span_dim"],
      "->", cert["holds"])
print("one witness:", json.dumps(cert["witnesses"][0])[:200], "...")

for rec in cell_sweep(G, T, threads=2):
    mark = " <- partition changed" if rec["changed"] else ""
    print(f"c = {rec['c']:>4}: {rec['partition']['cells']}{mark}")
