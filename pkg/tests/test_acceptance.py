"""One test per acceptance criterion; every comparison is an exact equality."""

import json
from fractions import Fraction

import pytest

from cherednik_dirac.cells import RestrictedModels, cell_membership_check, cell_sweep, cm_cells, decomposition_numbers
from cherednik_dirac.cherednik_modules import (
    CherednikParams,
    contravariant_form,
    simple_quotient,
    standard_module,
    unitarity_scan,
)
from cherednik_dirac.cli import JobConfig, run
from cherednik_dirac.cohomology import dirac_cohomology, hodge_check, hstar_cohomology, hstar_homology, pin_cover
from cherednik_dirac.reflection_groups import ParamC, catalog
from cherednik_dirac.vogan import VoganEngine, casselman_osborne_check, find_central_elements, verify_vogan_decomposition

MATRIX = [("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("dihedral", 3), ("dihedral", 4)]


def point(family, p, t, c):
    G, T = catalog(family, p)
    return CherednikParams(G, T, t, ParamC.uniform(G, c))


def lowering_zero(c, t=1, limit=50):
    """First k with y x^k·1 = 0 in M(triv) for the sign group, or None."""
    for k in range(1, limit):
        if k * t - (c if k % 2 else 0) == 0:
            return k
    return None


def test_standard_module_cohomology(acceptance):
    ok = True
    for family, p in MATRIX:
        P = point(family, p, 1, "1/5")
        for sigma in P.table.labels:
            M = standard_module(sigma, P, 6)
            H = hstar_homology(M).by_degree()
            good = H.get(0) == {sigma: 1} and all(not v for i, v in H.items() if i > 0)
            ok &= acceptance("1 standard-module cohomology", f"{family}:{p} M({sigma}): H_0 = {sigma}, H_i>0 = 0", good)
    assert ok


def test_standard_module_dirac_cohomology(acceptance):
    ok = True
    for family, p in MATRIX:
        P = point(family, p, 1, "1/5")
        cover = pin_cover(P.group)
        for sigma in P.table.labels:
            M = standard_module(sigma, P, 6)
            expected = {k: v for k, v in cover.twist({sigma: 1}, P.table, -1).items() if v}
            good = dirac_cohomology(M).total() == expected
            ok &= acceptance("2 standard-module Dirac cohomology",
                             f"{family}:{p} H_D(M({sigma})) = {sigma} ⊗ χ^-1 = {expected}", good)
    assert ok


def _finite_ltriv_checks(c, acceptance, label):
    P = point("cyclic", 2, 1, c)
    L = simple_quotient(standard_module("triv", P, 8))
    oracle = lowering_zero(P.c["s0"].rational())
    dim_ok = L.finite and oracle == 3 and L.total_dim() == 3
    T = P.table
    H = hstar_homology(L).by_degree() if L.finite else {}
    wedge_ok = H == {0: {"triv": 1}, 1: {T.det_h_label: 1}}
    cover = pin_cover(P.group)
    expected = cover.twist({"triv": 1, T.det_h_label: 1}, T, -1)
    D = dirac_cohomology(L).total() if L.finite else {}
    dirac_ok = D == {k: v for k, v in expected.items() if v} and sum(D.values()) == 2
    acceptance("3 finite-dimensional L(triv)", f"{label}: dim L(triv) = 3 (lowering zero at k={oracle})", dim_ok)
    acceptance("3 finite-dimensional L(triv)", f"{label}: H_i(h*, L(triv)) = Λ^i h", wedge_ok)
    acceptance("3 finite-dimensional L(triv)", f"{label}: H_D(L(triv)) = Λh ⊗ χ^-1", dirac_ok)
    return dim_ok and wedge_ok and dirac_ok


def test_finite_dimensional_ltriv_at_first_lowering_zero(acceptance):
    # with [y, x] = t - c s the lowering factor kt - c[k odd] first vanishes at k = 3 when c = 3
    assert _finite_ltriv_checks("3", acceptance, "c = 3")


def test_finite_dimensional_ltriv_at_stated_parameter(acceptance):
    # the stated value c = 3/2 gives no zero of the lowering recursion under the stated relation;
    # this stays red rather than silently substituting c = 3 (see notes/decisions.md)
    assert lowering_zero(Fraction(3, 2)) is None
    assert _finite_ltriv_checks("3/2", acceptance, "c = 3/2 as stated")


def test_hodge_package(acceptance):
    ok = True
    for family, p in [("cyclic", 2), ("dihedral", 3)]:
        G, T = catalog(family, p)
        for sigma in T.labels:
            scan = unitarity_scan(G, T, degree=8, sigma=sigma)
            unitary_c = next(r["c"] for r in scan if r["unitary"])
            for c in ("0", unitary_c):
                M = standard_module(sigma, point(family, p, 1, c), 8)
                out = hodge_check(M, contravariant_form(M))
                ok &= acceptance("4 Hodge package", f"{family}:{p} M({sigma}) at c = {c}, degrees ≤ 8", out["holds"])
    assert ok


def test_vogan_decomposition(acceptance):
    ok = True
    for p in (2, 3):
        P = point("cyclic", p, 1, "1/5")
        E = VoganEngine(P)
        for which in ("d", "partial"):
            for n in range(4):
                cert = verify_vogan_decomposition(P, n, which, engine=E)
                json.dumps(cert["witnesses"])
                good = cert["holds"] and len(cert["witnesses"]) == cert["kernel_dim"]
                ok &= acceptance("5 Vogan decomposition",
                                 f"cyclic:{p} δ_{which} n={n}: kernel {cert['kernel_dim']} = "
                                 f"image {cert['image_dim']} + Δ-span {cert['delta_span_dim']}", good)
    assert ok


def test_casselman_osborne(acceptance):
    ok = True
    for family, p in [("cyclic", 2), ("dihedral", 3)]:
        for c in ("0", "1/3"):
            P = point(family, p, 0, c)
            Z = find_central_elements(P, 2)
            E = VoganEngine(P)
            models = RestrictedModels.build(P)
            for sigma in P.table.labels:
                for name, M in (("M̄", models.verma[sigma]), ("L̄", models.head[sigma])):
                    good = casselman_osborne_check(M, Z, E)["holds"]
                    ok &= acceptance("6 Casselman-Osborne", f"{family}:{p} c={c} {name}({sigma})", good)
    assert ok


def test_cells(acceptance):
    ok = True
    for c in ("1/5", "1/2", "1"):
        P = point("cyclic", 2, 0, c)
        good = cm_cells(P).blocks == [["triv"], ["sign"]]
        ok &= acceptance("7 cells", f"cyclic:2 c={c}: singleton cells", good)
    P = point("cyclic", 2, 0, "0")
    oracle = decomposition_numbers(P).components()
    good = cm_cells(P).blocks == oracle == [["triv", "sign"]]
    ok &= acceptance("7 cells", "cyclic:2 c=0: one cell matching the linkage blocks", good)
    G, T = catalog("dihedral", 3)
    for rec in cell_sweep(G, T):
        m = rec["membership"]
        good = m["same_cell"] and m["top_wedge_present"]
        ok &= acceptance("7 cells", f"dihedral:3 c={rec['c']}: cells {rec['partition']['cells']}, "
                         "constituents twisted by det_h* stay in the cell, top wedge present", good)
    assert ok


STRUCTURAL = ("spinor-module-character", "defining-relations", "koszul-square-zero", "koszul-basis-change",
              "poincare-duality", "half-dirac-operators", "dirac-koszul-identification",
              "rescaling-invariance", "sign-convention-independence")


@pytest.fixture(scope="module")
def verify_all_reports():
    return {g: run(JobConfig.from_dict({"group": g, "t": "1", "c": "1/5"}))[0]
            for g in ("cyclic:2", "cyclic:3", "dihedral:3")}


def test_structural_suites(acceptance, verify_all_reports):
    ok = True
    for g, report in verify_all_reports.items():
        status = {v["check"]: v["status"] for v in report["verdicts"]}
        for check in STRUCTURAL:
            ok &= acceptance("8 structural suites", f"{g} {check}", status.get(check) == "pass")
    assert ok


def test_conjecture_monitoring(acceptance, verify_all_reports):
    # observations, not gates: the line records that both sides were computed
    for g, report in verify_all_reports.items():
        for v in report["verdicts"]:
            if v["status"].startswith("observed"):
                acceptance("9 conjecture monitoring", f"{g} {v['check']}: {v['status']}", True)
    assert any(v["status"].startswith("observed") for r in verify_all_reports.values() for v in r["verdicts"])
