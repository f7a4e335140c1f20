import pytest

from cherednik_dirac.cherednik_modules import CherednikParams
from cherednik_dirac.cells import (
    DEFAULT_GRID,
    RestrictedModels,
    cell_membership_check,
    cell_sweep,
    center_probe,
    cm_cells,
    conjecture_observation,
    decomposition_numbers,
    theta,
)
from cherednik_dirac.reflection_groups import ParamC, catalog
from cherednik_dirac.vogan import find_central_elements


def restricted(family, p, c):
    G, T = catalog(family, p)
    return CherednikParams(G, T, 0, ParamC.uniform(G, c))


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("cyclic", 3), ("dihedral", 3)])
def test_zero_parameter_links_everything(family, p):
    P = restricted(family, p, 0)
    graph = decomposition_numbers(P)
    assert graph.bookkeeping
    assert graph.components() == [list(P.table.labels)]
    cells = cm_cells(P)
    assert cells.blocks == [list(P.table.labels)]


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("cyclic", 3), ("dihedral", 3)])
def test_generic_parameter_gives_singleton_cells(family, p):
    P = restricted(family, p, "1/3")
    graph = decomposition_numbers(P)
    assert graph.bookkeeping
    # every head has dimension |W|, so M̄(σ) is dim σ copies of its head
    for lab in P.table.labels:
        assert graph.head_dims[lab] == P.group.order
        assert graph.mults[(lab, lab)] == P.table.dim(lab)
    cells = cm_cells(P)
    assert cells.blocks == [[lab] for lab in P.table.labels]
    assert cells.provenance == "both"
    assert not cells.divergence


def test_sign_group_multiplicities_at_zero():
    graph = decomposition_numbers(restricted("cyclic", 2, 0))
    assert {k: v for k, v in graph.mults.items() if v} == {
        ("triv", "triv"): 1, ("triv", "sign"): 1, ("sign", "sign"): 1, ("sign", "triv"): 1}
    assert graph.head_dims == {"triv": 1, "sign": 1}


def test_theta_separates_generic_characters():
    P = restricted("dihedral", 3, "1/5")
    models = RestrictedModels.build(P)
    Z = find_central_elements(P, 2, weights=[0])
    th = theta(P, Z, models)
    assert len({tuple(map(str, v)) for v in th.values()}) == len(P.table.labels)


@pytest.mark.parametrize("family,p,c", [("cyclic", 2, "1/5"), ("cyclic", 3, "0"), ("dihedral", 3, "1/2")])
def test_cell_membership_of_koszul_constituents(family, p, c):
    out = cell_membership_check(restricted(family, p, c))
    assert out["holds"]
    assert out["top_wedge_present"] and out["same_cell"] and out["theta_matches_zeta"]


def test_restricted_conjecture_observation():
    obs = conjecture_observation(restricted("dihedral", 3, "1/3"))
    assert all(r["embedding"] for r in obs.values())


@pytest.mark.parametrize("family,p,degree,dim", [("cyclic", 2, 2, 2), ("cyclic", 3, 2, 2), ("cyclic", 3, 4, 3),
                                                ("dihedral", 3, 2, 2)])
def test_center_probe_dimensions(family, p, degree, dim):
    out = center_probe(restricted(family, p, "1/3"), degree)
    assert out["dimension"] == dim
    assert out["within_bound"]


def test_rescaling_c_preserves_cells():
    a = cm_cells(restricted("dihedral", 3, "1/5")).blocks
    b = cm_cells(restricted("dihedral", 3, "2/5")).blocks
    assert a == b


def test_sweep_marks_the_special_value():
    G, T = catalog("cyclic", 2)
    rows = cell_sweep(G, T, DEFAULT_GRID, threads=2)
    assert [r["c"] for r in rows] == list(DEFAULT_GRID)
    assert [r["changed"] for r in rows] == [False, True, False, False, False]
    assert all(r["membership"]["holds"] for r in rows)


def test_restricted_analysis_requires_t_zero():
    G, T = catalog("cyclic", 2)
    with pytest.raises(ValueError):
        cm_cells(CherednikParams(G, T, 1, {"s0": 1}))
