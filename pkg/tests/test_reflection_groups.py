from fractions import Fraction

import pytest

from cherednik_dirac.exact_scalars import CycScalar, ExactMatrix
from cherednik_dirac.reflection_groups import (
    GroupCapExceeded,
    ParamC,
    catalog,
    decompose_character,
    exterior_power,
    generate_group,
    inner_product,
    parse_group_spec,
)

# (family, parameter, |W|, rank, number of reflections, number of irreps)
GROUPS = [
    ("cyclic", 2, 2, 1, 1, 2),
    ("cyclic", 3, 3, 1, 2, 3),
    ("cyclic", 4, 4, 1, 3, 4),
    ("dihedral", 3, 6, 2, 3, 3),
    ("dihedral", 4, 8, 2, 4, 5),
    ("symmetric", 3, 6, 2, 3, 3),
    ("symmetric", 4, 24, 3, 6, 5),
]


@pytest.mark.parametrize("family,p,order,rank,nrefl,nirr", GROUPS)
def test_catalog_shapes(family, p, order, rank, nrefl, nirr):
    G, T = catalog(family, p)
    assert G.order == order
    assert G.rank == rank
    assert len(G.reflections) == nrefl
    assert len(T.labels) == nirr
    assert len(G.classes) == nirr


@pytest.mark.parametrize("family,p", [(g[0], g[1]) for g in GROUPS])
def test_character_orthogonality_and_closure(family, p):
    G, T = catalog(family, p)
    for a in T.labels:
        for b in T.labels:
            assert inner_product(T.character(a), T.character(b), G) == (1 if a == b else 0)
    for a in range(G.order):
        for b in range(G.order):
            assert G.elements[a] @ G.elements[b] == G.elements[G.mul(a, b)]
    for e in range(G.order):
        assert G.dual[e] == G.elements[e].inverse().transpose()


@pytest.mark.parametrize("family,p", [(g[0], g[1]) for g in GROUPS])
def test_reflections_fix_a_hyperplane(family, p):
    G, _ = catalog(family, p)
    n = G.rank
    for r in G.reflections:
        g = G.elements[r.index]
        fixed = (g - ExactMatrix.identity(n)).rank()
        assert fixed == 1
        assert G.det_h(r.index) == r.lam
        assert not r.pairing.is_zero()


def test_dihedral_order_against_sympy_permutation_group():
    from sympy.combinatorics.named_groups import DihedralGroup
    for m in (3, 4, 5, 6):
        G, T = catalog("dihedral", m)
        assert G.order == DihedralGroup(m).order()
        assert len(T.labels) == len(DihedralGroup(m).conjugacy_classes())


def test_symmetric_class_count_against_sympy():
    from sympy.combinatorics.named_groups import SymmetricGroup
    G, _ = catalog("symmetric", 4)
    assert len(G.classes) == len(SymmetricGroup(4).conjugacy_classes())


def test_exterior_power_top_is_determinant():
    G, _ = catalog("dihedral", 4)
    for e in range(G.order):
        assert exterior_power(G.elements[e], 2)[0, 0] == G.det_h(e)


def test_permutation_rep_decomposition():
    G, T = catalog("symmetric", 3)
    # h ⊗ h for the reflection representation of S3
    ch = [a * a for a in T.character("refl")]
    assert decompose_character(ch, T) == {"triv": 1, "sign": 1, "refl": 1}


def test_param_c_classes():
    G, _ = catalog("dihedral", 4)
    c = ParamC.uniform(G, "1/3")
    assert len(set(G.reflection_classes())) == 2
    assert all(c.of(r) == CycScalar(Fraction(1, 3)) for r in G.reflections)
    with pytest.raises((ValueError, KeyError)):
        ParamC.build(G, {"nonexistent": 1})


def test_generation_cap():
    G, _ = catalog("cyclic", 2)
    with pytest.raises(GroupCapExceeded):
        generate_group([ExactMatrix([[CycScalar(2)]], ncols=1)], cap=5)


def test_group_spec_parsing():
    assert parse_group_spec("dihedral:5") == ("dihedral", 5)
    with pytest.raises(ValueError):
        parse_group_spec("nonsense")
