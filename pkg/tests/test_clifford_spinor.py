import pytest

from cherednik_dirac.exact_scalars import CycScalar, ExactMatrix, root_of_unity
from cherednik_dirac.clifford_spinor import (
    PinCover,
    SpinorSpace,
    chi_value,
    clifford_action,
    decompose_genuine,
    mu_s,
    pin_lift,
    spinor_decomposition_check,
)
from cherednik_dirac.reflection_groups import catalog

GROUPS = [("cyclic", 2), ("cyclic", 3), ("cyclic", 4), ("dihedral", 3), ("dihedral", 4), ("symmetric", 4)]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_clifford_relations(n):
    S = SpinorSpace(n)
    assert S.dim == 2 ** n
    assert S.relations_hold()


def test_contraction_on_rank_one():
    S = SpinorSpace(1)
    assert S.x_ops[0] @ S.y_ops[0] == ExactMatrix([[-2, 0], [0, 0]])


def test_weighted_form_makes_x_adjoint_to_minus_y():
    S = SpinorSpace(2)
    H = S.hermitian_form()
    for i in range(2):
        assert H @ S.x_ops[i] == (H @ S.y_ops[i]).adjoint().scale(-1)


def test_clifford_action_rejects_bad_side():
    with pytest.raises(ValueError):
        clifford_action([1], "v")


@pytest.mark.parametrize("family,p", GROUPS)
@pytest.mark.parametrize("convention", [1, -1])
def test_lifts_intertwine_the_vector_action(family, p, convention):
    G, _ = catalog(family, p)
    S = SpinorSpace(G.rank)
    n = G.rank
    for r in G.reflections:
        mu = mu_s(r, G, convention).op
        inv = mu.inverse()
        g = G.elements[r.index]
        gd = G.dual[r.index]
        for i in range(n):
            e = [CycScalar(1 if k == i else 0) for k in range(n)]
            assert mu @ S.y_of(e) @ inv == S.y_of(g.apply(e))
            assert mu @ S.x_of(e) @ inv == S.x_of(gd.apply(e))


@pytest.mark.parametrize("family,p", GROUPS)
def test_spinor_is_chi_twisted_exterior_algebra(family, p):
    G, _ = catalog(family, p)
    cover = PinCover(G)
    assert spinor_decomposition_check(cover)
    assert cover.chi[G.identity] == 1


def test_chi_on_rank_one_sign_group():
    G, _ = catalog("cyclic", 2)
    cover = PinCover(G)
    assert cover.chi == [CycScalar(1), -root_of_unity(4)]
    other = PinCover(G, convention=-1)
    assert other.chi == [CycScalar(1), root_of_unity(4)]


@pytest.mark.parametrize("family,p", GROUPS)
def test_representative_lifts_form_a_double_cover(family, p):
    G, T = catalog(family, p)
    cover = PinCover(G)
    for a in range(G.order):
        for b in range(G.order):
            prod = cover.reps[a] * cover.reps[b]
            rep = cover.reps[G.mul(a, b)]
            assert prod.same_lift(rep) or prod.differs_by_sign(rep)


@pytest.mark.parametrize("family,p", GROUPS)
def test_genuine_characters_are_orthonormal(family, p):
    G, T = catalog(family, p)
    cover = PinCover(G)
    for lab in T.labels:
        mults = decompose_genuine(cover.genuine_character(lab, T), cover, T)
        assert mults == {f"{l}*chi": int(l == lab) for l in T.labels}
    spinor = [op.trace() for op in cover.spinor_ops]
    dims = decompose_genuine(spinor, cover, T)
    assert sum(m * T.dim(l.split("*")[0]) for l, m in dims.items()) == 2 ** G.rank


def test_pin_lift_of_empty_word_is_identity():
    G, _ = catalog("dihedral", 3)
    p = pin_lift([], G)
    assert p.op == ExactMatrix.identity(4)
    assert chi_value(p) == 1


def test_twist_roundtrip():
    G, T = catalog("dihedral", 4)
    cover = PinCover(G)
    genuine = cover.twist({"refl": 1, "triv": 2}, T, 1)
    assert sum(genuine.values()) == 3
