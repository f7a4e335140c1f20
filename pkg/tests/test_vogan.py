from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cherednik_dirac.exact_scalars import CycScalar, ExactMatrix
from cherednik_dirac.cherednik_modules import CherednikParams, baby_verma, standard_module
from cherednik_dirac.reflection_groups import ParamC, catalog
from cherednik_dirac.vogan import (
    CapExceeded,
    PBWAlgebra,
    TensorAlgebra,
    VoganEngine,
    casselman_osborne_check,
    element_operator,
    find_central_elements,
    format_monomial,
    ideal_in_image_check,
    invariant_products,
    parse_monomial,
    scalar_on_module,
    verify_vogan_decomposition,
    zeta_d,
    zeta_multiplicative_check,
    zeta_values,
)


def params(family, p, t, c):
    G, T = catalog(family, p)
    return CherednikParams(G, T, t, ParamC.uniform(G, c))


def letters(order, rank):
    return st.one_of(
        st.tuples(st.just("x"), st.integers(0, rank - 1)),
        st.tuples(st.just("y"), st.integers(0, rank - 1)),
        st.tuples(st.just("w"), st.integers(0, order - 1)),
    )


SETTINGS = [("cyclic", 2, 1, "1/5"), ("cyclic", 3, 1, "1/3"), ("dihedral", 3, 1, "1/5"), ("dihedral", 3, 0, "1/2")]


@pytest.mark.parametrize("family,p,t,c", SETTINGS)
def test_pbw_defining_relations(family, p, t, c):
    P = params(family, p, t, c)
    H = PBWAlgebra(P)
    n, G = P.rank, P.group
    for i in range(n):
        for j in range(n):
            lhs = H.commutator(H.gen("y", i), H.gen("x", j))
            expected = {}
            if i == j and not P.t.is_zero():
                expected[(H.zero_exp, G.identity, H.zero_exp)] = P.t
            for s, v in P.commutator[i][j]:
                expected[(H.zero_exp, s, H.zero_exp)] = expected.get((H.zero_exp, s, H.zero_exp), CycScalar(0)) - v
            assert lhs == {k: v for k, v in expected.items() if not v.is_zero()}
            assert not H.commutator(H.gen("x", i), H.gen("x", j))
            assert not H.commutator(H.gen("y", i), H.gen("y", j))


@pytest.mark.parametrize("family,p,t,c", SETTINGS)
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_pbw_product_is_associative_and_matches_words(family, p, t, c, data):
    P = params(family, p, t, c)
    H = PBWAlgebra(P)
    gen = letters(P.group.order, P.rank)
    w1, w2, w3 = (data.draw(st.lists(gen, max_size=3)) for _ in range(3))
    a, b, d = H.normalize(w1), H.normalize(w2), H.normalize(w3)
    assert H.mul(a, b) == H.normalize(w1 + w2)
    assert H.mul(H.mul(a, b), d) == H.mul(a, H.mul(b, d))


@pytest.mark.parametrize("family,p,sigma", [("cyclic", 3, "chi1"), ("dihedral", 3, "refl")])
@settings(max_examples=15, deadline=None)
@given(data=st.data())
def test_normal_form_acts_like_the_word(family, p, sigma, data):
    P = params(family, p, 1, "1/5")
    H = PBWAlgebra(P)
    M = standard_module(sigma, P, 7)
    word = data.draw(st.lists(letters(P.group.order, P.rank), max_size=4))
    k = 3
    elem = H.normalize(word)
    if not elem:
        return
    op = element_operator(M, elem, k)
    cols = []
    for v in range(M.dims[k]):
        e = [CycScalar(int(i == v)) for i in range(M.dims[k])]
        out, k2 = M.apply_word(word, e, k)
        cols.append(out)
    assert op == ExactMatrix.from_columns(cols, nrows=op.nrows)


def tensor_elements(T, data, count=3):
    basis = T.basis(data.draw(st.integers(-1, 1)), 1)
    out = {}
    for _ in range(count):
        k = data.draw(st.sampled_from(basis))
        out[k] = CycScalar(data.draw(st.fractions(-2, 2, max_denominator=3)))
    return {k: v for k, v in out.items() if not v.is_zero()}


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("cyclic", 3), ("dihedral", 3)])
@pytest.mark.parametrize("which", ["d", "partial"])
@settings(max_examples=10, deadline=None)
@given(data=st.data())
def test_delta_is_an_odd_derivation_squaring_to_zero(family, p, which, data):
    T = TensorAlgebra(params(family, p, 1, "1/3"))
    a, b = tensor_elements(T, data), tensor_elements(T, data)
    assert not T.delta(T.delta(a, which), which)
    lhs = T.delta(T.mul(a, b), which)
    rhs = T.add(T.mul(T.delta(a, which), b), T.mul(T.epsilon(a), T.delta(b, which)))
    assert lhs == rhs


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("dihedral", 3)])
def test_dirac_elements_are_invariant_and_closed(family, p):
    T = TensorAlgebra(params(family, p, 1, "1/5"))
    for g in range(T.G.order):
        assert T.conjugate(T.D_x, g) == T.D_x
        assert T.conjugate(T.D_y, g) == T.D_y
    assert {T.weight(k) for k in T.D_x} == {0}
    assert {T.hdegree(k) for k in T.D_x} == {1}
    assert not T.delta(T.D_x, "d")
    assert not T.delta(T.D_y, "partial")
    for e in range(T.G.order):
        assert not T.delta(T.delta_lift(e), "d")
        assert not T.delta(T.delta_lift(e), "partial")
    assert len(T.class_sums) == len(T.params.table.labels)


def test_x_tensor_one_has_nonzero_weight():
    T = TensorAlgebra(params("cyclic", 2, 1, "1/5"))
    x = T.tensor(T.H.gen("x", 0))
    assert {T.weight(k) for k in x} == {-1}
    assert all(k not in T.basis(0, 1) for k in x)


def test_x_squared_is_a_boundary():
    T = TensorAlgebra(params("cyclic", 2, 0, "1/3"))
    H = T.H
    x_clifford = {((), (0,)): CycScalar(1)}
    b = T.scale(T.tensor(H.gen("x", 0), x_clifford), Fraction(-1, 2))
    assert T.delta(b, "d") == T.tensor(H.mul(H.gen("x", 0), H.gen("x", 0)))


def test_invariant_product_of_both_squares_lies_in_image():
    P = params("cyclic", 2, 0, "1/3")
    E = VoganEngine(P)
    (z,) = invariant_products(P, 4, weight=0)
    assert ideal_in_image_check(E, [z])["holds"]
    assert ideal_in_image_check(E, degree=2)["holds"]
    assert ideal_in_image_check(E, degree=2, which="partial")["holds"]


def test_zeta_of_one_is_the_identity_lift():
    E = VoganEngine(params("dihedral", 3, 1, "1/5"))
    gamma = zeta_d(E, E.T.H.one())
    ident = [g for g, (e, _) in zip(gamma, E.T.class_sums) if e == E.T.G.identity]
    assert ident == [Fraction(1, 6)]
    assert all(v == 1 for v in zeta_values(E, E.T.H.one()).values())


@pytest.mark.parametrize("family,p,t,n", [("cyclic", 2, 1, 0), ("cyclic", 2, 1, 2), ("cyclic", 3, 1, 2),
                                         ("cyclic", 2, 0, 3), ("dihedral", 3, 1, 1)])
@pytest.mark.parametrize("which", ["d", "partial"])
def test_vogan_decomposition_certificates(family, p, t, n, which):
    P = params(family, p, t, "1/5")
    cert = verify_vogan_decomposition(P, n, which)
    assert cert["holds"]
    assert cert["delta_span_dim"] == len(P.table.labels)
    assert cert["kernel_dim"] == cert["image_dim"] + cert["delta_span_dim"]


def test_vogan_dimensions_for_sign_group():
    P = params("cyclic", 2, 1, "1/5")
    dims = [verify_vogan_decomposition(P, n)["A_dim"] for n in range(4)]
    assert dims == [4, 8, 12, 16]


def test_central_elements_generic_vs_restricted():
    generic = find_central_elements(params("cyclic", 2, 1, "1/3"), 2)
    assert set(generic.by_weight) == {0}
    assert len(generic.B) == 1
    Z = find_central_elements(params("dihedral", 3, 0, "1/3"), 2)
    assert {w: len(v) for w, v in Z.by_weight.items()} == {-2: 1, 0: 2, 2: 1}


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("dihedral", 3)])
def test_central_elements_act_by_scalars_matching_zeta(family, p):
    P = params(family, p, 0, "1/3")
    Z = find_central_elements(P, 2)
    E = VoganEngine(P)
    for sigma in P.table.labels:
        M = baby_verma(sigma, P)
        for z in Z.B:
            assert scalar_on_module(M, z) is not None
        assert casselman_osborne_check(M, Z, E)["holds"]
        assert casselman_osborne_check(M, Z, E, which="partial")["holds"]
    assert zeta_multiplicative_check(E, Z)["holds"]


def test_monomial_grammar_roundtrip():
    T = TensorAlgebra(params("dihedral", 3, 1, "1/5"))
    for key in T.basis(0, 1)[::7]:
        assert parse_monomial(format_monomial(*key), 2) == key
    elem = T.add(T.D_x, T.class_sums[1][1], Fraction(2, 3))
    assert T.from_json(T.to_json(elem)) == elem
    with pytest.raises(ValueError):
        parse_monomial("q1*w0", 2)


def test_cap_is_enforced():
    E = VoganEngine(params("dihedral", 3, 1, "1/5"), cap=1)
    with pytest.raises(CapExceeded):
        E.piece(2)
    with pytest.raises(CapExceeded):
        find_central_elements(params("cyclic", 2, 0, "1"), 9)
