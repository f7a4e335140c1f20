from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cherednik_dirac.exact_scalars import CycScalar, root_of_unity
from cherednik_dirac.cherednik_modules import (
    CherednikParams,
    WindowError,
    baby_verma,
    contravariant_form,
    euler_lowest,
    is_unitary,
    rescale_params,
    simple_quotient,
    standard_module,
    unitarity_scan,
)
from cherednik_dirac.reflection_groups import ParamC, catalog

small_rationals = st.fractions(min_value=-3, max_value=3, max_denominator=6)


def params(family, p, t, c):
    G, T = catalog(family, p)
    return CherednikParams(G, T, t, ParamC.uniform(G, c))


def lowering_factor(k, t, c):
    """Scalar of y on x^k·1 in M(triv) for the sign group: the commutator telescopes to kt minus c on odd k."""
    return k * t - (c if k % 2 else 0)


@settings(max_examples=20, deadline=None)
@given(small_rationals, small_rationals)
def test_rank_one_lowering_matches_recursion(t, c):
    M = standard_module("triv", params("cyclic", 2, t, c), 6)
    for k in range(1, 7):
        assert M.y_op(0, k)[0, 0] == lowering_factor(k, t, c)


@settings(max_examples=15, deadline=None)
@given(small_rationals)
def test_rank_one_gram_is_product_of_lowering_factors(c):
    M = standard_module("triv", params("cyclic", 2, 1, c), 6)
    F = contravariant_form(M)
    for k in range(7):
        assert F.gram[k][0, 0] == prod((lowering_factor(j, 1, c) for j in range(1, k + 1)), start=Fraction(1))


def test_gram_at_zero_parameter_is_factorial():
    M = standard_module("triv", params("cyclic", 2, 1, 0), 6)
    F = contravariant_form(M)
    assert [F.gram[k][0, 0] for k in range(7)] == [factorial(k) for k in range(7)]


@pytest.mark.parametrize("family,p,sigma", [
    ("cyclic", 2, "sign"), ("cyclic", 3, "chi1"), ("cyclic", 4, "chi2"),
    ("dihedral", 3, "refl"), ("dihedral", 4, "refl"), ("symmetric", 4, "two"),
])
def test_standard_module_relations_and_euler(family, p, sigma):
    P = params(family, p, 1, "1/5")
    window = 2 if P.rank == 3 else 4
    M = standard_module(sigma, P, window)
    assert M.check_relations()
    omega = M.compute_omega()
    assert omega is not None
    low = euler_lowest(sigma, P)
    for k, v in omega.items():
        assert v == low + 2 * k


def test_euler_lowest_values():
    P = params("cyclic", 2, 1, "1/5")
    assert euler_lowest("triv", P) == Fraction(4, 5)
    assert euler_lowest("sign", P) == Fraction(6, 5)


def test_standard_module_block_dimensions():
    P = params("dihedral", 3, 1, "1/3")
    M = standard_module("refl", P, 3)
    assert M.dims == {0: 2, 1: 4, 2: 6, 3: 8}
    with pytest.raises(WindowError):
        standard_module("triv", P, -1)


@pytest.mark.parametrize("c,dims", [(3, [1, 1, 1]), (5, [1, 1, 1, 1, 1]), (1, [1])])
def test_finite_simple_quotients_for_sign_group(c, dims):
    L = simple_quotient(standard_module("triv", params("cyclic", 2, 1, c), 8))
    assert L.finite
    assert [L.dims[k] for k in L.degrees] == dims
    assert L.check_relations()


def test_generic_parameter_has_no_finite_quotient():
    L = simple_quotient(standard_module("triv", params("cyclic", 2, 1, "3/2"), 8))
    assert not L.finite


@pytest.mark.parametrize("family,p", [("cyclic", 2), ("cyclic", 3), ("dihedral", 3), ("dihedral", 4)])
@pytest.mark.parametrize("c", ["0", "1/3", "1"])
def test_baby_verma_dimension(family, p, c):
    P = params(family, p, 0, c)
    for sigma in P.table.labels:
        B = baby_verma(sigma, P)
        assert B.total_dim() == P.group.order * P.table.dim(sigma)
        assert B.check_relations()


def test_baby_verma_needs_t_zero():
    with pytest.raises(ValueError):
        baby_verma("triv", params("cyclic", 2, 1, 0))


def test_rescaling_multiplies_euler_scalars():
    P = params("dihedral", 3, 1, "1/5")
    Q = rescale_params(P, 2)
    assert Q.t == 4
    assert all(v == Fraction(4, 5) for v in Q.c.values())
    assert euler_lowest("refl", Q) == 4 * euler_lowest("refl", P)


def test_unitarity_threshold_for_sign_group():
    rows = unitarity_scan(*catalog("cyclic", 2), grid=("1/2", "9/10", "1", "3/2"), degree=6)
    assert [r["unitary"] for r in rows] == [True, True, False, False]


def test_unitarity_of_dihedral_triv_at_small_parameter():
    G, T = catalog("dihedral", 3)
    P = CherednikParams(G, T, 1, ParamC.uniform(G, "1/10"))
    F = contravariant_form(standard_module("triv", P, 4))
    assert F.check()
    assert all(is_unitary(F).values())


def test_contravariant_form_rejects_complex_parameters():
    P = params("cyclic", 3, 1, root_of_unity(3))
    with pytest.raises(ValueError):
        contravariant_form(standard_module("triv", P, 2))


def test_class_parameters_default_to_zero_and_reject_unknown_labels():
    G, T = catalog("dihedral", 4)
    P = CherednikParams(G, T, 1, {"s0": CycScalar(1)})
    assert P.c["s1"] == 0
    with pytest.raises(ValueError):
        CherednikParams(G, T, 1, {"s9": 1})
