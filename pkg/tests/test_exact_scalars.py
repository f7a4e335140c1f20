from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from cherednik_dirac.exact_scalars import (
    CycScalar,
    ExactMatrix,
    Subspace,
    certified_sign,
    format_scalar,
    parse_scalar,
    preimage,
    root_of_unity,
    subspace_intersection,
    subspace_sum,
)

CONDUCTORS = [3, 4, 5, 8, 12]
z = sympy.Symbol("z")

fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def element(N, coeffs):
    out = CycScalar(0)
    for k, c in enumerate(coeffs):
        out = out + CycScalar(c) * root_of_unity(N, k)
    return out


def sympy_reduce(N, coeffs):
    """Coefficients of a polynomial in z reduced modulo the N-th cyclotomic polynomial."""
    poly = sum(sympy.Rational(c.numerator, c.denominator) * z**k for k, c in enumerate(coeffs))
    rem = sympy.rem(sympy.expand(poly), sympy.cyclotomic_poly(N, z), z)
    p = sympy.Poly(rem, z)
    return [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CONDUCTORS), st.lists(fractions, min_size=1, max_size=6),
       st.lists(fractions, min_size=1, max_size=6))
def test_product_matches_polynomial_remainder(N, a, b):
    prod = sympy.expand(sum(sympy.Rational(x.numerator, x.denominator) * z**i for i, x in enumerate(a)) *
                        sum(sympy.Rational(x.numerator, x.denominator) * z**j for j, x in enumerate(b)))
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(prod, z).all_coeffs())]
    oracle = element(N, sympy_reduce(N, coeffs))
    assert element(N, a) * element(N, b) == oracle


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(CONDUCTORS), st.lists(fractions, min_size=1, max_size=6))
def test_inverse_and_complex_value(N, a):
    x = element(N, a)
    if x.is_zero():
        return
    assert x * x.inverse() == 1
    approx = sum(complex(c) * complex(sympy.exp(2 * sympy.pi * sympy.I * k / N).evalf()) for k, c in enumerate(a))
    assert abs(x.to_complex() - approx) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(CONDUCTORS), st.lists(fractions, min_size=1, max_size=6))
def test_format_parse_roundtrip(N, a):
    x = element(N, a)
    assert parse_scalar(format_scalar(x)) == x


def test_mixed_conductors_meet_in_compositum():
    i = root_of_unity(4)
    w = root_of_unity(3)
    assert (i * w) ** 12 == 1
    assert (i * w) ** 6 == -1  # order 12
    assert root_of_unity(6) == -root_of_unity(3, 2)


def test_certified_sign():
    sqrt2 = root_of_unity(8) + root_of_unity(8, 7)
    assert certified_sign(sqrt2 - Fraction(141421, 100000)) == 1
    assert certified_sign(sqrt2 - Fraction(141422, 100000)) == -1
    assert certified_sign(sqrt2 * sqrt2 - 2) == 0


def test_parse_rejects_garbage():
    for bad in ["", "1//2", "z0", "3/0", "abc"]:
        with pytest.raises(ValueError):
            parse_scalar(bad)


def _sympy_matrix(rows):
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows])


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_rank_and_kernel_against_sympy(m, n, data):
    rows = [[data.draw(st.fractions(-3, 3, max_denominator=3)) for _ in range(n)] for _ in range(m)]
    M = ExactMatrix([[CycScalar(x) for x in r] for r in rows], ncols=n)
    S = _sympy_matrix(rows)
    assert M.rank() == S.rank()
    ker = M.kernel()
    assert len(ker) == n - S.rank()
    for v in ker:
        assert all(x.is_zero() for x in M.apply(v))


def test_inverse_over_cyclotomic_field():
    w = root_of_unity(3)
    M = ExactMatrix([[CycScalar(1), w], [w * w, CycScalar(2)]], ncols=2)
    assert M @ M.inverse() == ExactMatrix.identity(2)


def test_subspace_lattice_operations():
    A = Subspace.span([[1, 0, 0], [0, 1, 0]], 3)
    B = Subspace.span([[0, 1, 0], [0, 0, 1]], 3)
    assert subspace_intersection(A, B) == Subspace.span([[0, 1, 0]], 3)
    assert subspace_sum(A, B).dim == 3
    P = ExactMatrix([[CycScalar(1), CycScalar(1), CycScalar(0)]], ncols=3)
    assert preimage(P, Subspace.zero(1)).dim == 2
