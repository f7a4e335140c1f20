r"""
Exact arithmetic in cyclotomic fields and dense exact linear algebra.

Every matrix entry in the package is an element of some cyclotomic field
`\QQ(\zeta_N)`.  A :class:`CycScalar` stores its coefficients in the power
basis `1, \zeta_N, \dots, \zeta_N^{\varphi(N)-1}` reduced modulo the
cyclotomic polynomial.  Scalars of different conductors meet in the
compositum, which for cyclotomic fields is `\QQ(\zeta_{\mathrm{lcm}})`.

Linear algebra runs on raw field elements (``gmpy2.mpq`` for the rationals,
tuples of ``mpq`` otherwise) through a small field object, so the inner
elimination loops avoid wrapper allocations.

EXAMPLES::

    >>> z = root_of_unity(3, 1)
    >>> z * z * z == 1
    True
    >>> sqrt_root_of_unity(CycScalar(-1)) == root_of_unity(4, 1)
    True
    >>> str(root_of_unity(4, 1) ** 2)
    '-1'
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import mpmath
from gmpy2 import mpq

__all__ = [
    "CycScalar",
    "ExactMatrix",
    "Subspace",
    "root_of_unity",
    "sqrt_root_of_unity",
    "kernel_basis",
    "subspace_sum",
    "subspace_intersection",
    "quotient_basis",
    "in_span",
    "certified_sign",
    "parse_scalar",
    "as_scalar",
    "field_for",
]

_MPQ0 = mpq(0)
_MPQ1 = mpq(1)


# ---------------------------------------------------------------------------
# cyclotomic fields as raw coefficient vectors


def _canonical_conductor(n: int) -> int:
    # Q(zeta_{2m}) = Q(zeta_m) for odd m
    if n % 4 == 2:
        return n // 2
    return n


def _euler_phi(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def _cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, low degree first."""
    num = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            num = _poly_exact_div(num, list(_cyclotomic_poly(d)))
    return tuple(num)


def _poly_exact_div(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        q = num[i + len(den) - 1] // den[-1]
        out[i] = q
        for j, c in enumerate(den):
            num[i + j] -= q * c
    assert all(v == 0 for v in num[: len(den) - 1])
    return out


class RationalField:
    """The rationals, with raw elements ``mpq``."""

    N = 1
    phi = 1

    def __init__(self):
        self.zero = _MPQ0
        self.one = _MPQ1

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    @staticmethod
    def is_zero(a):
        return a == 0

    @staticmethod
    def from_coeffs(coeffs):
        return coeffs[0]

    @staticmethod
    def to_coeffs(a):
        return (a,)

    def __repr__(self):
        return "QQ"


class CyclotomicField:
    """`\\QQ(\\zeta_N)` for canonical ``N > 2``; raw elements are ``mpq`` tuples."""

    def __init__(self, N: int):
        self.N = N
        self.phi = _euler_phi(N)
        self.poly = _cyclotomic_poly(N)
        phi = self.phi
        self.zero = tuple([_MPQ0] * phi)
        self.one = tuple([_MPQ1] + [_MPQ0] * (phi - 1))
        # zeta^k in the power basis for 0 <= k < N
        powers = []
        cur = [_MPQ1] + [_MPQ0] * (phi - 1)
        for _ in range(N):
            powers.append(tuple(cur))
            top = cur[-1]
            cur = [_MPQ0] + cur[:-1]
            if top != 0:
                for i in range(phi):
                    cur[i] -= top * self.poly[i]
        self.powers = powers
        self._red = [
            [(i, c) for i, c in enumerate(powers[k % N]) if c != 0]
            for k in range(max(2 * phi - 1, 1))
        ]

    def add(self, a, b):
        return tuple([x + y for x, y in zip(a, b)])

    def sub(self, a, b):
        return tuple([x - y for x, y in zip(a, b)])

    def neg(self, a):
        return tuple([-x for x in a])

    def is_zero(self, a):
        return not any(a)

    def mul(self, a, b):
        phi = self.phi
        prod = [_MPQ0] * (2 * phi - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        out = prod[:phi]
        red = self._red
        for k in range(phi, 2 * phi - 1):
            v = prod[k]
            if v:
                for i, c in red[k]:
                    out[i] += v * c
        return tuple(out)

    def inv(self, a):
        if not any(a):
            raise ZeroDivisionError("inverse of zero")
        # solve (multiplication-by-a) * v = 1
        phi = self.phi
        cols = []
        basis = self.powers[:phi]
        for j in range(phi):
            cols.append(self.mul(a, basis[j]))
        rows = [[cols[j][i] for j in range(phi)] + [self.one[i]] for i in range(phi)]
        for c in range(phi):
            p = next(r for r in range(c, phi) if rows[r][c] != 0)
            rows[c], rows[p] = rows[p], rows[c]
            pv = rows[c][c]
            rows[c] = [v / pv for v in rows[c]]
            for r in range(phi):
                if r != c and rows[r][c] != 0:
                    f = rows[r][c]
                    rows[r] = [u - f * v for u, v in zip(rows[r], rows[c])]
        return tuple(rows[i][phi] for i in range(phi))

    def from_coeffs(self, coeffs):
        return tuple(coeffs)

    @staticmethod
    def to_coeffs(a):
        return a

    def __repr__(self):
        return f"QQ(zeta_{self.N})"


@lru_cache(maxsize=None)
def field_for(N: int):
    """The raw field object for conductor ``N`` (canonicalised)."""
    N = _canonical_conductor(N)
    if N == 1:
        return RationalField()
    return CyclotomicField(N)


@lru_cache(maxsize=None)
def _embedding(N: int, L: int) -> tuple:
    """Images of the power basis of Q(zeta_N) inside Q(zeta_L), N | L."""
    FL = field_for(L)
    step = L // N
    return tuple(FL.powers[(j * step) % L] for j in range(field_for(N).phi))


def _embed_coeffs(coeffs: tuple, N: int, L: int) -> tuple:
    if N == L:
        return coeffs
    FL = field_for(L)
    if N == 1:
        return tuple([coeffs[0]] + [_MPQ0] * (FL.phi - 1))
    out = [_MPQ0] * FL.phi
    for c, img in zip(coeffs, _embedding(N, L)):
        if c:
            for i, v in enumerate(img):
                if v:
                    out[i] += c * v
    return tuple(out)


@lru_cache(maxsize=None)
def _galois_images(N: int, a: int) -> tuple:
    """Images of the power basis under zeta_N -> zeta_N^a."""
    F = field_for(N)
    return tuple(F.powers[(j * a) % N] for j in range(F.phi))


def _apply_galois(coeffs: tuple, N: int, a: int) -> tuple:
    F = field_for(N)
    out = [_MPQ0] * F.phi
    for c, img in zip(coeffs, _galois_images(N, a)):
        if c:
            for i, v in enumerate(img):
                if v:
                    out[i] += c * v
    return tuple(out)


def _to_mpq(v) -> mpq:
    if isinstance(v, str):
        return mpq(v)
    return mpq(v)


# ---------------------------------------------------------------------------
# the user-facing scalar


class CycScalar:
    """An exact element of `\\QQ(\\zeta_N)`.

    Instances are immutable.  Arithmetic with ints, ``Fraction``s and other
    scalars is supported; mixed conductors are embedded into the compositum.

    >>> a = CycScalar.from_root(6, 1)
    >>> a.order
    6
    >>> (a + a.conjugate()) == 1
    True
    """

    __slots__ = ("N", "coeffs")

    def __init__(self, value=0, N: int | None = None):
        if N is None:
            if isinstance(value, CycScalar):
                object.__setattr__(self, "N", value.N)
                object.__setattr__(self, "coeffs", value.coeffs)
                return
            object.__setattr__(self, "N", 1)
            object.__setattr__(self, "coeffs", (_to_mpq(value),))
            return
        N = _canonical_conductor(N)
        coeffs = tuple(_to_mpq(c) for c in value)
        if len(coeffs) != field_for(N).phi:
            raise ValueError(f"expected {field_for(N).phi} coefficients for N={N}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "coeffs", coeffs)
        if N > 1 and not any(coeffs[1:]):
            object.__setattr__(self, "N", 1)
            object.__setattr__(self, "coeffs", coeffs[:1])

    def __setattr__(self, name, value):
        raise AttributeError("CycScalar is immutable")

    @classmethod
    def _raw(cls, N: int, coeffs: tuple) -> "CycScalar":
        obj = object.__new__(cls)
        if N > 1 and not any(coeffs[1:]):
            N, coeffs = 1, coeffs[:1]
        object.__setattr__(obj, "N", N)
        object.__setattr__(obj, "coeffs", coeffs)
        return obj

    @classmethod
    def from_raw(cls, F, raw) -> "CycScalar":
        return cls._raw(F.N, F.to_coeffs(raw))

    @classmethod
    def from_root(cls, N: int, k: int = 1) -> "CycScalar":
        return root_of_unity(N, k)

    def raw(self, F):
        """Raw representation inside the field object ``F`` (must contain self)."""
        if F.N % self.N:
            raise ValueError(f"{self} does not lie in {F!r}")
        return F.from_coeffs(_embed_coeffs(self.coeffs, self.N, F.N))

    # -- arithmetic ---------------------------------------------------------

    def _common(self, other):
        if not isinstance(other, CycScalar):
            other = CycScalar(other)
        L = _canonical_conductor(math.lcm(self.N, other.N))
        return L, _embed_coeffs(self.coeffs, self.N, L), _embed_coeffs(other.coeffs, other.N, L)

    def __add__(self, other):
        try:
            L, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycScalar._raw(L, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return CycScalar._raw(self.N, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        try:
            L, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        return CycScalar._raw(L, tuple(x - y for x, y in zip(a, b)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            L, a, b = self._common(other)
        except TypeError:
            return NotImplemented
        F = field_for(L)
        return CycScalar._raw(L, F.to_coeffs(F.mul(F.from_coeffs(a), F.from_coeffs(b))))

    __rmul__ = __mul__

    def inverse(self) -> "CycScalar":
        F = field_for(self.N)
        return CycScalar._raw(self.N, F.to_coeffs(F.inv(F.from_coeffs(self.coeffs))))

    def __truediv__(self, other):
        if not isinstance(other, CycScalar):
            other = CycScalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycScalar(other) * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = CycScalar(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- predicates ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_rational(self) -> bool:
        return self.N == 1

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)) or type(other).__name__ == "mpq":
            other = CycScalar(other)
        if not isinstance(other, CycScalar):
            return NotImplemented
        return (self - other).is_zero()

    __hash__ = None  # equal values may carry different conductors

    def rational(self) -> Fraction:
        if self.N != 1:
            raise ValueError(f"{self} is not rational")
        c = self.coeffs[0]
        return Fraction(int(c.numerator), int(c.denominator))

    # -- Galois structure ---------------------------------------------------

    def galois(self, a: int) -> "CycScalar":
        """Image under zeta_N -> zeta_N^a (a coprime to N)."""
        if self.N == 1:
            return self
        return CycScalar._raw(self.N, _apply_galois(self.coeffs, self.N, a % self.N))

    def conjugate(self) -> "CycScalar":
        """Complex conjugate under the embedding zeta_N -> exp(2 pi i / N)."""
        return self.galois(-1)

    def minimal(self) -> "CycScalar":
        """Same value expressed over the smallest conductor containing it."""
        N = self.N
        for d in sorted(d for d in range(1, N) if N % d == 0):
            d = _canonical_conductor(d)
            if d == N:
                continue
            fixed = True
            for a in range(1, N):
                if a % d == 1 % d and math.gcd(a, N) == 1:
                    if self.galois(a) != self:
                        fixed = False
                        break
            if fixed:
                return _descend(self, d)
        return self

    @property
    def order(self) -> int:
        """Multiplicative order if self is a root of unity, else 0."""
        found = _root_exponent(self)
        if found is None:
            return 0
        L, j = found
        return L // math.gcd(L, j)

    def to_complex(self) -> complex:
        N = self.N
        return sum(
            (complex(float(c)) * complex(math.cos(2 * math.pi * j / N), math.sin(2 * math.pi * j / N))
             for j, c in enumerate(self.coeffs) if c),
            0j,
        )

    def __complex__(self):
        return self.to_complex()

    def __repr__(self):
        return f"CycScalar({self})"

    def __str__(self):
        return format_scalar(self)


def _descend(x: CycScalar, d: int) -> CycScalar:
    """Express x (known to lie in Q(zeta_d)) with conductor d."""
    if d == 1:
        return CycScalar._raw(1, (x.coeffs[0] if x.N == 1 else _trace_rational(x),))
    Fd = field_for(d)
    # solve in the image of the power basis of Q(zeta_d)
    imgs = [_embed_coeffs(Fd.powers[j], d, x.N) for j in range(Fd.phi)]
    M = ExactMatrix([[CycScalar(imgs[j][i]) for j in range(Fd.phi)] for i in range(len(x.coeffs))])
    sol = M.solve([CycScalar(c) for c in x.coeffs])
    return CycScalar._raw(d, tuple(s.coeffs[0] for s in sol))


def _trace_rational(x: CycScalar) -> mpq:
    # x is rational: its coefficient vector is (q, 0, ..., 0) after canonical reduction
    return x.coeffs[0]


def _root_exponent(z: CycScalar):
    """(L, j) with z = zeta_L^j, or None when z is not a root of unity."""
    L = math.lcm(2, z.N)
    for j in range(L):
        if z == root_of_unity(L, j):
            return L, j
    return None


def as_scalar(v) -> CycScalar:
    if isinstance(v, CycScalar):
        return v
    if isinstance(v, str):
        return parse_scalar(v)
    return CycScalar(v)


@lru_cache(maxsize=None)
def root_of_unity(N: int, k: int = 1) -> CycScalar:
    """`\\zeta_N^k` with `\\zeta_N = e^{2\\pi i/N}`.

    >>> root_of_unity(2, 1) == -1
    True
    >>> root_of_unity(4, 1) ** 2 == -1
    True
    """
    if N < 1:
        raise ValueError("N must be positive")
    k %= N
    if N == 1 or k == 0:
        return CycScalar(1)
    g = math.gcd(N, k)
    N, k = N // g, k // g
    if N == 2:
        return CycScalar(-1)
    if N % 4 == 2:
        # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
        m = N // 2
        return -root_of_unity(m, (k * (m + 1) // 2) % m)
    F = field_for(N)
    return CycScalar._raw(N, F.powers[k])


def sqrt_root_of_unity(z: CycScalar) -> CycScalar:
    """Deterministic square root `\\zeta_m^k \\mapsto \\zeta_{2m}^k`.

    Here `(m, k)` is the canonical form: `m` the order of ``z`` and
    `0 \\le k < m` coprime to `m`.

    >>> sqrt_root_of_unity(CycScalar(1)) == 1
    True
    >>> s = sqrt_root_of_unity(root_of_unity(3, 1))
    >>> s == root_of_unity(6, 1) and s * s == root_of_unity(3, 1)
    True
    """
    z = as_scalar(z)
    found = _root_exponent(z)
    if found is None:
        raise ValueError(f"{z} is not a root of unity")
    L, j = found
    g = math.gcd(L, j)
    m, k = L // g, j // g
    if m == 1:
        k = 0
    return root_of_unity(2 * m, k)


# ---------------------------------------------------------------------------
# scalar string grammar:  terms like "3/2", "-z3^2/2", "1/5*z12^7", joined by + / -

_TERM = re.compile(
    r"""\s*(?P<sign>[+-])?\s*
        (?:(?P<coef>\d+(?:/\d+)?)\s*\*?\s*)?
        (?:z(?P<N>\d+)(?:\^(?P<k>\d+))?)?
        (?:\s*/\s*(?P<den>\d+))?\s*""",
    re.VERBOSE,
)


def parse_scalar(text: str) -> CycScalar:
    """Parse the cyclotomic string grammar.

    A scalar is a sum of terms ``[±][a[/b]][*]zN[^k][/d]`` where ``zN``
    denotes `e^{2\\pi i/N}`.

    >>> parse_scalar("3/2") == CycScalar(Fraction(3, 2))
    True
    >>> parse_scalar("z3^2/2") == root_of_unity(3, 2) / 2
    True
    >>> parse_scalar("1 - z4") == 1 - root_of_unity(4, 1)
    True
    """
    if not isinstance(text, str) or not text.strip():
        raise ValueError(f"cannot parse scalar {text!r}")
    total = CycScalar(0)
    pos = 0
    s = text.strip()
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (m.group("coef") is None and m.group("N") is None):
            raise ValueError(f"cannot parse scalar {text!r}")
        if pos > 0 and m.group("sign") is None:
            raise ValueError(f"cannot parse scalar {text!r}")
        try:
            term = CycScalar(Fraction(m.group("coef")) if m.group("coef") else 1)
        except ZeroDivisionError:
            raise ValueError(f"zero denominator in {text!r}") from None
        if m.group("N"):
            N = int(m.group("N"))
            if N < 1:
                raise ValueError(f"bad conductor in {text!r}")
            term = term * root_of_unity(N, int(m.group("k") or 1))
        if m.group("den"):
            den = int(m.group("den"))
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            term = term / den
        if m.group("sign") == "-":
            term = -term
        total = total + term
        pos = m.end()
    return total


def _fmt_q(q) -> str:
    f = Fraction(int(q.numerator), int(q.denominator))
    return str(f)


def format_scalar(x: CycScalar) -> str:
    """Inverse of :func:`parse_scalar` (power-basis form).

    >>> format_scalar(parse_scalar("z3^2/2"))
    '-1/2-1/2*z3'
    """
    if x.N == 1:
        return _fmt_q(x.coeffs[0])
    parts = []
    for j, c in enumerate(x.coeffs):
        if not c:
            continue
        if j == 0:
            body = _fmt_q(c)
        else:
            zpart = f"z{x.N}" + (f"^{j}" if j > 1 else "")
            if c == 1:
                body = zpart
            elif c == -1:
                body = "-" + zpart
            else:
                body = f"{_fmt_q(c)}*{zpart}"
        if parts and not body.startswith("-"):
            body = "+" + body
        parts.append(body)
    return "".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# exact matrices


def _common_field(entries: Iterable[CycScalar]):
    L = 1
    for e in entries:
        if e.N != 1 and L % e.N:
            L = math.lcm(L, e.N)
    return field_for(_canonical_conductor(L))


class ExactMatrix:
    """A dense matrix over a cyclotomic field.

    Entries are held as raw elements of one field object ``F``; mixing
    matrices over different fields promotes to the compositum.

    >>> M = ExactMatrix([[1, 1], [1, 1]])
    >>> M.rank()
    1
    >>> [list(map(str, v)) for v in kernel_basis(M)]
    [['-1', '1']]
    """

    __slots__ = ("F", "rows", "ncols")

    def __init__(self, data=None, ncols: int | None = None, F=None, _raw=None):
        if _raw is not None:
            self.F = F
            self.rows = _raw
            self.ncols = ncols if ncols is not None else (len(_raw[0]) if _raw else 0)
            return
        data = [[as_scalar(v) for v in row] for row in (data or [])]
        if F is None:
            F = _common_field(v for row in data for v in row)
        self.F = F
        self.rows = [[v.raw(F) for v in row] for row in data]
        if ncols is None:
            ncols = len(data[0]) if data else 0
        self.ncols = ncols
        for row in self.rows:
            if len(row) != ncols:
                raise ValueError("ragged matrix")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, nrows: int, ncols: int, F=None) -> "ExactMatrix":
        F = F or field_for(1)
        return cls(_raw=[[F.zero] * ncols for _ in range(nrows)], ncols=ncols, F=F)

    @classmethod
    def identity(cls, n: int, F=None) -> "ExactMatrix":
        F = F or field_for(1)
        M = cls.zeros(n, n, F)
        for i in range(n):
            M.rows[i][i] = F.one
        return M

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int | None = None, F=None) -> "ExactMatrix":
        cols = [[as_scalar(v) for v in c] for c in cols]
        if nrows is None:
            nrows = len(cols[0]) if cols else 0
        return cls([[c[i] for c in cols] for i in range(nrows)], ncols=len(cols), F=F) if nrows else cls.zeros(0, len(cols), F)

    # -- shape and access ---------------------------------------------------

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij) -> CycScalar:
        i, j = ij
        return CycScalar.from_raw(self.F, self.rows[i][j])

    def to_lists(self) -> list[list[CycScalar]]:
        F = self.F
        return [[CycScalar.from_raw(F, v) for v in row] for row in self.rows]

    def column(self, j: int) -> list[CycScalar]:
        return [CycScalar.from_raw(self.F, row[j]) for row in self.rows]

    def columns(self) -> list[list[CycScalar]]:
        return [self.column(j) for j in range(self.ncols)]

    def promote(self, F) -> "ExactMatrix":
        if F is self.F:
            return self
        if F.N % self.F.N:
            raise ValueError("cannot promote to a field not containing the entries")
        src = self.F
        rows = [[F.from_coeffs(_embed_coeffs(src.to_coeffs(v), src.N, F.N)) for v in row] for row in self.rows]
        return ExactMatrix(_raw=rows, ncols=self.ncols, F=F)

    def _joint(self, other: "ExactMatrix"):
        if self.F is other.F:
            return self, other
        L = field_for(math.lcm(self.F.N, other.F.N))
        return self.promote(L), other.promote(L)

    def copy(self) -> "ExactMatrix":
        return ExactMatrix(_raw=[list(r) for r in self.rows], ncols=self.ncols, F=self.F)

    # -- algebra ------------------------------------------------------------

    def __add__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = self._joint(other)
        if a.shape != b.shape:
            raise ValueError("shape mismatch")
        F = a.F
        return ExactMatrix(_raw=[[F.add(x, y) for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)], ncols=a.ncols, F=F)

    def __sub__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = self._joint(other)
        if a.shape != b.shape:
            raise ValueError("shape mismatch")
        F = a.F
        return ExactMatrix(_raw=[[F.sub(x, y) for x, y in zip(r, s)] for r, s in zip(a.rows, b.rows)], ncols=a.ncols, F=F)

    def __neg__(self) -> "ExactMatrix":
        F = self.F
        return ExactMatrix(_raw=[[F.neg(x) for x in r] for r in self.rows], ncols=self.ncols, F=F)

    def scale(self, s) -> "ExactMatrix":
        s = as_scalar(s)
        F = self.F if self.F.N % s.N == 0 else field_for(math.lcm(self.F.N, s.N))
        a = self.promote(F)
        r = s.raw(F)
        if F.is_zero(r):
            return ExactMatrix.zeros(self.nrows, self.ncols, F)
        return ExactMatrix(_raw=[[F.mul(r, x) for x in row] for row in a.rows], ncols=a.ncols, F=F)

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = self._joint(other)
        if a.ncols != b.nrows:
            raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
        F = a.F
        zero = F.zero
        mul, add, isz = F.mul, F.add, F.is_zero
        brows = b.rows
        out = []
        for row in a.rows:
            acc = [zero] * b.ncols
            for k, x in enumerate(row):
                if isz(x):
                    continue
                for j, y in enumerate(brows[k]):
                    if not isz(y):
                        acc[j] = add(acc[j], mul(x, y))
            out.append(acc)
        return ExactMatrix(_raw=out, ncols=b.ncols, F=F)

    def apply(self, vec: Sequence[CycScalar]) -> list[CycScalar]:
        return (self @ ExactMatrix.from_columns([vec], nrows=self.ncols)).column(0)

    def transpose(self) -> "ExactMatrix":
        return ExactMatrix(_raw=[list(col) for col in zip(*self.rows)] if self.rows else [[] for _ in range(self.ncols)],
                           ncols=self.nrows, F=self.F) if self.ncols else ExactMatrix.zeros(0, self.nrows, self.F)

    def conjugate(self) -> "ExactMatrix":
        F = self.F
        if F.N == 1:
            return self.copy()
        rows = [[F.from_coeffs(_apply_galois(F.to_coeffs(v), F.N, -1 % F.N)) for v in row] for row in self.rows]
        return ExactMatrix(_raw=rows, ncols=self.ncols, F=F)

    def adjoint(self) -> "ExactMatrix":
        """Conjugate transpose."""
        return self.conjugate().transpose()

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        a, b = self._joint(other)
        F = a.F
        isz = F.is_zero
        rows = []
        zero = F.zero
        for ra in a.rows:
            for rb in b.rows:
                row = []
                for x in ra:
                    if isz(x):
                        row.extend([zero] * b.ncols)
                    else:
                        row.extend([F.mul(x, y) for y in rb])
                rows.append(row)
        return ExactMatrix(_raw=rows, ncols=a.ncols * b.ncols, F=F)

    def is_zero(self) -> bool:
        isz = self.F.is_zero
        return all(isz(x) for row in self.rows for x in row)

    def __eq__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.shape == other.shape and (self - other).is_zero()

    __hash__ = None

    def trace(self) -> CycScalar:
        F = self.F
        acc = F.zero
        for i in range(min(self.nrows, self.ncols)):
            acc = F.add(acc, self.rows[i][i])
        return CycScalar.from_raw(F, acc)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "ExactMatrix":
        return ExactMatrix(_raw=[[self.rows[i][j] for j in cols] for i in rows], ncols=len(cols), F=self.F)

    @staticmethod
    def block(blocks: Sequence[Sequence["ExactMatrix | None"]], row_dims: Sequence[int], col_dims: Sequence[int]) -> "ExactMatrix":
        """Assemble from a grid of blocks (``None`` means zero)."""
        L = 1
        for br in blocks:
            for b in br:
                if b is not None:
                    L = math.lcm(L, b.F.N)
        F = field_for(L)
        rows = []
        for bi, br in enumerate(blocks):
            for i in range(row_dims[bi]):
                row = []
                for bj, b in enumerate(br):
                    if b is None or b.nrows == 0:
                        row.extend([F.zero] * col_dims[bj])
                    else:
                        row.extend(b.promote(F).rows[i])
                rows.append(row)
        return ExactMatrix(_raw=rows, ncols=sum(col_dims), F=F)

    # -- elimination --------------------------------------------------------

    def rref(self) -> tuple["ExactMatrix", list[int]]:
        """Reduced row echelon form and pivot columns."""
        F = self.F
        isz, mul, sub = F.is_zero, F.mul, F.sub
        rows = [list(r) for r in self.rows if not all(isz(x) for x in r)]
        pivots = []
        r = 0
        nrows = len(rows)
        for c in range(self.ncols):
            p = None
            for i in range(r, nrows):
                if not isz(rows[i][c]):
                    p = i
                    break
            if p is None:
                continue
            rows[r], rows[p] = rows[p], rows[r]
            piv = rows[r]
            inv = F.inv(piv[c])
            piv = [mul(inv, x) if not isz(x) else x for x in piv]
            rows[r] = piv
            nz = [j for j in range(c, self.ncols) if not isz(piv[j])]
            for i in range(nrows):
                if i != r:
                    row = rows[i]
                    f = row[c]
                    if not isz(f):
                        for j in nz:
                            row[j] = sub(row[j], mul(f, piv[j]))
            pivots.append(c)
            r += 1
            if r == nrows:
                break
        return ExactMatrix(_raw=rows[:r], ncols=self.ncols, F=F), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel(self) -> list[list[CycScalar]]:
        return kernel_basis(self)

    def image(self) -> "Subspace":
        """Column space."""
        return Subspace.span(self.columns(), self.nrows)

    def solve(self, rhs: Sequence) -> list[CycScalar] | None:
        """One solution of ``self @ v = rhs`` or ``None``."""
        aug = ExactMatrix.block([[self, ExactMatrix.from_columns([rhs], nrows=self.nrows)]],
                                [self.nrows], [self.ncols, 1])
        R, piv = aug.rref()
        if self.ncols in piv:
            return None
        F = R.F
        sol = [F.zero] * self.ncols
        for i, c in enumerate(piv):
            sol[c] = R.rows[i][self.ncols]
        return [CycScalar.from_raw(F, v) for v in sol]

    def inverse(self) -> "ExactMatrix":
        n = self.nrows
        if n != self.ncols:
            raise ValueError("not square")
        aug = ExactMatrix.block([[self, ExactMatrix.identity(n, self.F)]], [n], [n, n])
        R, piv = aug.rref()
        if piv[:n] != list(range(n)):
            raise ZeroDivisionError("singular matrix")
        return R.submatrix(range(n), range(n, 2 * n))

    def det(self) -> CycScalar:
        n = self.nrows
        F = self.F
        rows = [list(r) for r in self.rows]
        det = F.one
        for c in range(n):
            p = next((i for i in range(c, n) if not F.is_zero(rows[i][c])), None)
            if p is None:
                return CycScalar(0)
            if p != c:
                rows[c], rows[p] = rows[p], rows[c]
                det = F.neg(det)
            det = F.mul(det, rows[c][c])
            inv = F.inv(rows[c][c])
            for i in range(c + 1, n):
                f = F.mul(rows[i][c], inv)
                if not F.is_zero(f):
                    rows[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(rows[i], rows[c])]
        return CycScalar.from_raw(F, det)

    def __repr__(self):
        return f"ExactMatrix({[[str(x) for x in r] for r in self.to_lists()]})"


def kernel_basis(M: ExactMatrix) -> list[list[CycScalar]]:
    """Basis of the right null space of ``M``.

    >>> kernel_basis(ExactMatrix.identity(3))
    []
    >>> len(kernel_basis(ExactMatrix.zeros(2, 2)))
    2
    """
    R, piv = M.rref()
    F = R.F
    free = [j for j in range(M.ncols) if j not in set(piv)]
    out = []
    for f in free:
        v = [F.zero] * M.ncols
        v[f] = F.one
        for i, c in enumerate(piv):
            v[c] = F.neg(R.rows[i][f])
        out.append([CycScalar.from_raw(F, x) for x in v])
    return out


def _kernel_raw(M: ExactMatrix) -> tuple[object, list[list]]:
    R, piv = M.rref()
    F = R.F
    ps = set(piv)
    out = []
    for f in range(M.ncols):
        if f in ps:
            continue
        v = [F.zero] * M.ncols
        v[f] = F.one
        for i, c in enumerate(piv):
            v[c] = F.neg(R.rows[i][f])
        out.append(v)
    return F, out


# ---------------------------------------------------------------------------
# subspaces


class Subspace:
    """A subspace of ``F^dim`` held as a reduced echelon basis.

    The basis vectors ``b_i`` satisfy ``b_i[pivots[j]] = delta_ij``, so the
    coordinates of any member ``v`` are ``v[pivots]``.
    """

    __slots__ = ("F", "dim_ambient", "rows", "pivots")

    def __init__(self, F, dim_ambient: int, rows: list, pivots: list[int]):
        self.F = F
        self.dim_ambient = dim_ambient
        self.rows = rows  # raw basis vectors in RREF
        self.pivots = pivots

    @classmethod
    def span(cls, vectors: Sequence[Sequence], dim_ambient: int, F=None) -> "Subspace":
        if not vectors:
            return cls(F or field_for(1), dim_ambient, [], [])
        M = ExactMatrix([list(v) for v in vectors], ncols=dim_ambient, F=F)
        return cls.from_matrix_rows(M)

    @classmethod
    def from_matrix_rows(cls, M: ExactMatrix) -> "Subspace":
        R, piv = M.rref()
        return cls(R.F, M.ncols, R.rows, piv)

    @classmethod
    def from_raw_vectors(cls, F, vectors: list, dim_ambient: int) -> "Subspace":
        if not vectors:
            return cls(F, dim_ambient, [], [])
        return cls.from_matrix_rows(ExactMatrix(_raw=[list(v) for v in vectors], ncols=dim_ambient, F=F))

    @classmethod
    def zero(cls, dim_ambient: int, F=None) -> "Subspace":
        return cls(F or field_for(1), dim_ambient, [], [])

    @classmethod
    def full(cls, dim_ambient: int, F=None) -> "Subspace":
        F = F or field_for(1)
        return cls(F, dim_ambient, ExactMatrix.identity(dim_ambient, F).rows, list(range(dim_ambient)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def basis(self) -> list[list[CycScalar]]:
        F = self.F
        return [[CycScalar.from_raw(F, x) for x in r] for r in self.rows]

    def matrix(self) -> ExactMatrix:
        """Basis vectors as columns."""
        if not self.rows:
            return ExactMatrix.zeros(self.dim_ambient, 0, self.F)
        return ExactMatrix(_raw=self.rows, ncols=self.dim_ambient, F=self.F).transpose()

    def promote(self, F) -> "Subspace":
        if F is self.F:
            return self
        if not self.rows:
            return Subspace(F, self.dim_ambient, [], [])
        M = ExactMatrix(_raw=self.rows, ncols=self.dim_ambient, F=self.F).promote(F)
        return Subspace(F, self.dim_ambient, M.rows, list(self.pivots))

    def _joint(self, other: "Subspace"):
        if self.dim_ambient != other.dim_ambient:
            raise ValueError("dimension mismatch")
        if self.F is other.F:
            return self, other
        L = field_for(math.lcm(self.F.N, other.F.N))
        return self.promote(L), other.promote(L)

    def contains_raw(self, v) -> bool:
        F = self.F
        w = list(v)
        for row, p in zip(self.rows, self.pivots):
            f = w[p]
            if not F.is_zero(f):
                w = [F.sub(a, F.mul(f, b)) for a, b in zip(w, row)]
        return all(F.is_zero(x) for x in w)

    def contains(self, v: Sequence) -> bool:
        v = [as_scalar(x) for x in v]
        L = self.F
        for x in v:
            if L.N % x.N:
                L = field_for(math.lcm(L.N, x.N))
        S = self.promote(L)
        return S.contains_raw([x.raw(L) for x in v])

    def coords_raw(self, v) -> list:
        """Coordinates of a member (no membership check)."""
        return [v[p] for p in self.pivots]

    def __le__(self, other: "Subspace") -> bool:
        a, b = self._joint(other)
        return all(b.contains_raw(r) for r in a.rows)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.dim == other.dim and self <= other

    __hash__ = None

    def image_under(self, M: ExactMatrix) -> "Subspace":
        if not self.rows:
            return Subspace.zero(M.nrows, M.F)
        return (M @ self.matrix()).image()

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.dim_ambient})"


def subspace_sum(A: Subspace, B: Subspace) -> Subspace:
    a, b = A._joint(B)
    return Subspace.from_raw_vectors(a.F, a.rows + b.rows, a.dim_ambient)


def subspace_intersection(A: Subspace, B: Subspace) -> Subspace:
    """Intersection via the kernel of ``[A | -B]``.

    >>> A = Subspace.span([[1, 0]], 2); B = Subspace.span([[0, 1]], 2)
    >>> subspace_intersection(A, B).dim, subspace_sum(A, B).dim
    (0, 2)
    """
    a, b = A._joint(B)
    if a.dim == 0 or b.dim == 0:
        return Subspace.zero(a.dim_ambient, a.F)
    F = a.F
    n = a.dim_ambient
    # columns: basis of A then basis of B
    rows = [[a.rows[i][k] for i in range(a.dim)] + [F.neg(b.rows[j][k]) for j in range(b.dim)] for k in range(n)]
    M = ExactMatrix(_raw=rows, ncols=a.dim + b.dim, F=F)
    F, ker = _kernel_raw(M)
    vecs = []
    for v in ker:
        w = [F.zero] * n
        for i in range(a.dim):
            if not F.is_zero(v[i]):
                w = [F.add(x, F.mul(v[i], y)) for x, y in zip(w, a.rows[i])]
        vecs.append(w)
    return Subspace.from_raw_vectors(F, vecs, n)


def quotient_basis(A: Subspace, B: Subspace) -> Subspace:
    """Span of basis vectors of ``A`` completing a basis of ``B`` (requires B <= A)."""
    a, b = A._joint(B)
    if not b <= a:
        raise ValueError("quotient requires B to lie inside A")
    F = a.F
    chosen = []
    current = Subspace(F, a.dim_ambient, list(b.rows), list(b.pivots))
    for r in a.rows:
        if not current.contains_raw(r):
            chosen.append(r)
            current = Subspace.from_raw_vectors(F, current.rows + [r], a.dim_ambient)
    return Subspace.from_raw_vectors(F, chosen, a.dim_ambient) if chosen else Subspace.zero(a.dim_ambient, F)


def in_span(v: Sequence, A: Subspace) -> bool:
    return A.contains(v)


def preimage(M: ExactMatrix, target: Subspace) -> Subspace:
    """``{v : M v in target}``."""
    if target.dim_ambient != M.nrows:
        raise ValueError("dimension mismatch")
    # v in preimage  <=>  N M v = 0, where N has rows spanning the annihilator of target
    if target.dim == target.dim_ambient:
        return Subspace.full(M.ncols, M.F)
    ann = annihilator(target)
    if not ann:
        return Subspace.full(M.ncols, M.F)
    A = ExactMatrix(_raw=ann, ncols=M.nrows, F=target.F)
    F, ker = _kernel_raw(A @ M)
    return Subspace.from_raw_vectors(F, ker, M.ncols)


def annihilator(S: Subspace) -> list:
    """Raw row vectors ``u`` with ``u . b = 0`` for all basis ``b`` of ``S``."""
    F = S.F
    n = S.dim_ambient
    if not S.rows:
        return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    _, ker = _kernel_raw(ExactMatrix(_raw=S.rows, ncols=n, F=F))
    return ker


# ---------------------------------------------------------------------------
# certified signs


def certified_sign(z, max_prec: int = 4096) -> int:
    """Sign of a real cyclotomic number: +1, 0 or -1.

    Exact zero test first, then interval evaluation of
    `\\sum_j c_j \\cos(2\\pi j/N)` at doubling precision.

    >>> certified_sign(2 - root_of_unity(3, 1) - root_of_unity(3, 2))
    1
    >>> certified_sign(CycScalar(Fraction(-1, 2)))
    -1
    >>> certified_sign(CycScalar(0))
    0
    """
    z = as_scalar(z)
    if z.is_zero():
        return 0
    if z != z.conjugate():
        raise ValueError(f"{z} is not real")
    if z.N == 1:
        return 1 if z.coeffs[0] > 0 else -1
    prec = 53
    iv = mpmath.iv
    while prec <= max_prec:
        with mpmath.workprec(prec):
            iv.prec = prec
            total = iv.mpf(0)
            for j, c in enumerate(z.coeffs):
                if c:
                    term = iv.mpf(int(c.numerator)) / int(c.denominator)
                    total += term * iv.cos(2 * iv.pi * j / z.N)
            if total.a > 0:
                return 1
            if total.b < 0:
                return -1
        prec *= 2
    raise ArithmeticError(f"could not certify the sign of {z}")
