"""
PBW normal forms in the Cherednik algebra, the algebra ``H ⊗ C(V)`` and the
odd derivations ``δ_d``, ``δ_∂``.

Elements of ``H`` are sums of normal-ordered monomials ``y^a w x^b`` keyed
by ``(a, w, b)``; only left multiplication by generators is ever needed,
with ``x_i`` pushed past ``y^a`` by the defining commutator and group
elements moved left by their linear action.

Clifford factors are stored in the basis ``y_I x_J`` (increasing ``I``
then ``J``); products are computed on the spinor module, where the whole
Clifford algebra acts faithfully, and converted back.

Weights: ``y`` counts ``+1`` and ``x`` counts ``-1`` in both factors; the
subalgebra ``A`` is the weight-zero part, filtered by the ``H``-degree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .cherednik_modules import CherednikParams, GradedModule, WindowError, invariant_polynomials
from .clifford_spinor import PinCover, spinor_space
from .cohomology import h_homology, hstar_cohomology, pin_cover
from .exact_scalars import (
    CycScalar,
    ExactMatrix,
    Subspace,
    as_scalar,
    format_scalar,
    parse_scalar,
    subspace_intersection,
    subspace_sum,
)
from .reflection_groups import monomials

__all__ = [
    "CapExceeded",
    "PBWAlgebra",
    "TensorAlgebra",
    "DEFAULT_CAPS",
    "find_central_elements",
    "verify_vogan_decomposition",
    "zeta_d",
    "casselman_osborne_check",
    "ideal_in_image_check",
    "invariant_products",
    "pbw_normalize",
    "build_A_filtered",
    "zeta_values",
    "zeta_multiplicative_check",
    "VoganEngine",
    "CentralElements",
    "format_monomial",
    "parse_monomial",
    "element_operator",
]

DEFAULT_CAPS = {1: 4, 2: 2}


class CapExceeded(RuntimeError):
    """A filtration degree above the configured cap was requested."""


def _cap_for(rank: int, cap: int | None) -> int:
    if cap is not None:
        return cap
    return DEFAULT_CAPS.get(rank, 1)


def _addto(acc: dict, key, val):
    if val.is_zero():
        return
    cur = acc.get(key)
    if cur is None:
        acc[key] = val
    else:
        s = cur + val
        if s.is_zero():
            del acc[key]
        else:
            acc[key] = s


def _add_exp(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if j == i else 0 for j in range(n))


# ---------------------------------------------------------------------------
# the Cherednik algebra in PBW form


class PBWAlgebra:
    """Normal-ordered arithmetic in ``H_{t,c}``.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> H = PBWAlgebra(CherednikParams(G, T, 1, {"s0": "1/5"}))
    >>> H.to_str(H.normalize([("x", 0), ("y", 0)]))
    '-1*w0 + 1/5*w1 + 1*y1^1*w0*x1^1'
    """

    def __init__(self, params: CherednikParams):
        self.params = params
        self.G = params.group
        self.n = params.rank
        self.zero_exp = tuple([0] * self.n)
        self._ycache: dict = {}
        self._xcache: dict = {}
        self._mcache: dict = {}

    # polynomials -----------------------------------------------------------

    def _poly_image(self, g: int, exps: tuple, dual: bool) -> dict:
        """``g`` applied to the monomial ``exps`` in the y's (or x's with ``dual``)."""
        cache = self._xcache if dual else self._ycache
        key = (g, exps)
        if key in cache:
            return cache[key]
        mat = self.G.dual[g] if dual else self.G.elements[g]
        n = self.n
        out = {self.zero_exp: CycScalar(1)}
        for j in range(n):
            lin = {}
            for l in range(n):
                v = mat[l, j]
                if not v.is_zero():
                    lin[_unit(n, l)] = v
            for _ in range(exps[j]):
                nxt: dict = {}
                for e1, c1 in out.items():
                    for e2, c2 in lin.items():
                        _addto(nxt, _add_exp(e1, e2), c1 * c2)
                out = nxt
        cache[key] = out
        return out

    # products ----------------------------------------------------------------

    def _x_comm_y(self, i: int, a: tuple) -> dict:
        """``[x_i, y^a]`` as a dict ``(a', s) -> coefficient`` (no x's remain)."""
        seq = [j for j in range(self.n) for _ in range(a[j])]
        out: dict = {}
        t = self.params.t
        e = self.G.identity
        for k, j in enumerate(seq):
            pre = [0] * self.n
            for q in seq[:k]:
                pre[q] += 1
            suf = [0] * self.n
            for q in seq[k + 1:]:
                suf[q] += 1
            pre, suf = tuple(pre), tuple(suf)
            if i == j and not t.is_zero():
                _addto(out, (_add_exp(pre, suf), e), -t)
            for s, v in self.params.commutator[j][i]:
                for e2, c2 in self._poly_image(s, suf, False).items():
                    _addto(out, (_add_exp(pre, e2), s), v * c2)
        return out

    def x_left(self, i: int, elem: dict) -> dict:
        """``x_i · elem``."""
        out: dict = {}
        G = self.G
        for (a, w, b), coef in elem.items():
            # y^a (x_i w) x^b = y^a w w^{-1}(x_i) x^b
            winv = G.inverse[w]
            for e2, c2 in self._poly_image(winv, _unit(self.n, i), True).items():
                _addto(out, (a, w, _add_exp(b, e2)), coef * c2)
            if any(a):
                for (a2, s), c3 in self._x_comm_y(i, a).items():
                    _addto(out, (a2, G.mul(s, w), b), coef * c3)
        return out

    def y_left(self, i: int, elem: dict) -> dict:
        out: dict = {}
        u = _unit(self.n, i)
        for (a, w, b), coef in elem.items():
            _addto(out, (_add_exp(a, u), w, b), coef)
        return out

    def w_left(self, g: int, elem: dict) -> dict:
        out: dict = {}
        for (a, w, b), coef in elem.items():
            for e2, c2 in self._poly_image(g, a, False).items():
                _addto(out, (e2, self.G.mul(g, w), b), coef * c2)
        return out

    def mul_mono(self, m1: tuple, m2: tuple) -> dict:
        key = (m1, m2)
        hit = self._mcache.get(key)
        if hit is not None:
            return hit
        a, w, b = m1
        cur = {m2: CycScalar(1)}
        for i in range(self.n):
            for _ in range(b[i]):
                cur = self.x_left(i, cur)
        cur = self.w_left(w, cur)
        u = {}
        for (a2, w2, b2), c in cur.items():
            _addto(u, (_add_exp(a, a2), w2, b2), c)
        self._mcache[key] = u
        return u

    def mul(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for m1, c1 in A.items():
            for m2, c2 in B.items():
                for m, c in self.mul_mono(m1, m2).items():
                    _addto(out, m, c1 * c2 * c)
        return out

    # constructors ------------------------------------------------------------

    def one(self) -> dict:
        return {(self.zero_exp, self.G.identity, self.zero_exp): CycScalar(1)}

    def gen(self, kind: str, i: int) -> dict:
        z = self.zero_exp
        if kind == "y":
            return {(_unit(self.n, i), self.G.identity, z): CycScalar(1)}
        if kind == "x":
            return {(z, self.G.identity, _unit(self.n, i)): CycScalar(1)}
        if kind == "w":
            return {(z, i, z): CycScalar(1)}
        raise ValueError(kind)

    def normalize(self, word: Sequence[tuple[str, int]]) -> dict:
        """Normal form of a word of generators, read left to right."""
        out = self.one()
        for kind, i in reversed(list(word)):
            if kind == "x":
                out = self.x_left(i, out)
            elif kind == "y":
                out = self.y_left(i, out)
            elif kind == "w":
                out = self.w_left(i, out)
            else:
                raise ValueError(kind)
        return out

    def commutator(self, A: dict, B: dict) -> dict:
        out = self.mul(A, B)
        for m, c in self.mul(B, A).items():
            _addto(out, m, -c)
        return out

    def to_str(self, A: dict) -> str:
        if not A:
            return "0"
        return " + ".join(f"{format_scalar(c)}*{format_monomial(m)}"
                          for m, c in sorted(A.items(), key=lambda kv: (sum(kv[0][0]) + sum(kv[0][2]), kv[0])))


# ---------------------------------------------------------------------------
# PBW monomial strings: "y1^2*w3*x2^1 # y1.x2"

_FACTOR = re.compile(r"^([xyw])(\d+)(?:\^(\d+))?$")


def format_monomial(hkey: tuple, ckey: tuple | None = None) -> str:
    """String form of ``y^a w x^b`` (and a Clifford part after ``#``).

    >>> format_monomial(((2, 0), 3, (0, 1)), ((0,), (1,)))
    'y1^2*w3*x2^1 # y1.x2'
    """
    a, w, b = hkey
    parts = [f"y{i + 1}^{e}" for i, e in enumerate(a) if e]
    parts.append(f"w{w}")
    parts += [f"x{i + 1}^{e}" for i, e in enumerate(b) if e]
    s = "*".join(parts)
    if ckey is not None:
        I, J = ckey
        cl = [f"y{i + 1}" for i in I] + [f"x{j + 1}" for j in J]
        s += " # " + (".".join(cl) if cl else "1")
    return s


def parse_monomial(text: str, n: int) -> tuple:
    """Inverse of :func:`format_monomial`; returns ``hkey`` or ``(hkey, ckey)``.

    >>> parse_monomial("y1^2*w3*x2^1 # y1.x2", 2)
    (((2, 0), 3, (0, 1)), ((0,), (1,)))
    """
    hpart, sep, cpart = text.partition("#")
    a, b, w = [0] * n, [0] * n, None
    for tok in hpart.strip().split("*"):
        m = _FACTOR.match(tok.strip())
        if not m:
            raise ValueError(f"bad factor {tok!r}")
        kind, idx, exp = m.group(1), int(m.group(2)), int(m.group(3) or 1)
        if kind == "w":
            w = idx
        elif kind == "y":
            a[idx - 1] += exp
        else:
            b[idx - 1] += exp
    if w is None:
        raise ValueError("monomial needs a group element factor")
    hkey = (tuple(a), w, tuple(b))
    if not sep:
        return hkey
    cpart = cpart.strip()
    I, J = [], []
    if cpart != "1":
        for tok in cpart.split("."):
            kind, idx = tok[0], int(tok[1:])
            (I if kind == "y" else J).append(idx - 1)
    return hkey, (tuple(I), tuple(J))


# ---------------------------------------------------------------------------
# H ⊗ C(V)


class TensorAlgebra:
    """``H ⊗ C(V)`` on dict elements ``((a, w, b), (I, J)) -> coefficient``."""

    def __init__(self, params: CherednikParams, convention: int = 1):
        self.H = PBWAlgebra(params)
        self.params = params
        self.G = params.group
        self.n = params.rank
        self.cover: PinCover = pin_cover(self.G, convention)
        self.S = spinor_space(self.n)
        n = self.n
        subs = [I for p in range(n + 1) for I in combinations(range(n), p)]
        self.ckeys = [(I, J) for I in subs for J in subs]
        self.cpos = {k: i for i, k in enumerate(self.ckeys)}
        self._cmul: dict = {}
        self._hconj: dict = {}
        self._cconj: dict = {}

    # Clifford ---------------------------------------------------------------

    def cop(self, ckey) -> ExactMatrix:
        I, J = ckey
        S = self.S
        op = ExactMatrix.identity(S.dim)
        for i in I:
            op = op @ S.y_ops[i]
        for j in J:
            op = op @ S.x_ops[j]
        return op

    @cached_property
    def _basis_inverse(self) -> ExactMatrix:
        cols = []
        for k in self.ckeys:
            op = self.cop(k)
            cols.append([v for row in op.to_lists() for v in row])
        return ExactMatrix.from_columns(cols).inverse()

    def from_operator(self, op: ExactMatrix) -> dict:
        vec = [v for row in op.to_lists() for v in row]
        coords = self._basis_inverse.apply(vec)
        return {k: c for k, c in zip(self.ckeys, coords) if not c.is_zero()}

    def cmul(self, k1, k2) -> dict:
        key = (k1, k2)
        hit = self._cmul.get(key)
        if hit is None:
            hit = self.from_operator(self.cop(k1) @ self.cop(k2))
            self._cmul[key] = hit
        return hit

    @staticmethod
    def parity(ckey) -> int:
        return (len(ckey[0]) + len(ckey[1])) % 2

    @staticmethod
    def weight(key) -> int:
        (a, w, b), (I, J) = key
        return sum(a) - sum(b) + len(I) - len(J)

    @staticmethod
    def hdegree(key) -> int:
        (a, w, b), _ = key
        return sum(a) + sum(b)

    # products ---------------------------------------------------------------

    def mul(self, A: dict, B: dict) -> dict:
        out: dict = {}
        for (h1, c1), v1 in A.items():
            for (h2, c2), v2 in B.items():
                hp = self.H.mul_mono(h1, h2)
                if not hp:
                    continue
                cp = self.cmul(c1, c2)
                for hk, hv in hp.items():
                    for ck, cv in cp.items():
                        _addto(out, (hk, ck), v1 * v2 * hv * cv)
        return out

    def add(self, A: dict, B: dict, scale=1) -> dict:
        out = dict(A)
        s = as_scalar(scale)
        for k, v in B.items():
            _addto(out, k, s * v)
        return out

    def scale(self, A: dict, s) -> dict:
        s = as_scalar(s)
        return {k: v * s for k, v in A.items() if not (v * s).is_zero()}

    def tensor(self, h: dict, c: dict | None = None) -> dict:
        """``h ⊗ c`` (``c`` defaults to the Clifford unit)."""
        c = c or {((), ()): CycScalar(1)}
        out: dict = {}
        for hk, hv in h.items():
            for ck, cv in c.items():
                _addto(out, (hk, ck), hv * cv)
        return out

    @cached_property
    def D_x(self) -> dict:
        z = self.H.zero_exp
        e = self.G.identity
        return {((z, e, _unit(self.n, i)), ((i,), ())): CycScalar(1) for i in range(self.n)}

    @cached_property
    def D_y(self) -> dict:
        z = self.H.zero_exp
        e = self.G.identity
        return {((_unit(self.n, i), e, z), ((), (i,))): CycScalar(1) for i in range(self.n)}

    def delta(self, A: dict, which: str = "d") -> dict:
        """``δ(a) = D a - ε(a) a D`` with ``D = D_x`` (``"d"``) or ``D_y`` (``"partial"``)."""
        D = self.D_x if which == "d" else self.D_y
        out = self.mul(D, A)
        even = {k: v for k, v in A.items() if self.parity(k[1]) == 0}
        odd = {k: v for k, v in A.items() if self.parity(k[1]) == 1}
        out = self.add(out, self.mul(even, D), -1)
        out = self.add(out, self.mul(odd, D), 1)
        return out

    def epsilon(self, A: dict) -> dict:
        return {k: (v if self.parity(k[1]) == 0 else -v) for k, v in A.items()}

    # the diagonal embedding of the pin cover --------------------------------

    def delta_lift(self, e: int) -> dict:
        """``Δ(w̃_e) = w_e ⊗ w̃_e`` for the representative lift of element ``e``."""
        z = self.H.zero_exp
        return self.tensor({(z, e, z): CycScalar(1)}, self.from_operator(self.cover.reps[e].op))

    def conjugate(self, A: dict, g: int) -> dict:
        """``Δ(g̃) A Δ(g̃)^{-1}``; the sign of the lift cancels."""
        G = self.G
        out: dict = {}
        ginv = G.inverse[g]
        mu = self.cover.reps[g].op
        mu_inv = mu.inverse()
        for (hk, ck), v in A.items():
            hkey = (g, hk)
            hc = self._hconj.get(hkey)
            if hc is None:
                hc = self.H.mul(self.H.mul(self.H.gen("w", g), {hk: CycScalar(1)}), self.H.gen("w", ginv))
                self._hconj[hkey] = hc
            ckey = (g, ck)
            cc = self._cconj.get(ckey)
            if cc is None:
                cc = self.from_operator(mu @ self.cop(ck) @ mu_inv)
                self._cconj[ckey] = cc
            for h2, hv in hc.items():
                for c2, cv in cc.items():
                    _addto(out, (h2, c2), v * hv * cv)
        return out

    @cached_property
    def class_sums(self) -> list[tuple[int, dict]]:
        """Independent elements ``Δ(Σ_g g̃ w̃_e g̃^{-1})`` spanning ``Δ(ℂ[W̃]^{W̃})``."""
        G = self.G
        out = []
        vecs: list = []
        seen = set()
        for cl in G.classes:
            e = cl[0]
            if e in seen:
                continue
            seen.update(cl)
            acc: dict = {}
            base = self.delta_lift(e)
            for g in range(G.order):
                acc = self.add(acc, self.conjugate(base, g))
            if not acc:
                continue
            trial = vecs + [acc]
            if _independent(trial):
                vecs.append(acc)
                out.append((e, acc))
        return out

    # bases -------------------------------------------------------------------

    def basis(self, weight: int, n: int) -> list:
        """Monomials ``((a, w, b), (I, J))`` of the given weight and ``H``-degree ``≤ n``."""
        out = []
        G = self.G
        for deg in range(n + 1):
            for da in range(deg + 1):
                db = deg - da
                for a in monomials(self.n, da):
                    for b in monomials(self.n, db):
                        for ck in self.ckeys:
                            if da - db + len(ck[0]) - len(ck[1]) != weight:
                                continue
                            for w in range(G.order):
                                out.append(((a, w, b), ck))
        return out

    def coords(self, A: dict, index: dict) -> list[CycScalar]:
        vec = [CycScalar(0)] * len(index)
        for k, v in A.items():
            if k not in index:
                raise KeyError(f"monomial {format_monomial(*k)} outside the basis")
            vec[index[k]] = v
        return vec

    def element(self, vec: Sequence[CycScalar], basis: list) -> dict:
        return {k: v for k, v in zip(basis, vec) if not v.is_zero()}

    def to_json(self, A: dict) -> list[list[str]]:
        return [[format_scalar(v), format_monomial(h, c)] for (h, c), v in
                sorted(A.items(), key=lambda kv: (self.hdegree(kv[0]), format_monomial(*kv[0])))]

    def from_json(self, data) -> dict:
        out: dict = {}
        for coef, mono in data:
            h, c = parse_monomial(mono, self.n)
            _addto(out, (h, c), parse_scalar(coef))
        return out


def _independent(elems: list[dict]) -> bool:
    keys = sorted({k for e in elems for k in e}, key=str)
    idx = {k: i for i, k in enumerate(keys)}
    rows = []
    for e in elems:
        row = [CycScalar(0)] * len(keys)
        for k, v in e.items():
            row[idx[k]] = v
        rows.append(row)
    return ExactMatrix(rows, ncols=len(keys)).rank() == len(elems)


# ---------------------------------------------------------------------------
# filtered pieces of A^{W̃}


@dataclass
class FilteredPiece:
    """``W̃``-invariants of weight ``weight`` and ``H``-degree ``≤ n``."""

    weight: int
    n: int
    basis: list  # monomial keys
    index: dict
    invariants: list[dict]  # elements


def _kernel_vectors(M: ExactMatrix) -> list[list[CycScalar]]:
    if M.ncols == 0:
        return []
    if M.nrows == 0:
        return [[CycScalar(1) if i == j else CycScalar(0) for i in range(M.ncols)] for j in range(M.ncols)]
    return M.kernel()


class VoganEngine:
    """Caches filtered pieces and ``δ`` images for one parameter point."""

    def __init__(self, params: CherednikParams, convention: int = 1, cap: int | None = None):
        self.T = TensorAlgebra(params, convention)
        self.params = params
        self.cap = _cap_for(params.rank, cap)
        self._pieces: dict = {}

    def piece(self, n: int, weight: int = 0, invariant: bool = True) -> FilteredPiece:
        if n > self.cap:
            raise CapExceeded(f"filtration degree {n} exceeds the cap {self.cap} for rank {self.params.rank}")
        key = (n, weight, invariant)
        if key in self._pieces:
            return self._pieces[key]
        T = self.T
        basis = T.basis(weight, n)
        index = {k: i for i, k in enumerate(basis)}
        if not invariant:
            elems = [{k: CycScalar(1)} for k in basis]
        else:
            rows = []
            for g in T.G.generators:
                cols = []
                for k in basis:
                    img = T.conjugate({k: CycScalar(1)}, g)
                    img = T.add(img, {k: CycScalar(1)}, -1)
                    cols.append(T.coords(img, index))
                rows.extend(ExactMatrix.from_columns(cols, nrows=len(basis)).to_lists())
            M = ExactMatrix(rows, ncols=len(basis)) if rows else ExactMatrix.zeros(0, len(basis))
            elems = [T.element(v, basis) for v in _kernel_vectors(M)]
        P = FilteredPiece(weight, n, basis, index, elems)
        self._pieces[key] = P
        return P

    def decompose(self, target: dict, n: int, which: str = "d", weight: int = 0, invariant: bool = True):
        """Solve ``target = δ(b) + s`` with ``b`` of degree ``≤ n - 1`` and ``s`` in the Δ-span.

        Returns ``(b, coefficients on class sums)`` or ``None``.
        """
        T = self.T
        big = T.basis(weight, n)
        index = {k: i for i, k in enumerate(big)}
        cols = []
        bs = []
        if n >= 1:
            P = self.piece(n - 1, weight, invariant)
            for e in P.invariants:
                img = T.delta(e, which)
                cols.append(T.coords(img, index))
                bs.append(e)
        cs = T.class_sums if weight == 0 else []
        for _, z in cs:
            cols.append(T.coords(z, index))
        rhs = T.coords(target, index)
        if not cols:
            return ({}, []) if all(v.is_zero() for v in rhs) else None
        A = ExactMatrix.from_columns(cols, nrows=len(big))
        sol = A.solve(rhs)
        if sol is None:
            return None
        b: dict = {}
        for coef, e in zip(sol[: len(bs)], bs):
            if not coef.is_zero():
                b = T.add(b, e, coef)
        gamma = list(sol[len(bs):])
        return b, gamma


# ---------------------------------------------------------------------------
# decomposition checks


def verify_vogan_decomposition(params: CherednikParams, n: int, which: str = "d", convention: int = 1,
                               cap: int | None = None, engine: VoganEngine | None = None) -> dict:
    """Certificate that ``ker δ ∩ A^{W̃,n} = δ(A^{W̃,n-1}) ⊕ Δ(ℂ[W̃]^{W̃})``.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> cert = verify_vogan_decomposition(CherednikParams(G, T, 1, {"s0": "1/5"}), 1)
    >>> cert["holds"], cert["kernel_dim"], cert["delta_span_dim"]
    (True, 4, 2)
    """
    E = engine or VoganEngine(params, convention, cap)
    T = E.T
    P = E.piece(n)
    big = T.basis(0, n + 1)
    bidx = {k: i for i, k in enumerate(big)}
    cols = [T.coords(T.delta(e, which), bidx) for e in P.invariants]
    if cols:
        Dm = ExactMatrix.from_columns(cols, nrows=len(big))
        kvecs = _kernel_vectors(Dm)
    else:
        kvecs = []
    kernel = []
    for v in kvecs:
        el: dict = {}
        for c, e in zip(v, P.invariants):
            if not c.is_zero():
                el = T.add(el, e, c)
        kernel.append(el)
    dim = len(P.basis)

    def span(elems):
        return Subspace.span([T.coords(e, P.index) for e in elems], dim) if elems else Subspace.zero(dim)

    K = span(kernel)
    images = [T.delta(e, which) for e in E.piece(n - 1).invariants] if n >= 1 else []
    I = span(images)
    Z = span([z for _, z in T.class_sums])
    direct = subspace_intersection(I, Z).dim == 0
    inside = I <= K and Z <= K
    equal = subspace_sum(I, Z) == K
    witnesses = []
    ok = True
    for el in kernel:
        res = E.decompose(el, n, which)
        if res is None:
            ok = False
            witnesses.append({"element": T.to_json(el), "decomposition": None})
            continue
        b, gamma = res
        s: dict = {}
        for g, (_, z) in zip(gamma, T.class_sums):
            if not g.is_zero():
                s = T.add(s, z, g)
        check = T.add(T.delta(b, which), s)
        if check != el:
            ok = False
        witnesses.append({"element": T.to_json(el), "preimage": T.to_json(b), "delta_part": T.to_json(s),
                          "class_coefficients": {str(e): format_scalar(g) for g, (e, _) in zip(gamma, T.class_sums)}})
    return {
        "group": params.group.name, "t": str(params.t), "c": params.c.to_json(), "n": n, "which": which,
        "A_dim": dim, "invariant_dim": len(P.invariants), "kernel_dim": K.dim, "image_dim": I.dim,
        "delta_span_dim": Z.dim, "direct": direct, "contained": inside, "equal": equal,
        "holds": direct and inside and equal and ok, "witnesses": witnesses,
    }


@dataclass
class CentralElements:
    """Bounded-degree central elements of ``H`` per weight; ``B`` is the weight-zero part."""

    params: CherednikParams
    degree: int
    by_weight: dict[int, list[dict]] = field(default_factory=dict)

    @property
    def B(self) -> list[dict]:
        return self.by_weight.get(0, [])


def _pbw_basis(H: PBWAlgebra, weight: int, d: int) -> list:
    out = []
    for deg in range(d + 1):
        for da in range(deg + 1):
            db = deg - da
            if da - db != weight:
                continue
            for a in monomials(H.n, da):
                for b in monomials(H.n, db):
                    for w in range(H.G.order):
                        out.append((a, w, b))
    return out


def find_central_elements(params: CherednikParams, d: int, weights: Iterable[int] | None = None,
                          cap: int | None = None) -> CentralElements:
    """Exact basis of the elements of ``H``-degree ``≤ d`` commuting with every generator.

    The ``ℂ*``-action is by automorphisms, so each weight is solved separately.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> Z = find_central_elements(CherednikParams(G, T, 0, {"s0": "1/3"}), 2)
    >>> sorted((w, len(v)) for w, v in Z.by_weight.items())
    [(-2, 1), (0, 2), (2, 1)]
    """
    cap_ = 2 * _cap_for(params.rank, cap)
    if d > cap_:
        raise CapExceeded(f"central-element degree {d} exceeds the cap {cap_}")
    H = PBWAlgebra(params)
    G = params.group
    gens = [H.gen("y", i) for i in range(H.n)] + [H.gen("x", i) for i in range(H.n)] + \
           [H.gen("w", g) for g in G.generators]
    out = CentralElements(params, d)
    wrange = list(weights) if weights is not None else list(range(-d, d + 1))
    for wt in wrange:
        basis = _pbw_basis(H, wt, d)
        if not basis:
            continue
        rows_keys: dict = {}
        cols = []
        for m in basis:
            col: dict = {}
            for gi, g in enumerate(gens):
                for k, v in H.commutator({m: CycScalar(1)}, g).items():
                    col[(gi, k)] = v
            cols.append(col)
        for col in cols:
            for k in col:
                if k not in rows_keys:
                    rows_keys[k] = len(rows_keys)
        M = ExactMatrix.from_columns([[col.get(k, CycScalar(0)) for k in rows_keys] for col in cols],
                                     nrows=len(rows_keys)) if rows_keys else ExactMatrix.zeros(0, len(basis))
        vecs = _kernel_vectors(M)
        elems = [{m: c for m, c in zip(basis, v) if not c.is_zero()} for v in vecs]
        if elems:
            out.by_weight[wt] = elems
    return out


def element_operator(M: GradedModule, elem: dict, k: int) -> ExactMatrix:
    """Matrix of an ``H``-element on block ``k`` (into block ``k - weight``)."""
    weights = {sum(a) - sum(b) for (a, w, b) in elem}
    if len(weights) > 1:
        raise ValueError("element is not weight-homogeneous")
    wt = weights.pop() if weights else 0
    tgt = k - wt
    dt, dk = M.dim(tgt), M.dim(k)
    if dt is None or dk is None:
        raise WindowError("operator leaves the materialised window")
    total = ExactMatrix.zeros(dt, dk)
    for (a, w, b), c in elem.items():
        op = ExactMatrix.identity(dk)
        cur = k
        ok = True
        for i in range(M.rank):
            for _ in range(b[i]):
                step = M.x_op(i, cur)
                if step is None:
                    raise WindowError("operator leaves the materialised window")
                op = step @ op if step.nrows and op.ncols else ExactMatrix.zeros(step.nrows, dk)
                cur += 1
        if M.dim(cur) == 0:
            ok = False
        if ok:
            op = M.w_op(w, cur) @ op if M.dims.get(cur) else op
            for i in range(M.rank):
                for _ in range(a[i]):
                    step = M.y_op(i, cur)
                    if step is None:
                        raise WindowError("operator leaves the materialised window")
                    op = step @ op if step.nrows and op.ncols else ExactMatrix.zeros(step.nrows, dk)
                    cur -= 1
            if op.nrows and op.ncols:
                total = total + op.scale(c)
    return total


def scalar_on_module(M: GradedModule, elem: dict) -> CycScalar | None:
    """The scalar by which a weight-zero element acts on ``M``, or ``None``."""
    val = None
    for k in M.degrees:
        if not M.dims[k] or not M.exact.get(k, True):
            continue
        try:
            op = element_operator(M, elem, k)
        except WindowError:
            continue
        lam = op[0, 0]
        if op != ExactMatrix.identity(M.dims[k]).scale(lam):
            return None
        if val is None:
            val = lam
        elif val != lam:
            return None
    return val if val is not None else CycScalar(0)


def zeta_d(engine: VoganEngine, z: dict, which: str = "d") -> list[CycScalar]:
    """Coefficients of the ``Δ(ℂ[W̃]^{W̃})``-component of ``z ⊗ 1`` on the class sums."""
    T = engine.T
    deg = max((sum(a) + sum(b) for (a, w, b) in z), default=0)
    target = T.tensor(z)
    if any(TensorAlgebra.weight(k) != 0 for k in target):
        raise ValueError("ζ is defined on weight-zero elements")
    if T.delta(target, which):
        raise ValueError("element is not in the kernel of δ")
    res = engine.decompose(target, deg, which)
    if res is None:
        raise ArithmeticError("decomposition into im δ ⊕ Δ(ℂ[W̃]^{W̃}) failed")
    return res[1]


def zeta_value(engine: VoganEngine, gamma: Sequence[CycScalar], sigma: str) -> CycScalar:
    """Scalar of ``Σ γ_e Δ(class sum_e)`` on the genuine irreducible ``σ ⊗ χ``."""
    T = engine.T
    G = T.G
    table = engine.params.table
    ch = T.cover.genuine_character(sigma, table)
    dim = table.dim(sigma)
    total = CycScalar(0)
    for g, (e, _) in zip(gamma, T.class_sums):
        total = total + g * G.order * ch[e] / dim
    return total


def casselman_osborne_check(M: GradedModule, central: CentralElements, engine: VoganEngine | None = None,
                            which: str = "d") -> dict:
    """For each constituent ``σ`` of ``H^•(h*, M)`` (or ``H_•(h, M)`` when ``which="partial"``)
    and each ``z`` in ``B``: the scalar of ``z`` on ``M`` equals ``(σ ⊗ χ)(ζ(z))``."""
    E = engine or VoganEngine(M.params)
    coh = hstar_cohomology(M) if which == "d" else h_homology(M)
    constituents = sorted(lab for lab, m in coh.total().items() if m)
    rows = []
    ok = True
    for idx, z in enumerate(central.B):
        beta = scalar_on_module(M, z)
        if beta is None:
            raise ValueError("central element is not scalar on the module")
        gamma = zeta_d(E, z, which)
        for lab in constituents:
            val = zeta_value(E, gamma, lab)
            rows.append({"z": idx, "sigma": lab, "beta": format_scalar(beta), "zeta": format_scalar(val),
                         "equal": val == beta})
            ok &= val == beta
    return {"holds": ok, "constituents": constituents, "rows": rows}


def invariant_products(params: CherednikParams, degree: int, weight: int | None = None,
                       require: str | None = None) -> list[dict]:
    """Elements ``f(y) g(x)`` with ``f, g`` invariant and ``0 < deg f + deg g ≤ degree``.

    These span ``m_+ Z(H)`` in bounded degree at ``t = 0``. ``require="x"``
    keeps products whose x-factor has positive degree (``"y"`` likewise).

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> H = PBWAlgebra(CherednikParams(G, T, 0, {"s0": "1"}))
    >>> [H.to_str(e) for e in invariant_products(H.params, 4, weight=0)]
    ['1*y1^2*w0*x1^2']
    """
    G = params.group
    n = G.rank
    e = G.identity
    out = []
    for dy in range(degree + 1):
        fs = invariant_polynomials(G, dy, dual=False)
        for dx in range(degree + 1 - dy):
            if dy + dx == 0 or (weight is not None and dy - dx != weight):
                continue
            if (require == "x" and dx == 0) or (require == "y" and dy == 0):
                continue
            gs = invariant_polynomials(G, dx, dual=True)
            for f in fs:
                for g in gs:
                    el: dict = {}
                    for a, fa in zip(monomials(n, dy), f):
                        for b, gb in zip(monomials(n, dx), g):
                            _addto(el, (a, e, b), fa * gb)
                    out.append(el)
    return out


def ideal_in_image_check(engine: VoganEngine, elems: Sequence[dict] | None = None, degree: int = 2,
                         which: str = "d") -> dict:
    """Each ``z`` in ``m_+ Z(H)`` with a positive x-factor gives ``z ⊗ 1 ∈ im δ_d``.

    Without explicit ``elems`` the invariant products of degree ``≤ degree``
    with a positive x-factor (y-factor for ``δ_∂``) are used; this contains
    every weight-zero element of ``m_+ Z(H)``. Preimages are searched among all elements of the same weight
    and degree one less (no invariance imposed), so elements of nonzero
    weight such as ``x^2`` are covered too.
    """
    T = engine.T
    if elems is None:
        elems = invariant_products(engine.params, degree, require="x" if which == "d" else "y")
    out = []
    ok = True
    for z in elems:
        deg = max((sum(a) + sum(b) for (a, w, b) in z), default=0)
        if deg == 0:
            raise ValueError("degree-zero elements are excluded")
        if deg - 1 > engine.cap:
            raise CapExceeded(f"preimage search needs degree {deg - 1} above the cap {engine.cap}")
        target = T.tensor(z)
        wts = {TensorAlgebra.weight(k) for k in target}
        if len(wts) != 1:
            raise ValueError("element is not weight-homogeneous")
        wt = wts.pop()
        big = T.basis(wt, deg)
        index = {k: i for i, k in enumerate(big)}
        src = T.basis(wt, deg - 1)
        cols = [T.coords(T.delta({k: CycScalar(1)}, which), index) for k in src]
        sol = ExactMatrix.from_columns(cols, nrows=len(big)).solve(T.coords(target, index)) if cols else None
        if sol is None:
            ok = False
            out.append({"element": T.to_json(target), "preimage": None})
            continue
        b = {k: v for k, v in zip(src, sol) if not v.is_zero()}
        ok &= T.delta(b, which) == target
        out.append({"element": T.to_json(target), "preimage": T.to_json(b)})
    return {"holds": ok, "witnesses": out}


def pbw_normalize(params: CherednikParams, word: Sequence[tuple[str, int]]) -> dict:
    """Normal form of a generator word.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> P = CherednikParams(G, T, 1, {"s0": "1/5"})
    >>> PBWAlgebra(P).to_str(pbw_normalize(P, [("x", 0), ("y", 0)]))
    '-1*w0 + 1/5*w1 + 1*y1^1*w0*x1^1'
    """
    return PBWAlgebra(params).normalize(word)


def build_A_filtered(params: CherednikParams, n: int, cap: int | None = None, convention: int = 1) -> list[dict]:
    """Basis of ``A^{W̃,n}``.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> len(build_A_filtered(CherednikParams(G, T, 1, {"s0": "1/5"}), 0))
    4
    """
    return VoganEngine(params, convention, cap).piece(n).invariants


def zeta_values(engine: VoganEngine, z: dict, which: str = "d") -> dict[str, CycScalar]:
    """``(σ ⊗ χ)(ζ(z))`` for every ``σ``; these determine ``ζ(z)`` in the centre."""
    gamma = zeta_d(engine, z, which)
    return {lab: zeta_value(engine, gamma, lab) for lab in engine.params.table.labels}


def zeta_multiplicative_check(engine: VoganEngine, central: CentralElements, which: str = "d") -> dict:
    """``ζ(z1 z2) = ζ(z1) ζ(z2)`` on all pairs whose product stays within the cap."""
    H = engine.T.H
    vals = [zeta_values(engine, z, which) for z in central.B]
    rows = []
    ok = True
    for i, z1 in enumerate(central.B):
        for j in range(i, len(central.B)):
            z2 = central.B[j]
            prod = H.mul(z1, z2)
            deg = max((sum(a) + sum(b) for (a, w, b) in prod), default=0)
            if deg - 1 > engine.cap:
                continue
            pv = zeta_values(engine, prod, which)
            eq = all(pv[l] == vals[i][l] * vals[j][l] for l in pv)
            ok &= eq
            rows.append({"pair": [i, j], "equal": eq})
    return {"holds": ok, "pairs": rows}
