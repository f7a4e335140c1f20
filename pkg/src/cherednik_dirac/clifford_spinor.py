"""
Clifford algebra of ``V = h ⊕ h*`` acting on the spinor space ``S = Λ•h``,
the pin lifts ``μ_s`` of reflections and the genuine character ``χ``.

The pin cover is never built as an abstract group.  A lift is carried as
a pair (group element, operator on ``S``); for every group element one
representative lift is fixed by a shortest word in the reflections.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import combinations
from typing import Sequence

from .exact_scalars import CycScalar, ExactMatrix, as_scalar, sqrt_root_of_unity
from .reflection_groups import IrrepTable, Reflection, ReflectionGroup, exterior_power

__all__ = [
    "SpinorSpace",
    "PinElement",
    "PinCover",
    "clifford_action",
    "mu_s",
    "pin_lift",
    "chi_value",
    "genuine_character",
    "decompose_genuine",
    "spinor_decomposition_check",
]


class SpinorSpace:
    """``Λ•h`` with the Clifford generators acting.

    Basis: subsets ``I`` of ``{0..n-1}`` ordered by size, then
    lexicographically.  ``y_i`` acts by left wedge and ``x_i`` by
    ``2 Σ_j (-1)^j <x_i, y_{i_j}>`` times removal of the ``j``-th factor,
    where ``j`` counts from 1.  The counting origin is confirmed by checking
    ``x_i y_j + y_j x_i = -2 δ_ij`` when the space is built.

    >>> S = SpinorSpace(1)
    >>> S.x_ops[0].column(1)  # x_1 applied to y_1
    [CycScalar(-2), CycScalar(0)]
    """

    def __init__(self, n: int, origin: int | None = None):
        self.n = n
        self.subsets = [I for p in range(n + 1) for I in combinations(range(n), p)]
        self.pos = {I: k for k, I in enumerate(self.subsets)}
        self.dim = len(self.subsets)
        self.degree = [len(I) for I in self.subsets]
        self.block_slices = []
        start = 0
        for p in range(n + 1):
            size = sum(1 for I in self.subsets if len(I) == p)
            self.block_slices.append(range(start, start + size))
            start += size
        self.y_ops = [self._wedge(i) for i in range(n)]
        origins = [origin] if origin is not None else [1, 0]
        for o in origins:
            self.origin = o
            self.x_ops = [self._contract(i, o) for i in range(n)]
            if self.relations_hold():
                break
        else:
            if origin is None:
                raise RuntimeError("no sign convention satisfies the Clifford relations")

    def _wedge(self, i: int) -> ExactMatrix:
        rows = [[0] * self.dim for _ in range(self.dim)]
        for I in self.subsets:
            if i in I:
                continue
            sign = (-1) ** sum(1 for a in I if a < i)
            J = tuple(sorted(I + (i,)))
            rows[self.pos[J]][self.pos[I]] = sign
        return ExactMatrix(rows)

    def _contract(self, i: int, origin: int) -> ExactMatrix:
        rows = [[0] * self.dim for _ in range(self.dim)]
        for I in self.subsets:
            if i not in I:
                continue
            j = I.index(i) + origin
            J = tuple(a for a in I if a != i)
            rows[self.pos[J]][self.pos[I]] = 2 * (-1) ** j
        return ExactMatrix(rows)

    def relations_hold(self) -> bool:
        n = self.n
        zero = ExactMatrix.zeros(self.dim, self.dim)
        I = ExactMatrix.identity(self.dim)
        for i in range(n):
            for j in range(n):
                if self.x_ops[i] @ self.x_ops[j] + self.x_ops[j] @ self.x_ops[i] != zero:
                    return False
                if self.y_ops[i] @ self.y_ops[j] + self.y_ops[j] @ self.y_ops[i] != zero:
                    return False
                target = I.scale(-2) if i == j else zero
                if self.x_ops[i] @ self.y_ops[j] + self.y_ops[j] @ self.x_ops[i] != target:
                    return False
        return True

    def y_of(self, v: Sequence) -> ExactMatrix:
        """Operator of ``Σ v_i y_i`` (a vector of ``h``)."""
        out = ExactMatrix.zeros(self.dim, self.dim)
        for c, op in zip(v, self.y_ops):
            c = as_scalar(c)
            if not c.is_zero():
                out = out + op.scale(c)
        return out

    def x_of(self, v: Sequence) -> ExactMatrix:
        """Operator of ``Σ v_i x_i`` (a vector of ``h*``)."""
        out = ExactMatrix.zeros(self.dim, self.dim)
        for c, op in zip(v, self.x_ops):
            c = as_scalar(c)
            if not c.is_zero():
                out = out + op.scale(c)
        return out

    def wedge_action(self, g: ExactMatrix) -> ExactMatrix:
        """``Λ•g`` as a block-diagonal operator."""
        blocks = [exterior_power(g, p) for p in range(self.n + 1)]
        dims = [b.nrows for b in blocks]
        grid = [[blocks[i] if i == j else None for j in range(len(blocks))] for i in range(len(blocks))]
        return ExactMatrix.block(grid, dims, dims)

    def hermitian_form(self, weighted: bool = True) -> ExactMatrix:
        """Gram matrix of the spinor form: ``(y_I, y_J) = 2^{|I|} δ_IJ`` or plain ``δ_IJ``.

        The weighted form makes ``x_i`` adjoint to ``-y_i`` for the
        contraction normalised with the factor 2.
        """
        rows = [[0] * self.dim for _ in range(self.dim)]
        for k, I in enumerate(self.subsets):
            rows[k][k] = 2 ** len(I) if weighted else 1
        return ExactMatrix(rows)


@lru_cache(maxsize=None)
def spinor_space(n: int) -> SpinorSpace:
    return SpinorSpace(n)


def clifford_action(v: Sequence, side: str, n: int | None = None) -> ExactMatrix:
    """Operator of ``v`` on ``S``; ``side`` is ``"h"`` (wedge) or ``"h*"`` (contraction)."""
    S = spinor_space(n if n is not None else len(v))
    if side == "h":
        return S.y_of(v)
    if side in ("h*", "hstar"):
        return S.x_of(v)
    raise ValueError("side must be 'h' or 'h*'")


@dataclass(eq=False)
class PinElement:
    """A lift: underlying group element plus its operator on ``S``."""

    element: int
    op: ExactMatrix
    sign: int = 1

    def __mul__(self, other: "PinElement") -> "PinElement":
        return PinElement(self._group_mul(other), self.op @ other.op, self.sign * other.sign)

    def __neg__(self) -> "PinElement":
        return PinElement(self.element, -self.op, -self.sign)

    def _group_mul(self, other):
        G = getattr(self, "group", None) or getattr(other, "group", None)
        if G is None:
            raise ValueError("pin elements need their group to multiply")
        return G.mul(self.element, other.element)

    def same_lift(self, other: "PinElement") -> bool:
        return self.element == other.element and self.op == other.op

    def differs_by_sign(self, other: "PinElement") -> bool:
        return self.element == other.element and self.op == -other.op


def _attach(p: PinElement, G: ReflectionGroup) -> PinElement:
    p.group = G
    return p


def mu_s(refl: Reflection, G: ReflectionGroup, convention: int = 1) -> PinElement:
    """The lift ``μ_s = (√λ - 1/√λ)/(2<α∨,α>) α α∨ + √λ`` acting on ``S``.

    ``convention = -1`` returns ``-μ_s`` (the other square-root choice).
    """
    lam = refl.lam
    if lam == 1:
        raise ValueError("not a reflection")
    S = spinor_space(G.rank)
    r = sqrt_root_of_unity(lam) * convention
    coef = (r - r.inverse()) / (2 * refl.pairing)
    prod = S.x_of(refl.alpha) @ S.y_of(refl.alpha_check)
    op = prod.scale(coef) + ExactMatrix.identity(S.dim).scale(r)
    return _attach(PinElement(refl.index, op, 1), G)


class PinCover:
    """Representative lifts for every element of ``G`` and the character χ.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> P = PinCover(G)
    >>> str(P.chi[1])
    '-z4'
    """

    def __init__(self, G: ReflectionGroup, convention: int = 1):
        self.G = G
        self.convention = convention
        self.S = spinor_space(G.rank)
        self.mus = {r.index: mu_s(r, G, convention) for r in G.reflections}
        self.refl_by_index = {r.index: r for r in G.reflections}
        self.words = self._reflection_words()
        self.reps = [self.lift(w) for w in self.words]
        self.chi = [chi_value(p, self.S) for p in self.reps]

    def _reflection_words(self) -> list[tuple[int, ...]]:
        G = self.G
        refl = sorted(self.mus)
        words: list = [None] * G.order
        words[G.identity] = ()
        frontier = [G.identity]
        while frontier:
            nxt = []
            for e in frontier:
                for s in refl:
                    f = G.mul(e, s)
                    if words[f] is None:
                        words[f] = words[e] + (s,)
                        nxt.append(f)
            frontier = nxt
        if any(w is None for w in words):
            raise ValueError("reflections do not generate the group")
        return words

    def lift(self, word: Sequence[int]) -> PinElement:
        """Product of the ``μ_s`` along a word of reflection element indices."""
        op = ExactMatrix.identity(self.S.dim)
        e = self.G.identity
        for s in word:
            op = op @ self.mus[s].op
            e = self.G.mul(e, s)
        return _attach(PinElement(e, op, 1), self.G)

    @cached_property
    def spinor_ops(self) -> list[ExactMatrix]:
        return [p.op for p in self.reps]

    def genuine_character(self, sigma: str, table: IrrepTable, inverse_chi: bool = False) -> list[CycScalar]:
        ch = table.character(sigma)
        if inverse_chi:
            return [a * b.inverse() for a, b in zip(ch, self.chi)]
        return [a * b for a, b in zip(ch, self.chi)]

    def genuine_labels(self, table: IrrepTable) -> list[str]:
        return [f"{lab}*chi" for lab in table.labels]

    def decompose(self, traces: Sequence[CycScalar], table: IrrepTable) -> dict[str, int]:
        return decompose_genuine(traces, self, table)

    def twist(self, wmults: dict[str, int], table: IrrepTable, power: int) -> dict[str, int]:
        """Genuine multiplicities of ``(⊕ m_σ σ) ⊗ χ^power`` for power = ±1."""
        traces = [CycScalar(0)] * self.G.order
        for lab, m in wmults.items():
            if m:
                ch = table.character(lab)
                traces = [t + m * a for t, a in zip(traces, ch)]
        chi = self.chi if power == 1 else [c.inverse() for c in self.chi]
        return self.decompose([t * c for t, c in zip(traces, chi)], table)


def pin_lift(word: Sequence[Reflection], G: ReflectionGroup, convention: int = 1) -> PinElement:
    """Product of ``μ_s`` over a word of reflections (empty word: identity)."""
    S = spinor_space(G.rank)
    op = ExactMatrix.identity(S.dim)
    e = G.identity
    for r in word:
        op = op @ mu_s(r, G, convention).op
        e = G.mul(e, r.index)
    return _attach(PinElement(e, op, 1), G)


def chi_value(p: PinElement, S: SpinorSpace | None = None) -> CycScalar:
    """Scalar by which the lift acts on ``Λ⁰h``."""
    k = 0  # the empty subset comes first
    return p.op[k, k]


def genuine_character(sigma: str, cover: PinCover, table: IrrepTable) -> list[CycScalar]:
    """Values of ``σ ⊗ χ`` on the representative lifts."""
    return cover.genuine_character(sigma, table)


def decompose_genuine(traces: Sequence[CycScalar], cover: PinCover, table: IrrepTable) -> dict[str, int]:
    """Multiplicities of a genuine character over ``{σ ⊗ χ}``.

    Both the character and the ``σ ⊗ χ`` flip sign on the other lift, so the
    inner product over the cover reduces to one over representatives.  The
    squared norm is checked against the multiplicities for completeness.
    """
    G = cover.G
    out = {}
    dim = CycScalar(0)
    for lab in table.labels:
        nu = cover.genuine_character(lab, table)
        m = sum((t * v.conjugate() for t, v in zip(traces, nu)), CycScalar(0)) / G.order
        if not m.is_rational() or m.rational().denominator != 1 or m.rational() < 0:
            raise ValueError(f"non-integral genuine multiplicity {m} for {lab}")
        out[f"{lab}*chi"] = int(m.rational())
        dim = dim + out[f"{lab}*chi"] * table.dim(lab)
    norm = sum((t * t.conjugate() for t in traces), CycScalar(0)) / G.order
    if norm != sum(m * m for m in out.values()):
        raise ValueError("genuine characters do not exhaust the space")
    if traces and as_scalar(traces[G.identity]) != dim:
        raise ValueError("genuine multiplicities do not account for the dimension")
    return out


def spinor_decomposition_check(cover: PinCover, chi: Sequence[CycScalar] | None = None) -> bool:
    """Trace of each lift on ``S`` equals ``χ`` times the trace of ``Λ•p(w̃)``."""
    G = cover.G
    chi = cover.chi if chi is None else chi
    for e, p in enumerate(cover.reps):
        wedge = sum((exterior_power(G.elements[e], k).trace() for k in range(G.rank + 1)), CycScalar(0))
        if p.op.trace() != chi[e] * wedge:
            return False
    return True
