"""
Modules over the rational Cherednik algebra realised as graded block systems.

A :class:`GradedModule` stores finite-dimensional blocks indexed by an integer
degree, the matrices of every group element on each block and the
degree-shifting operators of the basis vectors ``x_i`` (up one degree) and
``y_i`` (down one degree).  Standard modules, their simple quotients, baby
Verma modules and their heads are all built this way; the defining
commutation relation is checked block by block.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .exact_scalars import (
    CycScalar,
    ExactMatrix,
    Subspace,
    as_scalar,
    certified_sign,
    kernel_basis,
    preimage,
    subspace_intersection,
    subspace_sum,
)
from .reflection_groups import (
    IrrepTable,
    ParamC,
    ReflectionGroup,
    decompose_wmodule,
    monomials,
    symmetric_power,
)

__all__ = [
    "CherednikParams",
    "GradedModule",
    "ContravariantForm",
    "standard_module",
    "euler_lowest",
    "simple_quotient",
    "baby_verma",
    "contravariant_form",
    "is_unitary",
    "rescale_params",
    "direct_sum",
    "WindowError",
]


class WindowError(ValueError):
    """The requested degree window cannot certify the answer."""


@dataclass(eq=False)
class CherednikParams:
    """Group, irreducible table and the parameters ``t`` and ``c``."""

    group: ReflectionGroup
    table: IrrepTable
    t: CycScalar
    c: ParamC

    def __post_init__(self):
        self.t = as_scalar(self.t)
        if not isinstance(self.c, ParamC):
            self.c = ParamC.build(self.group, self.c)
        G = self.group
        for r in G.reflections:
            if r.label not in self.c:
                raise ValueError(f"missing parameter for reflection class {r.label}")
        n = G.rank
        # [y_i, x_j] = t delta_ij - sum_s c(s) coef_s(i, j) s
        self.commutator = [[[] for _ in range(n)] for _ in range(n)]
        for r in G.reflections:
            cs = self.c.of(r)
            if cs.is_zero():
                continue
            for i in range(n):
                for j in range(n):
                    coef = r.coefficient(i, j)
                    if not coef.is_zero():
                        self.commutator[i][j].append((r.index, cs * coef))
        # the grading identity [Ω, x] = 2t x needs the eigenvalue of s on h*
        # here; for real groups it agrees with det_h(s)
        self.omega_terms = []
        for r in G.reflections:
            cs = self.c.of(r)
            if not cs.is_zero():
                self.omega_terms.append((r.index, 2 * cs / (1 - r.lam.inverse())))

    @property
    def rank(self) -> int:
        return self.group.rank

    def describe(self) -> dict:
        return {"group": self.group.name, "t": str(self.t), "c": self.c.to_json()}


def rescale_params(params: CherednikParams, lam) -> CherednikParams:
    """Parameters ``(λ²t, λ²c)`` of the isomorphic algebra."""
    lam = as_scalar(lam)
    if lam.is_zero():
        raise ValueError("rescaling factor must be nonzero")
    sq = lam * lam
    return CherednikParams(params.group, params.table, params.t * sq, params.c.scaled(sq))


@dataclass(eq=False)
class GradedModule:
    """Blocks ``lo..hi`` with W-, x- and y-actions.

    ``x_ops[i][k]`` maps block ``k`` to ``k+1`` and ``y_ops[i][k]`` maps
    block ``k`` to ``k-1``.  When ``finite`` is true the module vanishes
    outside the window; otherwise blocks above ``hi`` exist but were not
    materialised, so ``x_ops[i][hi]`` is absent.
    """

    params: CherednikParams
    dims: dict[int, int]
    w_action: dict[int, list[ExactMatrix]]
    x_ops: list[dict[int, ExactMatrix]]
    y_ops: list[dict[int, ExactMatrix]]
    finite: bool = False
    omega: dict[int, CycScalar] | None = None
    kind: str = "module"
    sigma: str | None = None
    exact: dict[int, bool] = field(default_factory=dict)
    parent: "GradedModule | None" = None
    quotient_maps: dict[int, tuple[ExactMatrix, list[int]]] | None = None

    @property
    def lo(self) -> int:
        return min(self.dims)

    @property
    def hi(self) -> int:
        return max(self.dims)

    @property
    def degrees(self) -> list[int]:
        return sorted(self.dims)

    @property
    def rank(self) -> int:
        return self.params.rank

    @property
    def group(self) -> ReflectionGroup:
        return self.params.group

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim(self, k: int) -> int | None:
        """Dimension of block ``k``; ``None`` when unknown (outside an infinite window)."""
        if k in self.dims:
            return self.dims[k]
        if k < self.lo or self.finite:
            return 0
        return None

    def x_op(self, i: int, k: int) -> ExactMatrix | None:
        src, tgt = self.dim(k), self.dim(k + 1)
        if src is None or tgt is None:
            return None
        if k in self.x_ops[i]:
            return self.x_ops[i][k]
        return ExactMatrix.zeros(tgt, src)

    def y_op(self, i: int, k: int) -> ExactMatrix | None:
        src, tgt = self.dim(k), self.dim(k - 1)
        if src is None or tgt is None:
            return None
        if k in self.y_ops[i]:
            return self.y_ops[i][k]
        return ExactMatrix.zeros(tgt, src)

    def w_op(self, e: int, k: int) -> ExactMatrix:
        if k in self.w_action:
            return self.w_action[k][e]
        return ExactMatrix.zeros(0, 0)

    def omega_block(self, k: int) -> ExactMatrix | None:
        """Matrix of ``Ω = 2Σ x_i y_i + n t - Σ 2c(s)/(1-λ_s) s`` on block ``k``."""
        d = self.dim(k)
        if d is None:
            return None
        p = self.params
        out = ExactMatrix.identity(d).scale(p.rank * p.t)
        for i in range(self.rank):
            y = self.y_op(i, k)
            x = self.x_op(i, k - 1)
            if x is None or y is None:
                return None
            if y.nrows and x.ncols:
                out = out + (x @ y).scale(2)
        for s, coef in p.omega_terms:
            out = out - self.w_op(s, k).scale(coef)
        return out

    def compute_omega(self) -> dict[int, CycScalar] | None:
        """Scalars of Ω per block, or ``None`` if some block is not scalar."""
        vals = {}
        for k in self.degrees:
            O = self.omega_block(k)
            d = self.dims[k]
            if O is None or d == 0:
                continue
            lam = O[0, 0]
            if O != ExactMatrix.identity(d).scale(lam):
                return None
            vals[k] = lam
        return vals

    def decompose_block(self, k: int) -> dict[str, int]:
        return decompose_wmodule(self.w_action[k], self.params.table)

    def graded_character(self) -> dict[int, dict[str, int]]:
        return {k: self.decompose_block(k) for k in self.degrees if self.dims[k]}

    # -- invariants ---------------------------------------------------------

    def check_relations(self) -> bool:
        """Defining relation, PBW commutativity and equivariance on every block."""
        p = self.params
        G = p.group
        n = self.rank
        for k in self.degrees:
            d = self.dims[k]
            if d == 0:
                continue
            for i in range(n):
                for j in range(n):
                    yk1 = self.y_op(i, k + 1)
                    xk = self.x_op(j, k)
                    yk = self.y_op(i, k)
                    xk1 = self.x_op(j, k - 1)
                    if yk1 is None or xk is None or yk is None or xk1 is None:
                        continue
                    lhs = yk1 @ xk - xk1 @ yk
                    rhs = ExactMatrix.identity(d).scale(p.t) if i == j else ExactMatrix.zeros(d, d)
                    for s, coef in p.commutator[i][j]:
                        rhs = rhs - self.w_op(s, k).scale(coef)
                    if lhs != rhs:
                        return False
                    # commutativity of the x's and of the y's
                    xa, xb = self.x_op(i, k), self.x_op(j, k)
                    if xa is not None and self.x_op(j, k + 1) is not None and self.x_op(i, k + 1) is not None:
                        if self.x_op(j, k + 1) @ xa != self.x_op(i, k + 1) @ xb:
                            return False
                    ya, yb = self.y_op(i, k), self.y_op(j, k)
                    if ya is not None and self.y_op(j, k - 1) is not None and self.y_op(i, k - 1) is not None:
                        if self.y_op(j, k - 1) @ ya != self.y_op(i, k - 1) @ yb:
                            return False
            # equivariance w x_j w^-1 = w(x_j), w y_j w^-1 = w(y_j)
            for e in G.generators:
                g, gd = G.elements[e], G.dual[e]
                W = self.w_op(e, k)
                for j in range(n):
                    x = self.x_op(j, k)
                    if x is not None and self.dim(k + 1):
                        lhs = self.w_op(e, k + 1) @ x
                        rhs = ExactMatrix.zeros(self.dims[k + 1], d)
                        for l in range(n):
                            if not gd[l, j].is_zero():
                                rhs = rhs + self.x_op(l, k).scale(gd[l, j])
                        if lhs != rhs @ W:
                            return False
                    y = self.y_op(j, k)
                    if y is not None and self.dim(k - 1):
                        lhs = self.w_op(e, k - 1) @ y
                        rhs = ExactMatrix.zeros(self.dims[k - 1], d)
                        for l in range(n):
                            if not g[l, j].is_zero():
                                rhs = rhs + self.y_op(l, k).scale(g[l, j])
                        if lhs != rhs @ W:
                            return False
        return True

    def apply_word(self, word: Sequence[tuple[str, int]], vec: Sequence, k: int) -> tuple[list[CycScalar], int]:
        """Apply letters right to left: ``("x", i)``, ``("y", i)`` or ``("w", e)``."""
        v = ExactMatrix.from_columns([list(vec)], nrows=self.dim(k))
        for kind, i in reversed(list(word)):
            if kind == "x":
                op, k2 = self.x_op(i, k), k + 1
            elif kind == "y":
                op, k2 = self.y_op(i, k), k - 1
            elif kind == "w":
                op, k2 = self.w_op(i, k), k
            else:
                raise ValueError(kind)
            if op is None:
                raise WindowError(f"operator leaves the materialised window at degree {k}")
            v = op @ v if op.ncols else ExactMatrix.zeros(op.nrows, 1)
            k = k2
        return v.column(0), k


def _sigma_mats(params: CherednikParams, sigma: str) -> list[ExactMatrix]:
    T = params.table
    return T.matrices[T.index(sigma)]


def euler_lowest(sigma: str, params: CherednikParams) -> CycScalar:
    """Scalar of Ω on the lowest block ``1 ⊗ σ``.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> p = CherednikParams(G, T, 1, {"s0": "1/5"})
    >>> str(euler_lowest("triv", p)), str(euler_lowest("sign", p))
    ('4/5', '6/5')
    """
    mats = _sigma_mats(params, sigma)
    d = mats[0].nrows
    O = ExactMatrix.identity(d).scale(params.rank * params.t)
    for s, coef in params.omega_terms:
        O = O - mats[s].scale(coef)
    lam = O[0, 0]
    if O != ExactMatrix.identity(d).scale(lam):
        raise ValueError("Ω is not scalar on the lowest block")
    return lam


def standard_module(sigma: str, params: CherednikParams, degree_window: int | tuple[int, int] = 4) -> GradedModule:
    """``M(σ)`` on degrees ``0..K``: block ``k`` is ``S^k(h*) ⊗ σ``.

    ``x_i`` multiplies monomials; ``y_i`` is computed by moving it past the
    first ``x`` factor of each monomial with the commutation relation and
    killing the lowest block.
    """
    if isinstance(degree_window, tuple):
        lo, K = degree_window
        if lo != 0:
            raise WindowError("the window of a standard module must start at 0")
    else:
        K = degree_window
    if K < 0:
        raise WindowError("window must contain degree 0")
    G = params.group
    n = G.rank
    smats = _sigma_mats(params, sigma)
    ds = smats[0].nrows
    bases = {k: monomials(n, k) for k in range(K + 2)}
    pos = {k: {m: i for i, m in enumerate(bases[k])} for k in bases}
    dims = {k: len(bases[k]) * ds for k in range(K + 1)}
    w_action = {k: [symmetric_power(G.dual[e], k).kron(smats[e]) for e in range(G.order)] for k in range(K + 1)}
    x_ops: list[dict[int, ExactMatrix]] = [dict() for _ in range(n)]
    for i in range(n):
        for k in range(K):
            rows = [[0] * dims[k] for _ in range(dims[k + 1])]
            for mi, m in enumerate(bases[k]):
                m2 = list(m)
                m2[i] += 1
                tgt = pos[k + 1][tuple(m2)]
                for v in range(ds):
                    rows[tgt * ds + v][mi * ds + v] = 1
            x_ops[i][k] = ExactMatrix(rows)
    y_ops: list[dict[int, ExactMatrix]] = [dict() for _ in range(n)]
    for k in range(1, K + 1):
        for i in range(n):
            cols = []
            for mi, m in enumerate(bases[k]):
                j = next(a for a in range(n) if m[a] > 0)
                m1 = list(m)
                m1[j] -= 1
                prev = pos[k - 1][tuple(m1)]
                for v in range(ds):
                    src = prev * ds + v
                    col = [CycScalar(0)] * dims[k - 1]
                    if k >= 2:
                        # x_j (y_i m')
                        ym = y_ops[i][k - 1].column(src)
                        col = x_ops[j][k - 2].apply(ym)
                    if i == j:
                        col[src] = col[src] + params.t
                    for s, coef in params.commutator[i][j]:
                        wcol = w_action[k - 1][s].column(src)
                        col = [a - coef * b for a, b in zip(col, wcol)]
                    cols.append(col)
            y_ops[i][k] = ExactMatrix.from_columns(cols, nrows=dims[k - 1])
    M = GradedModule(params=params, dims=dims, w_action=w_action, x_ops=x_ops, y_ops=y_ops,
                     finite=False, kind="standard", sigma=sigma, exact={k: True for k in dims})
    a0 = euler_lowest(sigma, params)
    M.omega = {k: a0 + 2 * params.t * k for k in dims}
    return M


def _quotient(M: GradedModule, J: dict[int, Subspace], kind: str, finite: bool | None = None) -> GradedModule:
    """Quotient of ``M`` by the graded subspace ``J`` (assumed a submodule).

    Quotient coordinates are the non-pivot standard coordinates of each
    block; ``Π_k`` reduces a vector modulo ``J_k`` and keeps them.
    """
    proj: dict[int, ExactMatrix] = {}
    lift: dict[int, ExactMatrix] = {}
    keep: dict[int, list[int]] = {}
    for k in M.degrees:
        d = M.dims[k]
        Jk = J.get(k) or Subspace.zero(d)
        piv = set(Jk.pivots)
        nonpiv = [q for q in range(d) if q not in piv]
        keep[k] = nonpiv
        F = Jk.F
        rows = []
        for q in nonpiv:
            row = [F.zero] * d
            row[q] = F.one
            for r, p in zip(Jk.rows, Jk.pivots):
                if not F.is_zero(r[q]):
                    row[p] = F.sub(row[p], r[q])
            rows.append(row)
        proj[k] = ExactMatrix(_raw=rows, ncols=d, F=F) if rows else ExactMatrix.zeros(0, d)
        lift[k] = ExactMatrix([[1 if i == q else 0 for q in nonpiv] for i in range(d)]) if nonpiv else ExactMatrix.zeros(d, 0)
    if finite is None:
        finite = M.finite
    dims = {k: len(keep[k]) for k in M.degrees}
    # a vanishing block makes everything above vanish (x's generate)
    top = M.hi
    for k in M.degrees:
        if k > M.lo and dims[k] == 0:
            top = k - 1
            finite = True
            break
    degs = [k for k in M.degrees if k <= top]
    dims = {k: dims[k] for k in degs}
    w_action = {k: [proj[k] @ M.w_action[k][e] @ lift[k] for e in range(M.group.order)] for k in degs}
    n = M.rank
    x_ops = [dict() for _ in range(n)]
    y_ops = [dict() for _ in range(n)]
    for i in range(n):
        for k in degs:
            if k + 1 in dims and k in M.x_ops[i]:
                x_ops[i][k] = proj[k + 1] @ M.x_ops[i][k] @ lift[k]
            if k - 1 in dims and k in M.y_ops[i]:
                y_ops[i][k] = proj[k - 1] @ M.y_ops[i][k] @ lift[k]
    Q = GradedModule(params=M.params, dims=dims, w_action=w_action, x_ops=x_ops, y_ops=y_ops,
                     finite=finite, kind=kind, sigma=M.sigma, exact={k: M.exact.get(k, True) for k in degs},
                     parent=M, quotient_maps={k: (proj[k], keep[k]) for k in degs})
    if M.omega is not None:
        Q.omega = {k: M.omega[k] for k in degs if k in M.omega}
    return Q


def _is_generated(M: GradedModule) -> bool:
    for k in M.degrees:
        if k + 1 not in M.dims or M.dims[k + 1] == 0:
            continue
        span = Subspace.zero(M.dims[k + 1])
        for i in range(M.rank):
            span = subspace_sum(span, M.x_ops[i][k].image())
        if span.dim != M.dims[k + 1]:
            return False
    return True


def maximal_graded_submodule(M: GradedModule) -> dict[int, Subspace]:
    """Largest graded subspace in positive degrees stable under x, y and W.

    Fixed-point iteration: start from everything in positive degrees and
    repeatedly intersect with preimages of the current candidate under every
    generator.  Operators leaving the materialised window impose nothing.
    """
    J = {k: (Subspace.zero(M.dims[k]) if k == M.lo else Subspace.full(M.dims[k])) for k in M.degrees}
    changed = True
    while changed:
        changed = False
        for k in M.degrees:
            if k == M.lo or J[k].dim == 0:
                continue
            cand = J[k]
            for i in range(M.rank):
                y = M.y_ops[i].get(k)
                if y is not None and k - 1 in J:
                    cand = subspace_intersection(cand, preimage(y, J[k - 1]))
                x = M.x_ops[i].get(k)
                if x is not None and k + 1 in J:
                    cand = subspace_intersection(cand, preimage(x, J[k + 1]))
            for e in M.group.generators:
                cand = subspace_intersection(cand, preimage(M.w_action[k][e], J[k]))
            if cand.dim != J[k].dim:
                J[k] = cand
                changed = True
    return J


def simple_quotient(M: GradedModule) -> GradedModule:
    """Quotient by the maximal graded submodule (the head of ``M``).

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> L = simple_quotient(standard_module("triv", CherednikParams(G, T, 1, {"s0": 3}), 5))
    >>> L.finite, L.dims
    (True, {0: 1, 1: 1, 2: 1})
    """
    low = M.dims[M.lo]
    mult = M.decompose_block(M.lo)
    if sorted(v for v in mult.values() if v) != [1]:
        raise ValueError("lowest block must be W-irreducible")
    if not _is_generated(M):
        raise ValueError("lowest block does not generate the module")
    J = maximal_graded_submodule(M)
    kind = "simple" if M.kind != "baby-verma" else "baby-head"
    L = _quotient(M, J, kind)
    if not L.finite:
        # degrees near the top may still shrink once more degrees are known
        L.exact = {k: (k < M.hi) for k in L.degrees}
    del low
    return L


def invariant_polynomials(G: ReflectionGroup, k: int, dual: bool = True) -> list[list[CycScalar]]:
    """Basis of W-invariants in ``S^k(h*)`` (or ``S^k(h)``), monomial coordinates."""
    mats = G.dual if dual else G.elements
    n = len(monomials(G.rank, k))
    stack = []
    for e in G.generators:
        A = symmetric_power(mats[e], k) - ExactMatrix.identity(n)
        stack.extend(A.to_lists())
    return kernel_basis(ExactMatrix(stack, ncols=n))


def baby_verma(sigma: str, params: CherednikParams) -> GradedModule:
    """``M̄(σ)`` at ``t = 0``: the standard module modulo positive-degree invariants in ``x``.

    The result is finite-dimensional of dimension ``|W| dim σ``; the
    invariants in ``y`` act by zero as well (both checked).
    """
    if not params.t.is_zero():
        raise ValueError("baby Verma modules need t = 0")
    G = params.group
    top = len(G.reflections)  # top degree of the coinvariant algebra
    K = top + 1
    M = standard_module(sigma, params, K)
    ds = _sigma_mats(params, sigma)[0].nrows
    J: dict[int, Subspace] = {0: Subspace.zero(M.dims[0])}
    for k in range(1, K + 1):
        span = Subspace.zero(M.dims[k])
        for i in range(G.rank):
            span = subspace_sum(span, J[k - 1].image_under(M.x_ops[i][k - 1]))
        vecs = []
        for f in invariant_polynomials(G, k):
            for v in range(ds):
                vec = [CycScalar(0)] * M.dims[k]
                for mi, c in enumerate(f):
                    if not c.is_zero():
                        vec[mi * ds + v] = c
                vecs.append(vec)
        if vecs:
            span = subspace_sum(span, Subspace.span(vecs, M.dims[k]))
        J[k] = span
    Q = _quotient(M, J, "baby-verma", finite=True)
    if Q.total_dim() != G.order * ds:
        raise AssertionError(f"baby Verma dimension {Q.total_dim()} != |W| dim σ = {G.order * ds}")
    if not Q.check_relations():
        raise AssertionError("quotient by invariants is not a submodule")
    for k in range(1, top + 1):
        for f in invariant_polynomials(G, k, dual=False):
            if not _poly_acts_by_zero(Q, f, k, side="y"):
                raise AssertionError("positive-degree invariants in y do not act by zero")
    Q.exact = {k: True for k in Q.degrees}
    Q.omega = Q.compute_omega()
    return Q


def _poly_acts_by_zero(M: GradedModule, coeffs: Sequence[CycScalar], k: int, side: str) -> bool:
    mons = monomials(M.rank, k)
    for deg in M.degrees:
        tgt = deg - k if side == "y" else deg + k
        if M.dim(tgt) in (None, 0):
            continue
        total = ExactMatrix.zeros(M.dims[tgt], M.dims[deg])
        for c, mono in zip(coeffs, mons):
            if c.is_zero():
                continue
            op = ExactMatrix.identity(M.dims[deg])
            cur = deg
            for i, e in enumerate(mono):
                for _ in range(e):
                    step = M.y_op(i, cur) if side == "y" else M.x_op(i, cur)
                    op = step @ op
                    cur = cur - 1 if side == "y" else cur + 1
            total = total + op.scale(c)
        if not total.is_zero():
            return False
    return True


def direct_sum(M1: GradedModule, M2: GradedModule) -> GradedModule:
    """Direct sum with blocks aligned by the eigenvalue of Ω.

    Both summands need scalar Ω per block and ``t ≠ 0``; the degree offset
    of ``M2`` is chosen so that equal Ω-eigenvalues share a block.
    """
    if M1.params is not M2.params:
        raise ValueError("summands must share parameters")
    t = M1.params.t
    if t.is_zero() or M1.omega is None or M2.omega is None:
        raise ValueError("alignment needs t != 0 and scalar Ω blocks")
    a1, a2 = M1.omega[M1.lo], M2.omega[M2.lo]
    diff = (a2 - a1) / (2 * t)
    if not diff.is_rational() or diff.rational().denominator != 1:
        raise ValueError("Ω-eigenvalues of the summands are not on a common lattice")
    shift = int(diff.rational()) + M1.lo - M2.lo
    finite = M1.finite and M2.finite
    lo = min(M1.lo, M2.lo + shift)
    hi1 = M1.hi if not M1.finite else None
    hi2 = M2.hi + shift if not M2.finite else None
    his = [h for h in (hi1, hi2) if h is not None]
    hi = min(his) if his else max(M1.hi, M2.hi + shift)
    degs = list(range(lo, hi + 1))
    n = M1.rank
    G = M1.group

    def d1(k):
        return M1.dim(k) or 0

    def d2(k):
        return M2.dim(k - shift) or 0

    def diag(A, B, r1, c1, r2, c2):
        return ExactMatrix.block([[A, None], [None, B]], [r1, r2], [c1, c2])

    dims = {k: d1(k) + d2(k) for k in degs}
    w_action = {}
    for k in degs:
        w_action[k] = [diag(M1.w_action[k][e] if d1(k) else None, M2.w_action[k - shift][e] if d2(k) else None,
                            d1(k), d1(k), d2(k), d2(k)) for e in range(G.order)]
    x_ops = [dict() for _ in range(n)]
    y_ops = [dict() for _ in range(n)]
    for i in range(n):
        for k in degs:
            if k + 1 in dims:
                A = M1.x_op(i, k) if d1(k) and d1(k + 1) else None
                B = M2.x_op(i, k - shift) if d2(k) and d2(k + 1) else None
                x_ops[i][k] = diag(A, B, d1(k + 1), d1(k), d2(k + 1), d2(k))
            if k - 1 in dims:
                A = M1.y_op(i, k) if d1(k) and d1(k - 1) else None
                B = M2.y_op(i, k - shift) if d2(k) and d2(k - 1) else None
                y_ops[i][k] = diag(A, B, d1(k - 1), d1(k), d2(k - 1), d2(k))
    S = GradedModule(params=M1.params, dims=dims, w_action=w_action, x_ops=x_ops, y_ops=y_ops,
                     finite=finite, kind="direct-sum", exact={k: True for k in degs})
    S.omega = S.compute_omega()
    return S


# ---------------------------------------------------------------------------
# contravariant forms


@dataclass(eq=False)
class ContravariantForm:
    """Gram matrices per degree; ``(a, b) = a^H G b``."""

    module: GradedModule
    gram: dict[int, ExactMatrix]

    def check(self) -> bool:
        M = self.module
        for k in M.degrees:
            G = self.gram[k]
            if G.adjoint() != G:
                return False
            for e in M.group.generators:
                W = M.w_action[k][e]
                if W.adjoint() @ G @ W != G:
                    return False
            for i in range(M.rank):
                x = M.x_ops[i].get(k)
                if x is not None and k + 1 in self.gram:
                    y = M.y_ops[i][k + 1]
                    if x.adjoint() @ self.gram[k + 1] != G @ y:
                        return False
        return True


def _is_real(x: CycScalar) -> bool:
    return x == x.conjugate()


def contravariant_form(M: GradedModule, base_form: ExactMatrix | None = None) -> ContravariantForm:
    """The form with ``x_i^* = y_i`` and ``w^* = w^{-1}``, built degree by degree.

    On a standard module every basis vector of block ``k`` is ``x_j`` of a
    basis vector ``m'`` of block ``k-1``, so its Gram row is the row of
    ``m'`` in ``G_{k-1} Y_j``.  Quotients inherit the form of their parent.
    """
    p = M.params
    if not _is_real(p.t) or not all(_is_real(v) for v in p.c.values()):
        raise ValueError("contravariant forms need real t and c")
    if not p.group.is_unitary():
        raise ValueError("the group must act unitarily in the chosen basis")
    if M.parent is not None and M.quotient_maps is not None:
        base = contravariant_form(M.parent, base_form)
        gram = {k: base.gram[k].submatrix(M.quotient_maps[k][1], M.quotient_maps[k][1]) for k in M.degrees}
        F = ContravariantForm(M, gram)
        if not F.check():
            raise ValueError("inherited form is not contravariant on the quotient")
        return F
    if M.kind != "standard":
        raise ValueError("forms are built on standard modules and their quotients")
    G = p.group
    smats = _sigma_mats(p, M.sigma)
    ds = smats[0].nrows
    if base_form is None:
        acc = ExactMatrix.zeros(ds, ds)
        for S in smats:
            acc = acc + S.adjoint() @ S
        base_form = acc.scale(CycScalar(1) / G.order)
    n = M.rank
    gram = {0: base_form}
    bases = {k: monomials(n, k) for k in M.degrees}
    pos = {k: {m: i for i, m in enumerate(bases[k])} for k in M.degrees}
    for k in M.degrees:
        if k == 0:
            continue
        rows = []
        prod = [gram[k - 1] @ M.y_ops[j][k] for j in range(n)]
        for m in bases[k]:
            j = next(a for a in range(n) if m[a] > 0)
            m1 = list(m)
            m1[j] -= 1
            prev = pos[k - 1][tuple(m1)]
            for v in range(ds):
                rows.append(prod[j].to_lists()[prev * ds + v])
        gram[k] = ExactMatrix(rows, ncols=M.dims[k])
    F = ContravariantForm(M, gram)
    if not F.check():
        raise ValueError("the form is not Hermitian and contravariant")
    return F


def is_unitary(F: ContravariantForm, window: Sequence[int] | None = None) -> dict[int, bool]:
    """Certified positive-definiteness per degree via leading principal minors."""
    out = {}
    degs = window if window is not None else F.module.degrees
    for k in degs:
        G = F.gram.get(k)
        if G is None or G.nrows == 0:
            out[k] = True
            continue
        out[k] = _positive_definite(G)
    return out


def _positive_definite(G: ExactMatrix) -> bool:
    # successive pivots of unpivoted elimination are ratios of leading minors
    n = G.nrows
    rows = G.to_lists()
    for c in range(n):
        piv = rows[c][c]
        if certified_sign(piv) <= 0:
            return False
        inv = piv.inverse()
        for i in range(c + 1, n):
            f = rows[i][c] * inv
            if not f.is_zero():
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[c])]
    return True


UNITARITY_GRID = ("1/10", "1/8", "1/6", "1/5", "1/4", "1/3", "1/2")


def unitarity_scan(G: ReflectionGroup, T: IrrepTable, grid: Sequence[str] = UNITARITY_GRID, degree: int = 8,
                   t=1, sigma: str = "triv") -> list[dict]:
    """Certified unitarity of ``M(σ)`` on degrees ``≤ degree`` for uniform ``c`` along ``grid``.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> [r["unitary"] for r in unitarity_scan(G, T, ("1/10", "3/2"), degree=4)]
    [True, False]
    """
    out = []
    for value in grid:
        P = CherednikParams(G, T, t, ParamC.uniform(G, value))
        M = standard_module(sigma, P, degree)
        ok = all(is_unitary(contravariant_form(M), range(degree + 1)).values())
        out.append({"c": value, "sigma": sigma, "degree": degree, "unitary": ok})
    return out
