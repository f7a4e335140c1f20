"""
Analysis of the restricted algebra at ``t = 0``: composition multiplicities
of baby Verma modules, linkage blocks, central characters and
Calogero–Moser cells.

Composition factors of a graded module are graded shifts of the heads
``L̄(τ)``, each generated in its lowest degree by a copy of ``τ``; peeling
graded characters from the bottom degree up is therefore exact.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .cherednik_modules import CherednikParams, GradedModule, baby_verma, invariant_polynomials, simple_quotient
from .cohomology import embedding_check, hstar_cohomology
from .exact_scalars import CycScalar, ExactMatrix, Subspace, format_scalar
from .reflection_groups import ParamC, monomials
from .vogan import (
    CentralElements,
    VoganEngine,
    find_central_elements,
    scalar_on_module,
    zeta_d,
    zeta_value,
)

__all__ = [
    "LinkageGraph",
    "CellPartition",
    "decomposition_numbers",
    "theta",
    "cm_cells",
    "cell_membership_check",
    "center_probe",
    "cell_sweep",
    "DEFAULT_GRID",
]

DEFAULT_GRID = ("0", "1/5", "1/3", "1/2", "1")


def _require_t0(params: CherednikParams):
    if not params.t.is_zero():
        raise ValueError("restricted-algebra analysis needs t = 0")


@dataclass
class RestrictedModels:
    """Baby Vermas and their heads for every ``σ``."""

    params: CherednikParams
    verma: dict[str, GradedModule]
    head: dict[str, GradedModule]

    @classmethod
    def build(cls, params: CherednikParams) -> "RestrictedModels":
        _require_t0(params)
        verma, head = {}, {}
        for lab in params.table.labels:
            verma[lab] = baby_verma(lab, params)
            head[lab] = simple_quotient(verma[lab])
        return cls(params, verma, head)


@dataclass
class LinkageGraph:
    """Multiplicities ``[M̄(σ) : L̄(τ)]`` with the degree shifts where each factor starts."""

    labels: list[str]
    mults: dict[tuple[str, str], int]
    shifts: dict[tuple[str, str], list[int]]
    head_dims: dict[str, int]
    bookkeeping: bool

    def components(self) -> list[list[str]]:
        parent = {l: l for l in self.labels}

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for (s, t), m in self.mults.items():
            if m:
                parent[find(s)] = find(t)
        groups: dict[str, list[str]] = {}
        for l in self.labels:
            groups.setdefault(find(l), []).append(l)
        return _canonical(groups.values(), self.labels)

    def to_json(self) -> dict:
        return {"labels": self.labels,
                "multiplicities": {f"{s}:{t}": m for (s, t), m in sorted(self.mults.items()) if m},
                "head_dims": self.head_dims, "bookkeeping": self.bookkeeping}


def _canonical(blocks: Iterable[Iterable[str]], order: Sequence[str]) -> list[list[str]]:
    pos = {l: i for i, l in enumerate(order)}
    out = [sorted(b, key=pos.__getitem__) for b in blocks]
    return sorted(out, key=lambda b: pos[b[0]])


def decomposition_numbers(params: CherednikParams, models: RestrictedModels | None = None) -> LinkageGraph:
    """Composition multiplicities of the baby Vermas by graded-character peeling.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> g = decomposition_numbers(CherednikParams(G, T, 0, {"s0": "0"}))
    >>> sorted((k, v) for k, v in g.mults.items() if v), g.bookkeeping
    ([(('sign', 'sign'), 1), (('sign', 'triv'), 1), (('triv', 'sign'), 1), (('triv', 'triv'), 1)], True)
    """
    models = models or RestrictedModels.build(params)
    T = params.table
    labels = list(T.labels)
    heads = {l: models.head[l].graded_character() for l in labels}
    head_dims = {l: models.head[l].total_dim() for l in labels}
    mults: dict[tuple[str, str], int] = {}
    shifts: dict[tuple[str, str], list[int]] = {}
    ok = True
    for s in labels:
        rest = {k: dict(v) for k, v in models.verma[s].graded_character().items()}
        while True:
            live = [k for k in sorted(rest) if any(rest[k].values())]
            if not live:
                break
            k0 = live[0]
            for tau, m in sorted(rest[k0].items()):
                if m < 0:
                    raise ArithmeticError(f"unidentifiable composition factor in M̄({s})")
                if not m:
                    continue
                lo = min(heads[tau])
                for k, row in heads[tau].items():
                    tgt = rest.setdefault(k - lo + k0, {})
                    for lab, c in row.items():
                        tgt[lab] = tgt.get(lab, 0) - m * c
                mults[(s, tau)] = mults.get((s, tau), 0) + m
                shifts.setdefault((s, tau), []).extend([k0] * m)
            if any(v < 0 for v in rest[k0].values()):
                raise ArithmeticError(f"unidentifiable composition factor in M̄({s})")
        total = sum(m * head_dims[t] for (a, t), m in mults.items() if a == s)
        ok &= total == params.group.order * T.dim(s) and mults.get((s, s), 0) >= 1
    return LinkageGraph(labels, mults, shifts, head_dims, ok)


def theta(params: CherednikParams, central: CentralElements, models: RestrictedModels | None = None) -> dict[str, tuple]:
    """``σ ↦`` scalars of the weight-zero central elements on ``M̄(σ)``."""
    models = models or RestrictedModels.build(params)
    out = {}
    for lab in params.table.labels:
        vals = []
        for z in central.B:
            v = scalar_on_module(models.verma[lab], z)
            if v is None:
                raise ArithmeticError(f"central element not scalar on M̄({lab})")
            vals.append(v)
        out[lab] = tuple(vals)
    return out


@dataclass
class CellPartition:
    c: dict[str, str]
    blocks: list[list[str]]
    provenance: str
    linkage: list[list[str]]
    theta_fibers: list[list[str]]
    central_element_degrees: int
    theta: dict[str, list[str]] = field(default_factory=dict)
    divergence: bool = False

    def cell_of(self, label: str) -> int:
        for i, b in enumerate(self.blocks):
            if label in b:
                return i
        raise KeyError(label)

    def to_json(self) -> dict:
        return {"c": self.c, "cells": self.blocks, "provenance": self.provenance,
                "central_element_degrees": self.central_element_degrees,
                "linkage": self.linkage, "theta_fibers": self.theta_fibers, "divergence": self.divergence}


def cm_cells(params: CherednikParams, central_degree: int = 2, models: RestrictedModels | None = None,
             central: CentralElements | None = None) -> CellPartition:
    """Cells from central characters, cross-checked against linkage blocks.

    Central characters are constant on linkage blocks, so linkage always
    refines the central-character fibers; when the bounded-degree central
    elements fail to separate blocks the linkage partition is emitted.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> cm_cells(CherednikParams(G, T, 0, {"s0": "1/5"})).blocks
    [['triv'], ['sign']]
    >>> cm_cells(CherednikParams(G, T, 0, {"s0": "0"})).blocks
    [['triv', 'sign']]
    """
    _require_t0(params)
    models = models or RestrictedModels.build(params)
    central = central or find_central_elements(params, central_degree, weights=[0])
    link = decomposition_numbers(params, models).components()
    th = {l: tuple(format_scalar(x) for x in v) for l, v in theta(params, central, models).items()}
    fibers: dict[tuple, list[str]] = {}
    for lab, v in th.items():
        fibers.setdefault(v, []).append(lab)
    labels = list(params.table.labels)
    fib = _canonical(fibers.values(), labels)
    # every linkage block must sit inside one fiber
    refines = all(len({th[l] for l in b}) == 1 for b in link)
    if fib == link:
        blocks, prov = fib, "both"
    else:
        blocks, prov = link, "linkage"
    return CellPartition(params.c.to_json(), blocks, prov, link, fib, central.degree,
                         {l: list(v) for l, v in th.items()}, divergence=not refines)


def cell_membership_check(params: CherednikParams, cells: CellPartition | None = None,
                          models: RestrictedModels | None = None, engine: VoganEngine | None = None,
                          central: CentralElements | None = None) -> dict:
    """Cell membership of the constituents of ``H^•(h*, L̄(σ))``.

    (b) every constituent ``ν`` has ``ν ⊗ det_{h*}`` in the cell of ``σ``;
    (a) the top-wedge constituent ``σ ⊗ det_h`` is present, and the central
    character of ``σ`` equals ``ζ_d`` evaluated at ``(σ ⊗ det_h) ⊗ χ``.
    """
    models = models or RestrictedModels.build(params)
    central = central or find_central_elements(params, 2, weights=[0])
    cells = cells or cm_cells(params, models=models, central=central)
    engine = engine or VoganEngine(params)
    T = params.table
    rows = {}
    ok_a = ok_b = ok_z = True
    for lab in T.labels:
        L = models.head[lab]
        cons = sorted(l for l, m in hstar_cohomology(L).total().items() if m)
        top = T.tensor_linear(lab, T.det_h_label)
        same = {nu: cells.cell_of(T.tensor_linear(nu, T.det_hstar_label)) == cells.cell_of(lab) for nu in cons}
        zeta_ok = True
        for z in central.B:
            beta = scalar_on_module(models.verma[lab], z)
            zeta_ok &= zeta_value(engine, zeta_d(engine, z), top) == beta
        rows[lab] = {"constituents": cons, "top_wedge": top, "top_present": top in cons,
                     "same_cell": same, "theta_matches_zeta": zeta_ok}
        ok_a &= top in cons
        ok_b &= all(same.values())
        ok_z &= zeta_ok
    return {"holds": ok_a and ok_b and ok_z, "top_wedge_present": ok_a, "same_cell": ok_b,
            "theta_matches_zeta": ok_z, "per_sigma": rows}


def conjecture_observation(params: CherednikParams, models: RestrictedModels | None = None,
                           convention: int = 1) -> dict:
    """``H_D(L̄(σ))`` against ``H^•(h*, L̄(σ)) ⊗ χ`` and ``H_•(h, L̄(σ)) ⊗ χ``; an observation only."""
    models = models or RestrictedModels.build(params)
    out = {}
    for lab in params.table.labels:
        e = embedding_check(models.head[lab], convention=convention)
        out[lab] = {"observed": e["equality"], "embedding": e["holds"], "dirac": e["dirac"],
                    "hstar_chi": e["hstar_chi"], "h_chi": e["h_chi"]}
    return out


# ---------------------------------------------------------------------------
# dim Z(H̄) probe


def _poly_mul(f: dict, g: dict) -> dict:
    out: dict = {}
    for a, x in f.items():
        for b, y in g.items():
            k = tuple(i + j for i, j in zip(a, b))
            out[k] = out.get(k, CycScalar(0)) + x * y
    return {k: v for k, v in out.items() if not v.is_zero()}


def _invariant_ideal(G, k: int, dual: bool) -> Subspace:
    """Degree-``k`` part of the ideal generated by positive-degree invariants."""
    n = G.rank
    mons = monomials(n, k)
    pos = {m: i for i, m in enumerate(mons)}
    vecs = []
    for j in range(1, k + 1):
        for f in invariant_polynomials(G, j, dual=dual):
            fd = {m: v for m, v in zip(monomials(n, j), f) if not v.is_zero()}
            for m in monomials(n, k - j):
                prod = _poly_mul(fd, {m: CycScalar(1)})
                vec = [CycScalar(0)] * len(mons)
                for mm, v in prod.items():
                    vec[pos[mm]] = v
                vecs.append(vec)
    return Subspace.span(vecs, len(mons)) if vecs else Subspace.zero(len(mons))


def _reduce(vec: list, I: Subspace) -> list:
    vec = list(vec)
    for row, p in zip(I.basis(), I.pivots):
        if not vec[p].is_zero():
            c = vec[p]
            vec = [a - c * b for a, b in zip(vec, row)]
    return vec


def center_probe(params: CherednikParams, degree: int = 2, central: CentralElements | None = None) -> dict:
    """Dimension of the span of bounded-degree central elements modulo ``m_+``.

    In PBW coordinates ``m_+ H`` is the invariant ideal on the y-side plus
    the invariant ideal on the x-side, so reduction is done factorwise.

    >>> from cherednik_dirac.reflection_groups import catalog
    >>> G, T = catalog("cyclic", 2)
    >>> center_probe(CherednikParams(G, T, 0, {"s0": "1/3"}), 2)["dimension"]
    2
    """
    _require_t0(params)
    G = params.group
    central = central or find_central_elements(params, degree)
    n = G.rank
    ideals: dict = {}

    def ideal(k, dual):
        if (k, dual) not in ideals:
            ideals[(k, dual)] = _invariant_ideal(G, k, dual)
        return ideals[(k, dual)]

    reduced = []
    for wt, elems in sorted(central.by_weight.items()):
        for z in elems:
            # group by (deg a, w, deg b) and expand the y- and x-parts
            coords: dict = {}
            for (a, w, b), c in z.items():
                ka, kb = sum(a), sum(b)
                key = (ka, w, kb)
                ma, mb = monomials(n, ka), monomials(n, kb)
                blk = coords.setdefault(key, [[CycScalar(0)] * len(mb) for _ in ma])
                blk[ma.index(a)][mb.index(b)] = blk[ma.index(a)][mb.index(b)] + c
            out: dict = {}
            for (ka, w, kb), blk in coords.items():
                Iy, Ix = ideal(ka, False), ideal(kb, True)
                rows = [_reduce(r, Ix) for r in blk]
                cols = [_reduce([rows[i][j] for i in range(len(rows))], Iy) for j in range(len(rows[0]))]
                for j, col in enumerate(cols):
                    for i, v in enumerate(col):
                        if not v.is_zero():
                            out[(ka, i, w, kb, j)] = v
            reduced.append(out)
    keys = sorted({k for r in reduced for k in r})
    pos = {k: i for i, k in enumerate(keys)}
    rows = []
    for r in reduced:
        row = [CycScalar(0)] * len(keys)
        for k, v in r.items():
            row[pos[k]] = v
        rows.append(row)
    dim = ExactMatrix(rows, ncols=len(keys)).rank() if rows and keys else 0
    return {"dimension": dim, "bound": G.order, "within_bound": dim <= G.order,
            "equality_reached": dim == G.order, "degree": central.degree}


# ---------------------------------------------------------------------------
# sweeps


def _point(G, T, value: str) -> CherednikParams:
    return CherednikParams(G, T, 0, ParamC.uniform(G, value))


def cell_sweep(G, T, grid: Sequence[str] = DEFAULT_GRID, central_degree: int = 2, threads: int = 1,
               with_membership: bool = True) -> list[dict]:
    """Cells (and the membership checks) at each grid value of a uniform ``c``.

    Partition changes along the grid mark the special parameter values.
    """
    def run(value):
        P = _point(G, T, value)
        models = RestrictedModels.build(P)
        central = find_central_elements(P, central_degree, weights=[0])
        cells = cm_cells(P, central_degree, models, central)
        rec = {"c": value, "partition": cells.to_json()}
        if with_membership:
            rec["membership"] = cell_membership_check(P, cells, models, central=central)
        return rec

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            out = list(ex.map(run, grid))
    else:
        out = [run(v) for v in grid]
    prev = None
    for rec in out:
        blocks = rec["partition"]["cells"]
        rec["changed"] = prev is not None and blocks != prev
        prev = blocks
    return out
