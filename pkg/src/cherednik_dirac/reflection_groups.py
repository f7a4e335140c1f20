"""
Finite complex reflection groups acting on ``h``, with reflection data,
conjugacy classes, shipped irreducible representations and character-based
decomposition of W-modules.

Coordinates: ``h`` has basis ``y_1..y_n`` (columns), ``h*`` the dual basis
``x_1..x_n``.  An element ``g`` acts on ``h`` by its matrix and on ``h*`` by
the inverse transpose, so the pairing is invariant.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence

from .exact_scalars import (
    CycScalar,
    ExactMatrix,
    as_scalar,
    field_for,
    format_scalar,
    parse_scalar,
    root_of_unity,
)

__all__ = [
    "ReflectionGroup",
    "Reflection",
    "ParamC",
    "IrrepTable",
    "GroupCapExceeded",
    "generate_group",
    "find_reflections",
    "catalog",
    "decompose_wmodule",
    "decompose_character",
    "exterior_power",
    "symmetric_power",
]

CACHE_VERSION = 1


class GroupCapExceeded(RuntimeError):
    """Closure produced more elements than allowed."""


def _key(M: ExactMatrix):
    return tuple(tuple(M.F.to_coeffs(v)) for row in M.rows for v in row)


@dataclass(eq=False)
class ReflectionGroup:
    """A finite matrix group on ``h`` with its multiplication table."""

    rank: int
    elements: list[ExactMatrix]
    mult_table: list[list[int]]
    identity: int
    inverse: list[int]
    classes: list[list[int]]
    words: list[tuple[int, ...]]
    generators: list[int]
    name: str = "matrix"
    dual: list[ExactMatrix] = field(default_factory=list)

    def __post_init__(self):
        if not self.dual:
            self.dual = [self.elements[self.inverse[i]].transpose() for i in range(self.order)]
        self.class_of = [0] * self.order
        for ci, cl in enumerate(self.classes):
            for e in cl:
                self.class_of[e] = ci
        self._reflections = None

    @property
    def order(self) -> int:
        return len(self.elements)

    def mul(self, a: int, b: int) -> int:
        return self.mult_table[a][b]

    def word_product(self, word: Sequence[int]) -> int:
        e = self.identity
        for g in word:
            e = self.mult_table[e][g]
        return e

    def index_of(self, M: ExactMatrix) -> int:
        F = self.elements[0].F
        try:
            key = _key(M.promote(F)) if M.F is not F else _key(M)
        except ValueError:
            raise KeyError("matrix not in group")
        if not hasattr(self, "_index"):
            self._index = {_key(E): i for i, E in enumerate(self.elements)}
        return self._index[key]

    def det_h(self, e: int) -> CycScalar:
        return self.elements[e].det()

    @property
    def reflections(self) -> list["Reflection"]:
        if self._reflections is None:
            self._reflections = find_reflections(self)
        return self._reflections

    def reflection_classes(self) -> list[str]:
        seen = []
        for r in self.reflections:
            if r.label not in seen:
                seen.append(r.label)
        return seen

    def is_unitary(self) -> bool:
        n = self.rank
        I = ExactMatrix.identity(n)
        return all(g.adjoint() @ g == I for g in self.elements)


@dataclass(eq=False)
class Reflection:
    """Reflection data of one element ``s``."""

    index: int
    alpha: list[CycScalar]  # in h*, coordinates in the x-basis
    alpha_check: list[CycScalar]  # in h, coordinates in the y-basis
    lam: CycScalar
    label: str

    @property
    def pairing(self) -> CycScalar:
        """<alpha_check, alpha>."""
        return sum((a * b for a, b in zip(self.alpha, self.alpha_check)), CycScalar(0))

    def coefficient(self, i: int, j: int) -> CycScalar:
        """<y_i, alpha><alpha_check, x_j> / <alpha_check, alpha>."""
        return self.alpha[i] * self.alpha_check[j] / self.pairing


class ParamC(dict):
    """W-invariant parameter: reflection class label -> scalar."""

    @classmethod
    def uniform(cls, G: ReflectionGroup, value) -> "ParamC":
        v = as_scalar(value)
        return cls({lab: v for lab in G.reflection_classes()})

    @classmethod
    def build(cls, G: ReflectionGroup, values) -> "ParamC":
        """From a scalar (uniform) or a mapping of class labels."""
        if isinstance(values, Mapping):
            labels = G.reflection_classes()
            unknown = set(values) - set(labels)
            if unknown:
                raise ValueError(f"unknown reflection class labels {sorted(unknown)}; expected {labels}")
            out = cls({lab: as_scalar(values.get(lab, 0)) for lab in labels})
            return out
        return cls.uniform(G, values)

    def of(self, refl: Reflection) -> CycScalar:
        return self[refl.label]

    def scaled(self, s) -> "ParamC":
        s = as_scalar(s)
        return ParamC({k: v * s for k, v in self.items()})

    def is_zero(self) -> bool:
        return all(v.is_zero() for v in self.values())

    def to_json(self) -> dict:
        return {k: format_scalar(v) for k, v in self.items()}


def generate_group(generators: Sequence, cap: int = 48, name: str = "matrix") -> ReflectionGroup:
    """Close a set of invertible matrices under multiplication.

    >>> G = generate_group([[[-1]]])
    >>> G.order
    2
    """
    gens = [g if isinstance(g, ExactMatrix) else ExactMatrix(g) for g in generators]
    if not gens:
        raise ValueError("need at least one generator")
    n = gens[0].nrows
    L = 1
    for g in gens:
        if g.shape != (n, n):
            raise ValueError("generators must be square of equal size")
        if g.det().is_zero():
            raise ValueError("non-invertible generator")
        L = L * g.F.N // __import__("math").gcd(L, g.F.N)
    F = field_for(L)
    gens = [g.promote(F) for g in gens]
    I = ExactMatrix.identity(n, F)
    elements = [I]
    words: list[tuple[int, ...]] = [()]
    index = {_key(I): 0}
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for gi, g in enumerate(gens):
                P = elements[e] @ g
                k = _key(P)
                if k not in index:
                    if len(elements) >= cap:
                        raise GroupCapExceeded(f"group order exceeds cap {cap}")
                    index[k] = len(elements)
                    elements.append(P)
                    words.append(words[e] + (gi,))
                    nxt.append(index[k])
        frontier = nxt
    N = len(elements)
    table = [[index[_key(elements[a] @ elements[b])] for b in range(N)] for a in range(N)]
    inverse = [row.index(0) for row in table]
    gen_idx = [index[_key(g)] for g in gens]
    seen = [False] * N
    classes = []
    for e in range(N):
        if seen[e]:
            continue
        orbit = sorted({table[table[g][e]][inverse[g]] for g in range(N)})
        for o in orbit:
            seen[o] = True
        classes.append(orbit)
    G = ReflectionGroup(rank=n, elements=elements, mult_table=table, identity=0,
                        inverse=inverse, classes=classes, words=words, generators=gen_idx, name=name)
    G._index = index
    return G


def _normalise(vec: list[CycScalar]) -> list[CycScalar]:
    lead = next(v for v in vec if not v.is_zero())
    return [v / lead for v in vec]


def find_reflections(G: ReflectionGroup) -> list[Reflection]:
    """All elements with ``rank(Id - s) = 1`` together with their root data.

    Class labels ``s0, s1, ...`` follow the order of first appearance.
    """
    n = G.rank
    I = ExactMatrix.identity(n)
    out = []
    class_labels: dict[int, str] = {}
    for e, g in enumerate(G.elements):
        A = I - g
        if A.rank() != 1:
            continue
        Ad = I - G.dual[e]
        col = next(c for c in A.columns() if any(not v.is_zero() for v in c))
        dcol = next(c for c in Ad.columns() if any(not v.is_zero() for v in c))
        alpha_check = _normalise(col)
        alpha = _normalise(dcol)
        lam = g.det()
        ci = G.class_of[e]
        if ci not in class_labels:
            class_labels[ci] = f"s{len(class_labels)}"
        out.append(Reflection(index=e, alpha=alpha, alpha_check=alpha_check, lam=lam, label=class_labels[ci]))
    return out


# ---------------------------------------------------------------------------
# multilinear algebra helpers


def _subsets(n: int, p: int):
    from itertools import combinations

    return list(combinations(range(n), p))


def exterior_power(g: ExactMatrix, p: int) -> ExactMatrix:
    """Matrix of ``g`` on ``Λ^p`` in the basis of increasing index subsets."""
    n = g.nrows
    subs = _subsets(n, p)
    if p == 0:
        return ExactMatrix([[1]])
    rows = []
    for I in subs:
        row = []
        for J in subs:
            row.append(g.submatrix(I, J).det())
        rows.append(row)
    return ExactMatrix(rows, F=g.F)


def monomials(n: int, k: int) -> list[tuple[int, ...]]:
    """Exponent vectors of degree ``k`` in ``n`` variables, lexicographically decreasing."""
    if n == 0:
        return [()] if k == 0 else []
    if n == 1:
        return [(k,)]
    out = []
    for a in range(k, -1, -1):
        for rest in monomials(n - 1, k - a):
            out.append((a,) + rest)
    return out


def symmetric_power(g: ExactMatrix, k: int) -> ExactMatrix:
    """Matrix of ``g`` on ``S^k`` (monomial basis from :func:`monomials`).

    Column ``b`` holds the expansion of ``prod_j (g e_j)^{b_j}``.
    """
    n = g.nrows
    basis = monomials(n, k)
    pos = {m: i for i, m in enumerate(basis)}
    cols_g = g.columns()
    F = g.F
    out = [[F.zero] * len(basis) for _ in basis]
    for bi, b in enumerate(basis):
        poly = {tuple([0] * n): CycScalar(1)}
        for j, e in enumerate(b):
            for _ in range(e):
                new = {}
                for mono, c in poly.items():
                    for i in range(n):
                        v = cols_g[j][i]
                        if v.is_zero():
                            continue
                        m2 = list(mono)
                        m2[i] += 1
                        m2 = tuple(m2)
                        new[m2] = new.get(m2, CycScalar(0)) + c * v
                poly = new
        for mono, c in poly.items():
            if not c.is_zero():
                out[pos[mono]][bi] = c.raw(F)
    return ExactMatrix(_raw=out, ncols=len(basis), F=F)


# ---------------------------------------------------------------------------
# irreducible representations


@dataclass(eq=False)
class IrrepTable:
    """Explicit irreducible representations of ``group``."""

    group: ReflectionGroup
    labels: list[str]
    matrices: list[list[ExactMatrix]]  # [irrep][element]
    det_h_label: str = ""
    det_hstar_label: str = ""

    def __post_init__(self):
        self.dims = [m[0].nrows for m in self.matrices]
        self.characters = [[M.trace() for M in ms] for ms in self.matrices]
        self.verify()
        self.det_h_label = self.det_h_label or self._match_linear([self.group.det_h(e) for e in range(self.group.order)])
        self.det_hstar_label = self.det_hstar_label or self._match_linear(
            [self.group.det_h(e).inverse() for e in range(self.group.order)])

    def _match_linear(self, values) -> str:
        for lab, ch, d in zip(self.labels, self.characters, self.dims):
            if d == 1 and all(a == b for a, b in zip(ch, values)):
                return lab
        raise ValueError("linear character not found in the table")

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown irrep {label!r}; known: {self.labels}") from None

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def character(self, label: str) -> list[CycScalar]:
        return self.characters[self.index(label)]

    def class_character(self, label: str) -> list[CycScalar]:
        ch = self.character(label)
        return [ch[cl[0]] for cl in self.group.classes]

    def verify(self):
        G = self.group
        if sum(d * d for d in self.dims) != G.order:
            raise ValueError("sum of squared dimensions differs from |W|")
        for ms in self.matrices:
            for g in G.generators:
                for e in range(G.order):
                    if not (ms[g] @ ms[e] == ms[G.mul(g, e)]):
                        raise ValueError("shipped matrices are not a representation")
        for i, a in enumerate(self.characters):
            for j, b in enumerate(self.characters):
                ip = inner_product(a, b, G)
                if ip != (1 if i == j else 0):
                    raise ValueError(f"character orthogonality fails for {self.labels[i]}, {self.labels[j]}")

    def tensor_linear(self, label: str, linear: str) -> str:
        """Label of ``label ⊗ linear`` for a one-dimensional ``linear``."""
        ch = [a * b for a, b in zip(self.character(label), self.character(linear))]
        vec = decompose_character(ch, self)
        (lab,) = [l for l, m in vec.items() if m]
        return lab

    def tensor_decompose(self, labels_a: str, label_b: str) -> dict[str, int]:
        ch = [a * b for a, b in zip(self.character(labels_a), self.character(label_b))]
        return decompose_character(ch, self)

    def exterior_character(self, p: int, dual: bool = False) -> list[CycScalar]:
        G = self.group
        mats = G.dual if dual else G.elements
        return [exterior_power(m, p).trace() for m in mats]


def inner_product(a: Sequence[CycScalar], b: Sequence[CycScalar], G: ReflectionGroup) -> CycScalar:
    total = CycScalar(0)
    for x, y in zip(a, b):
        total = total + x * y.conjugate()
    return total / G.order


def decompose_character(traces: Sequence[CycScalar], table: IrrepTable) -> dict[str, int]:
    """Multiplicities of a character (values per element) over Irr(W)."""
    out = {}
    total_dim = 0
    for lab, ch, d in zip(table.labels, table.characters, table.dims):
        m = inner_product(traces, ch, table.group)
        if not m.is_rational() or m.rational().denominator != 1 or m.rational() < 0:
            raise ValueError(f"non-integral multiplicity {m} for {lab}: not a representation")
        out[lab] = int(m.rational())
        total_dim += out[lab] * d
    if traces and as_scalar(traces[table.group.identity]) != total_dim:
        raise ValueError("multiplicities do not account for the dimension")
    return out


def decompose_wmodule(action, table: IrrepTable) -> dict[str, int]:
    """Multiplicity vector of a W-module given by matrices per element.

    ``action`` is a sequence (or mapping) element index -> ExactMatrix.  The
    generator relations are checked before the character inner products.
    """
    G = table.group
    mats = [action[e] for e in range(G.order)]
    if mats and mats[0].nrows == 0:
        return {lab: 0 for lab in table.labels}
    for g in G.generators:
        for e in range(G.order):
            if not (mats[g] @ mats[e] == mats[G.mul(g, e)]):
                raise ValueError("action is not a representation")
    return decompose_character([m.trace() for m in mats], table)


# ---------------------------------------------------------------------------
# catalog


def _cyclic(m: int):
    z = root_of_unity(m, 1)
    G = generate_group([ExactMatrix([[z]])], cap=max(m, 1), name=f"cyclic:{m}")
    # generator element has word (0,), so element with word of length j acts by z^j
    labels, mats = [], []
    for j in range(m):
        labels.append("triv" if j == 0 else ("sign" if m == 2 else f"chi{j}"))
        mats.append([ExactMatrix([[root_of_unity(m, j * len(w))]]) for w in G.words])
    return G, labels, mats


def _from_generator_images(G: ReflectionGroup, images: Sequence[ExactMatrix]) -> list[ExactMatrix]:
    d = images[0].nrows
    out = []
    for w in G.words:
        M = ExactMatrix.identity(d, images[0].F)
        for g in w:
            M = M @ images[g]
        out.append(M)
    return out


def _dihedral(m: int):
    if m < 3:
        raise ValueError("dihedral m requires m >= 3")
    z = root_of_unity(m, 1)
    s1 = ExactMatrix([[0, 1], [1, 0]])
    s2 = ExactMatrix([[0, z], [z.inverse(), 0]])
    G = generate_group([s1, s2], cap=2 * m, name=f"dihedral:{m}")
    one = ExactMatrix([[1]])
    neg = ExactMatrix([[-1]])
    labels = ["triv", "sign"]
    imgs = [[one, one], [neg, neg]]
    if m % 2 == 0:
        labels += ["eps1", "eps2"]
        imgs += [[one, neg], [neg, one]]
    for j in range(1, (m + 1) // 2):
        zj = root_of_unity(m, j)
        labels.append("refl" if j == 1 else f"rho{j}")
        imgs.append([s1, ExactMatrix([[0, zj], [zj.inverse(), 0]])])
    mats = [_from_generator_images(G, im) for im in imgs]
    return G, labels, mats


def _cartan_reflections(cartan: list[list[int]]) -> list[ExactMatrix]:
    # s_i(alpha_j) = alpha_j - a_ij alpha_i on the simple-root basis
    n = len(cartan)
    gens = []
    for i in range(n):
        rows = [[Fraction(int(r == c)) for c in range(n)] for r in range(n)]
        for j in range(n):
            rows[i][j] -= cartan[i][j]
        gens.append(ExactMatrix(rows))
    return gens


def _symmetric(n: int):
    if n == 3:
        cart = [[2, -1], [-1, 2]]
    elif n == 4:
        cart = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]]
    else:
        raise ValueError("symmetric n supported for n in {3, 4}")
    gens = _cartan_reflections(cart)
    G = generate_group(gens, cap=48, name=f"symmetric:{n}")
    one, neg = ExactMatrix([[1]]), ExactMatrix([[-1]])
    labels = ["triv", "sign", "refl"]
    imgs = [[one] * (n - 1), [neg] * (n - 1), gens]
    if n == 4:
        a, b = _cartan_reflections([[2, -1], [-1, 2]])
        labels += ["refl_sign", "two"]
        imgs += [[-g for g in gens], [a, b, a]]
    mats = [_from_generator_images(G, im) for im in imgs]
    return G, labels, mats


def _matrix_group(generators):
    G = generate_group(generators, cap=48, name="matrix")
    return G, None, None


def _cache_dir() -> Path | None:
    if os.environ.get("CHEREDNIK_DIRAC_NO_CACHE"):
        return None
    root = os.environ.get("CHEREDNIK_DIRAC_CACHE")
    base = Path(root) if root else Path(os.environ.get("XDG_CACHE_HOME", Path.home() / ".cache")) / "cherednik_dirac"
    try:
        base.mkdir(parents=True, exist_ok=True)
    except OSError:
        return None
    return base


def _matrix_to_json(M: ExactMatrix) -> list[list[str]]:
    return [[format_scalar(v) for v in row] for row in M.to_lists()]


def _matrix_from_json(rows) -> ExactMatrix:
    return ExactMatrix([[parse_scalar(v) for v in row] for row in rows])


def _save(path: Path, G: ReflectionGroup, labels, mats):
    data = {
        "version": CACHE_VERSION,
        "name": G.name,
        "generators": [_matrix_to_json(G.elements[g]) for g in G.generators],
        "irreps": [
            {"label": lab, "generator_images": [_matrix_to_json(ms[g]) for g in G.generators]}
            for lab, ms in zip(labels, mats)
        ],
    }
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(data, indent=1, sort_keys=True))
    tmp.replace(path)


def _load(path: Path, cap: int):
    data = json.loads(path.read_text())
    if data.get("version") != CACHE_VERSION:
        return None
    gens = [_matrix_from_json(g) for g in data["generators"]]
    G = generate_group(gens, cap=cap, name=data["name"])
    labels = [ir["label"] for ir in data["irreps"]]
    mats = [_from_generator_images(G, [_matrix_from_json(x) for x in ir["generator_images"]]) for ir in data["irreps"]]
    return G, labels, mats


_BUILDERS = {"cyclic": _cyclic, "dihedral": _dihedral, "symmetric": _symmetric}
_MEMO: dict = {}


def parse_group_spec(spec) -> tuple[str, int]:
    """``"cyclic:3"`` or ``{"type": "cyclic", "m": 3}`` -> ("cyclic", 3)."""
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind not in _BUILDERS or not arg.isdigit():
            raise ValueError(f"unsupported group spec {spec!r}")
        return kind, int(arg)
    if isinstance(spec, Mapping):
        kind = spec.get("type")
        if kind not in _BUILDERS:
            raise ValueError(f"unsupported group type {kind!r}")
        arg = spec.get("m", spec.get("n"))
        if not isinstance(arg, int):
            raise ValueError("group spec needs an integer m or n")
        return kind, arg
    raise ValueError(f"unsupported group spec {spec!r}")


def catalog(name, param: int | None = None, use_cache: bool = True) -> tuple[ReflectionGroup, IrrepTable]:
    """Group and irreducible table for ``cyclic m``, ``dihedral m`` or ``symmetric n``.

    >>> G, T = catalog("dihedral", 3)
    >>> G.order, sorted(T.dims)
    (6, [1, 1, 2])
    """
    if param is None:
        name, param = parse_group_spec(name)
    if name not in _BUILDERS:
        raise ValueError(f"unsupported group {name!r}")
    key = (name, param)
    if key in _MEMO:
        return _MEMO[key]
    if name == "cyclic" and not 2 <= param <= 48:
        raise ValueError("cyclic m needs 2 <= m <= 48")
    if name == "dihedral" and not 3 <= param <= 24:
        raise ValueError("dihedral m needs 3 <= m <= 24")
    digest = hashlib.sha256(f"{name}:{param}:v{CACHE_VERSION}".encode()).hexdigest()[:16]
    cdir = _cache_dir() if use_cache else None
    loaded = None
    if cdir is not None:
        path = cdir / f"{name}_{param}_{digest}.json"
        if path.exists():
            try:
                loaded = _load(path, cap=48)
            except (ValueError, KeyError, json.JSONDecodeError):
                loaded = None
    if loaded is None:
        loaded = _BUILDERS[name](param)
        if cdir is not None:
            try:
                _save(cdir / f"{name}_{param}_{digest}.json", *loaded)
            except OSError:
                pass
    G, labels, mats = loaded
    table = IrrepTable(G, labels, mats)
    _MEMO[key] = (G, table)
    return G, table
