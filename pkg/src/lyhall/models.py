"""Concrete Lie-Yamaguti algebras from reductive splittings of Lie algebras.

Given a Lie algebra ``g`` with a basis split into ``m`` and ``h`` such that
``[h,h] ⊆ h`` and ``[h,m] ⊆ m``, the tangent space ``m`` carries

    x * y     = [x, y]_m
    [x, y, z] = [[x, y]_h, z]

which satisfies the six Lie-Yamaguti identities.  Only splittings aligned
with the basis are supported: each basis vector lies wholly in ``m`` or
``h``, so projections are coordinate restrictions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from pathlib import Path
from typing import Mapping, Sequence

from .terms import Generators, LinComb, Term, parse

__all__ = [
    "ModelError",
    "MalformedTable",
    "UnsupportedSplitting",
    "DimensionCapExceeded",
    "UnassignedGenerator",
    "LieAlgebraData",
    "ReductivePair",
    "LYModel",
    "AxiomResult",
    "check_jacobi",
    "jacobi_witness",
    "check_reductive",
    "induce_ly",
    "check_axioms",
    "evaluate",
    "load_model_file",
    "vector_to_text",
    "parse_vector",
]

AXIOM_DIM_CAP = 12

Vec = tuple  # dense tuple of Fractions over a fixed basis


class ModelError(ValueError):
    pass


class MalformedTable(ModelError):
    pass


class UnsupportedSplitting(ModelError):
    pass


class DimensionCapExceeded(ModelError):
    pass


class UnassignedGenerator(ModelError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, str):
        return Fraction(x.strip())
    return Fraction(x)


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants ``[e_i, e_j] = sum_k c[i,j][k] e_k`` for i < j."""

    basis_names: tuple[str, ...]
    structure_constants: Mapping[tuple[int, int], Mapping[int, Fraction]]

    @classmethod
    def from_brackets(cls, basis_names: Sequence[str], brackets: Mapping) -> LieAlgebraData:
        """Build from ``{(x, y): {z: coeff}}`` keyed by names or indices.

        A pair may be given in either order (the reversed order is negated),
        but giving both orders inconsistently, or a nonzero ``[x, x]``, is an
        error.
        """
        names = tuple(basis_names)
        if len(set(names)) != len(names) or not names:
            raise MalformedTable("basis names must be nonempty and unique")
        index = {n: i for i, n in enumerate(names)}

        def idx(x) -> int:
            if isinstance(x, int) and 0 <= x < len(names):
                return x
            if x in index:
                return index[x]
            raise MalformedTable(f"unknown basis element {x!r}")

        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (x, y), vec in brackets.items():
            i, j = idx(x), idx(y)
            v = {idx(k): _frac(c) for k, c in vec.items()}
            v = {k: c for k, c in v.items() if c}
            if i == j:
                if v:
                    raise MalformedTable(f"[{names[i]},{names[i]}] must vanish")
                continue
            if i > j:
                i, j = j, i
                v = {k: -c for k, c in v.items()}
            if (i, j) in table and table[(i, j)] != v:
                raise MalformedTable(f"inconsistent values given for [{names[i]},{names[j]}]")
            table[(i, j)] = v
        return cls(names, {k: v for k, v in table.items() if v})

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def bracket_basis(self, i: int, j: int) -> dict[int, Fraction]:
        if i == j:
            return {}
        if i < j:
            return dict(self.structure_constants.get((i, j), {}))
        return {k: -c for k, c in self.structure_constants.get((j, i), {}).items()}

    def bracket(self, x: Mapping[int, Fraction], y: Mapping[int, Fraction]) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.bracket_basis(i, j).items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}


def _validate(L: LieAlgebraData) -> None:
    n = L.dim
    for key, vec in L.structure_constants.items():
        if not (isinstance(key, tuple) and len(key) == 2):
            raise MalformedTable(f"bad key {key!r}")
        i, j = key
        if not (0 <= i < j < n):
            raise MalformedTable(f"structure constants must be keyed by i < j, got {key!r}")
        for k in vec:
            if not 0 <= k < n:
                raise MalformedTable(f"index {k!r} out of range")


def jacobi_witness(L: LieAlgebraData) -> tuple[str, str, str] | None:
    """A basis triple violating the Jacobi identity, or None."""
    _validate(L)
    n = L.dim
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                acc: dict[int, Fraction] = {}
                for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                    for q, v in L.bracket(L.bracket({a: 1}, {b: 1}), {c: 1}).items():
                        acc[q] = acc.get(q, 0) + v
                if any(acc.values()):
                    return (L.basis_names[i], L.basis_names[j], L.basis_names[k])
    return None


def check_jacobi(L: LieAlgebraData) -> bool:
    return jacobi_witness(L) is None


@dataclass(frozen=True)
class ReductivePair:
    m_indices: tuple[int, ...]
    h_indices: tuple[int, ...]

    @classmethod
    def from_names(cls, L: LieAlgebraData, m: Sequence[str], h: Sequence[str]) -> ReductivePair:
        index = {n: i for i, n in enumerate(L.basis_names)}
        for x in list(m) + list(h):
            if x not in index:
                raise UnsupportedSplitting(
                    f"{x!r} is not a basis element; only splittings aligned with the basis are supported"
                )
        return cls(tuple(index[x] for x in m), tuple(index[x] for x in h))

    def validate(self, L: LieAlgebraData) -> None:
        m, h = set(self.m_indices), set(self.h_indices)
        if len(m) != len(self.m_indices) or len(h) != len(self.h_indices):
            raise ModelError("repeated index in splitting")
        if m & h or (m | h) != set(range(L.dim)):
            raise ModelError("m and h must partition the basis")
        if not m:
            raise ModelError("m must be nonempty")


def check_reductive(L: LieAlgebraData, split: ReductivePair) -> bool:
    split.validate(L)
    m, h = set(split.m_indices), set(split.h_indices)
    for i in split.h_indices:
        for j in range(L.dim):
            support = set(L.bracket_basis(i, j))
            if j in h and not support <= h:
                return False
            if j in m and not support <= m:
                return False
    return True


@dataclass(frozen=True)
class LYModel:
    """Lie-Yamaguti structure on a vector space with named basis.

    ``star_table[i][j]`` and ``bracket_table[i][j][k]`` are dense vectors.
    """

    names: tuple[str, ...]
    star_table: tuple
    bracket_table: tuple
    label: str = field(default="", compare=False)

    @property
    def dim(self) -> int:
        return len(self.names)

    def zero(self) -> Vec:
        return (Fraction(0),) * self.dim

    def unit(self, i: int) -> Vec:
        return tuple(Fraction(int(k == i)) for k in range(self.dim))

    def star(self, x: Vec, y: Vec) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.star_table[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] += ab * c
        return tuple(out)

    def triple(self, x: Vec, y: Vec, z: Vec) -> Vec:
        out = [Fraction(0)] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                plane = self.bracket_table[i][j]
                for k, c in enumerate(z):
                    if not c:
                        continue
                    abc = ab * c
                    for q, v in enumerate(plane[k]):
                        if v:
                            out[q] += abc * v
        return tuple(out)

    def scaled(self, star_sign: int = 1, bracket_sign: int = 1) -> LYModel:
        """Same space with the product and/or the bracket negated."""
        st = tuple(tuple(tuple(star_sign * c for c in v) for v in row) for row in self.star_table)
        br = tuple(
            tuple(tuple(tuple(bracket_sign * c for c in v) for v in col) for col in row)
            for row in self.bracket_table
        )
        return LYModel(self.names, st, br, self.label)

    @classmethod
    def from_tables(cls, names: Sequence[str], star: Mapping, bracket: Mapping, label: str = "") -> LYModel:
        """Build from sparse tables keyed by basis-index tuples; missing entries are 0."""
        n = len(names)
        zero = (Fraction(0),) * n

        def vec(d: Mapping) -> Vec:
            v = [Fraction(0)] * n
            for k, c in d.items():
                v[k] = _frac(c)
            return tuple(v)

        st = tuple(tuple(vec(star[(i, j)]) if (i, j) in star else zero for j in range(n)) for i in range(n))
        br = tuple(
            tuple(tuple(vec(bracket[(i, j, k)]) if (i, j, k) in bracket else zero for k in range(n)) for j in range(n))
            for i in range(n)
        )
        return cls(tuple(names), st, br, label)


def induce_ly(L: LieAlgebraData, split: ReductivePair, label: str = "") -> LYModel:
    """Tangent-space algebra of the splitting: x*y = [x,y]_m, [x,y,z] = [[x,y]_h, z]."""
    w = jacobi_witness(L)
    if w is not None:
        raise ModelError(f"Jacobi identity fails on {w}")
    if not check_reductive(L, split):
        raise ModelError("splitting is not reductive")
    m = split.m_indices
    h = set(split.h_indices)
    pos = {g: p for p, g in enumerate(m)}
    n = len(m)

    def to_m(v: Mapping[int, Fraction]) -> Vec:
        out = [Fraction(0)] * n
        for k, c in v.items():
            if k in pos:
                out[pos[k]] += c
        return tuple(out)

    star_tab = []
    br_tab = []
    for a in m:
        srow = []
        brow = []
        for b in m:
            full = L.bracket_basis(a, b)
            srow.append(to_m(full))
            hpart = {k: c for k, c in full.items() if k in h}
            brow.append(tuple(to_m(L.bracket(hpart, {c: 1})) for c in m))
        star_tab.append(tuple(srow))
        br_tab.append(tuple(brow))
    return LYModel(tuple(L.basis_names[g] for g in m), tuple(star_tab), tuple(br_tab), label)


@dataclass(frozen=True)
class AxiomResult:
    axiom: str
    passed: bool
    witness: tuple[str, ...] | None = None


def _add(*vs: Vec) -> Vec:
    return tuple(sum(c) for c in zip(*vs))


def _neg(v: Vec) -> Vec:
    return tuple(-c for c in v)


def check_axioms(M: LYModel, dim_cap: int = AXIOM_DIM_CAP) -> list[AxiomResult]:
    """Exact check of the six identities on all basis tuples (they are multilinear
    once the two alternating laws are read in polarized form)."""
    n = M.dim
    if n > dim_cap:
        raise DimensionCapExceeded(f"dimension {n} exceeds the axiom-check cap {dim_cap}")
    e = [M.unit(i) for i in range(n)]
    names = M.names
    zero = M.zero()
    S, T = M.star, M.triple

    def first_failure(arity: int, expr) -> tuple[str, ...] | None:
        for idx in product(range(n), repeat=arity):
            if expr(*(e[i] for i in idx)) != zero:
                return tuple(names[i] for i in idx)
        return None

    checks = [
        ("LY1", 2, lambda x, y: _add(S(x, y), S(y, x))),
        ("LY2", 3, lambda x, y, z: _add(T(x, y, z), T(y, x, z))),
        ("LY3", 3, lambda x, y, z: _add(
            T(x, y, z), T(y, z, x), T(z, x, y), S(S(x, y), z), S(S(y, z), x), S(S(z, x), y))),
        ("LY4", 4, lambda x, y, z, w: _add(T(S(x, y), z, w), T(S(y, z), x, w), T(S(z, x), y, w))),
        ("LY5", 4, lambda x, y, z, w: _add(T(x, y, S(z, w)), _neg(S(z, T(x, y, w))), _neg(S(T(x, y, z), w)))),
        ("LY6", 5, None),
    ]
    out = []
    for name, arity, expr in checks:
        if name == "LY6":
            w = _ly6_failure(M, e, names, zero)
        else:
            w = first_failure(arity, expr)
        out.append(AxiomResult(name, w is None, w))
    return out


def _ly6_failure(M: LYModel, e, names, zero) -> tuple[str, ...] | None:
    # [x,y,[u,v,w]] = [[x,y,u],v,w] + [u,[x,y,v],w] + [u,v,[x,y,w]]; the pair (x,y)
    # acts as one operator D, so loop over D first and reuse D(e_i).
    n = M.dim
    T = M.triple
    for x, y in product(range(n), repeat=2):
        D = [T(e[x], e[y], e[i]) for i in range(n)]
        for u, v, w in product(range(n), repeat=3):
            lhs = T(e[x], e[y], M.bracket_table[u][v][w])
            rhs = _add(T(D[u], e[v], e[w]), T(e[u], D[v], e[w]), T(e[u], e[v], D[w]))
            if lhs != rhs:
                return (names[x], names[y], names[u], names[v], names[w])
    return None


# --------------------------------------------------------------------------
# evaluation


def evaluate(x: Term | LinComb, assignment: Mapping[str, Vec], M: LYModel) -> Vec:
    """Image of a term (or combination) under the homomorphism fixed by ``assignment``."""
    memo: dict[Term, Vec] = {}

    def ev(t: Term) -> Vec:
        hit = memo.get(t)
        if hit is not None:
            return hit
        if t.is_leaf:
            try:
                v = tuple(Fraction(c) for c in assignment[t.name])
            except KeyError:
                raise UnassignedGenerator(f"generator {t.name!r} has no assigned vector") from None
            if len(v) != M.dim:
                raise ModelError(f"vector for {t.name!r} has length {len(v)}, expected {M.dim}")
        elif t.is_star:
            v = M.star(ev(t.args[0]), ev(t.args[1]))
        else:
            v = M.triple(*(ev(a) for a in t.args))
        memo[t] = v
        return v

    if isinstance(x, Term):
        return ev(x)
    acc = M.zero()
    for t, c in x.items():
        acc = tuple(a + c * b for a, b in zip(acc, ev(t)))
    return acc


def vector_to_text(v: Vec, names: Sequence[str]) -> str:
    parts = []
    for c, n in zip(v, names):
        if not c:
            continue
        mag = abs(c)
        coef = "" if mag == 1 else (f"{mag.numerator}" if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}") + " "
        sign = "-" if c < 0 else "+"
        if not parts:
            parts.append(("-" if c < 0 else "") + coef + n)
        else:
            parts.append(f"{sign} {coef}{n}")
    return " ".join(parts) if parts else "0"


def parse_vector(text: str, names: Sequence[str]) -> Vec:
    """Parse ``L1``, ``-L2``, ``1/2 L1 + c`` style vectors over the named basis."""
    index = {n: i for i, n in enumerate(names)}
    v = [Fraction(0)] * len(names)
    src = text.replace("-", " - ").replace("+", " + ").split()
    sign = 1
    coef: Fraction | None = None
    seen = False
    for tok in src:
        if tok in "+-":
            sign = -1 if tok == "-" else 1
            continue
        if tok in index:
            v[index[tok]] += sign * (coef if coef is not None else 1)
            sign, coef, seen = 1, None, True
            continue
        try:
            coef = Fraction(tok)
        except ValueError:
            raise ModelError(f"unknown basis element {tok!r}") from None
    if coef is not None or not seen:
        raise ModelError(f"cannot parse vector {text!r}")
    return tuple(v)


# --------------------------------------------------------------------------
# model files


@dataclass(frozen=True)
class ModelFile:
    lie: LieAlgebraData
    split: ReductivePair
    model: LYModel


def load_model_file(path: str | Path) -> ModelFile:
    """Load ``{"basis", "brackets", "h", "m"}`` JSON and induce the model.

    Bracket keys are ``"x,y"`` with x before y in the basis order (names or
    0-based indices); values map basis names to rational strings.
    """
    path = Path(path)
    data = json.loads(path.read_text(encoding="utf-8"))
    for key in ("basis", "brackets", "h", "m"):
        if key not in data:
            raise ModelError(f"model file is missing {key!r}")
    basis = list(data["basis"])
    index = {n: i for i, n in enumerate(basis)}
    brackets = {}
    for key, vec in data["brackets"].items():
        parts = [p.strip() for p in key.split(",")]
        if len(parts) != 2:
            raise MalformedTable(f"bracket key {key!r} must be 'x,y'")
        ij = []
        for p in parts:
            if p in index:
                ij.append(index[p])
            elif p.isdigit() and int(p) < len(basis):
                ij.append(int(p))
            else:
                raise MalformedTable(f"unknown basis element {p!r}")
        if not ij[0] < ij[1]:
            raise MalformedTable(f"bracket key {key!r} must list the earlier basis element first")
        if not isinstance(vec, dict):
            raise MalformedTable(f"bracket value for {key!r} must be an object")
        brackets[tuple(ij)] = vec
    L = LieAlgebraData.from_brackets(basis, brackets)
    split = ReductivePair.from_names(L, data["m"], data["h"])
    return ModelFile(L, split, induce_ly(L, split, label=path.stem))
