"""Brute-force ground truth for the free Lie-Yamaguti algebra.

The degree-n slice of the ideal is spanned by every instance of the defining
identities (arguments ranging over all magma terms) placed in every one-hole
context.  A context of depth d around a relation of size p factors as a
depth-one context around an element of the ideal of size < n, so the slice is
built degree by degree: fresh instances of size n, plus the reduced basis of
each lower slice wrapped once in ``*`` or a bracket.  All relations are
homogeneous in every generator, so elimination runs blockwise per
multidegree.

Nothing here consults the Hall predicates or the rewriting engine.
"""

from __future__ import annotations

import os
import random
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator, Literal

from .hall import ResourceCapExceeded, _compositions, enumerate_basis, enumerate_magma, magma_count
from .linalg import Echelon
from .terms import Generators, LinComb, Term, bracket, star

__all__ = [
    "RelationSpan",
    "FreenessReport",
    "DegreeMismatch",
    "DEFAULT_MAX_AMBIENT",
    "max_ambient",
    "relation_instances",
    "lts_relation_instances",
    "relation_span",
    "quotient_dimension",
    "contains",
    "verify_basis_freeness",
    "lts_relation_span",
    "lts_quotient_dimension",
]

Signature = Literal["binary+ternary", "ternary-only"]
DEFAULT_MAX_AMBIENT = 200_000
ALL_FORMS = ("diagonal", "polarized")


class DegreeMismatch(ValueError):
    pass


def max_ambient() -> int:
    env = os.environ.get("LYHALL_MAX_AMBIENT")
    return int(env) if env else DEFAULT_MAX_AMBIENT


def multidegree(t: Term) -> tuple:
    c: Counter = Counter()
    stack = [t]
    while stack:
        s = stack.pop()
        if s.is_leaf:
            c[s.rank] += 1
        else:
            stack.extend(s.args)
    return tuple(sorted(c.items()))


# --------------------------------------------------------------------------
# relation instances


def _add(row: dict, t: Term, c) -> None:
    v = row.get(t, 0) + c
    if v:
        row[t] = v
    else:
        row.pop(t, None)


def _row(*pairs) -> dict:
    r: dict = {}
    for c, t in pairs:
        _add(r, t, Fraction(c))
    return r


def _args(mag, n: int, parts: int, odd: bool = False) -> Iterator[tuple[Term, ...]]:
    for sizes in _compositions(n, parts, odd):
        yield from product(*(mag(s) for s in sizes))


def relation_instances(
    mag, n: int, forms: Iterable[str] = ALL_FORMS
) -> Iterator[tuple[str, dict]]:
    """Instances of the six Lie-Yamaguti identities of total size n.

    ``mag(s)`` returns the magma terms of size s.  Yields ``(rule, row)``
    with rule in LY1..LY6; zero rows are skipped.
    """
    forms = set(forms)
    # LY1  x*x = 0
    for x, y in _args(mag, n, 2):
        if "diagonal" in forms and x is y:
            yield "LY1", _row((1, star(x, x)))
        if "polarized" in forms:
            r = _row((1, star(x, y)), (1, star(y, x)))
            if r:
                yield "LY1", r
    # LY2  [x,x,y] = 0
    for x, y, z in _args(mag, n, 3):
        if "diagonal" in forms and x is y:
            yield "LY2", _row((1, bracket(x, x, z)))
        if "polarized" in forms:
            yield "LY2", _row((1, bracket(x, y, z)), (1, bracket(y, x, z)))
    # LY3  sum_cyc [x,y,z] + (x*y)*z = 0
    for x, y, z in _args(mag, n, 3):
        r = _row(
            (1, bracket(x, y, z)), (1, bracket(y, z, x)), (1, bracket(z, x, y)),
            (1, star(star(x, y), z)), (1, star(star(y, z), x)), (1, star(star(z, x), y)),
        )
        if r:
            yield "LY3", r
    # LY4  sum_cyc [x*y,z,w] = 0
    for x, y, z, w in _args(mag, n, 4):
        r = _row((1, bracket(star(x, y), z, w)), (1, bracket(star(y, z), x, w)), (1, bracket(star(z, x), y, w)))
        if r:
            yield "LY4", r
    # LY5  [x,y,z*w] = z*[x,y,w] + [x,y,z]*w
    for x, y, z, w in _args(mag, n, 4):
        r = _row((1, bracket(x, y, star(z, w))), (-1, star(z, bracket(x, y, w))), (-1, star(bracket(x, y, z), w)))
        if r:
            yield "LY5", r
    # LY6  [x,y,[u,v,w]] = [[x,y,u],v,w] + [u,[x,y,v],w] + [u,v,[x,y,w]]
    for x, y, u, v, w in _args(mag, n, 5):
        r = _row(
            (1, bracket(x, y, bracket(u, v, w))),
            (-1, bracket(bracket(x, y, u), v, w)),
            (-1, bracket(u, bracket(x, y, v), w)),
            (-1, bracket(u, v, bracket(x, y, w))),
        )
        if r:
            yield "LY6", r


def lts_relation_instances(
    mag, n: int, forms: Iterable[str] = ALL_FORMS
) -> Iterator[tuple[str, dict]]:
    """Lie triple system identities of total size n over the ternary magma."""
    forms = set(forms)
    for x, y, z in _args(mag, n, 3, odd=True):
        if "diagonal" in forms and x is y:
            yield "LTS1", _row((1, bracket(x, x, z)))
        if "polarized" in forms:
            yield "LTS1", _row((1, bracket(x, y, z)), (1, bracket(y, x, z)))
        r = _row((1, bracket(x, y, z)), (1, bracket(y, z, x)), (1, bracket(z, x, y)))
        if r:
            yield "LTS2", r
    for x, y, u, v, w in _args(mag, n, 5, odd=True):
        r = _row(
            (1, bracket(x, y, bracket(u, v, w))),
            (-1, bracket(bracket(x, y, u), v, w)),
            (-1, bracket(u, bracket(x, y, v), w)),
            (-1, bracket(u, v, bracket(x, y, w))),
        )
        if r:
            yield "LTS3", r


def _lifts(mag, n: int, lower: dict[int, list[dict]], signature: Signature) -> Iterator[dict]:
    """Depth-one contexts of size n around spanning rows of lower slices."""
    odd = signature == "ternary-only"
    for p, rows in lower.items():
        rest = n - p
        if not rows or rest < 1:
            continue
        if not odd:
            for m in mag(rest):
                for r in rows:
                    yield {star(t, m): c for t, c in r.items()}
                    yield {star(m, t): c for t, c in r.items()}
        for a, b in _args(mag, rest, 2, odd):
            for r in rows:
                yield {bracket(t, a, b): c for t, c in r.items()}
                yield {bracket(a, t, b): c for t, c in r.items()}
                yield {bracket(a, b, t): c for t, c in r.items()}


# --------------------------------------------------------------------------
# spans


@dataclass
class RelationSpan:
    """The degree-n slice of the ideal, kept as one echelon form per multidegree.

    ``rows`` lists a reduced spanning set of the slice (the pivot rows);
    ``generated`` counts the candidate rows fed to elimination.
    """

    gens: Generators
    degree: int
    signature: Signature
    ambient: tuple[Term, ...]
    blocks: dict[tuple, Echelon] = field(repr=False)
    generated: int = 0
    rule_counts: dict[str, int] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return sum(e.rank for e in self.blocks.values())

    @property
    def rows(self) -> list[dict]:
        return [r for e in self.blocks.values() for r in e.pivots.values()]

    @property
    def quotient_dimension(self) -> int:
        return len(self.ambient) - self.rank

    def reduce(self, x: LinComb | dict | Term) -> dict:
        """Remainder of x modulo the slice, as a dict term -> Fraction."""
        if isinstance(x, Term):
            x = {x: 1}
        items = x.items() if isinstance(x, (LinComb, dict)) else x
        parts: dict[tuple, dict] = defaultdict(dict)
        for t, c in items:
            if t.size != self.degree:
                raise DegreeMismatch(f"{t} has size {t.size}, span has degree {self.degree}")
            parts[multidegree(t)][t] = Fraction(c)
        out: dict = {}
        for md, part in parts.items():
            e = self.blocks.get(md)
            out.update(e.reduce(part) if e is not None else part)
        return out

    def contains(self, x: LinComb | dict | Term) -> bool:
        return not self.reduce(x)


_span_cache: dict[tuple, RelationSpan] = {}


def _build_span(
    gens: Generators,
    n: int,
    signature: Signature,
    forms: tuple[str, ...],
    shuffle_seed: int | None,
    cap: int,
) -> RelationSpan:
    count = magma_count(len(gens), n, signature)
    if count > cap:
        raise ResourceCapExceeded(f"ambient dimension {count} at degree {n} exceeds the cap of {cap}")
    key = (gens, n, signature, forms)
    if shuffle_seed is None and key in _span_cache:
        return _span_cache[key]

    def mag(s: int) -> tuple[Term, ...]:
        return enumerate_magma(gens, s, signature, max_terms=cap).elements

    odd = signature == "ternary-only"
    lower: dict[int, list[dict]] = {}
    for p in range(1, n):
        if odd and p % 2 == 0:
            continue
        lower[p] = _build_span(gens, p, signature, forms, None, cap).rows

    instances = relation_instances if not odd else lts_relation_instances
    rule_counts: Counter = Counter()
    rows: list[dict] = []
    for rule, r in instances(mag, n, forms):
        rule_counts[rule] += 1
        rows.append(r)
    rows.extend(_lifts(mag, n, lower, signature))
    if shuffle_seed is not None:
        random.Random(shuffle_seed).shuffle(rows)

    order = lambda t: t.key  # noqa: E731
    blocks: dict[tuple, Echelon] = {}
    md_cache: dict[Term, tuple] = {}
    for r in rows:
        t0 = next(iter(r))
        md = md_cache.get(t0)
        if md is None:
            md = md_cache[t0] = multidegree(t0)
        e = blocks.get(md)
        if e is None:
            e = blocks[md] = Echelon(order)
        e.add(r)
    span = RelationSpan(
        gens=gens,
        degree=n,
        signature=signature,
        ambient=mag(n),
        blocks=blocks,
        generated=len(rows),
        rule_counts=dict(rule_counts),
    )
    if shuffle_seed is None:
        _span_cache[key] = span
    return span


def _gens(gens: Generators | int) -> Generators:
    return Generators.standard(gens) if isinstance(gens, int) else gens


def relation_span(
    gens: Generators | int,
    degree: int,
    *,
    forms: Iterable[str] = ALL_FORMS,
    shuffle_seed: int | None = None,
    max_ambient_dim: int | None = None,
) -> RelationSpan:
    """Degree-n slice of the Lie-Yamaguti ideal in the two-operator magma algebra.

    ``forms`` selects which versions of the two alternating identities are
    used (diagonal ``x*x``, polarized ``x*y + y*x``); ``shuffle_seed``
    permutes the candidate rows before elimination.
    """
    if degree < 1:
        raise ValueError("degree must be at least 1")
    forms = tuple(sorted(set(forms)))
    cap = max_ambient() if max_ambient_dim is None else max_ambient_dim
    return _build_span(_gens(gens), degree, "binary+ternary", forms, shuffle_seed, cap)


def lts_relation_span(
    gens: Generators | int,
    degree: int,
    *,
    forms: Iterable[str] = ALL_FORMS,
    shuffle_seed: int | None = None,
    max_ambient_dim: int | None = None,
) -> RelationSpan:
    """Degree-n slice of the Lie triple system ideal in the ternary magma algebra."""
    if degree < 1:
        raise ValueError("degree must be at least 1")
    forms = tuple(sorted(set(forms)))
    cap = max_ambient() if max_ambient_dim is None else max_ambient_dim
    return _build_span(_gens(gens), degree, "ternary-only", forms, shuffle_seed, cap)


def quotient_dimension(gens: Generators | int, degree: int, **kw) -> int:
    return relation_span(gens, degree, **kw).quotient_dimension


def lts_quotient_dimension(gens: Generators | int, degree: int, **kw) -> int:
    if degree % 2 == 0:
        return 0
    return lts_relation_span(gens, degree, **kw).quotient_dimension


def contains(span: RelationSpan, x: LinComb | Term) -> bool:
    """Exact membership of a homogeneous combination in the ideal slice."""
    if isinstance(x, Term):
        x = LinComb.of(x)
    return span.contains(x)


@dataclass(frozen=True)
class FreenessReport:
    gens: int
    degree: int
    expected: int
    got: int
    independent: bool
    spanning: bool

    @property
    def passed(self) -> bool:
        return self.independent and self.spanning

    def as_dict(self) -> dict:
        return {
            "gens": self.gens,
            "degree": self.degree,
            "expected": self.expected,
            "got": self.got,
            "independent": self.independent,
            "spanning": self.spanning,
            "pass": self.passed,
        }


def verify_basis_freeness(gens: Generators | int, degree: int, **kw) -> FreenessReport:
    """Check that the basis elements of one degree form a basis of the quotient slice."""
    g = _gens(gens)
    span = relation_span(g, degree, **kw)
    basis = enumerate_basis(g, degree).elements
    images = Echelon(lambda t: t.key)
    for b in basis:
        images.add(span.reduce({b: 1}))
    dim = span.quotient_dimension
    return FreenessReport(
        gens=len(g),
        degree=degree,
        expected=len(basis),
        got=dim,
        independent=images.rank == len(basis),
        spanning=len(basis) == dim,
    )
