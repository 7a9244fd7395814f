"""Lie triple Hall elements, the Lie-Yamaguti basis, and graded enumeration.

Letters are the non-bracket terms (generators and star products); every
predicate below compares flattened words with the word order.
"""

from __future__ import annotations

import csv
import io
import threading
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterator, Literal

from .terms import Generators, Term, bracket, flatten, star

__all__ = [
    "GradedSet",
    "ResourceCapExceeded",
    "DEFAULT_MAX_TERMS",
    "is_lts_hall",
    "is_basis_element",
    "basis_bracket_ok",
    "enumerate_magma",
    "magma_count",
    "enumerate_basis",
    "dimension_table",
    "dimension_table_csv",
]

Signature = Literal["binary+ternary", "ternary-only"]

DEFAULT_MAX_TERMS = 2_000_000


class ResourceCapExceeded(RuntimeError):
    """Raised before building a graded set larger than the configured cap."""


@dataclass(frozen=True)
class GradedSet:
    degree: int
    elements: tuple[Term, ...]

    def __post_init__(self):
        els = self.elements
        for t in els:
            if t.size != self.degree:
                raise ValueError(f"{t} has size {t.size}, expected {self.degree}")
        for a, b in zip(els, els[1:]):
            if not a.key < b.key:
                raise ValueError("elements must be strictly increasing")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.elements)

    def __contains__(self, t: object) -> bool:
        return t in set(self.elements)


def _wk(t: Term) -> tuple:
    return flatten(t).key


def is_lts_hall(t: Term) -> bool:
    """Lie triple Hall predicate over the alphabet of letters."""
    if t.is_letter:
        return True
    y, z, w = t.args
    if not (is_lts_hall(y) and is_lts_hall(z) and is_lts_hall(w)):
        return False
    return _hall_conditions(y, z, w)


def _hall_conditions(y: Term, z: Term, w: Term) -> bool:
    fz = _wk(z)
    if not (_wk(y) > fz and fz <= _wk(w)):
        return False
    return y.is_letter or fz >= _wk(y.args[2])


def basis_bracket_ok(y: Term, z: Term, w: Term) -> bool:
    """Conditions for [y,z,w] to be a basis element, given y, z, w already are."""
    if not _hall_conditions(y, z, w):
        return False
    if w.is_star:
        return False
    if y.is_star:
        v = y.args[1]
        if not (v.is_leaf and z.is_leaf and v.rank <= z.rank):
            return False
    if z.is_star:
        u, v = z.args
        if not (y.is_bracket and y.args[0] is u and y.args[1] is v and y.args[2].is_leaf):
            return False
    return True


@lru_cache(maxsize=None)
def is_basis_element(t: Term) -> bool:
    if t.is_leaf:
        return True
    if t.is_star:
        u, v = t.args
        return is_basis_element(u) and is_basis_element(v) and _wk(u) > _wk(v)
    y, z, w = t.args
    if not (is_basis_element(y) and is_basis_element(z) and is_basis_element(w)):
        return False
    # sub-brackets are basis elements, hence Hall; only the root needs checking
    return basis_bracket_ok(y, z, w)


def _compositions(n: int, parts: int, odd: bool = False) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if n >= 1 and (not odd or n % 2 == 1):
            yield (n,)
        return
    for first in range(1, n - parts + 2):
        if odd and first % 2 == 0:
            continue
        for rest in _compositions(n - first, parts - 1, odd):
            yield (first,) + rest


@lru_cache(maxsize=None)
def magma_count(k: int, n: int, signature: Signature = "binary+ternary") -> int:
    """Number of magma terms of size n on k generators (no enumeration)."""
    if n == 1:
        return k
    ternary_only = signature == "ternary-only"
    total = 0
    if not ternary_only:
        for p in range(1, n):
            total += magma_count(k, p, signature) * magma_count(k, n - p, signature)
    for p, q, r in _compositions(n, 3, odd=ternary_only):
        total += magma_count(k, p, signature) * magma_count(k, q, signature) * magma_count(k, r, signature)
    return total


_lock = threading.Lock()
_magma_cache: dict[tuple, tuple[Term, ...]] = {}
_basis_cache: dict[tuple, tuple[Term, ...]] = {}


def _check_cap(count: int, cap: int | None, what: str):
    cap = DEFAULT_MAX_TERMS if cap is None else cap
    if count > cap:
        raise ResourceCapExceeded(f"{what} has {count} elements, over the cap of {cap}")


def _magma(gens: Generators, n: int, signature: Signature) -> tuple[Term, ...]:
    key = (gens, n, signature)
    hit = _magma_cache.get(key)
    if hit is not None:
        return hit
    if n == 1:
        out = list(gens.leaves)
    else:
        out = []
        if signature != "ternary-only":
            for p in range(1, n):
                for u, v in product(_magma(gens, p, signature), _magma(gens, n - p, signature)):
                    out.append(star(u, v))
        for p, q, r in _compositions(n, 3, odd=signature == "ternary-only"):
            for x, y, z in product(_magma(gens, p, signature), _magma(gens, q, signature), _magma(gens, r, signature)):
                out.append(bracket(x, y, z))
    out.sort(key=lambda t: t.key)
    res = tuple(out)
    with _lock:
        return _magma_cache.setdefault(key, res)


def enumerate_magma(
    gens: Generators | int,
    degree: int,
    signature: Signature = "binary+ternary",
    max_terms: int | None = None,
) -> GradedSet:
    """All magma terms of the given size, sorted by the term order."""
    if isinstance(gens, int):
        gens = Generators.standard(gens)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    if signature not in ("binary+ternary", "ternary-only"):
        raise ValueError(f"unknown signature {signature!r}")
    _check_cap(magma_count(len(gens), degree, signature), max_terms, f"Mag_{degree}")
    return GradedSet(degree, _magma(gens, degree, signature))


def _basis(gens: Generators, n: int) -> tuple[Term, ...]:
    key = (gens, n)
    hit = _basis_cache.get(key)
    if hit is not None:
        return hit
    if n == 1:
        out = list(gens.leaves)
    else:
        out = []
        for p in range(1, n):
            right = _basis(gens, n - p)
            for u in _basis(gens, p):
                fu = _wk(u)
                out.extend(star(u, v) for v in right if fu > _wk(v))
        for p, q, r in _compositions(n, 3):
            zs, ws = _basis(gens, q), _basis(gens, r)
            for y in _basis(gens, p):
                fy = _wk(y)
                for z in zs:
                    if not fy > _wk(z):
                        continue
                    for w in ws:
                        if basis_bracket_ok(y, z, w):
                            out.append(bracket(y, z, w))
    out.sort(key=lambda t: t.key)
    res = tuple(out)
    with _lock:
        return _basis_cache.setdefault(key, res)


def enumerate_basis(gens: Generators | int, degree: int, max_terms: int | None = None) -> GradedSet:
    """Basis elements of the given size, built from lower-degree basis elements."""
    if isinstance(gens, int):
        gens = Generators.standard(gens)
    if degree < 1:
        raise ValueError("degree must be at least 1")
    # |B_n| <= |Mag_n|; guard on the ambient count so huge requests fail fast
    _check_cap(magma_count(len(gens), degree), max_terms, f"Mag_{degree}")
    return GradedSet(degree, _basis(gens, degree))


def dimension_table(gens: Generators | int, max_degree: int, max_terms: int | None = None) -> list[tuple[int, int]]:
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    return [(n, len(enumerate_basis(gens, n, max_terms))) for n in range(1, max_degree + 1)]


def dimension_table_csv(rows: list[tuple[int, int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree", "count"])
    w.writerows(rows)
    return buf.getvalue()
