"""Shared helpers for the test modules."""

from __future__ import annotations

import random
from fractions import Fraction

from lyhall.terms import Generators, Term, bracket, star


def random_term(rng: random.Random, gens: Generators, n: int, bracket_bias: float = 0.5) -> Term:
    """A random magma term of size exactly n."""
    if n == 1:
        return rng.choice(gens.leaves)
    if n >= 3 and rng.random() < bracket_bias:
        a = rng.randint(1, n - 2)
        b = rng.randint(1, n - 1 - a)
        return bracket(
            random_term(rng, gens, a, bracket_bias),
            random_term(rng, gens, b, bracket_bias),
            random_term(rng, gens, n - a - b, bracket_bias),
        )
    a = rng.randint(1, n - 1)
    return star(random_term(rng, gens, a, bracket_bias), random_term(rng, gens, n - a, bracket_bias))


def random_vector(rng: random.Random, dim: int, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(Fraction(rng.randint(lo, hi)) for _ in range(dim))


def gl3_model():
    """gl(3) with h the diagonal matrices and m the off-diagonal ones (reductive)."""
    from lyhall.models import LieAlgebraData, ReductivePair, induce_ly

    names = [f"E{i}{j}" for i in range(1, 4) for j in range(1, 4)]
    brackets = {}
    for p, x in enumerate(names):
        for y in names[p + 1:]:
            i, j, k, l = int(x[1]), int(x[2]), int(y[1]), int(y[2])
            v = {}
            if j == k:
                v[f"E{i}{l}"] = v.get(f"E{i}{l}", 0) + 1
            if l == i:
                v[f"E{k}{j}"] = v.get(f"E{k}{j}", 0) - 1
            v = {n: c for n, c in v.items() if c}
            if v:
                brackets[(x, y)] = v
    L = LieAlgebraData.from_brackets(names, brackets)
    h = [n for n in names if n[1] == n[2]]
    m = [n for n in names if n[1] != n[2]]
    split = ReductivePair.from_names(L, m, h)
    return L, split, induce_ly(L, split, label="gl3")
