"""Normal forms over the Lie-Yamaguti basis.

Every rewrite step replaces a term ``x`` by ``x'`` with ``x - x'`` an
instance of one of the six identities, so the result always differs from the
input by an element of the ideal.  Products are multilinear, so rewriting
works on products whose factors are already basis elements:

``x*y``
    fixed by antisymmetry alone (``ANTISYM``).

``[y,z,w]``
    rules are tried in this order

    1. ``ANTISYM``  first slot must exceed the second (word order);
    2. ``LY5``      a product in the third slot is pulled out;
    3. ``LY3``      products in both of the first two slots;
    4. ``LY4``      a product ``u*v`` in the first slot with ``v`` above the
                    second slot is reshuffled;
    5. ``LY3``      second slot above the third: cyclic rotation, whose star
                    products are the Jacobi defect;
    6. ``LY6``      ``[[u,v,r],z,w]`` with ``r`` above ``z``, or a product in
                    the second slot that does not match the first slot, is
                    expanded by the derivation identity.
"""

from __future__ import annotations

import sys
import threading
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .hall import basis_bracket_ok
from .terms import LinComb, Term, bracket, flatten, star, to_text

__all__ = [
    "RULES",
    "NormalForm",
    "RewriteError",
    "DepthExceeded",
    "FlattenCollision",
    "Normalizer",
    "normalize",
    "rewrite_star",
    "rewrite_bracket",
    "lts_hall_rewrite",
]

RULES = ("LY1", "LY2", "LY3", "LY4", "LY5", "LY6", "ANTISYM", "CYCLE")
DEPTH_FACTOR = 64


class RewriteError(RuntimeError):
    pass


class DepthExceeded(RewriteError):
    def __init__(self, term: Term, trace: list[str]):
        self.term = term
        self.trace = trace
        tail = "\n  ".join(trace[-12:])
        super().__init__(f"rewrite depth exceeded while normalizing {to_text(term)}; innermost steps:\n  {tail}")


class FlattenCollision(RewriteError):
    """Two distinct basis elements with the same flattened word."""

    def __init__(self, u: Term, v: Term):
        self.u = u
        self.v = v
        super().__init__(f"distinct basis elements {to_text(u)} and {to_text(v)} flatten to the same word")


@dataclass(frozen=True)
class NormalForm:
    value: LinComb
    certificate: dict[str, int] = field(default_factory=dict)

    def __str__(self) -> str:
        return self.value.to_text()


def _wk(t: Term) -> tuple:
    return flatten(t).key


def rewrite_star(u: Term, v: Term) -> LinComb:
    """``u*v`` for basis elements u, v, as a signed basis element (or zero)."""
    if u is v:
        return LinComb()
    fu, fv = _wk(u), _wk(v)
    if fu > fv:
        return LinComb.of(star(u, v))
    if fu == fv:
        raise FlattenCollision(u, v)
    return LinComb.of(star(v, u), -1)


class Normalizer:
    """Memoising normal-form engine; one instance can be shared freely.

    ``counts`` accumulates rule applications over the lifetime of the
    instance (each memoised term contributes once).
    """

    def __init__(self, depth_factor: int = DEPTH_FACTOR):
        self.depth_factor = depth_factor
        self._memo: dict[Term, LinComb] = {}
        self._prov: dict[Term, LinComb] = {}
        self._lock = threading.Lock()
        self._local = threading.local()
        self.counts: Counter = Counter()

    # -- public API -------------------------------------------------------

    def normalize(self, x: LinComb | Term) -> NormalForm:
        if isinstance(x, Term):
            x = LinComb.of(x)
        before = Counter(self.counts)
        acc: dict[Term, Fraction] = {}
        for t, c in x.items():
            for b, d in self.term(t).items():
                _acc(acc, b, c * d)
        cert = {k: v - before.get(k, 0) for k, v in self.counts.items() if v - before.get(k, 0)}
        return NormalForm(LinComb._raw(acc), cert)

    def term(self, t: Term) -> LinComb:
        """Normal form of a single term."""
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        st = self._state()
        outer = not st.stack
        if outer:
            st.limit = self.depth_factor * t.size
        old = sys.getrecursionlimit()
        if outer and old < 20 * st.limit + 1000:
            sys.setrecursionlimit(20 * st.limit + 1000)
        try:
            return self._term(t, st)
        finally:
            if outer:
                st.stack.clear()
                sys.setrecursionlimit(old)

    def rewrite_bracket(self, y: Term, z: Term, w: Term) -> LinComb:
        return self.term(bracket(y, z, w))

    # -- engine -----------------------------------------------------------

    def _state(self):
        st = self._local
        if not hasattr(st, "stack"):
            st.stack = []
            st.active = set()
            st.limit = 0
        return st

    def _term(self, t: Term, st) -> LinComb:
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        if t.is_leaf:
            return LinComb.of(t)
        if len(st.stack) >= st.limit:
            raise DepthExceeded(t, [to_text(s) for s in st.stack])
        st.stack.append(t)
        try:
            parts = [self._term(a, st) for a in t.args]
            acc: dict[Term, Fraction] = {}
            if t.is_star:
                for u, cu in parts[0].items():
                    for v, cv in parts[1].items():
                        for b, d in self._star(u, v).items():
                            _acc(acc, b, cu * cv * d)
            else:
                for y, cy in parts[0].items():
                    for z, cz in parts[1].items():
                        c = cy * cz
                        for w, cw in parts[2].items():
                            for b, d in self._bracket(y, z, w, st).items():
                                _acc(acc, b, c * cw * d)
            res = LinComb._raw(acc)
        finally:
            st.stack.pop()
        if st.active and any(b in st.active for b in res):
            return res
        with self._lock:
            res = self._memo.setdefault(t, res)
        return res

    def _star(self, u: Term, v: Term) -> LinComb:
        if u is v:
            self.counts["LY1"] += 1
            return LinComb()
        if _wk(u) > _wk(v):
            return LinComb.of(star(u, v))
        self.counts["ANTISYM"] += 1
        return rewrite_star(u, v)

    def _sum(self, st, pairs: Iterable[tuple]) -> LinComb:
        acc: dict[Term, Fraction] = {}
        for c, t in pairs:
            for b, d in self._term(t, st).items():
                _acc(acc, b, c * d)
        return LinComb._raw(acc)

    def _bracket(self, y: Term, z: Term, w: Term, st) -> LinComb:
        t = bracket(y, z, w)
        hit = self._memo.get(t)
        if hit is not None:
            return hit
        if t in st.active:
            # same-size cycle: hand t back as an unknown, solved when t finishes
            return LinComb.of(t)
        options = self.candidates(y, z, w)
        rule, pairs = options[0]
        if rule is None:
            res = LinComb.of(t)
        elif not pairs:
            self.counts[rule] += 1
            res = LinComb()
        else:
            if len(st.stack) >= st.limit:
                raise DepthExceeded(t, [to_text(s) for s in st.stack])
            prov = self._prov.get(t)
            if prov is not None:
                # an earlier congruence t = prov whose unknowns may since be resolved
                options = [("REUSE", [(c, s) for s, c in prov.items()])] + options
            for rule, pairs in options:
                if rule != "REUSE":
                    self.counts[rule] += 1
                st.stack.append(t)
                st.active.add(t)
                try:
                    res = self._sum(st, pairs)
                finally:
                    st.stack.pop()
                    st.active.discard(t)
                lam = res[t]
                if lam != 1:
                    break
            else:
                raise DepthExceeded(t, [to_text(s) for s in st.stack] + [f"unsolvable cycle at {to_text(t)}"])
            if lam:
                self.counts["CYCLE"] += 1
                res = (res - LinComb.of(t, lam)) * (1 / (1 - lam))
            if any(b in st.active for b in res):
                with self._lock:
                    self._prov[t] = res
                return res
        with self._lock:
            res = self._memo.setdefault(t, res)
            self._prov.pop(t, None)
        return res

    @classmethod
    def step(cls, y: Term, z: Term, w: Term) -> tuple[str | None, list[tuple[int, Term]]]:
        """One rewrite step for ``[y,z,w]`` with basis-element slots.

        Returns ``(rule, [(coefficient, term), ...])``; rule is None when
        the bracket is itself a basis element.
        """
        return cls.candidates(y, z, w)[0]

    @staticmethod
    def candidates(y: Term, z: Term, w: Term) -> list[tuple[str | None, list[tuple[int, Term]]]]:
        """The preferred step first, then fallbacks used when a cycle is singular."""
        if y is z:
            return [("LY2", [])]
        fy, fz, fw = _wk(y), _wk(z), _wk(w)
        if fy == fz:
            raise FlattenCollision(y, z)
        out: list = []
        if fy < fz:
            out.append(("ANTISYM", [(-1, bracket(z, y, w))]))
        elif w.is_star:
            u, v = w.args
            out.append(("LY5", [(1, star(u, bracket(y, z, v))), (1, star(bracket(y, z, u), v))]))
        elif y.is_star and z.is_star:
            out.append(("LY3", _cyclic(y, z, w)))
        elif y.is_star and not (y.args[1].is_leaf and z.is_leaf and y.args[1].rank <= z.rank):
            # z is a letter here; v lies above z in word order
            out.append(("LY4", _ly4(y, z, w)))
        elif fz > fw:
            out.append(("LY3", _cyclic(y, z, w)))
        elif basis_bracket_ok(y, z, w):
            return [(None, [])]
        elif y.is_bracket:
            out.append(("LY6", _derivation_left(y, z, w)))
        else:
            raise AssertionError(f"no rule applies to {to_text(bracket(y, z, w))}")
        # fallbacks
        primary = out[0][0]
        if primary != "LY3":
            out.append(("LY3", _cyclic(y, z, w)))
        if y.is_bracket and primary != "LY6":
            out.append(("LY6", _derivation_left(y, z, w)))
        if w.is_bracket:
            out.append(("LY6", _derivation_right(y, z, w)))
        if y.is_star and primary != "LY4":
            out.append(("LY4", _ly4(y, z, w)))
        return out


def _ly4(y: Term, z: Term, w: Term) -> list[tuple[int, Term]]:
    # [u*v,z,w] = -[v*z,u,w] - [z*u,v,w]
    u, v = y.args
    return [(-1, bracket(star(v, z), u, w)), (-1, bracket(star(z, u), v, w))]


def _derivation_left(y: Term, z: Term, w: Term) -> list[tuple[int, Term]]:
    # [[u,v,r],z,w] = [u,v,[r,z,w]] - [r,[u,v,z],w] - [r,z,[u,v,w]]
    u, v, r = y.args
    return [
        (1, bracket(u, v, bracket(r, z, w))),
        (-1, bracket(r, bracket(u, v, z), w)),
        (-1, bracket(r, z, bracket(u, v, w))),
    ]


def _derivation_right(y: Term, z: Term, w: Term) -> list[tuple[int, Term]]:
    # [y,z,[p,q,r]] = [[y,z,p],q,r] + [p,[y,z,q],r] + [p,q,[y,z,r]]
    p, q, r = w.args
    return [
        (1, bracket(bracket(y, z, p), q, r)),
        (1, bracket(p, bracket(y, z, q), r)),
        (1, bracket(p, q, bracket(y, z, r))),
    ]


def _cyclic(y: Term, z: Term, w: Term) -> list[tuple[int, Term]]:
    # [y,z,w] = -[z,w,y] - [w,y,z] - (y*z)*w - (z*w)*y - (w*y)*z
    return [
        (-1, bracket(z, w, y)),
        (-1, bracket(w, y, z)),
        (-1, star(star(y, z), w)),
        (-1, star(star(z, w), y)),
        (-1, star(star(w, y), z)),
    ]


def _acc(acc: dict, t: Term, c) -> None:
    v = acc.get(t, 0) + c
    if v:
        acc[t] = v
    else:
        del acc[t]


_default = Normalizer()


def normalize(x: LinComb | Term) -> NormalForm:
    """Normal form over the basis, using a shared session-wide memo table."""
    return _default.normalize(x)


def rewrite_bracket(y: Term, z: Term, w: Term) -> LinComb:
    return _default.rewrite_bracket(y, z, w)


def lts_hall_rewrite(t: Term) -> LinComb:
    """Rewrite a bracket into Lie triple Hall brackets over the letters.

    Only the identities that do not look inside letters are used (the
    alternating law, the cyclic identity whose star products are left in
    place as Jacobi defect terms, and the derivation identity).  Letters,
    including star products, are treated as opaque.
    """
    if not t.is_bracket:
        raise ValueError("lts_hall_rewrite expects a bracket-rooted term")
    return _lts(t, {}, set(), 64 * t.size)


def _lts(t: Term, memo: dict, active: set, limit: int) -> LinComb:
    if t.is_letter:
        return LinComb.of(t)
    hit = memo.get(t)
    if hit is not None:
        return hit
    # only _lts_step marks terms active: the children are strictly smaller
    parts = [_lts(a, memo, active, limit) for a in t.args]
    acc: dict[Term, Fraction] = {}
    for y, cy in parts[0].items():
        for z, cz in parts[1].items():
            for w, cw in parts[2].items():
                c = cy * cz * cw
                for b, d in _lts_step(y, z, w, memo, active, limit).items():
                    _acc(acc, b, c * d)
    res = LinComb._raw(acc)
    memo[t] = res
    return res


def _lts_step(y: Term, z: Term, w: Term, memo, active, limit) -> LinComb:
    t = bracket(y, z, w)
    if y is z:
        return LinComb()
    fy, fz, fw = _wk(y), _wk(z), _wk(w)
    if fy == fz:
        raise FlattenCollision(y, z)
    if fy < fz:
        pairs = [(-1, bracket(z, y, w))]
    elif fz > fw:
        pairs = [(-1, bracket(z, w, y)), (-1, bracket(w, y, z))]
        defect = [(-1, star(star(y, z), w)), (-1, star(star(z, w), y)), (-1, star(star(w, y), z))]
        pairs += defect
    elif y.is_bracket and _wk(y.args[2]) > fz:
        u, v, r = y.args
        pairs = [
            (1, bracket(u, v, bracket(r, z, w))),
            (-1, bracket(r, bracket(u, v, z), w)),
            (-1, bracket(r, z, bracket(u, v, w))),
        ]
    else:
        return LinComb.of(t)
    if t in active or len(active) >= limit:
        raise DepthExceeded(t, [to_text(s) for s in active])
    active.add(t)
    try:
        acc: dict[Term, Fraction] = {}
        for c, s in pairs:
            for b, d in _lts(s, memo, active, limit).items():
                _acc(acc, b, c * d)
    finally:
        active.discard(t)
    return LinComb._raw(acc)
