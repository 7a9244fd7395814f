"""Terms of the free magma with a binary product ``*`` and a triple bracket.

Terms are hash-consed: two structurally equal terms are the same Python
object, so ``==`` and ``hash`` are cheap and terms can be used freely as
dictionary keys.  Every term carries its size and a sort key realising the
total order used throughout the package:

* larger size is larger;
* among generators, the generator rank decides;
* a bracket is larger than a star of the same size;
* nodes of the same kind compare their children left to right.

Words (images of :func:`flatten`) are ordered by length first and then
letter by letter with the term order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

__all__ = [
    "Kind",
    "Term",
    "Word",
    "LinComb",
    "Generators",
    "ParseError",
    "UnknownGenerator",
    "leaf",
    "star",
    "bracket",
    "size",
    "compare_terms",
    "compare_words",
    "flatten",
    "parse",
    "parse_lincomb",
    "to_text",
]


class Kind(IntEnum):
    # The numeric values double as the tie-break between node kinds of equal size.
    LEAF = 0
    STAR = 1
    BRACKET = 2


class Term:
    """A node of the free two-operator magma.  Build with leaf/star/bracket."""

    __slots__ = ("kind", "args", "name", "rank", "size", "key", "_hash", "_word", "__weakref__")

    kind: Kind
    args: tuple[Term, ...]
    name: str | None
    rank: int
    size: int
    key: tuple

    def __new__(cls, *a, **kw):
        raise TypeError("use leaf(), star() or bracket() to build terms")

    @property
    def is_leaf(self) -> bool:
        return self.kind is Kind.LEAF

    @property
    def is_star(self) -> bool:
        return self.kind is Kind.STAR

    @property
    def is_bracket(self) -> bool:
        return self.kind is Kind.BRACKET

    @property
    def is_letter(self) -> bool:
        """True for elements that are not bracket-rooted (generators and stars)."""
        return self.kind is not Kind.BRACKET

    def __hash__(self) -> int:
        return self._hash

    def __eq__(self, other: object) -> bool:
        return self is other

    def __lt__(self, other: Term) -> bool:
        return self.key < other.key

    def __le__(self, other: Term) -> bool:
        return self.key <= other.key

    def __gt__(self, other: Term) -> bool:
        return self.key > other.key

    def __ge__(self, other: Term) -> bool:
        return self.key >= other.key

    def __repr__(self) -> str:
        return f"Term({to_text(self)!r})"

    def __str__(self) -> str:
        return to_text(self)

    def __reduce__(self):
        if self.kind is Kind.LEAF:
            return (leaf, (self.name, self.rank))
        if self.kind is Kind.STAR:
            return (star, self.args)
        return (bracket, self.args)


_INTERN: dict[tuple, Term] = {}


def _make(ident: tuple, kind: Kind, args: tuple, name: str | None, rank: int, sz: int, key: tuple) -> Term:
    t = _INTERN.get(ident)
    if t is not None:
        return t
    t = object.__new__(Term)
    t.kind = kind
    t.args = args
    t.name = name
    t.rank = rank
    t.size = sz
    t.key = key
    t._hash = hash(ident)
    t._word = None
    # setdefault keeps a single canonical object if two threads race here
    return _INTERN.setdefault(ident, t)


def leaf(name: str, rank: int) -> Term:
    return _make((Kind.LEAF, name, rank), Kind.LEAF, (), name, rank, 1, (1, 0, rank))


def star(left: Term, right: Term) -> Term:
    sz = left.size + right.size
    return _make(
        (Kind.STAR, left, right), Kind.STAR, (left, right), None, -1, sz,
        (sz, 1, left.key, right.key),
    )


def bracket(first: Term, second: Term, third: Term) -> Term:
    sz = first.size + second.size + third.size
    return _make(
        (Kind.BRACKET, first, second, third), Kind.BRACKET, (first, second, third), None, -1, sz,
        (sz, 2, first.key, second.key, third.key),
    )


def size(t: Term) -> int:
    return t.size


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def compare_terms(x: Term, y: Term) -> int:
    """Three-way comparison under the term order: -1, 0 or 1."""
    if x.size == y.size and x.is_leaf != y.is_leaf:
        raise AssertionError("a generator and a composite cannot have equal size")
    return _cmp(x.key, y.key)


@dataclass(frozen=True)
class Word:
    """A word over the letters (non-bracket terms)."""

    letters: tuple[Term, ...]

    def __post_init__(self):
        for x in self.letters:
            if x.is_bracket:
                raise ValueError(f"bracket-rooted term {x} is not a letter")

    @property
    def key(self) -> tuple:
        return (len(self.letters), tuple(x.key for x in self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.letters)

    def __lt__(self, other: Word) -> bool:
        return self.key < other.key

    def __le__(self, other: Word) -> bool:
        return self.key <= other.key

    def __gt__(self, other: Word) -> bool:
        return self.key > other.key

    def __ge__(self, other: Word) -> bool:
        return self.key >= other.key

    def __str__(self) -> str:
        return " ".join(to_text(x) for x in self.letters)


def flatten(t: Term) -> Word:
    """Forget every bracket, keeping star-rooted subterms as atomic letters."""
    w = t._word
    if w is None:
        if t.is_bracket:
            letters: tuple[Term, ...] = ()
            for a in t.args:
                letters += flatten(a).letters
        else:
            letters = (t,)
        w = Word(letters)
        t._word = w
    return w


def word_key(t: Term) -> tuple:
    """Sort key of flatten(t) under the word order."""
    return flatten(t).key


def compare_words(w1: Word, w2: Word) -> int:
    return _cmp(w1.key, w2.key)


# --------------------------------------------------------------------------
# printing and parsing


def to_text(t: Term) -> str:
    """Fully parenthesised rendering; parse(to_text(t)) == t."""
    if t.kind is Kind.LEAF:
        return t.name
    if t.kind is Kind.STAR:
        return f"({to_text(t.args[0])}*{to_text(t.args[1])})"
    return "[" + ",".join(to_text(a) for a in t.args) + "]"


class ParseError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownGenerator(ParseError):
    def __init__(self, name: str, offset: int):
        super().__init__(f"unknown generator {name!r}", offset)
        self.name = name


IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<num>[0-9]+(?:/[0-9]+)?)|(?P<op>[()\[\],*+-]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    raw = text.encode("utf-8")
    while True:
        m = _TOKEN.match(text, pos)
        if m is None:
            rest = text[pos:]
            if rest.strip():
                off = len(text[: pos + len(rest) - len(rest.lstrip())].encode("utf-8"))
                raise ParseError(f"unexpected character {rest.lstrip()[0]!r}", off)
            toks.append(("end", "", len(raw)))
            return toks
        kind = m.lastgroup
        off = len(text[: m.start(kind)].encode("utf-8"))
        toks.append((kind, m.group(kind), off))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, gens: Mapping[str, Term]):
        self.toks = _tokenize(text)
        self.i = 0
        self.gens = gens

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, value: str | None = None, kind: str | None = None) -> tuple[str, str, int]:
        tok = self.toks[self.i]
        if (value is not None and tok[1] != value) or (kind is not None and tok[0] != kind):
            want = repr(value) if value is not None else kind
            got = repr(tok[1]) if tok[0] != "end" else "end of input"
            raise ParseError(f"expected {want}, found {got}", tok[2])
        self.i += 1
        return tok

    def chain(self) -> Term:
        t = self.primary()
        while self.peek()[1] == "*":
            self.take("*")
            t = star(t, self.primary())
        return t

    def primary(self) -> Term:
        kind, val, off = self.peek()
        if kind == "ident":
            self.take()
            try:
                return self.gens[val]
            except KeyError:
                raise UnknownGenerator(val, off) from None
        if val == "(":
            self.take("(")
            t = self.chain()
            self.take(")")
            return t
        if val == "[":
            self.take("[")
            x = self.chain()
            self.take(",")
            y = self.chain()
            self.take(",")
            z = self.chain()
            self.take("]")
            return bracket(x, y, z)
        got = repr(val) if kind != "end" else "end of input"
        raise ParseError(f"expected a term, found {got}", off)

    def coefficient(self) -> Fraction:
        kind, val, _ = self.peek()
        if kind == "num":
            self.take()
            return Fraction(val)
        return Fraction(1)

    def lincomb(self) -> LinComb:
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        acc: dict[Term, Fraction] = {}
        while True:
            c = sign * self.coefficient()
            t = self.chain()
            acc[t] = acc.get(t, Fraction(0)) + c
            nxt = self.peek()
            if nxt[0] == "op" and nxt[1] in "+-":
                sign = -1 if self.take()[1] == "-" else 1
                continue
            break
        return LinComb(acc)


class Generators:
    """An ordered generator set; position in the list is the generator rank."""

    def __init__(self, names: Iterable[str]):
        names = list(names)
        if not names:
            raise ValueError("at least one generator is required")
        for n in names:
            if not IDENT.fullmatch(n):
                raise ValueError(f"invalid generator name {n!r}")
        if len(set(names)) != len(names):
            raise ValueError("generator names must be unique")
        self.names: tuple[str, ...] = tuple(names)
        self.leaves: tuple[Term, ...] = tuple(leaf(n, i) for i, n in enumerate(names))
        self._by_name = dict(zip(self.names, self.leaves))

    @classmethod
    def standard(cls, k: int) -> Generators:
        """The first k lowercase letters a < b < c < ..."""
        if not 1 <= k <= 26:
            raise ValueError("standard generator sets have 1 to 26 generators")
        return cls("abcdefghijklmnopqrstuvwxyz"[:k])

    def __len__(self) -> int:
        return len(self.names)

    def __iter__(self) -> Iterator[Term]:
        return iter(self.leaves)

    def __getitem__(self, name: str) -> Term:
        return self._by_name[name]

    def __contains__(self, t: object) -> bool:
        return isinstance(t, Term) and t.is_leaf and self._by_name.get(t.name) is t

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Generators) and other.names == self.names

    def __hash__(self) -> int:
        return hash(self.names)

    def __repr__(self) -> str:
        return f"Generators({list(self.names)!r})"

    def parse(self, text: str) -> Term:
        return parse(text, self)

    def parse_lincomb(self, text: str) -> LinComb:
        return parse_lincomb(text, self)


def parse(text: str, gens: Generators | Sequence[str]) -> Term:
    """Parse a single term; raises ParseError (with a byte offset) on bad input."""
    if not isinstance(gens, Generators):
        gens = Generators(gens)
    p = _Parser(text, gens._by_name)
    t = p.chain()
    p.take(kind="end")
    return t


def parse_lincomb(text: str, gens: Generators | Sequence[str]) -> LinComb:
    """Parse ``[coef] term (+|- [coef] term)*``; ``0`` is the zero combination."""
    if not isinstance(gens, Generators):
        gens = Generators(gens)
    p = _Parser(text, gens._by_name)
    if [t[1] for t in p.toks] == ["0", ""]:
        return LinComb()
    lc = p.lincomb()
    p.take(kind="end")
    return lc


# --------------------------------------------------------------------------
# linear combinations


def _fmt_coef(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class LinComb:
    """A finite formal sum of terms with nonzero rational coefficients."""

    __slots__ = ("_d", "_hash")

    def __init__(self, entries: Mapping[Term, object] | Iterable[tuple[Term, object]] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        d: dict[Term, Fraction] = {}
        for t, c in items:
            c = d.get(t, 0) + Fraction(c)
            if c:
                d[t] = c
            else:
                d.pop(t, None)
        self._d = d
        self._hash = None

    @classmethod
    def _raw(cls, d: dict[Term, Fraction]) -> LinComb:
        lc = object.__new__(cls)
        lc._d = d
        lc._hash = None
        return lc

    @classmethod
    def of(cls, t: Term, c=1) -> LinComb:
        c = Fraction(c)
        return cls._raw({t: c} if c else {})

    def items(self):
        return self._d.items()

    def terms(self) -> list[Term]:
        """Support, sorted increasingly."""
        return sorted(self._d, key=lambda t: t.key)

    def __getitem__(self, t: Term) -> Fraction:
        return self._d.get(t, Fraction(0))

    def __contains__(self, t: Term) -> bool:
        return t in self._d

    def __len__(self) -> int:
        return len(self._d)

    def __iter__(self) -> Iterator[Term]:
        return iter(self._d)

    def __bool__(self) -> bool:
        return bool(self._d)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Term):
            other = LinComb.of(other)
        if isinstance(other, int) and other == 0:
            return not self._d
        if not isinstance(other, LinComb):
            return NotImplemented
        return self._d == other._d

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._d.items()))
        return self._hash

    def __add__(self, other: LinComb | Term) -> LinComb:
        if isinstance(other, Term):
            other = LinComb.of(other)
        d = dict(self._d)
        for t, c in other._d.items():
            s = d.get(t, 0) + c
            if s:
                d[t] = s
            else:
                del d[t]
        return LinComb._raw(d)

    __radd__ = __add__

    def __neg__(self) -> LinComb:
        return LinComb._raw({t: -c for t, c in self._d.items()})

    def __sub__(self, other: LinComb | Term) -> LinComb:
        if isinstance(other, Term):
            other = LinComb.of(other)
        return self + (-other)

    def __rsub__(self, other: LinComb | Term) -> LinComb:
        return (-self) + other

    def __mul__(self, scalar) -> LinComb:
        s = Fraction(scalar)
        if not s:
            return LinComb()
        return LinComb._raw({t: c * s for t, c in self._d.items()})

    __rmul__ = __mul__

    def degrees(self) -> set[int]:
        return {t.size for t in self._d}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def to_text(self) -> str:
        """Sum of terms, largest first, e.g. ``-1/2 [b,a,a] + 1 ((b*a)*a)``."""
        if not self._d:
            return "0"
        parts = []
        for t in sorted(self._d, key=lambda t: t.key, reverse=True):
            c = self._d[t]
            if not parts:
                parts.append(f"{_fmt_coef(c)} {to_text(t)}")
            elif c < 0:
                parts.append(f"- {_fmt_coef(-c)} {to_text(t)}")
            else:
                parts.append(f"+ {_fmt_coef(c)} {to_text(t)}")
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"LinComb({self.to_text()!r})"
