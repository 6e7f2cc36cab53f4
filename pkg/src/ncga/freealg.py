"""Words, deglex orders and exact noncommutative polynomials over Q.

A word is a tuple of generator indices.  Polynomials map words to nonzero
gmpy2 ``mpq`` coefficients, so arithmetic is exact throughout.

    >>> G = GeneratorSet(["x", "y"])
    >>> x, y = G.gen(0), G.gen(1)
    >>> str((x + y) * (x - y))
    '-y*y + y*x - x*y + x*x'
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from gmpy2 import mpq

LESS, EQUAL, GREATER = -1, 0, 1


def Q(value) -> mpq:
    """Coerce ints, Fractions, strings like '3/2' and mpq to mpq."""
    if isinstance(value, str):
        return mpq(value.strip())
    return mpq(value)


class GeneratorSet:
    def __init__(self, names: Iterable[str], weights: Iterable[int] | None = None):
        names = list(names)
        weights = [1] * len(names) if weights is None else [int(w) for w in weights]
        if not names:
            raise ValueError("at least one generator is required")
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")
        if len(weights) != len(names):
            raise ValueError("one weight per generator")
        if any(w < 1 for w in weights):
            raise ValueError("generator weights must be positive")
        self.names = tuple(names)
        self.weights = tuple(weights)
        self.index = {n: i for i, n in enumerate(names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return (isinstance(other, GeneratorSet) and self.names == other.names
                and self.weights == other.weights)

    def __hash__(self):
        return hash((self.names, self.weights))

    def __repr__(self):
        return f"GeneratorSet({list(self.names)}, {list(self.weights)})"

    @property
    def all_weight_one(self) -> bool:
        return all(w == 1 for w in self.weights)

    def degree(self, word: tuple) -> int:
        w = self.weights
        return sum(w[i] for i in word)

    def check_word(self, word: tuple):
        n = len(self.names)
        for i in word:
            if not (isinstance(i, int) and 0 <= i < n):
                raise ValueError(f"invalid letter {i!r} for {self!r}")

    def word_str(self, word: tuple) -> str:
        return "*".join(self.names[i] for i in word) if word else "1"

    def gen(self, i) -> "FreePoly":
        if isinstance(i, str):
            i = self.index[i]
        return FreePoly(self, {(i,): 1})

    def gens(self) -> list["FreePoly"]:
        return [self.gen(i) for i in range(len(self))]

    def one(self) -> "FreePoly":
        return FreePoly(self, {(): 1})

    def zero(self) -> "FreePoly":
        return FreePoly(self, {})

    def word(self, word, coeff=1) -> "FreePoly":
        if isinstance(word, str):
            # "x*y*x", or "xyx" when every name is a single character
            letters = word.split("*") if "*" in word or word in self.index else list(word)
            word = tuple(self.index[c] for c in letters if c)
        return FreePoly(self, {tuple(word): coeff})


@dataclass(frozen=True)
class OrderSpec:
    """Weighted degree first, then lex with letters ranked by ``variable_permutation``.

    ``variable_permutation`` lists generator indices from smallest to largest.
    """
    variable_permutation: tuple
    weights: tuple
    kind: str = "deglex"

    @classmethod
    def deglex(cls, gens: GeneratorSet, smallest_first: Iterable | None = None) -> "OrderSpec":
        if smallest_first is None:
            perm = tuple(range(len(gens)))
        else:
            perm = tuple(gens.index[v] if isinstance(v, str) else int(v) for v in smallest_first)
        if sorted(perm) != list(range(len(gens))):
            raise ValueError(f"order must rank every generator exactly once: {perm}")
        return cls(perm, gens.weights)

    @cached_property
    def rank(self) -> tuple:
        r = [0] * len(self.variable_permutation)
        for pos, i in enumerate(self.variable_permutation):
            r[i] = pos
        return tuple(r)

    def key(self, word: tuple):
        w, r = self.weights, self.rank
        return (sum(w[i] for i in word), tuple(r[i] for i in word))

    def describe(self, gens: GeneratorSet) -> str:
        return "<".join(gens.names[i] for i in self.variable_permutation)


def word_compare(w1: tuple, w2: tuple, order: OrderSpec) -> int:
    n = len(order.variable_permutation)
    for i in (*w1, *w2):
        if not 0 <= i < n:
            raise ValueError("word uses a letter outside the order's generator set")
    k1, k2 = order.key(w1), order.key(w2)
    return LESS if k1 < k2 else GREATER if k1 > k2 else EQUAL


def words_below(word: tuple, order: OrderSpec) -> list:
    """Every word strictly smaller than ``word``; finite because the order is admissible."""
    from itertools import product
    deg = order.key(word)[0]
    n = len(order.variable_permutation)
    wts = order.weights
    out = []
    for length in range(deg + 1):
        for cand in product(range(n), repeat=length):
            if sum(wts[i] for i in cand) <= deg and order.key(cand) < order.key(word):
                out.append(cand)
    return out


class FreePoly:
    """Finitely supported map word -> nonzero rational.  Treat as immutable."""

    def __init__(self, gens: GeneratorSet, terms: Mapping | None = None, _clean=False):
        self.gens = gens
        if _clean:
            self.terms = terms
        else:
            t = {}
            for w, c in (terms or {}).items():
                w = tuple(w)
                c = Q(c)
                if c:
                    t[w] = t.get(w, 0) + c
                    if not t[w]:
                        del t[w]
            for w in t:
                gens.check_word(w)
            self.terms = t

    # -- arithmetic --------------------------------------------------------
    def _same(self, other):
        if not isinstance(other, FreePoly):
            return False
        if other.gens != self.gens:
            raise ValueError("polynomials live in different free algebras")
        return True

    def __add__(self, other):
        if not self._same(other):
            other = self.gens.one() * other
        t = dict(self.terms)
        for w, c in other.terms.items():
            s = t.get(w, 0) + c
            if s:
                t[w] = s
            else:
                t.pop(w, None)
        return FreePoly(self.gens, t, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return FreePoly(self.gens, {w: -c for w, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, FreePoly):
            return multiply(self, other)
        c = Q(other)
        if not c:
            return self.gens.zero()
        return FreePoly(self.gens, {w: v * c for w, v in self.terms.items()}, _clean=True)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        return self * (1 / Q(other))

    def __pow__(self, k: int):
        out = self.gens.one()
        for _ in range(k):
            out = out * self
        return out

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, FreePoly):
            return self.gens == other.gens and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.gens, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    # -- inspection --------------------------------------------------------
    def coeff(self, word) -> mpq:
        return self.terms.get(tuple(word), mpq(0))

    def support(self) -> list:
        return list(self.terms)

    @cached_property
    def degrees(self) -> frozenset:
        return frozenset(self.gens.degree(w) for w in self.terms)

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> int | None:
        """Degree when homogeneous and nonzero, else None."""
        d = self.degrees
        return next(iter(d)) if len(d) == 1 else None

    def homogeneous_part(self, d: int) -> "FreePoly":
        g = self.gens
        return FreePoly(g, {w: c for w, c in self.terms.items() if g.degree(w) == d}, _clean=True)

    def sorted_terms(self, order: OrderSpec | None = None) -> list:
        key = order.key if order is not None else (lambda w: (self.gens.degree(w), w))
        return sorted(self.terms.items(), key=lambda wc: key(wc[0]), reverse=True)

    def monic(self, order: OrderSpec) -> "FreePoly":
        _, c = leading_term(self, order)
        return self * (1 / c)

    def format(self, order: OrderSpec | None = None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_terms(order):
            neg = c < 0
            a = -c if neg else c
            ws = self.gens.word_str(w)
            if not w:
                body = str(a)
            elif a == 1:
                body = ws
            else:
                body = f"{a}*{ws}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append((" - " if neg else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"FreePoly({self.format()!r})"


def multiply(f: FreePoly, g: FreePoly) -> FreePoly:
    if f.gens != g.gens:
        raise ValueError("polynomials live in different free algebras")
    t = {}
    for u, a in f.terms.items():
        for v, b in g.terms.items():
            w = u + v
            s = t.get(w, 0) + a * b
            if s:
                t[w] = s
            else:
                del t[w]
    return FreePoly(f.gens, t, _clean=True)


def leading_term(f: FreePoly, order: OrderSpec) -> tuple:
    if not f.terms:
        raise ValueError("the zero polynomial has no leading term")
    w = max(f.terms, key=order.key)
    return w, f.terms[w]


def apply_linear_map(f: FreePoly, T) -> FreePoly:
    """Substitute x_j -> sum_i T[i][j] x_i in every word and expand."""
    gens = f.gens
    n = len(gens)
    if not gens.all_weight_one:
        raise ValueError("linear substitution needs every generator in degree 1")
    T = [[Q(v) for v in row] for row in T]
    if len(T) != n or any(len(row) != n for row in T):
        raise ValueError(f"substitution matrix must be {n}x{n}")
    images = [[(i, T[i][j]) for i in range(n) if T[i][j]] for j in range(n)]
    out = {}
    for w, c in f.terms.items():
        partial = {(): c}
        for j in w:
            nxt = {}
            for u, a in partial.items():
                for i, b in images[j]:
                    key = u + (i,)
                    nxt[key] = nxt.get(key, 0) + a * b
            partial = nxt
        for u, a in partial.items():
            out[u] = out.get(u, 0) + a
    return FreePoly(gens, {w: c for w, c in out.items() if c}, _clean=True)


@dataclass
class Presentation:
    gens: GeneratorSet
    relations: list
    order: OrderSpec
    name: str = "A"
    params: dict = field(default_factory=dict)
    # relations with the scaling they were entered with; ``relations`` holds monic copies
    given_relations: list | None = None

    def __post_init__(self):
        rels = []
        if self.given_relations is None:
            self.given_relations = list(self.relations)
        for r in self.relations:
            if r.gens != self.gens:
                raise ValueError("relation over a different generator set")
            if not r:
                raise ValueError("zero relation")
            if not r.is_homogeneous():
                raise ValueError(f"inhomogeneous relation: {r}")
            if r.degree < 2:
                raise ValueError(f"relations must have degree at least 2: {r}")
            rels.append(r.monic(self.order))
        self.relations = rels

    @classmethod
    def build(cls, names, relations, weights=None, order=None, name="A", params=None):
        """Convenience constructor; relations may be callables receiving the generators."""
        gens = GeneratorSet(names, weights)
        ords = OrderSpec.deglex(gens, order)
        gs = gens.gens()
        rels = [r(*gs) if callable(r) else r for r in relations]
        return cls(gens, rels, ords, name, dict(params or {}))

    @property
    def n(self) -> int:
        return len(self.gens)

    def degree_one_generated(self) -> bool:
        return self.gens.all_weight_one

    def opposite(self) -> "Presentation":
        """The opposite algebra: every relation word reversed."""
        rels = [FreePoly(self.gens, {w[::-1]: c for w, c in r.terms.items()}) for r in self.given_relations]
        return Presentation(self.gens, rels, self.order, self.name + "_op", dict(self.params))

    def __str__(self):
        return f"{self.name}: " + ", ".join(r.format(self.order) for r in self.relations)
