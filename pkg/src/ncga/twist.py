"""Zhang twists of degree-one generated presentations by a graded automorphism.

The twisted product is a * b = a tau^{deg a}(b).  On a word this gives
x_{i1} * x_{i2} * ... * x_{id} = x_{i1} tau(x_{i2}) tau^2(x_{i3}) ...,
so a relation of the twisted algebra is obtained from one of the original
by applying tau^{-(k-1)} to the k-th letter.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .freealg import FreePoly, Presentation, Q


@dataclass(frozen=True)
class GradedAutomorphism:
    """Linear map on the generator span: x_j -> sum_i matrix[i][j] x_i."""
    matrix: tuple

    def __init__(self, matrix):
        rows = tuple(tuple(Q(c) for c in row) for row in matrix)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("automorphism matrix must be square")
        if linalg.rank([list(r) for r in rows], n) < n:
            raise ValueError("automorphism matrix is singular")
        object.__setattr__(self, "matrix", rows)

    @classmethod
    def diagonal(cls, entries) -> "GradedAutomorphism":
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def identity(cls, n) -> "GradedAutomorphism":
        return cls(linalg.identity(n))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def inverse(self) -> "GradedAutomorphism":
        return GradedAutomorphism(linalg.inverse([list(r) for r in self.matrix]))

    def power(self, k: int) -> list:
        """Matrix of tau^k (k may be negative)."""
        base = [list(r) for r in (self.matrix if k >= 0 else self.inverse().matrix)]
        out = linalg.identity(self.n)
        for _ in range(abs(k)):
            out = linalg.matmul(base, out)
        return out

    def compose(self, other: "GradedAutomorphism") -> "GradedAutomorphism":
        """self after other."""
        return GradedAutomorphism(linalg.matmul([list(r) for r in self.matrix],
                                                [list(r) for r in other.matrix]))

    def apply(self, f: FreePoly) -> FreePoly:
        from .freealg import apply_linear_map
        return apply_linear_map(f, self.matrix)


def _twist_relation(f: FreePoly, tau: GradedAutomorphism, powers: dict) -> FreePoly:
    gens = f.gens
    out = {}
    for w, c in f.terms.items():
        partial = {(): Q(c)}
        for k, j in enumerate(w):
            T = powers[k]
            nxt = {}
            for u, a in partial.items():
                for i in range(tau.n):
                    b = T[i][j]
                    if b:
                        key = u + (i,)
                        nxt[key] = nxt.get(key, 0) + a * b
            partial = nxt
        for u, a in partial.items():
            out[u] = out.get(u, 0) + a
    return FreePoly(gens, out)


def twist_presentation(p: Presentation, tau: GradedAutomorphism) -> Presentation:
    if not p.gens.all_weight_one:
        raise ValueError("twisting needs degree-one generators")
    if tau.n != p.n:
        raise ValueError("automorphism size does not match the generator count")
    top = max((f.degree for f in p.given_relations), default=0)
    powers = {k: tau.power(-k) for k in range(top)}
    rels = []
    for f in p.given_relations:
        g = _twist_relation(f, tau, powers)
        if not g:
            raise ValueError(f"relation {f} twists to zero")
        rels.append(g)
    return Presentation(p.gens, rels, p.order, p.name + "_twisted", dict(p.params))


def relation_span_equal(p1: Presentation, p2: Presentation) -> bool:
    """Same span of relations in every degree."""
    if p1.gens != p2.gens:
        return False
    degs = {f.degree for f in p1.relations} | {f.degree for f in p2.relations}
    for d in degs:
        a = [f for f in p1.relations if f.degree == d]
        b = [f for f in p2.relations if f.degree == d]
        words = sorted({w for f in a + b for w in f.terms})
        rows_a = [[f.coeff(w) for w in words] for f in a]
        rows_b = [[f.coeff(w) for w in words] for f in b]
        if linalg.rank(rows_a, len(words)) != linalg.rank(rows_b, len(words)):
            return False
        if rows_a and not linalg.same_row_space(rows_a, rows_b, len(words)):
            return False
    return True


def untwist_round_trip(p: Presentation, tau: GradedAutomorphism) -> bool:
    back = twist_presentation(twist_presentation(p, tau), tau.inverse())
    return relation_span_equal(p, back)


def preserves_relations(p: Presentation, tau: GradedAutomorphism) -> bool:
    """tau maps the relation span onto itself, so it induces an automorphism of the algebra."""
    moved = Presentation(p.gens, [tau.apply(f) for f in p.given_relations], p.order)
    return relation_span_equal(p, moved)
