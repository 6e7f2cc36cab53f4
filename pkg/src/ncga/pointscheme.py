"""Truncated point schemes: multilinearized relations, matrix forms, F_p probes.

A point of X_m is a tuple of m points of projective (n-1)-space, one per
slot.  Slot s has coordinates ``<name>_<s>`` for each generator name.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from itertools import product
from math import gcd, lcm

from gmpy2 import mpq

from . import linalg
from .freealg import FreePoly, Presentation, Q

DEFAULT_BUDGET = 10 ** 7
DEFAULT_PRIMES = (5, 7, 11)


class BudgetExceeded(RuntimeError):
    pass


def budget() -> int:
    return int(os.environ.get("NCGA_BUDGET", DEFAULT_BUDGET))


# ---------------------------------------------------------------------------
# commutative polynomials


class CommPoly:
    """Commutative polynomial over Q in a fixed tuple of variables."""

    def __init__(self, names, terms=None):
        self.names = tuple(names)
        k = len(self.names)
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != k:
                raise ValueError("exponent vector has the wrong length")
            c = Q(c)
            if c:
                t[e] = t.get(e, 0) + c
                if not t[e]:
                    del t[e]
        self.terms = t

    @classmethod
    def variable(cls, names, name) -> "CommPoly":
        names = tuple(names)
        e = [0] * len(names)
        e[names.index(name)] = 1
        return cls(names, {tuple(e): 1})

    @classmethod
    def constant(cls, names, c) -> "CommPoly":
        return cls(names, {(0,) * len(tuple(names)): c})

    def _coerce(self, other):
        if isinstance(other, CommPoly):
            if other.names != self.names:
                raise ValueError("polynomials over different variables")
            return other
        return CommPoly.constant(self.names, other)

    def __add__(self, other):
        other = self._coerce(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t.get(e, 0) + c
        return CommPoly(self.names, t)

    __radd__ = __add__

    def __neg__(self):
        return CommPoly(self.names, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        t = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return CommPoly(self.names, t)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, CommPoly):
            return self.names == other.names and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.names, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def variables_used(self) -> set:
        return {i for e in self.terms for i, a in enumerate(e) if a}

    def evaluate(self, values) -> mpq:
        """Exact value at a point; ``values`` maps variable index -> rational."""
        total = mpq(0)
        for e, c in self.terms.items():
            v = c
            for i, a in enumerate(e):
                if a:
                    v *= Q(values[i]) ** a
            total += v
        return total

    def substitute(self, values: dict) -> "CommPoly":
        """Replace some variables (by index) with rationals."""
        t = {}
        for e, c in self.terms.items():
            v = c
            ne = list(e)
            for i, x in values.items():
                if e[i]:
                    v *= Q(x) ** e[i]
                    ne[i] = 0
            ne = tuple(ne)
            t[ne] = t.get(ne, 0) + v
        return CommPoly(self.names, t)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda ec: ec[0], reverse=True)

    def normalized(self) -> "CommPoly":
        """Integer coefficients with gcd 1 and a positive lex-leading coefficient."""
        if not self.terms:
            return self
        den = lcm(*[int(c.denominator) for c in self.terms.values()])
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        lead = self.sorted_terms()[0][1]
        if lead < 0:
            g = -g
        return CommPoly(self.names, {e: mpq(v, g) for e, v in ints.items()})

    def format(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for e, c in self.sorted_terms():
            mon = "*".join(n if a == 1 else f"{n}^{a}" for n, a in zip(self.names, e) if a)
            a = -c if c < 0 else c
            body = mon if a == 1 and mon else (f"{a}*{mon}" if mon else str(a))
            if not out:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"CommPoly({self.format()!r})"


def slot_names(gen_names, m: int) -> tuple:
    return tuple(f"{g}_{s}" for s in range(m) for g in gen_names)


# ---------------------------------------------------------------------------
# multilinearization


def multilinearize(f: FreePoly, offset: int = 0, nslots: int | None = None) -> CommPoly:
    """x_{j1}...x_{jd} -> y_{offset,j1} y_{offset+1,j2} ... y_{offset+d-1,jd}."""
    gens = f.gens
    if not gens.all_weight_one:
        raise ValueError("multilinearization needs degree-one generators")
    if not f.is_homogeneous():
        raise ValueError("relation must be homogeneous")
    d = f.degree or 0
    if nslots is None:
        nslots = offset + d
    if offset + d > nslots:
        raise ValueError("relation does not fit in the available slots")
    n = len(gens)
    names = slot_names(gens.names, nslots)
    terms = {}
    for w, c in f.terms.items():
        e = [0] * (n * nslots)
        for k, j in enumerate(w):
            e[(offset + k) * n + j] += 1
        terms[tuple(e)] = terms.get(tuple(e), 0) + c
    return CommPoly(names, terms)


@dataclass
class MultiProjSystem:
    n: int                  # coordinates per slot
    m: int                  # number of slots
    gen_names: tuple
    equations: list         # CommPoly
    origins: list           # (relation index, offset)

    @property
    def names(self) -> tuple:
        return slot_names(self.gen_names, self.m)


def truncated_scheme_system(p: Presentation, m: int) -> MultiProjSystem:
    if not p.gens.all_weight_one:
        raise ValueError("point schemes need degree-one generators")
    eqs, origins = [], []
    for j, f in enumerate(p.given_relations):
        d = f.degree
        for i in range(m - d + 1):
            eqs.append(multilinearize(f, i, m))
            origins.append((j, i))
    return MultiProjSystem(p.n, m, p.gens.names, eqs, origins)


# ---------------------------------------------------------------------------
# matrix forms for quadratic relations


@dataclass
class MatrixForm:
    """Relations as matrix products.

    orientation "left": relation r = sum_j L[r][j] * (slot-1 coordinate j),
    with L in slot-0 coordinates.  orientation "right": relation r =
    sum_i (slot-0 coordinate i) * R[i][r], with R in slot-1 coordinates.
    """
    matrix: list
    orientation: str
    names: tuple
    n: int

    def evaluate(self, point) -> list:
        """Matrix of rationals at a point of the slot the entries live in."""
        slot = 0 if self.orientation == "left" else 1
        vals = {slot * self.n + j: Q(c) for j, c in enumerate(point)}
        return [[e.substitute(vals).terms.get((0,) * len(self.names), mpq(0)) for e in row]
                for row in self.matrix]


def matrix_form(p: Presentation) -> tuple:
    n = p.n
    rels = p.given_relations
    if len(rels) != n:
        raise ValueError(f"matrix form needs as many relations as generators ({len(rels)} != {n})")
    if any(f.degree != 2 for f in rels):
        raise ValueError("matrix form needs quadratic relations")
    if not p.gens.all_weight_one:
        raise ValueError("matrix form needs degree-one generators")
    names = slot_names(p.gens.names, 2)
    var = [CommPoly.variable(names, v) for v in names]
    zero = CommPoly(names)
    L = [[zero] * n for _ in range(n)]
    R = [[zero] * n for _ in range(n)]
    for r, f in enumerate(rels):
        for (i, j), c in f.terms.items():
            L[r][j] = L[r][j] + c * var[i]
            R[i][r] = R[i][r] + c * var[n + j]
    return MatrixForm(L, "left", names, n), MatrixForm(R, "right", names, n)


def determinant(rows) -> CommPoly:
    """Laplace expansion along the first row."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    total = None
    for j in range(k):
        if not rows[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = rows[0][j] * determinant(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    if total is None:
        return CommPoly(rows[0][0].names)
    return total


def det_locus(mf: MatrixForm, normalize: bool = False) -> CommPoly:
    """Exact determinant of the form; ``normalize`` gives the primitive, sign-fixed version."""
    d = determinant(mf.matrix)
    return d.normalized() if normalize else d


def sigma_cross_product(mf: MatrixForm, rows=(0, 1)) -> tuple:
    """Cross product of two rows: the next point when those rows are independent."""
    if len(mf.matrix) != 3:
        raise ValueError("cross products need a 3x3 form")
    a, b = mf.matrix[rows[0]], mf.matrix[rows[1]]
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def normalize_point(v):
    """Scale so the first nonzero coordinate is 1."""
    for c in v:
        if c:
            return tuple(Q(x) / Q(c) for x in v)
    raise ValueError("zero vector is not a projective point")


class Fiber(list):
    """Projective points over a point; kind is empty, point, linear or whole."""

    def __init__(self, points, rank: int, kind: str):
        super().__init__(points)
        self.rank = rank
        self.kind = kind


def fiber_over_point(mf: MatrixForm, point) -> Fiber:
    if not any(point):
        raise ValueError("zero vector is not a projective point")
    A = mf.evaluate(point)
    if mf.orientation == "right":
        A = [list(col) for col in zip(*A)]
    n = len(A)
    ker = linalg.nullspace(A, n)
    rk = n - len(ker)
    pts = [normalize_point(v) for v in ker]
    if not ker:
        kind = "empty"
    elif len(ker) == 1:
        kind = "point"
    elif rk == 0:
        kind = "whole"
    else:
        kind = "linear"
    return Fiber(pts, rk, kind)


# ---------------------------------------------------------------------------
# finite-field enumeration


def projective_points(n: int, p: int) -> list:
    """P^{n-1}(F_p), first nonzero coordinate 1, in lexicographic order."""
    out = []
    for lead in range(n):
        for tail in product(range(p), repeat=n - lead - 1):
            out.append((0,) * lead + (1,) + tail)
    return out


@dataclass
class FinitePointSet:
    prime: int
    n: int
    m: int
    points: list        # tuples of m slot points

    def __len__(self):
        return len(self.points)

    def __contains__(self, pt):
        return tuple(pt) in set(self.points)


def _mod_p(c, p):
    c = Q(c)
    den = int(c.denominator) % p
    if not den:
        raise ValueError(f"prime {p} divides a coefficient denominator")
    return int(c.numerator) % p * pow(den, -1, p) % p


def _compile(eq: CommPoly, p: int):
    return [(_mod_p(c, p), [(i, a) for i, a in enumerate(e) if a]) for e, c in eq.terms.items()]


def _eval_mod(compiled, coords, p) -> int:
    total = 0
    for c, mon in compiled:
        v = c
        for i, a in mon:
            v = v * pow(coords[i], a, p) % p
            if not v:
                break
        total += v
    return total % p


def enumerate_points_mod_p(sys: MultiProjSystem, prime: int, limit: int | None = None) -> FinitePointSet:
    """All F_p points of the system, found slot by slot with pruning."""
    if prime < 2 or any(prime % q == 0 for q in range(2, int(prime ** 0.5) + 1)):
        raise ValueError(f"{prime} is not prime")
    limit = budget() if limit is None else limit
    n, m = sys.n, sys.m
    # an equation is checked as soon as its last slot is filled
    by_slot = [[] for _ in range(m)]
    for eq in sys.equations:
        used = eq.variables_used()
        last = max((i // n for i in used), default=0)
        by_slot[last].append(_compile(eq, prime))
    proj = projective_points(n, prime)
    found = []
    work = 0
    coords = [0] * (n * m)

    def extend(s, chosen):
        nonlocal work
        if s == m:
            found.append(tuple(chosen))
            return
        for pt in proj:
            work += 1
            if work > limit:
                raise BudgetExceeded(f"enumeration exceeded the budget of {limit} candidates")
            coords[s * n:(s + 1) * n] = pt
            if all(_eval_mod(eq, coords, prime) == 0 for eq in by_slot[s]):
                chosen.append(pt)
                extend(s + 1, chosen)
                chosen.pop()
        coords[s * n:(s + 1) * n] = [0] * n

    extend(0, [])
    # re-verification pass over every equation
    full = [_compile(eq, prime) for eq in sys.equations]
    for pt in found:
        flat = [c for slot in pt for c in slot]
        if any(_eval_mod(eq, flat, prime) for eq in full):
            raise AssertionError(f"point {pt} fails verification")
    return FinitePointSet(prime, n, m, found)


@dataclass
class ProbeRow:
    m: int
    count: int
    injective: bool | None      # projection X_{m+1} -> X_m dropping the last slot
    surjective: bool | None


def projection_data(upper: FinitePointSet, lower: FinitePointSet) -> tuple:
    images = [pt[:-1] for pt in upper.points]
    injective = len(set(images)) == len(images)
    surjective = set(images) == set(lower.points)
    return injective, surjective


def stabilization_probe(p: Presentation, prime: int, m_max: int, limit: int | None = None) -> list:
    """|X_m| for m = 1..m_max and whether X_{m+1} -> X_m is injective or surjective on F_p points."""
    sets = [enumerate_points_mod_p(truncated_scheme_system(p, m), prime, limit)
            for m in range(1, m_max + 1)]
    rows = []
    for k, s in enumerate(sets):
        if k + 1 < len(sets):
            inj, sur = projection_data(sets[k + 1], s)
        else:
            inj = sur = None
        rows.append(ProbeRow(s.m, len(s), inj, sur))
    return rows


def smooth_sklyanin_parameters(a, b, c) -> bool:
    """abc != 0 and ((a^3+b^3+c^3)/(3abc))^3 != 1."""
    a, b, c = Q(a), Q(b), Q(c)
    if not a * b * c:
        return False
    return ((a ** 3 + b ** 3 + c ** 3) / (3 * a * b * c)) ** 3 != 1
