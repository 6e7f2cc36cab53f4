"""Hilbert series as rational functions: expansion, fitting, GK dimension.

Polynomials in t are coefficient lists, lowest degree first.

    >>> expand(RationalSeries([1], [1, -2, 1]), 4)
    [1, 2, 3, 4, 5]
    >>> growth_verdict([1, -3, 3, -1])
    GrowthVerdict(kind='polynomial', gkdim=3)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from . import linalg


# -- small univariate helpers ----------------------------------------------

def trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def pmul(a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def padd(a, b):
    n = max(len(a), len(b))
    return trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def pdivmod(a, b):
    """Division with remainder over Q."""
    a, b = [mpq(x) for x in trim(a)], [mpq(x) for x in trim(b)]
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [mpq(0)] * max(len(a) - len(b) + 1, 0)
    r = list(a)
    while len(r) >= len(b) and r:
        c = r[-1] / b[-1]
        k = len(r) - len(b)
        q[k] = c
        for i, y in enumerate(b):
            r[i + k] -= c * y
        r = trim(r)
    return trim(q), r


def pgcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return []
    lead = mpq(a[-1])
    return [mpq(x) / lead for x in a]


def poly_str(p, var="t") -> str:
    p = trim(p)
    if not p:
        return "0"
    parts = []
    for k, c in enumerate(p):
        if not c:
            continue
        mon = "" if k == 0 else var if k == 1 else f"{var}^{k}"
        a = abs(c)
        body = str(a) if not mon else (mon if a == 1 else f"{a}*{mon}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        s += f" {sign} {body}"
    return s


def _as_int_poly(p):
    out = []
    for c in p:
        c = mpq(c)
        if c.denominator != 1:
            raise ValueError(f"non-integral coefficient {c}")
        out.append(int(c))
    return out


# -- series ------------------------------------------------------------------

@dataclass(frozen=True)
class RationalSeries:
    numerator: tuple
    denominator: tuple
    note: str = ""

    def __init__(self, numerator, denominator, note: str = ""):
        num, den = trim(numerator), trim(denominator)
        if not den or den[0] == 0:
            raise ValueError("denominator must have nonzero constant term")
        g = pgcd(num, den) if num else [1]
        if len(g) > 1:
            num = pdivmod(num, g)[0]
            den = pdivmod(den, g)[0]
        c0 = mpq(den[0])
        num = [mpq(x) / c0 for x in num]
        den = [mpq(x) / c0 for x in den]
        object.__setattr__(self, "numerator", tuple(_as_int_poly(num)))
        object.__setattr__(self, "denominator", tuple(_as_int_poly(den)))
        object.__setattr__(self, "note", note)

    def __eq__(self, other):
        return (isinstance(other, RationalSeries) and self.numerator == other.numerator
                and self.denominator == other.denominator)

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __str__(self):
        return f"({poly_str(self.numerator)})/({poly_str(self.denominator)})"


def expand(s: RationalSeries, D: int) -> list:
    num, den = s.numerator, s.denominator
    a = []
    for k in range(D + 1):
        v = num[k] if k < len(num) else 0
        for j in range(1, min(k, len(den) - 1) + 1):
            v -= den[j] * a[k - j]
        a.append(v)
    return a


def fit_rational(coeffs, e: int):
    """Rational function with denominator degree <= e reproducing every coefficient.

    Looks for the shortest recurrence a_k + q_1 a_{k-1} + ... + q_r a_{k-r} = 0
    holding for all e < k <= D, takes numerator degree <= e, and checks the
    expansion against the whole list.  Returns None when nothing fits.  The
    answer is only consistent with the data through degree D, never a proof;
    2e + 3 coefficients make the fit unique, fewer still give a valid fit.
    """
    coeffs = [mpq(c) for c in coeffs]
    D = len(coeffs) - 1
    if e < 0 or D < e + 1:
        raise ValueError(f"need at least {e + 2} coefficients to fit denominator degree {e}")
    for r in range(e + 1):
        rows, rhs = [], []
        for k in range(e + 1, D + 1):
            rows.append([coeffs[k - j] for j in range(1, r + 1)])
            rhs.append(-coeffs[k])
        if r == 0:
            if any(rhs):
                continue
            q = []
        else:
            q = linalg.solve_any(rows, rhs, r)
            if q is None:
                continue
        den = [mpq(1)] + list(q)
        num = pmul(den, coeffs[: e + 1])[: e + 1]
        try:
            s = RationalSeries(num, den, note=f"consistent up to degree {D}")
        except ValueError:
            continue
        if [mpq(x) for x in expand(s, D)] == coeffs:
            return s
    return None


# -- growth ------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthVerdict:
    kind: str
    gkdim: int | None = None

    def __str__(self):
        return f"polynomial growth, GK dimension {self.gkdim}" if self.kind == "polynomial" \
            else "exponential growth"


def totient(n: int) -> int:
    out, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            out -= out // p
        p += 1
    if m > 1:
        out -= out // m
    return out


@lru_cache(maxsize=None)
def _indices(max_phi: int) -> tuple:
    return tuple(d for d in range(1, 2 * max_phi * max_phi + 3) if totient(d) <= max_phi)


def cyclotomic_indices(max_phi: int) -> list:
    """All d with phi(d) <= max_phi.  phi(d) >= sqrt(d/2) bounds the search by 2*max_phi^2."""
    if max_phi < 1:
        return []
    return list(_indices(max_phi))


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple:
    """Phi_n(t) from t^n - 1 divided by Phi_d for every proper divisor d."""
    p = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            p, r = pdivmod(p, cyclotomic(d))
            assert not r
    return tuple(_as_int_poly(p))


def growth_verdict(p) -> GrowthVerdict:
    """Polynomial growth iff p is +-1 times a product of cyclotomic polynomials."""
    p = trim([int(c) for c in p])
    if not p or p[0] != 1:
        raise ValueError("p(0) must equal 1")
    deg = len(p) - 1
    # a product of cyclotomic polynomials has leading coefficient +-1 and
    # palindromic coefficients up to sign
    if abs(p[-1]) != 1 or (p != p[::-1] and p != [-c for c in p[::-1]]):
        return GrowthVerdict("exponential")
    rest = [mpq(c) for c in p]
    mult1 = 0
    for d in cyclotomic_indices(deg):
        phi = list(cyclotomic(d))
        while len(rest) - 1 >= len(phi) - 1:
            q, r = pdivmod(rest, phi)
            if r:
                break
            rest = q
            if d == 1:
                mult1 += 1
    if len(rest) == 1 and abs(rest[0]) == 1:
        return GrowthVerdict("polynomial", mult1)
    return GrowthVerdict("exponential")


def series_growth(s: RationalSeries) -> GrowthVerdict:
    """Growth of a Hilbert series.

    For 1/p this is growth_verdict(p).  For a general numerator the reduced
    denominator decides, with GK dimension read as the multiplicity of (1 - t).
    """
    return growth_verdict(s.denominator)


def weighted_poly_series(weights) -> RationalSeries:
    den = [1]
    for d in weights:
        den = pmul(den, [1] + [0] * (d - 1) + [-1])
    return RationalSeries([1], den)


def free_algebra_series(weights) -> RationalSeries:
    den = [1]
    for d in weights:
        den = padd(den, [0] * d + [-1])
    return RationalSeries([1], den)


def series_from_automaton(gb) -> RationalSeries:
    """Exact Hilbert series of a complete Groebner basis.

    The reduced words are the paths of the factor-avoidance automaton, so the
    series is rational with denominator degree at most (live states) * (max weight).
    Enough terms pin that rational function down exactly.
    """
    from .gbasis import automaton, dimension_sequence, GBasis
    if not gb.complete:
        raise ValueError("series is only certified for a complete basis")
    aut = automaton(gb)
    e = len(aut.live) * max(gb.gens.weights)
    D = 2 * e + 2
    big = GBasis(gb.gens, gb.rules, gb.order, D, True, D, gb.rules_by_degree)
    dims = dimension_sequence(big, D)
    s = fit_rational(dims, e)
    if s is None:
        raise RuntimeError("automaton series failed to fit")
    return RationalSeries(s.numerator, s.denominator, note="certified")
