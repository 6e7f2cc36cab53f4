"""Diamond Lemma engine: reduction, ambiguities, truncated completion, reduced words.

Rules are monic: a lead word rewrites to a tail of strictly smaller words.
Completion works degree by degree, which for homogeneous input means every
normal word of degree <= D is exact once all ambiguities up to D are done,
even when the basis itself never terminates.
"""

from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass, field

from gmpy2 import mpq

from .freealg import FreePoly, GeneratorSet, OrderSpec, Presentation, leading_term
from . import linalg


@dataclass(frozen=True)
class RewriteRule:
    lead: tuple
    tail: FreePoly

    def poly(self) -> FreePoly:
        """The monic ideal element lead - tail."""
        return self.tail.gens.word(self.lead) - self.tail

    def format(self, order=None) -> str:
        return f"{self.tail.gens.word_str(self.lead)} -> {self.tail.format(order)}"


@dataclass(frozen=True)
class Ambiguity:
    """overlap: lead_sigma = t+v, lead_tau = v+u, witness = t+v+u.
    inclusion: lead_sigma = t+lead_tau+u, witness = lead_sigma."""
    kind: str
    sigma: int
    tau: int
    witness: tuple
    t: tuple
    v: tuple
    u: tuple
    degree: int

    def key(self, rules):
        return (self.kind, rules[self.sigma].lead, rules[self.tau].lead, len(self.t))


# ---------------------------------------------------------------------------
# reduction


class _Reducer:
    """Memoised normal forms of single words.

    The normal form of a word rewrites its leftmost lead occurrence and recurses
    on the resulting words.  Rewriting the largest word of a sum first is then
    the same linear map, because each word is only ever rewritten one way and
    only produces smaller words.
    """

    def __init__(self, gens: GeneratorSet, rules=()):
        self.gens = gens
        self.rules = {}
        self.lengths = []
        self.memo = {}
        for r in rules:
            self.add(r.lead, r.tail.terms)

    def add(self, lead, tail_terms):
        self.rules[lead] = tail_terms
        self.lengths = sorted({len(w) for w in self.rules})
        self.forget_from(self.gens.degree(lead))

    def remove(self, lead):
        del self.rules[lead]
        self.lengths = sorted({len(w) for w in self.rules})
        self.memo.clear()

    def forget_from(self, degree):
        if degree <= 0:
            self.memo.clear()
            return
        deg = self.gens.degree
        for w in [w for w in self.memo if deg(w) >= degree]:
            del self.memo[w]

    def occurrence(self, w):
        rules, lengths = self.rules, self.lengths
        n = len(w)
        for i in range(n):
            for L in lengths:
                if i + L > n:
                    break
                lead = w[i:i + L]
                if lead in rules:
                    return i, lead
        return None

    def word(self, w) -> dict:
        memo = self.memo
        hit = memo.get(w)
        if hit is not None:
            return hit
        stack = [w]
        while stack:
            x = stack[-1]
            if x in memo:
                stack.pop()
                continue
            occ = self.occurrence(x)
            if occ is None:
                memo[x] = {x: mpq(1)}
                stack.pop()
                continue
            i, lead = occ
            pre, post = x[:i], x[i + len(lead):]
            tail = self.rules[lead]
            kids = [(pre + tw + post, c) for tw, c in tail.items()]
            missing = [k for k, _ in kids if k not in memo]
            if missing:
                stack.extend(missing)
                continue
            out = {}
            for k, c in kids:
                for ww, cc in memo[k].items():
                    s = out.get(ww, 0) + c * cc
                    if s:
                        out[ww] = s
                    else:
                        del out[ww]
            memo[x] = out
            stack.pop()
        return memo[w]

    def terms(self, terms) -> dict:
        out = {}
        for w, c in terms.items():
            for ww, cc in self.word(w).items():
                s = out.get(ww, 0) + c * cc
                if s:
                    out[ww] = s
                else:
                    del out[ww]
        return out

    def poly(self, f: FreePoly) -> FreePoly:
        return FreePoly(f.gens, self.terms(f.terms), _clean=True)


def reduce(f: FreePoly, rules, order: OrderSpec | None = None) -> FreePoly:
    """Normal form of f: largest reducible word first, leftmost occurrence."""
    if not rules:
        return f
    return _Reducer(f.gens, rules).poly(f)


def largest_leftmost(candidates):
    """Default strategy: candidates are (order_key, word, position, rule_index)."""
    best = max(c[0] for c in candidates)
    return min((c for c in candidates if c[0] == best), key=lambda c: c[2])


def reduce_with_certificate(f: FreePoly, rules, order: OrderSpec, choose=largest_leftmost):
    """Step-by-step reduction that records every rewrite.

    Returns (normal form, certificate) where the certificate is a list of
    (coefficient, left word, rule index, right word) with
    f - normal form = sum c * left * (lead - tail) * right.
    ``choose`` picks one candidate rewrite per step.
    """
    leads = {r.lead: i for i, r in enumerate(rules)}
    lengths = sorted({len(l) for l in leads})
    cur = dict(f.terms)
    cert = []
    while True:
        cands = []
        for w in cur:
            key = order.key(w)
            for i in range(len(w)):
                for L in lengths:
                    j = leads.get(w[i:i + L])
                    if j is not None:
                        cands.append((key, w, i, j))
        if not cands:
            return FreePoly(f.gens, cur, _clean=True), cert
        _, w, i, j = choose(cands)
        c = cur.pop(w)
        r = rules[j]
        pre, post = w[:i], w[i + len(r.lead):]
        cert.append((c, pre, j, post))
        for tw, tc in r.tail.terms.items():
            k = pre + tw + post
            s = cur.get(k, 0) + c * tc
            if s:
                cur[k] = s
            else:
                cur.pop(k, None)


def random_strategy(rng: random.Random):
    def choose(cands):
        return cands[rng.randrange(len(cands))]
    return choose


def expand_certificate(cert, rules, gens) -> FreePoly:
    out = gens.zero()
    for c, pre, j, post in cert:
        out = out + gens.word(pre) * rules[j].poly() * gens.word(post) * c
    return out


# ---------------------------------------------------------------------------
# ambiguities


def find_ambiguities(rules, gens: GeneratorSet | None = None, order: OrderSpec | None = None,
                     max_degree: int | None = None) -> list:
    """All overlap and inclusion ambiguities, sorted by (witness degree, witness order)."""
    if not rules:
        return []
    if gens is None:
        gens = rules[0].tail.gens
    deg = gens.degree
    out = []
    for s, rs in enumerate(rules):
        a = rs.lead
        for t_, rt in enumerate(rules):
            b = rt.lead
            # overlaps: a = t v, b = v u with t, v, u nonempty
            for k in range(1, min(len(a), len(b))):
                if a[-k:] == b[:k]:
                    w = a + b[k:]
                    d = deg(w)
                    if max_degree is None or d <= max_degree:
                        out.append(Ambiguity("overlap", s, t_, w, a[:-k], a[-k:], b[k:], d))
            # inclusions: b occurs inside a
            if s != t_ and len(b) <= len(a):
                for i in range(len(a) - len(b) + 1):
                    if a[i:i + len(b)] == b:
                        d = deg(a)
                        if max_degree is None or d <= max_degree:
                            out.append(Ambiguity("inclusion", s, t_, a, a[:i], b, a[i + len(b):], d))
    okey = order.key if order is not None else (lambda w: (deg(w), w))
    out.sort(key=lambda m: (m.degree, okey(m.witness), m.sigma, m.tau, len(m.t), m.kind))
    return out


def ambiguity_branches(a: Ambiguity, rules, gens):
    """The two one-step reductions of the witness."""
    rs, rt = rules[a.sigma], rules[a.tau]
    if a.kind == "overlap":
        b1 = rs.tail * gens.word(a.u)
        b2 = gens.word(a.t) * rt.tail
    else:
        b1 = rs.tail
        b2 = gens.word(a.t) * rt.tail * gens.word(a.u)
    return b1, b2


def resolve_ambiguity(a: Ambiguity, rules, order: OrderSpec, _reducer=None):
    """None if both branches reach the same normal form, else the monic difference."""
    gens = rules[a.sigma].tail.gens
    red = _reducer or _Reducer(gens, rules)
    b1, b2 = ambiguity_branches(a, rules, gens)
    diff = red.poly(b1) - red.poly(b2)
    if not diff:
        return None
    return diff.monic(order)


# ---------------------------------------------------------------------------
# completion


@dataclass
class GBasis:
    gens: GeneratorSet
    rules: list
    order: OrderSpec
    truncation_degree: int
    complete: bool
    # every ambiguity with witness degree <= certified_degree was resolved, so
    # leading words of the ideal are known exactly through that degree
    certified_degree: int
    rules_by_degree: dict = field(default_factory=dict)
    _red: _Reducer | None = field(default=None, repr=False, compare=False)

    @property
    def reducer(self) -> _Reducer:
        if self._red is None:
            self._red = _Reducer(self.gens, self.rules)
        return self._red

    def normal_form(self, f: FreePoly) -> FreePoly:
        return self.reducer.poly(f)

    def nf_terms(self, terms: dict) -> dict:
        return self.reducer.terms(terms)

    def nf_word(self, w: tuple) -> dict:
        return self.reducer.word(w)

    def leads(self) -> list:
        return [r.lead for r in self.rules]

    def exact_through(self) -> float:
        """Highest degree whose normal forms are exact (unbounded when complete)."""
        return float("inf") if self.complete else self.certified_degree

    def check_degree(self, d: int):
        if d > self.exact_through():
            raise ValueError(f"degree {d} exceeds the certified truncation {self.certified_degree}")

    def max_rule_degree(self) -> int:
        return max((self.gens.degree(r.lead) for r in self.rules), default=0)

    def format(self) -> list:
        return [r.format(self.order) for r in self.rules]


def complete(p: Presentation, D: int) -> GBasis:
    """Degree-truncated Diamond Lemma completion of a homogeneous presentation."""
    gens, order = p.gens, p.order
    for r in p.relations:
        if not r:
            raise ValueError("zero relation")
        if not r.is_homogeneous():
            raise ValueError(f"inhomogeneous relation: {r}")
    red = _Reducer(gens)
    inputs = defaultdict(list)
    for r in p.relations:
        inputs[r.degree].append(r)

    def rule_list():
        return [RewriteRule(l, FreePoly(gens, t, _clean=True))
                for l, t in sorted(red.rules.items(), key=lambda lt: order.key(lt[0]))]

    def add(f: FreePoly):
        lead, c = leading_term(f, order)
        tail = {w: -x / c for w, x in f.terms.items() if w != lead}
        # drop rules whose lead now contains the new lead, re-inserting their reductions
        displaced = [l for l in red.rules if l != lead and _contains(l, lead)]
        red.add(lead, tail)
        for l in displaced:
            g = FreePoly(gens, {l: mpq(1), **{w: -x for w, x in red.rules[l].items()}}, _clean=True)
            red.remove(l)
            h = red.poly(g)
            if h:
                add(h)
        # keep every tail fully reduced
        for l, t in list(red.rules.items()):
            if l != lead and any(_contains(w, lead) for w in t):
                red.rules[l] = red.terms(t)

    def settle(d):
        """Resolve every ambiguity of witness degree d, restarting after each new rule."""
        seen = set()
        while True:
            rules = rule_list()
            fresh = None
            for a in find_ambiguities(rules, gens, order, max_degree=d):
                if a.degree != d:
                    continue
                k = a.key(rules)
                if k in seen:
                    continue
                seen.add(k)
                fresh = resolve_ambiguity(a, rules, order, red)
                if fresh is not None:
                    break
            if fresh is None:
                return
            add(fresh)

    top = D
    d = 1
    while d <= top:
        for r in inputs.get(d, []):
            h = red.poly(r)
            if h:
                add(h)
        settle(d)
        d += 1
    # certificate pass: every ambiguity up to D must resolve under the final rules
    while True:
        rules = rule_list()
        bad = [a for a in find_ambiguities(rules, gens, order, max_degree=D)
               if resolve_ambiguity(a, rules, order, red) is not None]
        if not bad:
            break
        for dd in sorted({a.degree for a in bad}):
            settle(dd)
    rules = rule_list()
    maxdeg = max((gens.degree(r.lead) for r in rules), default=0)
    all_inputs_used = all(k <= D for k in inputs)
    complete_flag = all_inputs_used and 2 * maxdeg - 1 <= D
    by_deg = defaultdict(int)
    for r in rules:
        by_deg[gens.degree(r.lead)] += 1
    return GBasis(gens, rules, order, D, complete_flag, D, dict(sorted(by_deg.items())), red)


def _contains(word, factor) -> bool:
    n, m = len(word), len(factor)
    return any(word[i:i + m] == factor for i in range(n - m + 1))


# ---------------------------------------------------------------------------
# reduced words: factor-avoidance automaton


class Automaton:
    """Aho-Corasick automaton over the lead words; dead states contain a lead."""

    def __init__(self, leads, nletters: int):
        self.n = nletters
        goto = [{}]
        dead = [False]
        for lead in leads:
            s = 0
            for a in lead:
                if a not in goto[s]:
                    goto.append({})
                    dead.append(False)
                    goto[s][a] = len(goto) - 1
                s = goto[s][a]
            dead[s] = True
        fail = [0] * len(goto)
        delta = [[0] * nletters for _ in goto]
        queue = []
        for a in range(nletters):
            if a in goto[0]:
                t = goto[0][a]
                delta[0][a] = t
                queue.append(t)
            else:
                delta[0][a] = 0
        while queue:
            s = queue.pop(0)
            dead[s] = dead[s] or dead[fail[s]]
            for a in range(nletters):
                if a in goto[s]:
                    t = goto[s][a]
                    fail[t] = delta[fail[s]][a]
                    delta[s][a] = t
                    queue.append(t)
                else:
                    delta[s][a] = delta[fail[s]][a]
        self.delta = delta
        self.dead = dead
        self.live = [s for s in range(len(goto)) if not dead[s]]

    def transfer_matrix(self, letters=None):
        """T[s][s'] = number of letters (from ``letters``) moving live s to live s'."""
        idx = {s: k for k, s in enumerate(self.live)}
        m = len(self.live)
        T = [[0] * m for _ in range(m)]
        for s in self.live:
            for a in (range(self.n) if letters is None else letters):
                t = self.delta[s][a]
                if not self.dead[t]:
                    T[idx[s]][idx[t]] += 1
        return T


def automaton(gb: GBasis) -> Automaton:
    return Automaton(gb.leads(), len(gb.gens))


def reduced_words(gb: GBasis, d: int) -> list:
    gb.check_degree(d)
    return _words_of_degree(automaton(gb), gb.gens, gb.order, d)


def _words_of_degree(aut: Automaton, gens, order, d):
    wts = gens.weights
    out = []
    stack = [(0, (), 0)]
    while stack:
        s, w, deg = stack.pop()
        if deg == d:
            out.append(w)
            continue
        for a in range(aut.n):
            nd = deg + wts[a]
            if nd > d:
                continue
            t = aut.delta[s][a]
            if not aut.dead[t]:
                stack.append((t, w + (a,), nd))
    out.sort(key=order.key)
    return out


class DimensionSequence(list):
    """dim A_0 .. dim A_D with a note on how far the counts are certified."""

    def __init__(self, values, status: str):
        super().__init__(values)
        self.status = status


def dimension_sequence(gb: GBasis, D: int) -> DimensionSequence:
    """Count reduced words per degree by dynamic programming on the automaton."""
    aut = automaton(gb)
    wts = gb.gens.weights
    counts = [defaultdict(int) for _ in range(D + 1)]
    counts[0][0] = 1
    dims = []
    for e in range(D + 1):
        dims.append(sum(counts[e].values()))
        for s, c in counts[e].items():
            for a in range(aut.n):
                ne = e + wts[a]
                if ne > D:
                    continue
                t = aut.delta[s][a]
                if not aut.dead[t]:
                    counts[ne][t] += c
    if gb.complete:
        status = "certified"
    elif D <= gb.certified_degree:
        status = f"exact through degree {gb.certified_degree} (truncated basis)"
    else:
        status = "upper bounds only"
    return DimensionSequence(dims, status)


# ---------------------------------------------------------------------------
# normal elements


def _coords(terms: dict, index: dict) -> dict:
    return {index[w]: c for w, c in terms.items()}


def _mult_rows(gb: GBasis, g: FreePoly, words, side: str, index):
    rows = []
    for u in words:
        uw = gb.gens.word(u)
        prod = g * uw if side == "right" else uw * g
        rows.append(_coords(gb.nf_terms(prod.terms), index))
    return rows


def is_normal_element(g: FreePoly, gb: GBasis, D: int) -> bool:
    """True iff g.A_e and A_e.g have the same span for every e <= D."""
    if not g or not g.is_homogeneous():
        raise ValueError("need a nonzero homogeneous element")
    dg = g.degree
    gb.check_degree(dg + D)
    g = gb.normal_form(g)
    if not g:
        raise ValueError("element is zero in the algebra")
    for e in range(D + 1):
        basis = reduced_words(gb, e)
        tgt = reduced_words(gb, dg + e)
        index = {w: i for i, w in enumerate(tgt)}
        left = _mult_rows(gb, g, basis, "left", index)
        right = _mult_rows(gb, g, basis, "right", index)
        ra = linalg.rank_sparse(left, len(tgt))
        rb = linalg.rank_sparse(right, len(tgt))
        if ra != rb or linalg.rank_sparse(left + right, len(tgt)) != ra:
            return False
    return True


class NormalElements(list):
    """Basis of the span of normal elements found, with search metadata."""

    def __init__(self, values, checked_degree: int, exhaustive: bool, method: str):
        super().__init__(values)
        self.checked_degree = checked_degree
        self.exhaustive = exhaustive
        self.method = method


# Full bilinear solves are only attempted on small graded pieces.
FULL_SEARCH_MAX_DIM = 4


def find_normal_elements(gb: GBasis, d: int, D: int, rng_seed: int = 0) -> NormalElements:
    """Rational basis for the span of normal elements of degree d, checked up to degree D.

    g is normal when g*x_i = sigma(x_i)*g for a linear map sigma of the
    generator span.  That is bilinear in (g, sigma).  When dim A_d is at most
    FULL_SEARCH_MAX_DIM the system is solved outright; otherwise only
    diagonal sigma are searched, which splits into one rectangular pencil
    (R_i - s L_i) c = 0 per generator, and the result is flagged
    non-exhaustive.  Every returned vector comes from elements verified by
    is_normal_element.
    """
    if not gb.gens.all_weight_one:
        raise ValueError("normal element search needs degree-one generators")
    gb.check_degree(d + max(D, 1))
    words = reduced_words(gb, d)
    m = len(words)
    if m == 0:
        return NormalElements([], D, True, "empty")
    R, L = _mult_operators(gb, d)
    rng = random.Random(rng_seed)
    if m <= FULL_SEARCH_MAX_DIM:
        cands, exhaustive, method = _bilinear_search(R, L, m), True, "full bilinear solve"
    else:
        cands, regular = _diagonal_search(R, L, m, rng)
        exhaustive = False
        method = "diagonal twisting search" + ("" if regular else " (singular pencil)")
    vecs = []
    for c in cands:
        g = FreePoly(gb.gens, {w: x for w, x in zip(words, c) if x}, _clean=True)
        if g and is_normal_element(g, gb, D):
            vecs.append(list(c))
    Rr, _ = linalg.rref(vecs, m) if vecs else ([], [])
    basis = [FreePoly(gb.gens, {w: c for w, c in zip(words, row) if c}, _clean=True) for row in Rr]
    return NormalElements(basis, D, exhaustive, method)


def _mult_operators(gb: GBasis, d: int):
    """Dense matrices of g -> g*x_i and g -> x_i*g from A_d to A_{d+1}."""
    words = reduced_words(gb, d)
    tgt = reduced_words(gb, d + 1)
    index = {w: k for k, w in enumerate(tgt)}
    n, N, m = len(gb.gens), len(tgt), len(words)
    R = [[[mpq(0)] * m for _ in range(N)] for _ in range(n)]
    L = [[[mpq(0)] * m for _ in range(N)] for _ in range(n)]
    for k, w in enumerate(words):
        for i in range(n):
            for ww, c in gb.nf_word(w + (i,)).items():
                R[i][index[ww]][k] += c
            for ww, c in gb.nf_word((i,) + w).items():
                L[i][index[ww]][k] += c
    return R, L


def _pencil_eigenspaces(A, B, basis, m, rng):
    """Rational s with a nonzero c in span(basis) and (A - sB)c = 0.

    Returns ([(s, new basis)], regular) where regular is False when the pencil
    has a kernel for every s, in which case only the s-independent part
    (common kernel) is reported.
    """
    k = len(basis)
    Ab = [[sum(r[t] * b[t] for t in range(m) if r[t]) for b in basis] for r in A]
    Bb = [[sum(r[t] * b[t] for t in range(m) if r[t]) for b in basis] for r in B]

    def lift(ns):
        return [[sum(v[j] * basis[j][t] for j in range(k)) for t in range(m)] for v in ns]

    s0 = mpq(rng.randint(-97, 97), rng.randint(1, 13))
    full = [[a - s0 * b for a, b in zip(ra, rb)] for ra, rb in zip(Ab, Bb)]
    if linalg.rank(full, k) < k:
        common = linalg.nullspace(Ab + Bb, k)
        return ([(None, lift(common))] if common else []), False
    N = len(Ab)
    for _ in range(20):
        P = [[mpq(rng.randint(-5, 5)) for _ in range(N)] for _ in range(k)]
        C = linalg.matmul(P, full)
        if linalg.det(C):
            break
    else:
        raise RuntimeError("could not find a regular square projection of the pencil")
    M = linalg.matmul(linalg.inverse(C), linalg.matmul(P, Bb))
    cp = linalg.to_flint(M).charpoly()
    out = []
    for nu, _ in cp.roots():
        if nu == 0:
            continue
        s = s0 + 1 / mpq(int(nu.p), int(nu.q))
        ker = linalg.nullspace([[a - s * b for a, b in zip(ra, rb)] for ra, rb in zip(Ab, Bb)], k)
        if ker:
            out.append((s, lift(ker)))
    return out, True


def _diagonal_search(R, L, m, rng):
    """Normal elements with sigma(x_i) = s_i x_i, one generator at a time."""
    spaces = [linalg.identity(m)]
    regular_all = True
    for i in range(len(R)):
        nxt = []
        for basis in spaces:
            pieces, regular = _pencil_eigenspaces(R[i], L[i], basis, m, rng)
            regular_all &= regular
            nxt.extend(b for _, b in pieces)
        spaces = nxt
    out = []
    for basis in spaces:
        out.extend(basis)
    return out, regular_all


def _bilinear_search(R, L, m):
    """Solve g*x_i = sum_j lam_ij x_j*g exactly, stratified by the top coordinate of g."""
    import sympy as sp
    n, N = len(R), len(R[0])
    lam = sp.symbols(f"l0:{n * n}")
    out = []
    for top in range(m):
        free = sp.symbols(f"c0:{top}") if top else ()
        c = list(free) + [sp.Integer(1)] + [sp.Integer(0)] * (m - top - 1)
        eqs = []
        for i in range(n):
            for r in range(N):
                e = sum(_sym(R[i][r][k]) * c[k] for k in range(m) if R[i][r][k])
                for j in range(n):
                    e -= lam[i * n + j] * sum(_sym(L[j][r][k]) * c[k] for k in range(m) if L[j][r][k])
                e = sp.expand(e)
                if e != 0:
                    eqs.append(e)
        unknowns = list(free) + list(lam)
        sols = sp.solve(eqs, unknowns, dict=True) if eqs else [{}]
        for sol in sols:
            vec = [sp.sympify(x).subs(sol) for x in c]
            params = sorted(set().union(*(v.free_symbols for v in vec)), key=str)
            for point in _sample_points(len(params)):
                sub = dict(zip(params, point))
                val = [sp.nsimplify(v.subs(sub)) for v in vec]
                if all(x.is_Rational for x in val):
                    out.append([mpq(int(x.p), int(x.q)) for x in val])
    return out


def _sample_points(k):
    pts = [[0] * k]
    for j in range(k):
        e = [0] * k
        e[j] = 1
        pts.append(e)
    if k:
        pts.append([2 + j for j in range(k)])
        pts.append([(-1) ** j * (3 + j) for j in range(k)])
    return pts


def _sym(c):
    import sympy as sp
    return sp.Rational(int(c.numerator), int(c.denominator))
