"""Minimal graded free resolutions of the trivial module and regularity verdicts.

Free modules are sums of shifted copies A(s); a generator of A(s) sits in
degree -s, so ``shifts`` lists the arguments s.  A right complex uses column
vectors and maps act by left multiplication by their matrix; a left complex
uses row vectors and maps act by right multiplication.

Everything is computed one internal degree at a time with exact linear
algebra on reduced-word coordinates, so every claim is bounded by the degree
up to which the Groebner basis is exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from gmpy2 import mpq

from . import linalg
from .freealg import FreePoly, Presentation, Q, apply_linear_map
from .gbasis import GBasis, complete, dimension_sequence, reduced_words
from .hilbert import (GrowthVerdict, RationalSeries, expand, growth_verdict,
                      series_from_automaton, fit_rational)


class GradedAlgebra:
    """Reduced-word bases and normal-form products, cached per degree."""

    def __init__(self, gb: GBasis):
        self.gb = gb
        self.gens = gb.gens
        self._basis = {}
        self._index = {}

    def basis(self, e: int) -> list:
        if e < 0:
            return []
        if e not in self._basis:
            self._basis[e] = reduced_words(self.gb, e)
            self._index[e] = {w: i for i, w in enumerate(self._basis[e])}
        return self._basis[e]

    def index(self, e: int) -> dict:
        self.basis(e)
        return self._index.get(e, {})

    def dim(self, e: int) -> int:
        return len(self.basis(e))

    def times_word(self, f: FreePoly, u: tuple) -> dict:
        """Normal form of f*u."""
        out = {}
        nf = self.gb.nf_word
        for w, c in f.terms.items():
            for v, x in nf(w + u).items():
                s = out.get(v, 0) + c * x
                if s:
                    out[v] = s
                else:
                    out.pop(v, None)
        return out

    def word_times(self, u: tuple, f: FreePoly) -> dict:
        """Normal form of u*f."""
        out = {}
        nf = self.gb.nf_word
        for w, c in f.terms.items():
            for v, x in nf(u + w).items():
                s = out.get(v, 0) + c * x
                if s:
                    out[v] = s
                else:
                    out.pop(v, None)
        return out

    def normal_form(self, f: FreePoly) -> FreePoly:
        return self.gb.normal_form(f)


def _as_algebra(a) -> GradedAlgebra:
    return a if isinstance(a, GradedAlgebra) else GradedAlgebra(a)


@dataclass(frozen=True)
class GradedFreeModule:
    shifts: tuple

    def __init__(self, shifts):
        object.__setattr__(self, "shifts", tuple(int(s) for s in shifts))

    @property
    def rank(self) -> int:
        return len(self.shifts)

    def generator_degrees(self) -> list:
        return [-s for s in self.shifts]

    def dual(self) -> "GradedFreeModule":
        return GradedFreeModule([-s for s in self.shifts])

    def piece(self, alg: GradedAlgebra, t: int) -> list:
        """Coordinates (component, word) of the degree-t part."""
        return [(j, u) for j, s in enumerate(self.shifts) for u in alg.basis(t + s)]

    def piece_dim(self, alg: GradedAlgebra, t: int) -> int:
        return sum(alg.dim(t + s) for s in self.shifts)


@dataclass
class AMatrix:
    """Matrix of homogeneous algebra elements between free modules.

    On the right side an entry (i, j) has degree row_shifts[i] - col_shifts[j];
    on the left side the roles of rows and columns swap.
    """
    entries: list
    row_shifts: tuple
    col_shifts: tuple
    side: str = "right"

    def __post_init__(self):
        self.row_shifts = tuple(self.row_shifts)
        self.col_shifts = tuple(self.col_shifts)
        if len(self.entries) != len(self.row_shifts):
            raise ValueError("row count does not match row shifts")
        for i, row in enumerate(self.entries):
            if len(row) != len(self.col_shifts):
                raise ValueError("column count does not match column shifts")
            for j, f in enumerate(row):
                if not f:
                    continue
                want = self.entry_degree(i, j)
                if f.degree != want:
                    raise ValueError(f"entry ({i},{j}) = {f} should have degree {want}")

    def entry_degree(self, i: int, j: int) -> int:
        if self.side == "right":
            return self.row_shifts[i] - self.col_shifts[j]
        return self.col_shifts[j] - self.row_shifts[i]

    @property
    def shape(self) -> tuple:
        return len(self.row_shifts), len(self.col_shifts)

    def domain(self) -> GradedFreeModule:
        return GradedFreeModule(self.col_shifts if self.side == "right" else self.row_shifts)

    def codomain(self) -> GradedFreeModule:
        return GradedFreeModule(self.row_shifts if self.side == "right" else self.col_shifts)

    def in_augmentation_ideal(self) -> bool:
        """Every nonzero entry has positive degree."""
        return all(not f or f.degree >= 1 for row in self.entries for f in row)

    def format(self) -> list:
        return [[f.format() for f in row] for row in self.entries]


@dataclass
class Complex:
    """modules[k] with differentials[k-1]: modules[k] -> modules[k-1]."""
    modules: list
    differentials: list
    side: str = "right"
    certified_degree: int = 0
    terminated: bool = True
    # length at which the computation stopped (kernel zero, or homological bound hit)
    notes: dict = field(default_factory=dict)

    @property
    def length(self) -> int:
        return len(self.modules) - 1

    def shifts(self) -> list:
        return [list(m.shifts) for m in self.modules]


# ---------------------------------------------------------------------------
# degree-t linear maps


def _image_rows(alg: GradedAlgebra, m: AMatrix, t: int):
    """Images of the domain basis in degree t, as sparse rows over codomain coordinates."""
    dom = m.domain().piece(alg, t)
    cod = m.codomain()
    offsets, off = {}, 0
    for j, s in enumerate(cod.shifts):
        offsets[j] = off
        off += alg.dim(t + s)
    ncod = off
    rows = []
    for k, u in dom:
        img = {}
        if m.side == "right":
            for j in range(len(m.row_shifts)):
                f = m.entries[j][k]
                if f:
                    idx = alg.index(t + cod.shifts[j])
                    for w, c in alg.times_word(f, u).items():
                        img[offsets[j] + idx[w]] = c
        else:
            for j in range(len(m.col_shifts)):
                f = m.entries[k][j]
                if f:
                    idx = alg.index(t + cod.shifts[j])
                    for w, c in alg.word_times(u, f).items():
                        img[offsets[j] + idx[w]] = c
        rows.append(img)
    return dom, rows, ncod


def _transpose(rows, ncols):
    cols = [dict() for _ in range(ncols)]
    for i, r in enumerate(rows):
        for j, c in r.items():
            cols[j][i] = c
    return cols


def map_rank(alg, m: AMatrix, t: int) -> int:
    _, rows, ncod = _image_rows(alg, m, t)
    return linalg.rank_sparse(rows, ncod)


def kernel_basis(alg, m: AMatrix, t: int) -> tuple:
    """(domain coordinates, RREF basis of the kernel in degree t)."""
    dom, rows, ncod = _image_rows(alg, m, t)
    if not dom:
        return dom, []
    eqs = _transpose(rows, ncod)
    eqs = [e for e in eqs if e]
    if not eqs:
        ker = linalg.identity(len(dom))
    else:
        ker = linalg.nullspace_sparse(eqs, len(dom))
    if ker:
        ker, _ = linalg.rref(ker, len(dom))
    return dom, ker


def _vector_to_column(alg, coords, vec, nrows) -> list:
    col = [{} for _ in range(nrows)]
    for (k, u), c in zip(coords, vec):
        if c:
            col[k][u] = c
    return [FreePoly(alg.gens, t, _clean=True) for t in col]


def _column_to_vector(alg, column, coords) -> list:
    pos = {cu: i for i, cu in enumerate(coords)}
    v = [mpq(0)] * len(coords)
    for k, f in enumerate(column):
        for w, c in alg.normal_form(f).terms.items():
            v[pos[(k, w)]] = c
    return v


def _column_times_word(alg, column, u) -> list:
    return [FreePoly(alg.gens, alg.times_word(f, u), _clean=True) if f else f for f in column]


# ---------------------------------------------------------------------------
# resolutions


def minimal_generators(gb, D: int) -> list:
    """(degree, count) pairs for a minimal generating set of A_{>=1}, degrees 1..D."""
    alg = _as_algebra(gb)
    n = len(alg.gens)
    wts = alg.gens.weights
    out = []
    for e in range(1, D + 1):
        idx = alg.index(e)
        if not idx:
            continue
        rows = []
        for a in range(n):
            for u in alg.basis(e - wts[a]) if e - wts[a] >= 1 else []:
                rows.append({idx[w]: c for w, c in alg.gb.nf_word((a,) + u).items()})
        r = linalg.rank_sparse(rows, len(idx))
        if len(idx) > r:
            out.append((e, len(idx) - r))
    return out


def syzygy_step(m: AMatrix, gb, D: int, seeds=None) -> AMatrix:
    """Minimal generators of ker m in internal degrees <= D, as the next differential.

    ``seeds`` are known kernel elements (columns of algebra elements); in each
    degree they are preferred over the echelon basis when choosing new
    generators, which keeps relation columns intact.
    """
    if m.side != "right":
        raise ValueError("syzygies are computed for right complexes")
    alg = _as_algebra(gb)
    dom = m.domain()
    nrows = dom.rank
    gens_found = []     # (degree, column)
    seeds = list(seeds or [])
    lo = min(dom.generator_degrees(), default=0)
    for t in range(lo, D + 1):
        coords, rows, ncod = _image_rows(alg, m, t)
        # modular ranks are lower bounds; span <= kernel closes the sandwich
        r_img = linalg.rank_lower_bound(rows, ncod)
        if r_img is not None and r_img == len(coords):
            continue
        span = []
        for w, col in gens_found:
            for u in alg.basis(t - w):
                span.append(_column_to_vector(alg, _column_times_word(alg, col, u), coords))
        r_span = linalg.rank_lower_bound(span, len(coords))
        if r_img is not None and r_span is not None and r_span == len(coords) - r_img:
            continue
        kdim = len(coords) - linalg.rank_sparse(rows, ncod)
        have = linalg.rank(span, len(coords)) if span else 0
        if have == kdim:
            continue
        # only degrees with new generators need an explicit kernel
        _, ker = kernel_basis(alg, m, t)
        cands = []
        for sd_deg, col in seeds:
            if sd_deg == t:
                v = _column_to_vector(alg, col, coords)
                if any(v):
                    cands.append(v)
        cands.extend(ker)
        for v in cands:
            if linalg.rank(span + [v], len(coords)) > have:
                span.append(v)
                have += 1
                gens_found.append((t, _vector_to_column(alg, coords, v, nrows)))
                if have == kdim:
                    break
    entries = [[col[i] for _, col in gens_found] for i in range(nrows)]
    return AMatrix(entries, dom.shifts, [-w for w, _ in gens_found])


def relation_column(f: FreePoly) -> list:
    """Coefficients g_i with f = sum_i x_i g_i in the free algebra."""
    n = len(f.gens)
    parts = [{} for _ in range(n)]
    for w, c in f.terms.items():
        parts[w[0]][w[1:]] = c
    return [FreePoly(f.gens, p, _clean=True) for p in parts]


def minimal_free_resolution(p: Presentation, H: int = 6, D: int = 12, gb: GBasis | None = None) -> Complex:
    """Minimal free resolution of the trivial right module, exact in degrees <= D."""
    if gb is None:
        gb = complete(p, D)
    alg = GradedAlgebra(gb)
    gens = p.gens
    n = len(gens)
    mg = minimal_generators(alg, D)
    if sum(c for _, c in mg) != n or any(e not in gens.weights for e, _ in mg):
        raise ValueError("the presentation has redundant generators; eliminate them first")
    d1 = AMatrix([[gens.gen(i) for i in range(n)]], [0], [-w for w in gens.weights])
    seeds = [(r.degree, [alg.normal_form(g) for g in relation_column(r)]) for r in p.relations]
    modules = [GradedFreeModule([0]), d1.domain()]
    diffs = [d1]
    terminated = False
    while True:
        nxt = syzygy_step(diffs[-1], alg, D, seeds if len(diffs) == 1 else None)
        if not nxt.col_shifts:
            terminated = True
            break
        if len(diffs) >= H:
            break
        diffs.append(nxt)
        modules.append(nxt.domain())
    c = Complex(modules, diffs, "right", D, terminated)
    c.notes["algebra"] = alg
    return c


def euler_check(c: Complex, gb, D: int) -> bool:
    """sum_i (-1)^i dim (P_i)_n equals dim k_n for every n <= D."""
    alg = _as_algebra(gb)
    for t in range(D + 1):
        chi = sum((-1) ** i * m.piece_dim(alg, t) for i, m in enumerate(c.modules))
        if chi != (1 if t == 0 else 0):
            return False
    return True


def hilbert_from_resolution(c: Complex) -> RationalSeries:
    top = max((-s for m in c.modules for s in m.shifts), default=0)
    p = [0] * (top + 1)
    for i, m in enumerate(c.modules):
        for s in m.shifts:
            p[-s] += (-1) ** i
    return RationalSeries([1], p)


def compose_is_zero(c: Complex, gb) -> bool:
    """Consecutive differentials multiply to zero in the algebra."""
    alg = _as_algebra(gb)
    for a, b in zip(c.differentials, c.differentials[1:]):
        # right: a * b; left: b * a
        first, second = (a, b) if c.side == "right" else (b, a)
        rows, inner, cols = len(first.entries), len(second.entries), len(second.col_shifts)
        for i in range(rows):
            for j in range(cols):
                acc = alg.gens.zero()
                for k in range(inner):
                    f, g = first.entries[i][k], second.entries[k][j]
                    if f and g:
                        acc = acc + f * g
                if alg.normal_form(acc):
                    return False
    return True


def is_minimal(c: Complex) -> bool:
    return all(m.in_augmentation_ideal() for m in c.differentials)


# ---------------------------------------------------------------------------
# duals and homology


def dualize(c: Complex) -> Complex:
    """Apply Hom(-, A): reverse the chain, negate shifts, switch sides.

    The dual of modules P_0..P_L is indexed so that chain position k holds
    the dual of P_{L-k}; each matrix is reused verbatim, now multiplying on
    the other side.
    """
    side = "left" if c.side == "right" else "right"
    modules = [m.dual() for m in reversed(c.modules)]
    diffs = [AMatrix(m.entries, [-s for s in m.row_shifts], [-s for s in m.col_shifts], side)
             for m in reversed(c.differentials)]
    out = Complex(modules, diffs, side, c.certified_degree, c.terminated, dict(c.notes))
    return out


def homology_window(c: Complex, D: int) -> range:
    """Internal degrees whose graded pieces only involve A in degrees <= D."""
    shifts = [s for m in c.modules for s in m.shifts]
    if not shifts:
        return range(0)
    return range(min(-s for s in shifts), D - max(shifts) + 1)


def homology_dimensions(c: Complex, gb, D: int) -> dict:
    """{(chain index, internal degree): dim H} for every degree in the exact window.

    ``c`` must be a complex (see compose_is_zero); that is what lets
    modular rank bounds certify vanishing homology.
    """
    alg = _as_algebra(gb)
    out = {}
    L = c.length
    for t in homology_window(c, D):
        images = {k: _image_rows(alg, c.differentials[k - 1], t) for k in range(1, L + 1)}
        low = {k: linalg.rank_lower_bound(rows, ncod) for k, (_, rows, ncod) in images.items()}
        exact = {}

        def rank(k):
            if k not in images:
                return 0
            if k not in exact:
                _, rows, ncod = images[k]
                exact[k] = linalg.rank_sparse(rows, ncod)
            return exact[k]

        for k in range(L + 1):
            dim = c.modules[k].piece_dim(alg, t)
            lo_k, lo_next = low.get(k, 0), low.get(k + 1, 0)
            # in a complex rank d_k + rank d_{k+1} <= dim, so meeting it proves exactness
            if lo_k is not None and lo_next is not None and lo_k + lo_next == dim:
                out[(k, t)] = 0
            else:
                out[(k, t)] = dim - rank(k) - rank(k + 1)
    return out


def ext_dimensions(dual: Complex, gb, D: int) -> dict:
    """{(i, t): dim Ext^i(k, A)_t} read off a dualized resolution of length L."""
    L = dual.length
    return {(L - k, t): v for (k, t), v in homology_dimensions(dual, gb, D).items()}


# ---------------------------------------------------------------------------
# verdicts


@dataclass
class RegularityVerdict:
    gldim: object                    # int, or a string like ">= 7 (unresolved)"
    gorenstein: bool | None
    ell: int | None
    growth: GrowthVerdict | None
    regular: bool | None
    certificates: dict = field(default_factory=dict)
    shifts: list = field(default_factory=list)
    series: RationalSeries | None = None

    @property
    def status(self) -> str:
        if self.regular is None:
            return f"inconclusive at (H={self.certificates.get('H')}, D={self.certificates.get('D')})"
        return "regular" if self.regular else "not regular"


def as_regular_report(p: Presentation, H: int = 6, D: int = 12, gb=None) -> RegularityVerdict:
    """Global dimension, Gorenstein condition and growth, each bounded by (H, D).

    ``gb`` may be a basis of p already completed through degree D.
    """
    if gb is None:
        gb = complete(p, D)
    else:
        gb.check_degree(D)
    alg = GradedAlgebra(gb)
    res = minimal_free_resolution(p, H, D, gb)
    certs = {"H": H, "D": D, "groebner_complete": gb.complete,
             "differentials_compose_to_zero": compose_is_zero(res, alg),
             "minimal": is_minimal(res)}
    dims = dimension_sequence(gb, D)
    euler = euler_check(res, alg, D) if res.terminated else False
    certs["euler_identity"] = euler
    series = None
    series_ok = False
    if res.terminated:
        series = hilbert_from_resolution(res)
        series_ok = expand(series, D) == list(dims)
        certs["series_matches_dimensions"] = series_ok
    resolved = res.terminated and euler and series_ok and certs["differentials_compose_to_zero"]
    gldim = res.length if resolved else f">= {res.length + 1} (unresolved)"

    # Gorenstein: all Ext vanish except a one-dimensional Ext^d in a single degree
    gorenstein, ell = None, None
    if resolved:
        dual = dualize(res)
        ext = ext_dimensions(dual, alg, D)
        d = res.length
        top = {t: v for (i, t), v in ext.items() if i == d and v}
        others = {(i, t): v for (i, t), v in ext.items() if i != d and v}
        certs["ext_window"] = [homology_window(dual, D).start, homology_window(dual, D).stop - 1]
        if not others and len(top) == 1 and sum(top.values()) == 1:
            gorenstein = True
            ell = -next(iter(top))
        else:
            gorenstein = False
            certs["nonzero_ext"] = sorted([f"Ext^{i} degree {t}: {v}" for (i, t), v in
                                           {**others, **{(d, t): v for t, v in top.items()}}.items()])

    # growth
    growth = None
    if resolved:
        growth = growth_verdict(series.denominator)
        certs["growth_source"] = "resolution series"
    elif gb.complete:
        s = series_from_automaton(gb)
        growth = growth_verdict(s.denominator) if s.numerator == (1,) else _growth_of(s)
        series = s
        certs["growth_source"] = "complete Groebner basis series"
    else:
        e = (D - 2) // 2
        s = fit_rational(list(dims), e) if e >= 0 else None
        certs["growth_source"] = "advisory fit" if s else "none"
        certs["advisory_series"] = str(s) if s else None

    if resolved and gorenstein and growth.kind == "polynomial":
        regular = True
    elif (resolved and gorenstein is False) or (growth is not None and growth.kind == "exponential"):
        regular = False
    else:
        regular = None
    return RegularityVerdict(gldim, gorenstein, ell, growth, regular, certs, res.shifts(), series)


def _growth_of(s: RationalSeries) -> GrowthVerdict:
    from .hilbert import series_growth
    return series_growth(s)


# ---------------------------------------------------------------------------
# quadratic relations as bilinear forms


def relation_bilinear_matrix(f: FreePoly) -> list:
    """B with f = sum_i x_i tau(x_i), tau(x_j) = sum_k B[j][k] x_k."""
    gens = f.gens
    if not gens.all_weight_one:
        raise ValueError("needs degree-one generators")
    if f.degree != 2:
        raise ValueError(f"not a quadratic form: {f}")
    n = len(gens)
    B = [[mpq(0)] * n for _ in range(n)]
    for (j, k), c in f.terms.items():
        B[j][k] = c
    return B


def weak_regular_rank_test(f: FreePoly) -> bool:
    B = relation_bilinear_matrix(f)
    return len(B) >= 2 and linalg.rank(B) == len(B)


# ---------------------------------------------------------------------------
# standard form and Nakayama data


def standard_form_vmv(c: Complex, p: Presentation) -> tuple:
    """Change the basis of P_2 so the last map is the generator column.

    Returns (v, M) with v the generator row and M the middle matrix.  M is
    determined up to one overall scalar (the choice of generator of P_3).
    """
    gens = p.gens
    n = len(gens)
    if not gens.all_weight_one:
        raise ValueError("needs degree-one generators")
    sh = c.shifts()
    if c.length != 3 or sh[0] != [0] or sh[1] != [-1] * n or len(sh[2]) != n \
            or len(set(sh[2])) != 1 or len(sh[3]) != 1 or sh[3][0] != sh[2][0] - 1:
        raise ValueError(f"resolution shape {sh} is not of dimension-3 regular type")
    d2, d3 = c.differentials[1], c.differentials[2]
    C = [[d3.entries[j][0].coeff((i,)) for i in range(n)] for j in range(n)]
    if linalg.rank(C) < n:
        raise ValueError("last map does not span the generators")
    M = [[sum((d2.entries[i][j] * C[j][l] for j in range(n)), gens.zero()) for l in range(n)]
         for i in range(n)]
    v = gens.gens()
    return v, M


@dataclass
class NakayamaData:
    v: list
    M: list
    Q: list
    pi: FreePoly
    tau: list
    pi_invariant: bool
    preserves_relations: bool


def _coefficient_rows(polys):
    words = sorted({w for f in polys for w in f.terms})
    return words, [[f.coeff(w) for w in words] for f in polys]


def nakayama_data(v, M, p: Presentation) -> NakayamaData:
    n = len(v)
    vM = [sum((v[i] * M[i][j] for i in range(n)), p.gens.zero()) for j in range(n)]
    Mv = [sum((M[i][j] * v[j] for j in range(n)), p.gens.zero()) for i in range(n)]
    deg = {f.degree for f in p.relations}
    if len(deg) != 1:
        raise ValueError("relations of mixed degree")
    words, rel_rows = _coefficient_rows(list(p.relations) + vM)
    rel_rows, vm_rows = rel_rows[:len(p.relations)], rel_rows[len(p.relations):]
    if not linalg.same_row_space(rel_rows, vm_rows, len(words)):
        raise ValueError("entries of vM do not span the relations")
    # Q Mv^t = (vM)^t: row i of Q expresses vM_i through the Mv_k
    words, rows = _coefficient_rows(Mv + vM)
    mv_rows, target = rows[:n], rows[n:]
    A = [[mv_rows[k][w] for k in range(n)] for w in range(len(words))]
    if linalg.rank(A, n) < n:
        raise ValueError("entries of Mv^t are dependent; Q is not determined")
    Qm = []
    for i in range(n):
        sol = linalg.solve_any(A, [target[i][w] for w in range(len(words))], n)
        if sol is None:
            raise ValueError("no matrix Q with Q Mv^t = (vM)^t")
        Qm.append(sol)
    pi = sum((v[i] * Mv[i] for i in range(n)), p.gens.zero())
    tau = linalg.inverse(Qm)
    pi_ok = apply_linear_map(pi, tau) == pi
    moved = [apply_linear_map(f, tau) for f in p.relations]
    words, rows = _coefficient_rows(list(p.relations) + moved)
    k = len(p.relations)
    rel_ok = linalg.same_row_space(rows[:k], rows[k:], len(words))
    return NakayamaData(v, M, Qm, pi, tau, pi_ok, rel_ok)
