"""Exact linear algebra over Q backed by FLINT's fmpq_mat.

Matrices are given as lists of rows; entries may be anything ``Q`` accepts.
Results come back as lists of mpq.
"""

from __future__ import annotations

import flint
from gmpy2 import mpq

from .freealg import Q


def _fq(c):
    c = Q(c)
    return flint.fmpq(int(c.numerator), int(c.denominator))


def _mq(c) -> mpq:
    return mpq(int(c.p), int(c.q))


def to_flint(rows, ncols=None) -> flint.fmpq_mat:
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    flat = []
    for r in rows:
        if len(r) != ncols:
            raise ValueError("ragged matrix")
        flat.extend(_fq(c) if c else 0 for c in r)
    return flint.fmpq_mat(len(rows), ncols, flat)


def from_flint(M: flint.fmpq_mat) -> list:
    return [[_mq(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())]


def sparse_rows_to_flint(rows, ncols) -> flint.fmpq_mat:
    """Rows given as {column: value} dicts."""
    M = flint.fmpq_mat(len(rows), ncols)
    for i, r in enumerate(rows):
        for j, c in r.items():
            if c:
                M[i, j] = _fq(c)
    return M


def rref(rows, ncols=None):
    """Reduced row echelon form: (nonzero rows, pivot columns)."""
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    if not rows:
        return [], []
    M = rows if isinstance(rows, flint.fmpq_mat) else to_flint(rows, ncols)
    return _rref_flint(M)


def _rref_flint(M):
    R, rk = M.rref()
    out, piv = [], []
    nc = M.ncols()
    for i in range(rk):
        row = [_mq(R[i, j]) for j in range(nc)]
        piv.append(next(j for j, c in enumerate(row) if c))
        out.append(row)
    return out, piv


def rref_sparse(rows, ncols):
    if not rows:
        return [], []
    return _rref_flint(sparse_rows_to_flint(rows, ncols))


def rank(rows, ncols=None) -> int:
    rows = list(rows)
    if not rows:
        return 0
    if ncols is None:
        ncols = len(rows[0])
    if ncols == 0:
        return 0
    return to_flint(rows, ncols).rank()


def rank_sparse(rows, ncols) -> int:
    if not rows or ncols == 0:
        return 0
    return sparse_rows_to_flint(rows, ncols).rank()


def nullspace_from_rref(R, piv, ncols) -> list:
    """Basis of {v : A v = 0} from the RREF of A, one vector per free column."""
    pivset = set(piv)
    basis = []
    for f in range(ncols):
        if f in pivset:
            continue
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, p in zip(R, piv):
            if row[f]:
                v[p] = -row[f]
        basis.append(v)
    return basis


def nullspace(rows, ncols=None) -> list:
    rows = list(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    R, piv = rref(rows, ncols) if rows else ([], [])
    return nullspace_from_rref(R, piv, ncols)


def nullspace_sparse(rows, ncols) -> list:
    R, piv = rref_sparse(rows, ncols)
    return nullspace_from_rref(R, piv, ncols)


def solve(A, b):
    """Unique solution x of A x = b (A square, invertible); raises otherwise."""
    M = to_flint(A)
    x = M.solve(to_flint([[c] for c in b], 1))
    return [_mq(x[i, 0]) for i in range(x.nrows())]


def solve_any(A, b, ncols):
    """Some solution of A x = b, or None when inconsistent."""
    aug = [list(r) + [bc] for r, bc in zip(A, b)]
    R, piv = rref(aug, ncols + 1) if aug else ([], [])
    if ncols in piv:
        return None
    x = [mpq(0)] * ncols
    for row, p in zip(R, piv):
        x[p] = row[ncols]
    return x


def inverse(A) -> list:
    return from_flint(to_flint(A).inv())


def det(A) -> mpq:
    if not A:
        return mpq(1)
    return _mq(to_flint(A).det())


def matmul(A, B) -> list:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), mpq(0)) for j in range(len(B[0]))]
            for i in range(len(A))]


def identity(n) -> list:
    return [[mpq(int(i == j)) for j in range(n)] for i in range(n)]


def same_row_space(A, B, ncols) -> bool:
    ra, rb = rank(A, ncols), rank(B, ncols)
    return ra == rb and rank(list(A) + list(B), ncols) == ra


# A 62-bit prime; ranks modulo p never exceed ranks over Q.
MODULUS = 4611686018427387847


def rank_lower_bound(rows, ncols, p: int = MODULUS):
    """Rank of the reduction mod p, a lower bound for the rank over Q.

    Rows are dense lists or {column: value} dicts.  Returns None if some
    denominator vanishes mod p.
    """
    rows = list(rows)
    if not rows or ncols == 0:
        return 0
    M = flint.nmod_mat(len(rows), ncols, p)
    for i, r in enumerate(rows):
        items = r.items() if isinstance(r, dict) else enumerate(r)
        for j, c in items:
            if not c:
                continue
            c = Q(c)
            den = int(c.denominator) % p
            if not den:
                return None
            M[i, j] = int(c.numerator) % p * pow(den, -1, p) % p
    return M.rank()
