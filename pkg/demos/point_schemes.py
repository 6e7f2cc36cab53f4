# Truncated point schemes: matrix forms over Q and point counts over F_p.
# Run: python3 demos/point_schemes.py
from gmpy2 import mpq

from ncga import fixtures as F
from ncga.pointscheme import (det_locus, enumerate_points_mod_p, fiber_over_point, matrix_form,
                              sigma_cross_product, stabilization_probe, truncated_scheme_system)

# %% Sklyanin(2, 3, 5): E is a plane cubic, sigma comes from a cross product
L, R = matrix_form(F.sklyanin())
print("det =", det_locus(L))
print("sigma =", [str(s) for s in sigma_cross_product(L)])
pt = (1, -1, 0)                     # on E: x^3 + y^3 = 0, xyz = 0
print("fiber over", pt, "->", [tuple(str(c) for c in q) for q in fiber_over_point(L, pt)])

# %% three-variable quantum space: E degenerates as pqr -> 1
for r in (5, 1, mpq(1, 6)):
    L, _ = matrix_form(F.quantum3(2, 3, r))
    print(f"r={r}: det = {det_locus(L)}")

# %% counting points over small fields
for name, p, prime, m in [("yx", F.yx_algebra(), 5, 4), ("cubic", F.cubic(), 5, 3),
                          ("q3, pqr=1", F.quantum3(2, 3, mpq(1, 6)), 7, 3)]:
    rows = stabilization_probe(p, prime, m)
    print(name, [(r.m, r.count, r.injective) for r in rows])

X3 = enumerate_points_mod_p(truncated_scheme_system(F.cubic(), 3), 5)
print("cubic X_3 is (p0, p1, p0):", all(a == c for a, b, c in X3.points))
