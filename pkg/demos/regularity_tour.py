# Minimal resolutions of k and the regularity verdicts built on them.
# Run: python3 demos/regularity_tour.py
from ncga import fixtures as F
from ncga.gbasis import complete
from ncga.regularity import (as_regular_report, dualize, ext_dimensions, minimal_free_resolution,
                             nakayama_data, standard_form_vmv)

for make in (F.jordan_plane, F.quantum3, F.cubic, F.yx_algebra, F.x_squared):
    p = make()
    v = as_regular_report(p, 6, 12)
    print(f"{p.name:12s} {v.status:28s} gldim={v.gldim}  ell={v.ell}  growth={v.growth}")

# %% the cubic algebra: shifts and the first two differentials
p = F.cubic()
c = minimal_free_resolution(p, 6, 12)
print(c.shifts())
for m in c.differentials[:2]:
    print(m.format())

# %% k<x,y>/(yx) has finite global dimension but Ext(k, A) is spread out
p = F.yx_algebra()
gb = complete(p, 12)
ext = ext_dimensions(dualize(minimal_free_resolution(p, 6, 12, gb)), gb, 12)
print(sorted((k, d) for k, d in ext.items() if d)[:8], "...")

# %% Nakayama data from the superpotential x M x^t
p = F.quantum3(2, 3, 5)
v, M = standard_form_vmv(minimal_free_resolution(p, 6, 12), p)
nd = nakayama_data(v, M, p)
print("Q =", [[str(a) for a in row] for row in nd.Q])
print("pi =", nd.pi.format(p.order))
print("tau(pi) == pi:", nd.pi_invariant)
