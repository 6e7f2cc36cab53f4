# Groebner bases, reduced words and Hilbert series for a few small algebras.
# Run: python3 demos/groebner_and_series.py
from ncga import fixtures as F
from ncga.gbasis import complete, dimension_sequence, reduced_words
from ncga.hilbert import fit_rational, series_from_automaton, series_growth

# %% three skew-commuting variables: the relations are already a basis
gb = complete(F.quantum3(2, 3, 5), 12)
print("quantum3 rules:", gb.format())
print("degree-2 words:", [gb.gens.word_str(w) for w in reduced_words(gb, 2)])

# %% finite_process picks up two cubic rules before it closes up
gb = complete(F.finite_process(), 12)
for line in gb.format():
    print("  ", line)
s = series_from_automaton(gb)
print("series", s, "->", series_growth(s))

# %% same Jordan relation, other order: the basis never finishes
for D in (6, 8, 10, 12):
    gb = complete(F.jordan_plane("yx"), D)
    print(f"D={D:2d}  rules={len(gb.rules):2d}  complete={gb.complete}")

# the counts are still exact through D, so a rational fit is a fair guess
dims = dimension_sequence(gb, 12)
print(list(dims), dims.status)
print("advisory fit:", fit_rational(list(dims), 4))

# %% x^2 = 0 grows like the Fibonacci numbers
gb = complete(F.x_squared(), 12)
s = series_from_automaton(gb)
print(list(dimension_sequence(gb, 12)), s, series_growth(s))
