# Zhang twists of presentations by a graded automorphism.
# Run: python3 demos/twists.py
from gmpy2 import mpq

from ncga import fixtures as F
from ncga.gbasis import complete, dimension_sequence
from ncga.twist import GradedAutomorphism, relation_span_equal, twist_presentation, untwist_round_trip

# x -> x, y -> y - x  (column j is the image of generator j)
tau = GradedAutomorphism([[1, -1], [0, 1]])
J = twist_presentation(F.commutative(2), tau)
print([str(f) for f in J.given_relations], "Jordan:", relation_span_equal(J, F.jordan_plane()))
print("round trip:", untwist_round_trip(F.commutative(2), tau))

# diagonal data gives skew-commuting variables with parameter product 1
t = twist_presentation(F.commutative(3), GradedAutomorphism.diagonal([2, 3, mpq(1, 6)]))
for f in t.relations:
    print("  ", f)

# twisting leaves the Hilbert function alone
p = F.cubic()
tw = twist_presentation(p, GradedAutomorphism.diagonal([2, 5]))
print(list(dimension_sequence(complete(p, 10), 10)))
print(list(dimension_sequence(complete(tw, 10), 10)))
