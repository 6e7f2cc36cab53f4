import random

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from ncga import fixtures as F
from ncga import linalg
from ncga.freealg import Q
from ncga.gbasis import complete, dimension_sequence
from ncga.twist import (GradedAutomorphism, preserves_relations, relation_span_equal,
                        twist_presentation, untwist_round_trip)

from conftest import COMPLETE

D = GradedAutomorphism.diagonal


def random_invertible(n, rng):
    while True:
        T = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        if linalg.rank(T, n) == n:
            return GradedAutomorphism(T)


def test_commutative_plane_twists_to_jordan():
    tau = GradedAutomorphism([[1, -1], [0, 1]])
    p = F.commutative(2)
    t = twist_presentation(p, tau)
    x, y = p.gens.gens()
    assert t.given_relations == [y * x - x * y - x * x]
    assert relation_span_equal(t, F.jordan_plane())
    assert untwist_round_trip(p, tau)
    assert preserves_relations(p, tau)


@pytest.mark.parametrize("a, b, c", [(2, 3, mpq(1, 6)), (1, 2, 3), (5, mpq(-1, 2), 7)])
def test_diagonal_twist_of_commutative_space(a, b, c):
    t = twist_presentation(F.commutative(3), D([a, b, c]))
    a, b, c = Q(a), Q(b), Q(c)
    # relations yx - (a/b) xy, zy - (b/c) yz, xz - (c/a) zx
    p, r, q = a / b, b / c, c / a
    assert p * q * r == 1
    assert relation_span_equal(t, F.quantum3(p, q, r))


def test_twist_relations_are_monic_after_normalization():
    t = twist_presentation(F.commutative(3), D([2, 3, mpq(1, 6)]))
    for f in t.relations:
        assert f.coeff(max(f.terms, key=lambda w: (len(w), w))) == 1


def test_identity_twist_is_trivial():
    for make in COMPLETE.values():
        p = make()
        t = twist_presentation(p, GradedAutomorphism.identity(p.n))
        assert t.given_relations == p.given_relations


def test_round_trip_on_fixtures():
    rng = random.Random(7)
    for make in list(COMPLETE.values()) + [F.sklyanin]:
        p = make()
        assert untwist_round_trip(p, random_invertible(p.n, rng))


@pytest.mark.parametrize("make", [F.quantum_plane, lambda: F.commutative(3)])
def test_round_trip_random(make):
    rng = random.Random(2024)
    p = make()
    for _ in range(50):
        assert untwist_round_trip(p, random_invertible(p.n, rng))


def _automorphisms(name, p):
    n = p.n
    out = [D([2] * n), D([mpq(-1, 3)] * n)]
    if preserves_relations(p, D([2, 3, 5][:n])):
        out.append(D([2, 3, 5][:n]))
    if name in ("jordan_plane", "polynomial_ring_2"):
        out.append(GradedAutomorphism([[3, 1], [0, 3]]))
    if name == "polynomial_ring_3":
        out.append(GradedAutomorphism([[1, 2, 0], [1, -1, 1], [0, 1, 2]]))
    return out


@pytest.mark.parametrize("name", sorted(COMPLETE))
def test_dimensions_are_twist_invariant(cache, name):
    p = cache.presentation(name)
    base = list(dimension_sequence(cache.gbasis(name), 10))
    for tau in _automorphisms(name, p):
        assert preserves_relations(p, tau)
        t = twist_presentation(p, tau)
        assert list(dimension_sequence(complete(t, 10), 10)) == base


def test_sklyanin_scalar_twist(cache):
    p = cache.presentation("sklyanin")
    t = twist_presentation(p, D([3, 3, 3]))
    assert list(dimension_sequence(complete(t, 6), 6)) == [1, 3, 6, 10, 15, 21, 28]


nz = st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(bool)


@settings(max_examples=30, deadline=None)
@given(st.tuples(nz, nz, nz), st.tuples(nz, nz, nz))
def test_diagonal_twists_compose(s, t):
    p = F.quantum3(2, 3, 5)
    tau, sigma = D(s), D(t)
    twice = twist_presentation(twist_presentation(p, tau), sigma)
    once = twist_presentation(p, sigma.compose(tau))
    assert relation_span_equal(twice, once)


def test_compose_composes_matrices():
    a = GradedAutomorphism([[1, 1], [0, 1]])
    b = D([2, 3])
    assert a.compose(b).matrix == ((2, 3), (0, 3))
    assert a.power(-2) == [[1, -2], [0, 1]]


def test_errors():
    with pytest.raises(ValueError):
        GradedAutomorphism([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        GradedAutomorphism([[1, 2]])
    with pytest.raises(ValueError):
        twist_presentation(F.quantum_plane(), D([1, 2, 3]))
    from ncga.freealg import Presentation
    w = Presentation.build("xy", [lambda x, y: y * y - x * x * x * x], weights=[1, 2])
    with pytest.raises(ValueError):
        twist_presentation(w, D([1, 1]))
