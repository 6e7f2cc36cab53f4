from importlib import resources

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from ncga import fixtures as F
from ncga.algfile import AlgebraFile, ParseError, parse_algebra, print_algebra, read_algebra
from ncga.freealg import FreePoly, GeneratorSet, OrderSpec, Presentation, Q

BUNDLED = {
    "quantum_plane": F.quantum_plane, "jordan": F.jordan_plane,
    "jordan_yx": lambda: F.jordan_plane("yx"), "polynomial2": lambda: F.commutative(2),
    "polynomial3": lambda: F.commutative(3), "quantum3": F.quantum3, "sklyanin": F.sklyanin,
    "cubic": F.cubic, "heisenberg": F.heisenberg, "finite_process": F.finite_process,
    "anticommuting_z": F.anticommuting_z, "reg3": F.reg3, "yx": F.yx_algebra,
    "x_squared": F.x_squared, "free2": lambda: F.free_algebra(2),
}


def bundled_text(name):
    return resources.files("ncga").joinpath("data", f"{name}.alg").read_text()


def test_quantum_plane_text():
    af = parse_algebra("gens x:1 y:1; order deglex x<y; rel y*x - 2*x*y;")
    p = af.presentation
    x, y = p.gens.gens()
    assert p.given_relations == [y * x - 2 * x * y]
    assert p.gens.weights == (1, 1)


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_bundled_files_match_fixtures(name):
    af = parse_algebra(bundled_text(name))
    ref = BUNDLED[name]()
    assert af.presentation.gens.names == ref.gens.names
    assert af.presentation.relations == ref.relations
    assert af.presentation.order.variable_permutation == ref.order.variable_permutation


@pytest.mark.parametrize("name", sorted(BUNDLED))
def test_printer_fixpoint_on_bundled(name):
    once = print_algebra(parse_algebra(bundled_text(name)))
    assert print_algebra(parse_algebra(once)) == once


def test_sklyanin_parameters():
    af = parse_algebra(bundled_text("sklyanin"))
    assert af.params == {"a": 2, "b": 3, "c": 5}
    p = af.presentation
    x, y, z = p.gens.gens()
    assert p.given_relations[2] == 2 * y * x + 3 * x * y + 5 * z * z
    assert len(p.given_relations) == 3 and p.n == 3


def test_overrides_replace_parameters():
    af = parse_algebra(bundled_text("quantum3"), {"r": 1})
    assert af.params["r"] == 1
    assert af.presentation.relations == F.quantum3(2, 3, 1).relations


def test_declared_parameter_needs_a_value():
    text = "gens x y; param q; rel y*x - q*x*y;"
    with pytest.raises(ParseError, match="parameter 'q' unresolved"):
        parse_algebra(text)
    af = parse_algebra(text, {"q": "3/2"})
    x, y = af.presentation.gens.gens()
    assert af.presentation.given_relations == [y * x - mpq(3, 2) * x * y]


def test_operators():
    af = parse_algebra("gens x y; param b = -2; rel (x + y)^2 - x*y/b - (1/b)*y*x + 3/4*x^2;")
    x, y = af.presentation.gens.gens()
    q = Q("3/4")
    assert af.presentation.given_relations == [(x + y) * (x + y) + x * y * Q("1/2") + y * x * Q("1/2")
                                               + q * x * x]


def test_comments_and_whitespace():
    af = parse_algebra("# header\n gens x y ;\n\n rel y*x   # trailing\n - x*y;\n")
    x, y = af.presentation.gens.gens()
    assert af.presentation.given_relations == [y * x - x * y]
    assert af.relation_lines == [4]


@pytest.mark.parametrize("text, msg, line, col", [
    ("gens x y;\nrel y*x - x*y - x;", "inhomogeneous", 2, 5),
    ("gens x y;\nrel y*x - w*y;", "unknown identifier 'w'", 2, 11),
    ("gens x y;\nrel x*y - x*y;", "zero relation", 2, 5),
    ("gens x y;\nrel x;", "degree at least 2", 2, 5),
    ("gens x y;\nrel x*y $ y;", "unexpected character", 2, 9),
    ("gens x y;\nrel x*y rel y*x;", "expected ;", 2, 9),
    ("gens x y;\nrel x*y", "unexpected end", 2, 7),
    ("gens x y;\norder deglex x;", "every generator", 2, 7),
    ("gens x y;\norder revlex x < y;", "only deglex", 2, 7),
    ("gens x x;", "declared twice", 1, 8),
    ("gens x:0 y;", "positive", 1, 8),
    ("gens x y;\nrel x*y/x;", "divide by a scalar", 2, 8),
    ("gens x y;\nrel x*y/0;", "division by zero", 2, 8),
    ("rel x*y;", "must follow 'gens'", 1, 1),
    ("gens x y;\nfoo;", "unknown statement", 2, 1),
])
def test_error_positions(text, msg, line, col):
    with pytest.raises(ParseError, match=msg) as info:
        parse_algebra(text, source="t.alg")
    err = info.value
    assert (err.line, err.col) == (line, col)
    assert str(err).startswith(f"t.alg:{line}:{col}: ")


def test_read_algebra(tmp_path):
    path = tmp_path / "q.alg"
    path.write_text("gens x y; rel y*x - 5*x*y;")
    af = read_algebra(path)
    assert af.source == str(path)
    with pytest.raises(ParseError) as info:
        (tmp_path / "bad.alg").write_text("gens x y;\nrel y*x - x;")
        read_algebra(tmp_path / "bad.alg")
    assert str(info.value).startswith(str(tmp_path / "bad.alg") + ":2:")


def test_print_format():
    af = parse_algebra("name qp; gens x y; order deglex y < x; param q = 3/2; rel y*x - q*x*y;")
    assert print_algebra(af) == ("name qp;\ngens x:1 y:1;\norder deglex y < x;\nparam q = 3/2;\n"
                                 "rel -3/2*x*y + y*x;\n")


coef = st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool)


@st.composite
def presentations(draw):
    n = draw(st.integers(1, 3))
    weights = draw(st.lists(st.integers(1, 2), min_size=n, max_size=n))
    gens = GeneratorSet("xyz"[:n], weights)
    order = OrderSpec.deglex(gens, list(draw(st.permutations(range(n)))))
    rels = []
    for _ in range(draw(st.integers(1, 3))):
        d = draw(st.integers(2, 4))
        words = [w for w in _words(n, d, weights)]
        if not words:
            continue
        chosen = draw(st.lists(st.sampled_from(words), min_size=1, max_size=4, unique=True))
        f = FreePoly(gens, {w: Q(draw(coef)) for w in chosen})
        rels.append(f)
    if not rels:
        x = gens.gen(0)
        rels = [x * x]
    return Presentation(gens, rels, order)


def _words(n, d, weights):
    out = []

    def go(prefix, rem):
        if rem == 0:
            out.append(tuple(prefix))
            return
        for j in range(n):
            if weights[j] <= rem:
                go(prefix + [j], rem - weights[j])
    go([], d)
    return out


@settings(max_examples=100, deadline=None)
@given(presentations())
def test_printer_parser_fixpoint(p):
    text = print_algebra(AlgebraFile(p, {}))
    again = parse_algebra(text)
    assert again.presentation.given_relations == p.given_relations
    assert print_algebra(again) == text
