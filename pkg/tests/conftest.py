from functools import lru_cache

import pytest

from ncga import fixtures as F
from ncga.gbasis import complete
from ncga.regularity import GradedAlgebra, as_regular_report, minimal_free_resolution

# fixtures whose Groebner basis completes within degree 12
COMPLETE = {
    "quantum_plane": F.quantum_plane,
    "jordan_plane": F.jordan_plane,
    "polynomial_ring_2": lambda: F.commutative(2),
    "polynomial_ring_3": lambda: F.commutative(3),
    "quantum3": F.quantum3,
    "cubic": F.cubic,
    "heisenberg": F.heisenberg,
    "finite_process": F.finite_process,
    "anticommuting_z": F.anticommuting_z,
    "reg3": F.reg3,
    "yx": F.yx_algebra,
    "x_squared": F.x_squared,
}


@lru_cache(maxsize=None)
def presentation(name):
    if name == "sklyanin":
        return F.sklyanin()
    if name == "jordan_yx":
        return F.jordan_plane("yx")
    return COMPLETE[name]()


@lru_cache(maxsize=None)
def gbasis(name, D=12):
    return complete(presentation(name), D)


@lru_cache(maxsize=None)
def algebra(name, D=12):
    return GradedAlgebra(gbasis(name, D))


@lru_cache(maxsize=None)
def resolution(name, H=6, D=12):
    return minimal_free_resolution(presentation(name), H, D, gbasis(name, D))


@lru_cache(maxsize=None)
def verdict(name, H=6, D=12):
    return as_regular_report(presentation(name), H, D, gbasis(name, D))


class Cache:
    presentation = staticmethod(presentation)
    gbasis = staticmethod(gbasis)
    algebra = staticmethod(algebra)
    resolution = staticmethod(resolution)
    verdict = staticmethod(verdict)


@pytest.fixture(scope="session")
def cache():
    return Cache


# criterion number -> "PASS" / "FAIL", filled in by test_acceptance
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n}: {ACCEPTANCE[n]}")
