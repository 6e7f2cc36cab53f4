"""Named presentations used throughout the tests and demos.

Parameters are exact rationals; defaults match the worked examples.
"""

from __future__ import annotations

from .freealg import Presentation, Q


def quantum_plane(q=2) -> Presentation:
    q = Q(q)
    return Presentation.build("xy", [lambda x, y: y * x - q * x * y], name="quantum_plane",
                              params={"q": q})


def jordan_plane(order="xy") -> Presentation:
    """order lists generators smallest first; "yx" gives the non-terminating order."""
    return Presentation.build("xy", [lambda x, y: y * x - x * y - x * x], order=list(order),
                              name="jordan_plane")


def commutative(n=2) -> Presentation:
    names = "xyzw"[:n]
    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            rels.append(lambda *g, i=i, j=j: g[j] * g[i] - g[i] * g[j])
    return Presentation.build(names, rels, name=f"polynomial_ring_{n}")


def quantum3(p=2, q=3, r=5) -> Presentation:
    p, q, r = Q(p), Q(q), Q(r)
    # listed so the left matrix form has rows (zy, xz, yx), giving det = (1 - pqr) xyz
    return Presentation.build("xyz", [
        lambda x, y, z: z * y - r * y * z,
        lambda x, y, z: x * z - q * z * x,
        lambda x, y, z: y * x - p * x * y,
    ], name="quantum3", params={"p": p, "q": q, "r": r})


def sklyanin(a=2, b=3, c=5) -> Presentation:
    a, b, c = Q(a), Q(b), Q(c)
    return Presentation.build("xyz", [
        lambda x, y, z: a * z * y + b * y * z + c * x * x,
        lambda x, y, z: a * x * z + b * z * x + c * y * y,
        lambda x, y, z: a * y * x + b * x * y + c * z * z,
    ], name="sklyanin", params={"a": a, "b": b, "c": c})


def cubic() -> Presentation:
    return Presentation.build("xy", [
        lambda x, y: y * x * x - x * x * y,
        lambda x, y: y * y * x - x * y * y,
    ], name="cubic")


def heisenberg() -> Presentation:
    """Enveloping algebra of the Heisenberg Lie algebra with the central generator eliminated."""
    return Presentation.build("xy", [
        lambda x, y: y * x * x - 2 * x * y * x + x * x * y,
        lambda x, y: y * y * x - 2 * y * x * y + x * y * y,
    ], name="heisenberg")


def finite_process() -> Presentation:
    return Presentation.build("xyz", [
        lambda x, y, z: z * z - x * y - y * x,
        lambda x, y, z: z * x - x * z,
        lambda x, y, z: z * y - y * z,
    ], name="finite_process")


def anticommuting_z() -> Presentation:
    """zx + xz, yz + zy, z^2 - x^2 - y^2: finite basis after completion, series 1/(1-t)^3."""
    return Presentation.build("xyz", [
        lambda x, y, z: z * x + x * z,
        lambda x, y, z: y * z + z * y,
        lambda x, y, z: z * z - x * x - y * y,
    ], name="anticommuting_z")


def reg3(a=1, b=1) -> Presentation:
    a, b = Q(a), Q(b)
    return Presentation.build("xyz", [
        lambda x, y, z: z * y + (1 / b) * x * x - (a / b) * y * z,
        lambda x, y, z: z * x - (b / a) * x * z - (1 / a) * y * y,
        lambda x, y, z: y * x - (a / b) * x * y,
    ], name="reg3", params={"a": a, "b": b})


def yx_algebra() -> Presentation:
    return Presentation.build("xy", [lambda x, y: y * x], name="yx")


def x_squared() -> Presentation:
    return Presentation.build("xy", [lambda x, y: x * x], name="x_squared")


def free_algebra(n=2) -> Presentation:
    return Presentation.build("xyzw"[:n], [], name=f"free_{n}")


ALL = {
    "quantum_plane": quantum_plane,
    "jordan_plane": jordan_plane,
    "commutative": commutative,
    "quantum3": quantum3,
    "sklyanin": sklyanin,
    "cubic": cubic,
    "heisenberg": heisenberg,
    "finite_process": finite_process,
    "anticommuting_z": anticommuting_z,
    "reg3": reg3,
    "yx_algebra": yx_algebra,
    "x_squared": x_squared,
    "free_algebra": free_algebra,
}
