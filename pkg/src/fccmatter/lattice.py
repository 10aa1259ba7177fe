"""Exact geometry of the face-centered cubic grid.

Positions are stored with doubled in-layer coordinates: a vertex ``(i, j, k)``
becomes ``Coord(2*i, 2*j, k)``.  Even layers hold integer ``(i, j)`` and odd
layers hold ``(i + 0.5, j + 0.5)``, so ``x2`` and ``y2`` are even on even
layers and odd on odd layers.  Every computation here is integer arithmetic.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple


class LatticeError(ValueError):
    """Raised for inputs outside the lattice domain."""


class Coord(NamedTuple):
    x2: int
    y2: int
    z: int

    @classmethod
    def from_real(cls, i, j, k) -> "Coord":
        """Build from real coordinates, e.g. ``Coord.from_real(0.5, 0.5, 1)``."""
        x2, y2 = Fraction(i) * 2, Fraction(j) * 2
        if x2.denominator != 1 or y2.denominator != 1 or Fraction(k).denominator != 1:
            raise LatticeError(f"({i}, {j}, {k}) is not a lattice vertex")
        c = cls(int(x2), int(y2), int(k))
        check_coord(c)
        return c

    @property
    def real(self) -> tuple[float, float, int]:
        return (self.x2 / 2, self.y2 / 2, self.z)

    def __add__(self, d):  # type: ignore[override]
        return Coord(self.x2 + d[0], self.y2 + d[1], self.z + d[2])

    def __sub__(self, other):
        return (self.x2 - other[0], self.y2 - other[1], self.z - other[2])


class Direction(NamedTuple):
    dx2: int
    dy2: int
    dz: int

    def __neg__(self) -> "Direction":
        return Direction(-self.dx2, -self.dy2, -self.dz)


def is_valid(c: Iterable[int]) -> bool:
    x2, y2, z = c
    p = z & 1
    return (x2 & 1) == p and (y2 & 1) == p


def check_coord(c) -> None:
    if not is_valid(c):
        raise LatticeError(f"{tuple(c)} violates the layer parity rule")


# Canonical (homogeneous) port labelling.  Ports 0-3 stay in the layer,
# 4-7 go one layer down and 8-11 one layer up.
DIRECTIONS: tuple[Direction, ...] = (
    Direction(-2, 0, 0),
    Direction(0, 2, 0),
    Direction(2, 0, 0),
    Direction(0, -2, 0),
    Direction(-1, 1, -1),
    Direction(1, 1, -1),
    Direction(1, -1, -1),
    Direction(-1, -1, -1),
    Direction(-1, 1, 1),
    Direction(1, 1, 1),
    Direction(1, -1, 1),
    Direction(-1, -1, 1),
)

PORTS = range(12)
IN_LAYER_PORTS = (0, 1, 2, 3)
DOWN_PORTS = (4, 5, 6, 7)
UP_PORTS = (8, 9, 10, 11)

PORT_OF: dict[tuple[int, int, int], int] = {tuple(d): a for a, d in enumerate(DIRECTIONS)}

# r(a) in the renumbering algorithm is exactly this map.
OPPOSITE: tuple[int, ...] = tuple(PORT_OF[tuple(-x for x in d)] for d in DIRECTIONS)


def is_direction(d) -> bool:
    return tuple(d) in PORT_OF


def port_of_canonical(d) -> int:
    try:
        return PORT_OF[tuple(d)]
    except KeyError:
        raise LatticeError(f"{tuple(d)} is not one of the 12 unit directions") from None


def neighbor_coord(c: Coord, a: int) -> Coord:
    """Position reached from ``c`` through canonical port ``a``."""
    if not isinstance(a, int) or not 0 <= a < 12:
        raise LatticeError(f"invalid port {a!r}")
    d = DIRECTIONS[a]
    return Coord(c[0] + d[0], c[1] + d[1], c[2] + d[2])


def neighbors(c: Coord) -> list[Coord]:
    x2, y2, z = c
    return [Coord(x2 + d[0], y2 + d[1], z + d[2]) for d in DIRECTIONS]


def fcc_distance(u, v) -> int:
    """Graph distance in the FCC grid, closed form.

    With doubled coordinates the half-integer offsets become integers; the
    ``|dx2| - |dz|`` terms always have even value because ``dx2`` and ``dz``
    share parity.
    """
    dz = abs(u[2] - v[2])
    ex = abs(u[0] - v[0]) - dz
    ey = abs(u[1] - v[1]) - dz
    total = (ex if ex > 0 else 0) + (ey if ey > 0 else 0)
    assert total % 2 == 0
    return total // 2 + dz


def layer_distance(u, v) -> int:
    """Manhattan distance inside one layer (the layer is a square grid)."""
    if u[2] != v[2]:
        raise LatticeError(f"{tuple(u)} and {tuple(v)} are on different layers")
    return (abs(u[0] - v[0]) + abs(u[1] - v[1])) // 2


def are_adjacent(u, v) -> bool:
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2]) in PORT_OF


def corners(p) -> list[Coord]:
    """The four same-layer vertices diagonal to ``p`` (distance 2)."""
    x2, y2, z = p
    return [
        Coord(x2 + 2, y2 + 2, z),
        Coord(x2 - 2, y2 + 2, z),
        Coord(x2 + 2, y2 - 2, z),
        Coord(x2 - 2, y2 - 2, z),
    ]


def lex_max(triplets):
    """Largest triplet in lexicographic (i, j, k) order."""
    triplets = list(triplets)
    if not triplets:
        raise LatticeError("lex_max of an empty collection")
    return max(triplets)
