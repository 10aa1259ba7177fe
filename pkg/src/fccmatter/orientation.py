"""Per-particle port labellings as signed layer-preserving lattice symmetries.

An orientation is a linear map on doubled coordinates: a signed permutation of
the two in-layer axes (one of the 8 symmetries of the square) combined with an
optional flip of the vertical axis.  The port labelled ``a`` on a particle with
orientation ``o`` points in world direction ``o.apply(DIRECTIONS[a])``.

Serialised index: ``square_index * 2 + z_flip``; index 0 is the identity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .lattice import DIRECTIONS, PORT_OF, Direction, LatticeError

# (a, b, c, d) maps (x, y) -> (a*x + b*y, c*x + d*y)
SQUARE_SYMMETRIES: tuple[tuple[int, int, int, int], ...] = (
    (1, 0, 0, 1),  # identity
    (0, -1, 1, 0),  # quarter turn
    (-1, 0, 0, -1),  # half turn
    (0, 1, -1, 0),  # three-quarter turn
    (1, 0, 0, -1),  # mirror y
    (-1, 0, 0, 1),  # mirror x
    (0, 1, 1, 0),  # swap axes
    (0, -1, -1, 0),  # anti-diagonal mirror
)


@dataclass(frozen=True)
class Orientation:
    xy_map: int
    z_flip: bool
    _m: tuple[int, int, int, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.xy_map < len(SQUARE_SYMMETRIES):
            raise LatticeError(f"unknown square symmetry {self.xy_map}")
        object.__setattr__(self, "_m", SQUARE_SYMMETRIES[self.xy_map])

    @property
    def index(self) -> int:
        return self.xy_map * 2 + int(self.z_flip)

    def apply(self, d) -> Direction:
        a, b, c, e = self._m
        x, y, z = d
        return Direction(a * x + b * y, c * x + e * y, -z if self.z_flip else z)

    @cached_property
    def directions(self) -> tuple[Direction, ...]:
        return tuple(self.apply(d) for d in DIRECTIONS)

    @cached_property
    def port_table(self) -> dict[tuple[int, int, int], int]:
        return {tuple(d): a for a, d in enumerate(self.directions)}

    @cached_property
    def label_permutation(self) -> tuple[int, ...]:
        """sigma(a): canonical label whose direction equals this map applied to DIRECTIONS[a]."""
        return tuple(PORT_OF[tuple(d)] for d in self.directions)

    def compose(self, other: "Orientation") -> "Orientation":
        """``self`` after ``other``."""
        return from_matrix(_mul(self._m, other._m), self.z_flip != other.z_flip)

    def inverse(self) -> "Orientation":
        for o in ORIENTATIONS:
            if self.compose(o) == IDENTITY:
                return o
        raise AssertionError("orientation group is not closed")


def _mul(m, n):
    a, b, c, d = m
    e, f, g, h = n
    return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)


def from_matrix(m, z_flip: bool) -> Orientation:
    return Orientation(SQUARE_SYMMETRIES.index(tuple(m)), bool(z_flip))


ORIENTATIONS: tuple[Orientation, ...] = tuple(
    Orientation(s, bool(f)) for s in range(len(SQUARE_SYMMETRIES)) for f in (0, 1)
)
IDENTITY = ORIENTATIONS[0]


def all_orientations() -> list[Orientation]:
    return list(ORIENTATIONS)


def orientation_from_index(index: int) -> Orientation:
    if not isinstance(index, int) or not 0 <= index < len(ORIENTATIONS):
        raise LatticeError(f"orientation index must be in 0..15, got {index!r}")
    return ORIENTATIONS[index]


def port_direction(o: Orientation, a: int) -> Direction:
    if not 0 <= a < 12:
        raise LatticeError(f"invalid port {a!r}")
    return o.directions[a]


def port_of_direction(o: Orientation, d) -> int:
    try:
        return o.port_table[tuple(d)]
    except KeyError:
        raise LatticeError(f"{tuple(d)} is not a unit direction") from None
