"""Periodic distance-ℓ colouring of the FCC grid.

Colours are ``mod(k, ℓ+1)·m + mod(i' + c·j', m)`` with ``m = ceil((ℓ+1)²/2)``,
where ``(i', j')`` are the layer coordinates shifted to integers and ``c`` is
the in-layer multiplier.  Everything runs on doubled coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .lattice import Coord, fcc_distance


def _in_layer_offsets(ell: int):
    for di in range(-ell, ell + 1):
        rest = ell - abs(di)
        for dj in range(-rest, rest + 1):
            if di or dj:
                yield di, dj


def multiplier_valid(ell: int, m: int, c: int) -> bool:
    """No nonzero in-layer offset within distance ``ell`` vanishes under ``i + c·j`` mod ``m``."""
    return all((di + c * dj) % m for di, dj in _in_layer_offsets(ell))


@lru_cache(maxsize=None)
def _multiplier(ell: int, m: int) -> int:
    if multiplier_valid(ell, m, ell % m):
        return ell
    # ℓ itself collides for even ℓ >= 4; take the smallest working residue
    for c in range(m):
        if multiplier_valid(ell, m, c):
            return c
    raise ValueError(f"no valid multiplier for ell={ell}")


@dataclass(frozen=True)
class ColorParams:
    ell: int
    m_ell: int = field(init=False)
    multiplier: int = field(init=False)

    def __post_init__(self):
        if not isinstance(self.ell, int) or self.ell < 1:
            raise ValueError(f"ell must be an integer >= 1, got {self.ell!r}")
        m = -(-((self.ell + 1) ** 2) // 2)
        object.__setattr__(self, "m_ell", m)
        object.__setattr__(self, "multiplier", _multiplier(self.ell, m))

    @property
    def palette(self) -> int:
        return (self.ell + 1) * self.m_ell


def color_params(ell: int) -> ColorParams:
    return ColorParams(ell)


def f_ell(params: ColorParams, c) -> int:
    """Colour of a (possibly wrapped) doubled triplet."""
    x2, y2, z = c
    # integral layer positions have even doubled coordinates; half-integral
    # ones are shifted down by one half
    if x2 % 2:
        i, j = (x2 - 1) // 2, (y2 - 1) // 2
    else:
        i, j = x2 // 2, y2 // 2
    m = params.m_ell
    return (z % (params.ell + 1)) * m + (i + params.multiplier * j) % m


def wrap_N_ell(params: ColorParams, c) -> Coord:
    """Reduce a doubled triplet to the fundamental period; parity of x2, y2 is kept."""
    x2, y2, z = c
    m2 = 2 * params.m_ell
    return Coord(x2 % m2, y2 % m2, z % (params.ell + 1))


@dataclass(frozen=True)
class Bounds:
    """Half-open ranges over doubled x2, y2 and over z."""

    x2: tuple[int, int]
    y2: tuple[int, int]
    z: tuple[int, int]


def period_bounds(params: ColorParams, periods: int = 2) -> Bounds:
    m2 = 2 * params.m_ell
    return Bounds((0, periods * m2), (0, periods * m2), (0, periods * (params.ell + 1)))


def patch(bounds: Bounds) -> list[Coord]:
    out = []
    for z in range(*bounds.z):
        for x2 in range(*bounds.x2):
            if (x2 - z) % 2:
                continue
            for y2 in range(*bounds.y2):
                if (y2 - z) % 2 == 0:
                    out.append(Coord(x2, y2, z))
    return out


def ball_offsets(radius: int) -> list[tuple[int, int, int]]:
    """Nonzero doubled offsets within FCC distance ``radius``."""
    origin = Coord(0, 0, 0)
    out = []
    for dz in range(-radius, radius + 1):
        for dx in range(-2 * radius, 2 * radius + 1):
            if (dx - dz) % 2:
                continue
            for dy in range(-2 * radius, 2 * radius + 1):
                if (dy - dz) % 2 or (dx, dy, dz) == (0, 0, 0):
                    continue
                if fcc_distance(origin, Coord(dx, dy, dz)) <= radius:
                    out.append((dx, dy, dz))
    return out


@dataclass
class ColoringReport:
    valid: bool
    violation: tuple | None
    colors_used: int
    vertices: int


def verify_coloring(params: ColorParams, bounds: Bounds | None = None) -> ColoringReport:
    """Check that vertices of the patch within distance ℓ have distinct colours."""
    bounds = bounds or period_bounds(params)
    pts = patch(bounds)
    colors = {c: f_ell(params, c) for c in pts}
    offsets = ball_offsets(params.ell)
    violation = None
    for c in pts:
        col = colors[c]
        for d in offsets:
            q = (c[0] + d[0], c[1] + d[1], c[2] + d[2])
            if colors.get(q) == col:
                violation = (c, Coord(*q))
                break
        if violation:
            break
    return ColoringReport(violation is None, violation, len(set(colors.values())), len(pts))
