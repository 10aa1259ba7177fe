"""Particle sets on the FCC grid, shape generators and the JSON file format.

Configuration file schema (all in-layer coordinates doubled, ``x2 = 2*i``)::

    {"particles": [[x2, y2, z], ...],
     "orientations": [index, ...],   # optional, parallel to particles, 0..15
     "seed": 7}                      # optional, informational
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, NamedTuple

from .lattice import DIRECTIONS, Coord, LatticeError, check_coord
from .orientation import IDENTITY, ORIENTATIONS, Orientation, orientation_from_index


class ConfigurationError(ValueError):
    pass


class Split(NamedTuple):
    same_layer: frozenset
    below: frozenset
    above: frozenset


@dataclass(frozen=True)
class Configuration:
    occupied: frozenset
    orientations: Mapping[Coord, Orientation] = field(default_factory=dict)
    seed: int | None = None

    def __post_init__(self):
        occ = frozenset(Coord(*c) for c in self.occupied)
        if not occ:
            raise ConfigurationError("a configuration needs at least one particle")
        for c in occ:
            check_coord(c)
        orients = {Coord(*c): o for c, o in dict(self.orientations).items()}
        extra = set(orients) - occ
        if extra:
            raise ConfigurationError(f"orientation given for unoccupied {sorted(extra)[0]}")
        for c in occ:
            orients.setdefault(c, IDENTITY)
        object.__setattr__(self, "occupied", occ)
        object.__setattr__(self, "orientations", orients)

    def __len__(self) -> int:
        return len(self.occupied)

    def __contains__(self, c) -> bool:
        return c in self.occupied

    def __iter__(self):
        return iter(sorted(self.occupied))

    @property
    def homogeneous(self) -> bool:
        return all(o == IDENTITY for o in self.orientations.values())

    def with_orientations(self, orientations: Mapping[Coord, Orientation]) -> "Configuration":
        return Configuration(self.occupied, orientations, self.seed)


def as_coord_set(S) -> set:
    """Accept a Configuration or any iterable of triplets; return a set of Coord."""
    if isinstance(S, Configuration):
        return set(S.occupied)
    return {c if type(c) is Coord else Coord(*c) for c in S}


def occupied_neighbors(S, p) -> list[Coord]:
    x2, y2, z = p
    out = []
    for d in DIRECTIONS:
        q = Coord(x2 + d[0], y2 + d[1], z + d[2])
        if q in S:
            out.append(q)
    return out


def neighbors_in_S(cfg, p) -> Split:
    S = as_coord_set(cfg)
    p = Coord(*p)
    if p not in S:
        raise ConfigurationError(f"{tuple(p)} is not occupied")
    same, below, above = set(), set(), set()
    for q in occupied_neighbors(S, p):
        if q.z == p[2]:
            same.add(q)
        elif q.z < p[2]:
            below.add(q)
        else:
            above.add(q)
    return Split(frozenset(same), frozenset(below), frozenset(above))


def components(S) -> list[set]:
    """Connected components of F[S], each as a set."""
    S = as_coord_set(S)
    seen: set = set()
    out = []
    for start in sorted(S):
        if start in seen:
            continue
        comp = {start}
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in occupied_neighbors(S, u):
                if v not in comp:
                    comp.add(v)
                    queue.append(v)
        seen |= comp
        out.append(comp)
    return out


def is_connected(cfg) -> bool:
    S = as_coord_set(cfg)
    return len(S) <= 1 or len(components(S)) == 1


def eccentricities(S) -> dict:
    """BFS eccentricity of every vertex inside F[S]."""
    S = as_coord_set(S)
    ecc = {}
    for s in S:
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v in occupied_neighbors(S, u):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        ecc[s] = max(dist.values())
    return ecc


def diameter(cfg) -> int:
    S = as_coord_set(cfg)
    if not is_connected(S):
        raise ConfigurationError("diameter of a disconnected set")
    return max(eccentricities(S).values())


# ---------------------------------------------------------------- generators


def layer_ball(center: Coord, radius: int) -> set:
    """Vertices of ``center``'s layer within distance ``radius`` (a Manhattan ball)."""
    check_coord(center)
    x2, y2, z = center
    out = set()
    for di in range(-radius, radius + 1):
        rest = radius - abs(di)
        for dj in range(-rest, rest + 1):
            out.add(Coord(x2 + 2 * di, y2 + 2 * dj, z))
    return out


def _stack(layers: list[set]) -> set:
    by_z = {}
    for cells in layers:
        if not cells:
            raise ConfigurationError("empty layer shape")
        zs = {c.z for c in cells}
        (z,) = zs
        if z in by_z:
            raise ConfigurationError(f"layer {z} given twice")
        by_z[z] = cells
    zs = sorted(by_z)
    for lo, hi in zip(zs, zs[1:]):
        if hi != lo + 1:
            raise ConfigurationError(f"layers {lo} and {hi} are not consecutive")
        upper = by_z[hi]
        if not any(c + d in upper for c in by_z[lo] for d in DIRECTIONS[8:]):
            raise ConfigurationError(f"layers {lo} and {hi} share no edge")
    S = set().union(*by_z.values())
    if not is_connected(S):
        raise ConfigurationError("stack is not connected")
    return S


def gen_circle_stack(layers: Iterable[tuple[Coord, int]], orientations=None) -> Configuration:
    """One Manhattan ball per layer, given as ``(center, radius)`` pairs."""
    shapes = []
    for center, radius in layers:
        if radius < 1:
            raise ConfigurationError("circle radius must be >= 1")
        shapes.append(layer_ball(Coord(*center), radius))
    return Configuration(frozenset(_stack(shapes)), orientations or {})


def aligned_circle_stack(radii: list[int], base: Coord = Coord(0, 0, 0)) -> Configuration:
    """Circles on consecutive layers with each centre one vertical step above the last."""
    layers = []
    c = Coord(*base)
    for k, r in enumerate(radii):
        layers.append((c, r))
        c = c + (DIRECTIONS[9] if k % 2 == 0 else DIRECTIONS[11])
    return gen_circle_stack(layers)


def rectangle(z: int, i0: int, i1: int, j0: int, j1: int) -> set:
    """Cells with ``i0 <= x2 <= i1`` and ``j0 <= y2 <= j1`` (doubled bounds) on layer ``z``."""
    p = z & 1
    if i0 > i1 or j0 > j1:
        raise ConfigurationError("empty rectangle")
    xs = [x for x in range(i0, i1 + 1) if x & 1 == p]
    ys = [y for y in range(j0, j1 + 1) if y & 1 == p]
    if not xs or not ys:
        raise ConfigurationError("empty rectangle")
    return {Coord(x, y, z) for x in xs for y in ys}


def gen_rectangle_stack(layers: Iterable[tuple[int, int, int, int, int]], orientations=None) -> Configuration:
    """``layers`` holds ``(z, i0, i1, j0, j1)`` with bounds in doubled units."""
    return Configuration(frozenset(_stack([rectangle(*spec) for spec in layers])), orientations or {})


def block(width: int, height: int, z: int) -> tuple[int, int, int, int, int]:
    """Bounds of a ``width`` x ``height`` rectangle anchored near the origin of layer ``z``."""
    p = z & 1
    return (z, p, p + 2 * (width - 1), p, p + 2 * (height - 1))


def gen_random_connected(n: int, seed: int) -> Configuration:
    """Grow ``n`` particles by seeded random adjacent accretion from the origin."""
    if n < 1:
        raise ConfigurationError("n must be >= 1")
    rng = random.Random(seed)
    S = {Coord(0, 0, 0)}
    order = [Coord(0, 0, 0)]
    while len(S) < n:
        p = rng.choice(order)
        q = p + DIRECTIONS[rng.randrange(12)]
        if q not in S:
            S.add(q)
            order.append(q)
    return Configuration(frozenset(S), seed=seed)


def frontier(S) -> list[Coord]:
    out = set()
    for p in S:
        for d in DIRECTIONS:
            q = p + d
            if q not in S:
                out.add(q)
    return sorted(out)


def gen_random_electable(n: int, seed: int, attempts: int = 20) -> Configuration:
    """Random accretion that only accepts additions keeping the set electable."""
    from .electability import is_electable

    if n < 1:
        raise ConfigurationError("n must be >= 1")
    rng = random.Random(seed)
    for _ in range(attempts):
        S = {Coord(0, 0, 0)}
        while len(S) < n:
            cands = frontier(S)
            rng.shuffle(cands)
            for q in cands:
                if is_electable(S | {q}).electable:
                    S.add(q)
                    break
            else:
                break
        if len(S) == n:
            return Configuration(frozenset(S), seed=seed)
    raise ConfigurationError(f"no electable set of size {n} found for seed {seed}")


def sample_rectangle_stack(rng: random.Random, max_layers: int = 3, max_side: int = 4) -> Configuration:
    """Random stack of overlapping rectangles on consecutive layers."""
    z0 = rng.randint(-2, 2)
    nl = rng.randint(1, max_layers)
    specs = []
    prev = None
    for k in range(nl):
        z = z0 + k
        p = z & 1
        w, h = rng.randint(1, max_side), rng.randint(1, max_side)
        if prev is None:
            x0, y0 = p, p
        else:
            # start on a cell diagonal to one of the previous rectangle's cells
            _, pi0, pi1, pj0, pj1 = prev
            x0 = rng.choice(range(pi0, pi1 + 1, 2)) + rng.choice((-1, 1))
            y0 = rng.choice(range(pj0, pj1 + 1, 2)) + rng.choice((-1, 1))
            x0 -= 2 * rng.randint(0, w - 1)
            y0 -= 2 * rng.randint(0, h - 1)
        spec = (z, x0, x0 + 2 * (w - 1), y0, y0 + 2 * (h - 1))
        specs.append(spec)
        prev = spec
    return gen_rectangle_stack(specs)


def sample_circle_stack(rng: random.Random, max_layers: int = 3, max_radius: int = 2) -> Configuration:
    """Random circle stack with vertically aligned centres."""
    nl = rng.randint(1, max_layers)
    radii = [rng.randint(1, max_radius) for _ in range(nl)]
    base_z = rng.randint(-2, 2)
    base = Coord(base_z & 1, base_z & 1, base_z)
    layers = []
    c = base
    for r in radii:
        layers.append((c, r))
        c = c + DIRECTIONS[rng.choice((8, 9, 10, 11))]
    return gen_circle_stack(layers)


def random_orientations(S, seed: int, homogeneous: bool = False) -> dict:
    rng = random.Random(seed)
    if homogeneous:
        return {c: IDENTITY for c in sorted(S)}
    return {c: ORIENTATIONS[rng.randrange(len(ORIENTATIONS))] for c in sorted(S)}


# ---------------------------------------------------------------- file format


def to_json(cfg: Configuration) -> dict:
    cells = sorted(cfg.occupied)
    doc = {"particles": [list(c) for c in cells]}
    if not cfg.homogeneous:
        doc["orientations"] = [cfg.orientations[c].index for c in cells]
    if cfg.seed is not None:
        doc["seed"] = cfg.seed
    return doc


def from_json(doc: dict) -> Configuration:
    try:
        cells = [Coord(*map(int, c)) for c in doc["particles"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigurationError(f"malformed particle list: {exc}") from None
    if len(set(cells)) != len(cells):
        raise ConfigurationError("duplicate particle coordinates")
    for c in cells:
        try:
            check_coord(c)
        except LatticeError as exc:
            raise ConfigurationError(str(exc)) from None
    orients = {}
    if doc.get("orientations") is not None:
        idx = doc["orientations"]
        if len(idx) != len(cells):
            raise ConfigurationError("orientations must parallel particles")
        orients = {c: orientation_from_index(int(i)) for c, i in zip(cells, idx)}
    return Configuration(frozenset(cells), orients, doc.get("seed"))


def load(path) -> Configuration:
    with open(path, encoding="utf-8") as f:
        return from_json(json.load(f))


def dump(cfg: Configuration, path) -> None:
    Path(path).write_text(json.dumps(to_json(cfg)) + "\n", encoding="utf-8")
