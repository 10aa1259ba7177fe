"""Offline electability check.

A set is electable when its layer-component graph is a tree, every layer
component is isometric in its square-grid layer, and for every pair of
adjacent components both contact borders are connected.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .configuration import ConfigurationError, as_coord_set, components, is_connected
from .lattice import DIRECTIONS, IN_LAYER_PORTS, layer_distance

_FLAT = [DIRECTIONS[a] for a in IN_LAYER_PORTS]
_VERTICAL = DIRECTIONS[4:]


@dataclass
class GSGraph:
    vertices: list  # list of frozenset[Coord], ordered by min coordinate
    edges: list  # sorted (i, j) pairs, i < j
    index: dict = field(repr=False)  # Coord -> component number

    def neighbors(self, i: int) -> list[int]:
        return [b if a == i else a for a, b in self.edges if i in (a, b)]


@dataclass
class Verdict:
    electable: bool
    failed_property: str | None = None
    witness: dict | None = None

    def to_json(self) -> dict:
        return {"electable": self.electable, "failed_property": self.failed_property, "witness": self.witness}


def _layer_components(S) -> list[frozenset]:
    by_z: dict[int, set] = {}
    for c in S:
        by_z.setdefault(c[2], set()).add(c)
    comps = []
    for z in sorted(by_z):
        comps.extend(frozenset(c) for c in components(by_z[z]))
    comps.sort(key=min)
    return comps


def build_gs(S) -> GSGraph:
    S = as_coord_set(S)
    if not S:
        raise ConfigurationError("empty set")
    comps = _layer_components(S)
    index = {c: n for n, comp in enumerate(comps) for c in comp}
    edges = set()
    for c, n in index.items():
        for d in _VERTICAL:
            q = c + d
            m = index.get(q)
            if m is not None and m != n:
                edges.add((min(n, m), max(n, m)))
    return GSGraph(comps, sorted(edges), index)


def _find_cycle(g: GSGraph) -> list[int]:
    adj: dict[int, list[int]] = {i: [] for i in range(len(g.vertices))}
    for a, b in g.edges:
        adj[a].append(b)
        adj[b].append(a)
    parent = {0: None}
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in parent:
                parent[v] = u
                queue.append(v)
            elif parent[u] != v:
                # walk both ends back to their common ancestor
                pu, pv = [u], [v]
                while pu[-1] is not None:
                    pu.append(parent[pu[-1]])
                while pv[-1] is not None:
                    pv.append(parent[pv[-1]])
                pu, pv = pu[:-1], pv[:-1]
                common = next(x for x in pu if x in pv)
                return pu[: pu.index(common) + 1] + list(reversed(pv[: pv.index(common)]))
    return []


def is_gs_tree(g: GSGraph) -> bool:
    return len(g.edges) == len(g.vertices) - 1


def isometry_violation(A) -> tuple | None:
    """First pair whose distance inside ``A`` exceeds the layer distance, else None."""
    A = as_coord_set(A)
    for s in sorted(A):
        dist = {s: 0}
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for d in _FLAT:
                v = u + d
                if v in A and v not in dist:
                    dist[v] = dist[u] + 1
                    queue.append(v)
        for t in sorted(A):
            if t not in dist or dist[t] != layer_distance(s, t):
                return (s, t, dist.get(t), layer_distance(s, t))
    return None


def border(A, B) -> set:
    """Vertices of ``A`` adjacent to some vertex of ``B``."""
    return {u for u in A if any(u + d in B for d in _VERTICAL)}


def _flat_connected(X) -> bool:
    X = set(X)
    if len(X) <= 1:
        return True
    start = min(X)
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for d in _FLAT:
            v = u + d
            if v in X and v not in seen:
                seen.add(v)
                queue.append(v)
    return len(seen) == len(X)


def is_electable(S) -> Verdict:
    S = as_coord_set(S)
    if not is_connected(S):
        raise ConfigurationError("electability is defined for connected sets only")
    g = build_gs(S)

    if not is_gs_tree(g):
        cycle = _find_cycle(g)
        return Verdict(False, "a", {
            "components": len(g.vertices),
            "edges": len(g.edges),
            "cycle": [list(min(g.vertices[i])) for i in cycle],
        })

    for n, A in enumerate(g.vertices):
        bad = isometry_violation(A)
        if bad is not None:
            s, t, dA, dL = bad
            return Verdict(False, "b", {
                "component": n,
                "pair": [list(s), list(t)],
                "component_distance": dA,
                "layer_distance": dL,
            })

    for a, b in g.edges:
        A, B = g.vertices[a], g.vertices[b]
        for side, X in (("A", border(A, B)), ("B", border(B, A))):
            if not _flat_connected(X):
                return Verdict(False, "c", {
                    "edge": [a, b],
                    "side": side,
                    "border": [list(c) for c in sorted(X)],
                })
    return Verdict(True)
