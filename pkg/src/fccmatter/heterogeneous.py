"""Leader election without a shared port labelling.

Candidates on the periphery of the candidate set retire one by one; a candidate
may retire when it is contractible with respect to the current candidate set,
and the last one standing becomes leader.  The contractibility test comes in
two forms: the geometric one over absolute positions, which drives the
election, and the port-label one a particle can evaluate from its local view.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass

from .configuration import ConfigurationError, as_coord_set
from .lattice import DIRECTIONS, IN_LAYER_PORTS, Coord, are_adjacent, corners
from .runtime import LocalView, Network, Protocol

C, N, L = "C", "N", "L"
PREDICATES = ("geometric", "ports")

_FLAT = [DIRECTIONS[a] for a in IN_LAYER_PORTS]
_VERTICAL = DIRECTIONS[4:]


@dataclass(frozen=True)
class ContractibilityReport:
    condition_I: bool
    condition_II: bool
    condition_III: bool

    @property
    def contractible(self) -> bool:
        return self.condition_I and self.condition_II and self.condition_III

    def to_json(self) -> dict:
        return asdict(self)


def _connected(X) -> bool:
    X = list(X)
    if len(X) <= 1:
        return True
    seen = {X[0]}
    queue = deque([X[0]])
    while queue:
        u = queue.popleft()
        for v in X:
            if v not in seen and are_adjacent(u, v):
                seen.add(v)
                queue.append(v)
    return len(seen) == len(X)


def split_neighbors(S, p):
    flat = [p + d for d in _FLAT if p + d in S]
    vert = [p + d for d in _VERTICAL if p + d in S]
    return flat, vert


def is_contractible_geometric(S_C, p) -> ContractibilityReport:
    # tuples hash like Coord, so plain sets of tuples need no conversion
    if not isinstance(S_C, (set, frozenset)):
        S_C = as_coord_set(S_C)
    p = Coord(*p)
    if p not in S_C:
        raise ConfigurationError(f"{tuple(p)} is not a candidate")
    flat, vert = split_neighbors(S_C, p)
    M = flat + [c for c in corners(p) if c in S_C]
    cond1 = _connected(M)
    cond2 = len(flat) <= 2
    cond3 = _connected(vert) and (
        not flat or not vert
        or any(are_adjacent(q, r) for q in flat for r in vert)
    )
    return ContractibilityReport(cond1, cond2, cond3)


def _successive(a: int, b: int) -> bool:
    return (a - b) % 4 in (1, 3)


def is_contractible_ports(view: LocalView) -> ContractibilityReport:
    """Contractibility from port labels only, w.r.t. the view's marked particles.

    In-layer ports are 0-3 on every particle and the two vertical sides are
    4-7 and 8-11, each cyclically ordered; these facts are all that is used.
    Corners are only seen as common in-layer neighbours of two successive
    in-layer neighbours, so a marked corner with neither bridging neighbour
    marked is invisible here.
    """
    flat = sorted(view.marked & set(IN_LAYER_PORTS))
    vert = sorted(view.marked - set(IN_LAYER_PORTS))

    # in-layer neighbours linked when successive and sharing a marked corner
    links = {a: set() for a in flat}
    for i, a in enumerate(flat):
        for b in flat[i + 1:]:
            if _successive(a, b) and any(
                c.marked and c.label_a in IN_LAYER_PORTS and c.label_b in IN_LAYER_PORTS
                for c in view.common(a, b)
            ):
                links[a].add(b)
                links[b].add(a)
    if flat:
        seen = {flat[0]}
        stack = [flat[0]]
        while stack:
            for b in links[stack.pop()]:
                if b not in seen:
                    seen.add(b)
                    stack.append(b)
        cond1 = len(seen) == len(flat)
    else:
        cond1 = True
    cond2 = len(flat) <= 2

    down = [a for a in vert if a < 8]
    up = [a for a in vert if a >= 8]
    side = down or up
    one_layer = not (down and up)
    connected = one_layer and (len(side) != 2 or _successive(side[0], side[1]))
    if not flat or not vert:
        bridged = True
    else:
        bridged = any(
            c.marked and c.label_a in IN_LAYER_PORTS
            for q in vert for c in view.common(None, q)
        )
    return ContractibilityReport(cond1, cond2, connected and bridged)


def corner_without_bridge(S_C, p) -> list[Coord]:
    """Marked corners of ``p`` none of whose two bridging in-layer neighbours is marked."""
    p = Coord(*p)
    out = []
    for c in corners(p):
        if c not in S_C:
            continue
        b1 = Coord(c.x2, p.y2, p.z)
        b2 = Coord(p.x2, c.y2, p.z)
        if b1 not in S_C and b2 not in S_C:
            out.append(c)
    return out


class HeteroState:
    __slots__ = ("tag",)

    def __init__(self, tag=C):
        self.tag = tag

    def __repr__(self):
        return f"HeteroState({self.tag!r})"


class HeterogeneousElection(Protocol):
    """Repeated retirement of contractible candidates.

    Candidacy of neighbours is read directly (local-computation model).
    ``predicate`` selects the test driving transitions: ``"geometric"`` (the
    definition over positions) or ``"ports"`` (the label-only detection, which
    ignores corners that no in-layer neighbour bridges).
    """

    name = "hetero"

    def __init__(self, predicate: str = "geometric"):
        if predicate not in PREDICATES:
            raise ValueError(f"unknown predicate {predicate!r}")
        self.predicate = predicate
        self.candidates: set = set()

    def init_state(self, net, p):
        self.candidates.add(p)
        return HeteroState()

    def _report(self, net, p) -> ContractibilityReport:
        if self.predicate == "ports":
            return is_contractible_ports(net.view(p, self.candidates))
        return is_contractible_geometric(self.candidates, p)

    def enabled(self, net, p):
        return net.states[p].tag == C and self._report(net, p).contractible

    def activate(self, net: Network, p) -> None:
        st = net.states[p]
        net.receive(p)
        if st.tag != C:
            return
        report = self._report(net, p)
        if not report.contractible:
            return
        alone = not any(p + d in self.candidates for d in DIRECTIONS)
        st.tag = L if alone else N
        if st.tag == N:
            self.candidates.discard(p)
        net.note(p, {"state": st.tag, "report": report.to_json()})

    def outcome(self, net):
        tags = [s.tag for s in net.states.values()]
        if tags.count(L) == 1 and tags.count(N) == len(tags) - 1:
            return "ok"
        return "stall"


def step_hetero(S_C, p) -> str:
    """Single transition of a candidate ``p`` given the candidate set."""
    report = is_contractible_geometric(S_C, p)
    if not report.contractible:
        return C
    S_C = as_coord_set(S_C)
    return L if not any(Coord(*p) + d in S_C for d in DIRECTIONS) else N
