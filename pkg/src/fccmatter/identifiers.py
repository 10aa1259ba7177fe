"""Post-election pipeline: spanning tree, port renumbering, local and global ids.

Every stage is a message-driven protocol on the shared runtime.  The leader
starts each stage during the bootstrap step, so a particle at tree depth ``d``
acts no later than round ``d``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import heterogeneous, homogeneous
from .coloring import ColorParams, f_ell, wrap_N_ell
from .configuration import Configuration, ConfigurationError, diameter
from .lattice import DIRECTIONS, OPPOSITE, Coord, port_of_canonical
from .orientation import ORIENTATIONS, Orientation
from .runtime import Network, Protocol, ProtocolError, RunResult, run

CLAIM, ADOPT, RELEASE = "claim", "adopt", "release"
STAGES = ("election", "tree", "renumber", "local-ids", "global-ids")


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str, timeout: bool = False):
        super().__init__(f"{stage}: {message}")
        self.stage = stage
        self.timeout = timeout


def r(i: int) -> int:
    """Label of the port facing back along the edge left through port ``i``."""
    return OPPOSITE[i]


def _add(t, d):
    return (t[0] + d[0], t[1] + d[1], t[2] + d[2])


# ---------------------------------------------------------------- spanning tree


@dataclass
class TreeState:
    parent: int | None = None
    children: set = field(default_factory=set)
    hops: int | None = None

    def to_json(self) -> dict:
        return {"parent": self.parent, "children": sorted(self.children), "hops": self.hops}


class SpanningTree(Protocol):
    """Flooding BFS tree rooted at the leader.

    A particle keeps the claim with the fewest hops, smallest receiving port
    on ties, and tells its parent with adopt/release messages.
    """

    name = "tree"

    def __init__(self, leader):
        self.leader = Coord(*leader)

    def init_state(self, net, p):
        if self.leader not in net.S:
            raise ConfigurationError(f"leader {tuple(self.leader)} is not a particle")
        return TreeState()

    def bootstrap(self, net):
        st = net.states[self.leader]
        st.hops = 0
        net.note(self.leader, {"hops": 0})
        for a in net.occupied_ports(self.leader):
            net.send(self.leader, a, (CLAIM, 0))

    def activate(self, net: Network, p) -> None:
        st: TreeState = net.states[p]
        for port, msg in net.receive(p):
            kind = msg[0]
            if kind == ADOPT:
                st.children.add(port)
                net.note(p, {"children": sorted(st.children)})
            elif kind == RELEASE:
                st.children.discard(port)
                net.note(p, {"children": sorted(st.children)})
            elif kind == CLAIM:
                hops = msg[1] + 1
                if p == self.leader or (st.hops is not None and (hops, port) >= (st.hops, st.parent)):
                    continue
                if st.parent is not None:
                    net.send(p, st.parent, (RELEASE,))
                st.parent, st.hops = port, hops
                net.send(p, port, (ADOPT,))
                net.note(p, {"parent": port, "hops": hops})
                for a in net.occupied_ports(p):
                    if a != port:
                        net.send(p, a, (CLAIM, hops))
            else:
                raise ProtocolError(f"unexpected message {msg!r}")


def build_spanning_tree(cfg: Configuration, leader, seed: int = 0, trace: bool = False,
                        orientations: dict | None = None, round_limit: int = 10_000) -> RunResult:
    return run(cfg, SpanningTree(leader), seed, round_limit, trace, orientations)


# ---------------------------------------------------------------- renumbering


@dataclass
class RenumberState:
    parent: int | None
    children: set
    done: bool = False

    def to_json(self) -> dict:
        return {"parent": self.parent, "children": sorted(self.children)}


def solve_relabel(view, port: int, b: int) -> Orientation:
    """The unique symmetry ``h`` consistent with parent label ``b`` arriving on ``port``.

    ``h`` maps old label directions to new ones: the receiving port must become
    ``r(b)``, and every common neighbour vertex of the two particles must get
    the label the parent's labelling implies for it.
    """
    recs = view.common(None, port)
    fits = []
    for h in ORIENTATIONS:
        sig = h.label_permutation
        if sig[port] != r(b):
            continue
        if all(sig[c.label_a] == port_of_canonical(_add(DIRECTIONS[c.label_b], -DIRECTIONS[b]))
               for c in recs):
            fits.append(h)
    if len(fits) != 1:
        raise ProtocolError(f"relabelling is not determined ({len(fits)} candidates)")
    return fits[0]


class Renumber(Protocol):
    name = "renumber"

    def __init__(self, tree: dict, leader):
        self.tree = tree
        self.leader = Coord(*leader)

    def init_state(self, net, p):
        t = self.tree[p]
        return RenumberState(t.parent, set(t.children), p == self.leader)

    def bootstrap(self, net):
        for a in sorted(net.states[self.leader].children):
            net.send(self.leader, a, a)

    def activate(self, net: Network, p) -> None:
        st: RenumberState = net.states[p]
        for port, b in net.receive(p):
            if st.done or port != st.parent:
                raise ProtocolError(f"{tuple(p)} got a renumbering message on non-tree port {port}")
            h = solve_relabel(net.view(p), port, b)
            sig = h.label_permutation
            net.relabel(p, net.orientations[p].compose(h.inverse()))
            st.parent = r(b)
            st.children = {sig[a] for a in st.children}
            st.done = True
            net.note(p, {"orientation": net.orientations[p].index, "parent": st.parent,
                         "children": sorted(st.children)})
            for a in sorted(st.children):
                net.send(p, a, a)


# ---------------------------------------------------------------- identifiers


@dataclass
class IdState:
    triplet: tuple | None = None
    id: int | tuple | None = None


class _IdProtocol(Protocol):
    stage = ""

    def __init__(self, tree: dict, leader):
        self.tree = tree
        self.leader = Coord(*leader)

    def init_state(self, net, p):
        if net.orientations[p] != net.orientations[self.leader]:
            raise PipelineError(self.stage, "ports have not been renumbered")
        return IdState()

    def _next(self, t, a):
        raise NotImplementedError

    def _id(self, t):
        raise NotImplementedError

    def _assign(self, net, p, t):
        st = net.states[p]
        st.triplet = tuple(t)
        st.id = self._id(st.triplet)
        net.note(p, {"triplet": list(st.triplet), "id": st.id})
        for a in sorted(self.tree[p].children):
            net.send(p, a, list(self._next(st.triplet, a)))

    def bootstrap(self, net):
        self._assign(net, self.leader, (0, 0, 0))

    def activate(self, net: Network, p) -> None:
        for port, t in net.receive(p):
            if port != self.tree[p].parent:
                raise ProtocolError(f"{tuple(p)} got an id on non-tree port {port}")
            self._assign(net, p, t)


class LocalIds(_IdProtocol):
    name = stage = "local-ids"

    def __init__(self, tree, leader, params: ColorParams):
        super().__init__(tree, leader)
        self.params = params

    def _next(self, t, a):
        return tuple(wrap_N_ell(self.params, _add(t, DIRECTIONS[a])))

    def _id(self, t):
        return f_ell(self.params, t)


class GlobalIds(_IdProtocol):
    name = stage = "global-ids"

    def _next(self, t, a):
        return _add(t, DIRECTIONS[a])

    def _id(self, t):
        return list(t)


# ---------------------------------------------------------------- pipeline


@dataclass
class PipelineResult:
    leader: Coord
    stages: dict  # stage name -> RunResult
    tree: dict  # particle -> RenumberState (renumbered labels)
    orientations: dict
    local_ids: dict
    global_ids: dict
    ell: int
    diameter: int

    def table(self) -> list[dict]:
        rows = []
        for p in sorted(self.tree):
            st = self.tree[p]
            rows.append({
                "position": list(p),
                "global_id": list(self.global_ids[p]),
                "local_id": self.local_ids[p],
                "parent": st.parent,
                "children": sorted(st.children),
            })
        return rows

    def to_json(self) -> dict:
        return {
            "leader": list(self.leader),
            "ell": self.ell,
            "rounds": {k: v.rounds for k, v in self.stages.items()},
            "particles": self.table(),
        }

    def trace_lines(self) -> list[str]:
        out = []
        for name in STAGES:
            if name in self.stages:
                out.extend(self.stages[name].trace_lines())
        return out


def _leader(result: RunResult):
    leaders = [p for p, s in result.states.items() if s.tag == "L"]
    if result.status != "ok" or len(leaders) != 1:
        raise PipelineError("election", f"no unique leader (status {result.status})")
    return leaders[0]


def run_pipeline(cfg: Configuration, mode: str = "hetero", ell: int = 2, seed: int = 0,
                 round_limit: int = 10_000, trace: bool = False) -> PipelineResult:
    params = ColorParams(ell)
    stages: dict[str, RunResult] = {}

    def stage(name, protocol, orientations=None):
        try:
            res = run(cfg, protocol, seed, round_limit, trace, orientations)
        except PipelineError:
            raise
        except (ConfigurationError, ProtocolError) as e:
            raise PipelineError(name, str(e)) from e
        if res.status == "timeout":
            raise PipelineError(name, f"round limit {round_limit} reached", timeout=True)
        stages[name] = res
        return res

    if mode == "homog":
        election = stage("election", homogeneous.HomogeneousElection())
    elif mode == "hetero":
        election = stage("election", heterogeneous.HeterogeneousElection())
    else:
        raise ValueError(f"unknown mode {mode!r}")
    leader = _leader(election)

    tree = stage("tree", SpanningTree(leader)).states
    net = Network(cfg, Renumber(tree, leader), seed, trace)
    try:
        res = net.run(round_limit)
    except ProtocolError as e:
        raise PipelineError("renumber", str(e)) from e
    if res.status == "timeout":
        raise PipelineError("renumber", f"round limit {round_limit} reached", timeout=True)
    stages["renumber"] = res
    renumbered, orientations = res.states, net.orientations

    local = stage("local-ids", LocalIds(renumbered, leader, params), orientations)
    glob = stage("global-ids", GlobalIds(renumbered, leader), orientations)
    return PipelineResult(
        leader, stages, renumbered, orientations,
        {p: s.id for p, s in local.states.items()},
        {p: tuple(s.triplet) for p, s in glob.states.items()},
        ell, diameter(cfg),
    )
