"""Sequential local-computation scheduler shared by every distributed algorithm.

Particles are activated one at a time in a seeded random order, reshuffled each
round; a round ends once every particle has been activated exactly once.  Since
no two activations overlap, no two particles at distance <= 2 ever compute
simultaneously.  A message is appended to the receiver's inbox before the
sender's activation ends; inboxes are FIFO, so per-link order is preserved.
"""

from __future__ import annotations

import json
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Iterable, NamedTuple

from .configuration import Configuration, ConfigurationError, is_connected
from .lattice import DIRECTIONS, IN_LAYER_PORTS, Coord
from .orientation import Orientation

TRACE_SCHEMA = "fccmatter.trace"
TRACE_VERSION = 1


class ProtocolError(RuntimeError):
    pass


@dataclass
class TraceEvent:
    round: int
    seq: int
    particle: Coord
    kind: str  # activate | send | receive | state-change
    payload: Any = None

    def to_json(self) -> dict:
        return {"round": self.round, "seq": self.seq, "particle": list(self.particle),
                "kind": self.kind, "payload": self.payload}


@dataclass
class RunResult:
    algorithm: str
    status: str  # ok | stall | timeout
    states: dict
    rounds: int
    decision_round: int
    messages: int
    seed: int
    trace: list | None = None
    header: dict = field(default_factory=dict)

    def census(self) -> dict:
        out: dict = {}
        for s in self.states.values():
            tag = getattr(s, "tag", None)
            if tag is not None:
                out[tag] = out.get(tag, 0) + 1
        return dict(sorted(out.items()))

    def trace_lines(self) -> list[str]:
        if self.trace is None:
            raise ValueError("run was executed without tracing")
        lines = [json.dumps(self.header, sort_keys=True)]
        lines.extend(json.dumps(e.to_json(), sort_keys=True) for e in self.trace)
        return lines

    def write_trace(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            for line in self.trace_lines():
                f.write(line + "\n")


def read_trace(path) -> tuple[dict, list[dict]]:
    with open(path, encoding="utf-8") as f:
        lines = [json.loads(x) for x in f if x.strip()]
    if not lines or lines[0].get("schema") != TRACE_SCHEMA:
        raise ValueError(f"{path} is not a trace file")
    return lines[0], lines[1:]


class Common(NamedTuple):
    """One common neighbour vertex of two particles, seen through their labels."""

    label_a: int
    label_b: int
    occupied: bool
    marked: bool


class LocalView:
    """What a particle may learn about its surroundings.

    Only port labels are exposed: the labels of occupied ports, which of those
    lead to marked (e.g. candidate) particles, and for any two particles of the
    closed neighbourhood the label pairs of their ports that face a common
    neighbour vertex.  ``None`` stands for the viewing particle itself.
    """

    def __init__(self, S, orientations, p, marked=frozenset()):
        self._S = S
        self._orient = orientations
        self._p = p
        self._marked = marked
        o = orientations[p]
        occ = []
        for a, d in enumerate(o.directions):
            if (p[0] + d[0], p[1] + d[1], p[2] + d[2]) in S:
                occ.append(a)
        self.occupied = frozenset(occ)
        self.marked = frozenset(a for a in occ if self._at(a) in marked)

    def _at(self, a):
        if a is None:
            return self._p
        if a not in self.occupied:
            raise ProtocolError(f"port {a} is not occupied")
        d = self._orient[self._p].directions[a]
        p = self._p
        return Coord(p[0] + d[0], p[1] + d[1], p[2] + d[2])

    def common(self, a, b) -> list[Common]:
        qa, qb = self._at(a), self._at(b)
        oa, ob = self._orient[qa], self._orient[qb]
        out = []
        for d in DIRECTIONS:
            x = Coord(qa[0] + d[0], qa[1] + d[1], qa[2] + d[2])
            if x == self._p or x == qb:
                continue
            e = (x[0] - qb[0], x[1] - qb[1], x[2] - qb[2])
            if e not in ob.port_table:
                continue
            out.append(Common(oa.port_table[tuple(d)], ob.port_table[e], x in self._S, x in self._marked))
        out.sort()
        return out

    @property
    def in_layer(self) -> frozenset:
        return self.occupied & frozenset(IN_LAYER_PORTS)


class Protocol:
    """Base class; subclasses hold per-particle state in ``net.states``."""

    name = "protocol"

    def init_state(self, net: "Network", p: Coord):
        raise NotImplementedError

    def bootstrap(self, net: "Network") -> None:
        """Actions taken before round 1 (e.g. a root that already knows its role)."""

    def activate(self, net: "Network", p: Coord) -> None:
        raise NotImplementedError

    def enabled(self, net: "Network", p: Coord) -> bool:
        """True when ``p`` would act even with an empty inbox."""
        return False

    def outcome(self, net: "Network") -> str:
        return "ok"


class Network:
    def __init__(self, cfg: Configuration, protocol: Protocol, seed: int = 0,
                 trace: bool = True, orientations: dict | None = None):
        if not is_connected(cfg):
            raise ConfigurationError("F[S] must be connected")
        self.cfg = cfg
        self.S = frozenset(cfg.occupied)
        self.order = sorted(self.S)
        self.orientations: dict[Coord, Orientation] = dict(orientations or cfg.orientations)
        self.protocol = protocol
        self.seed = seed
        self.rng = random.Random(seed)
        self.inbox: dict[Coord, deque] = {p: deque() for p in self.order}
        self.round = 0
        self.decision_round = 0
        self.messages = 0
        self._seq = 0
        self.trace: list | None = [] if trace else None
        self.states = {p: protocol.init_state(self, p) for p in self.order}

    # -- messaging

    def _event(self, p, kind, payload=None):
        self.trace.append(TraceEvent(self.round, self._seq, p, kind, payload))
        self._seq += 1

    def send(self, p: Coord, label: int, payload) -> None:
        d = self.orientations[p].directions[label]
        q = Coord(p[0] + d[0], p[1] + d[1], p[2] + d[2])
        if q not in self.S:
            raise ProtocolError(f"{p} sent through unoccupied port {label}")
        recv = self.orientations[q].port_table[(-d[0], -d[1], -d[2])]
        self.inbox[q].append((recv, payload))
        self.messages += 1
        if self.trace is not None:
            self._event(p, "send", {"port": label, "to_port": recv, "msg": payload})

    def receive(self, p: Coord) -> list:
        box = self.inbox[p]
        msgs = list(box)
        box.clear()
        if self.trace is not None:
            for port, payload in msgs:
                self._event(p, "receive", {"port": port, "msg": payload})
        return msgs

    def note(self, p: Coord, change: dict) -> None:
        """Record a state change of ``p``."""
        self.decision_round = self.round
        if self.trace is not None:
            self._event(p, "state-change", change)

    def relabel(self, p: Coord, orientation: Orientation) -> None:
        self.orientations[p] = orientation

    def occupied_ports(self, p: Coord) -> list[int]:
        o = self.orientations[p]
        return [a for a, d in enumerate(o.directions)
                if (p[0] + d[0], p[1] + d[1], p[2] + d[2]) in self.S]

    def view(self, p: Coord, marked: Iterable = frozenset()) -> LocalView:
        return LocalView(self.S, self.orientations, p, frozenset(marked))

    # -- scheduling

    def quiescent(self) -> bool:
        if any(self.inbox[p] for p in self.order):
            return False
        return not any(self.protocol.enabled(self, p) for p in self.order)

    def run(self, round_limit: int = 10_000) -> RunResult:
        if round_limit < 1:
            raise ValueError("round_limit must be >= 1")
        self.protocol.bootstrap(self)
        status = None
        while not self.quiescent():
            if self.round >= round_limit:
                status = "timeout"
                break
            self.round += 1
            perm = list(self.order)
            self.rng.shuffle(perm)
            for p in perm:
                if self.trace is not None:
                    self._event(p, "activate")
                self.protocol.activate(self, p)
        if status is None:
            status = self.protocol.outcome(self)
        header = {
            "schema": TRACE_SCHEMA,
            "version": TRACE_VERSION,
            "algorithm": self.protocol.name,
            "seed": self.seed,
            "particles": [list(p) for p in self.order],
            "orientations": [self.cfg.orientations[p].index for p in self.order],
        }
        return RunResult(self.protocol.name, status, self.states, self.round,
                         self.decision_round, self.messages, self.seed, self.trace, header)


def run(cfg: Configuration, protocol: Protocol, seed: int = 0, round_limit: int = 10_000,
        trace: bool = True, orientations: dict | None = None) -> RunResult:
    return Network(cfg, protocol, seed, trace, orientations).run(round_limit)


def local_view(cfg: Configuration, p, marked: Iterable | None = None,
               orientations: dict | None = None) -> LocalView:
    """View of ``p`` over a static configuration (marked defaults to every particle)."""
    S = frozenset(cfg.occupied)
    return LocalView(S, orientations or cfg.orientations, Coord(*p),
                     S if marked is None else frozenset(marked))
