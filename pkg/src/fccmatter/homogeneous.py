"""Leader election when every particle shares the canonical port labelling.

Each particle floods its own position and its empty neighbour positions; the
relative triplets it collects are ``own position - announced position``.  Once
its occupied list is closed under adjacency it knows the whole shape, and the
particle whose list has the lexicographically largest maximum (the particle at
the lexicographically largest position) wins a second flooding round.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .configuration import ConfigurationError
from .lattice import DIRECTIONS, lex_max
from .runtime import Network, Protocol, ProtocolError

C, LIS, I, MCOMP, N, L = "C", "Lis", "I", "Mcomp", "N", "L"

ANNOUNCE = "ann"
MAX = "max"


def condition_c(O, U) -> bool:
    """Every neighbour of every triplet of ``O`` lies in ``O`` or ``U``."""
    for t in O:
        x, y, z = t
        for d in DIRECTIONS:
            n = (x + d[0], y + d[1], z + d[2])
            if n not in O and n not in U:
                return False
    return True


def _shift(t, d):
    return (t[0] + d[0], t[1] + d[1], t[2] + d[2])


@dataclass
class HomogState:
    tag: str = C
    O: set = field(default_factory=set)
    U: set = field(default_factory=set)
    O2: set = field(default_factory=set)  # origins already compared
    my_max: tuple | None = None
    deferred: list = field(default_factory=list)


class HomogeneousElection(Protocol):
    name = "homog"

    def init_state(self, net, p):
        if any(o.index != 0 for o in net.orientations.values()):
            raise ConfigurationError("homogeneous election needs identity orientations everywhere")
        return HomogState()

    def enabled(self, net, p):
        return net.states[p].tag in (C, I)

    def _set(self, net, p, st, tag, **extra):
        st.tag = tag
        net.note(p, {"state": tag, **extra})

    def activate(self, net: Network, p) -> None:
        st: HomogState = net.states[p]
        msgs = net.receive(p)
        ports = net.occupied_ports(p)

        if st.tag == C:
            if not ports:
                self._set(net, p, st, L)
                return
            occ = set(ports)
            for a in range(12):
                if a in occ:
                    net.send(p, a, (ANNOUNCE, DIRECTIONS[a], 0))
                else:
                    # receiver through b sees the empty vertex at -dir(a) + dir(b)
                    for b in ports:
                        net.send(p, b, (ANNOUNCE, _shift(DIRECTIONS[b], -DIRECTIONS[a]), 1))
            self._set(net, p, st, LIS)

        if st.tag == LIS:
            grew = False
            for _port, msg in msgs:
                kind = msg[0]
                if kind == MAX:
                    st.deferred.append(msg)
                    continue
                if kind != ANNOUNCE:
                    raise ProtocolError(f"unexpected message {msg!r}")
                _, t, flag = msg
                t = tuple(t)
                target = st.O if flag == 0 else st.U
                if t in target:
                    continue
                target.add(t)
                grew = True
                for b in ports:
                    net.send(p, b, (ANNOUNCE, _shift(t, DIRECTIONS[b]), flag))
            msgs = []
            if grew and st.O and condition_c(st.O, st.U):
                st.my_max = lex_max(st.O)
                self._set(net, p, st, I, size=len(st.O), max=list(st.my_max))
        elif st.tag in (I, MCOMP, N, L):
            st.deferred.extend(m for _port, m in msgs if m[0] == MAX)
            msgs = []

        if st.tag == I:
            for a in ports:
                net.send(p, a, (MAX, st.my_max, DIRECTIONS[a]))
            self._set(net, p, st, MCOMP)

        if st.tag in (MCOMP, N, L) and st.deferred:
            pending, st.deferred = st.deferred, []
            for _, m, t in pending:
                t = tuple(t)
                if t in st.O2:
                    continue
                st.O2.add(t)
                if st.tag == MCOMP and tuple(m) > st.my_max:
                    self._set(net, p, st, N)
                for b in ports:
                    net.send(p, b, (MAX, m, _shift(t, DIRECTIONS[b])))
            if st.tag == MCOMP and len(st.O2) == len(st.O):
                self._set(net, p, st, L)

    def outcome(self, net):
        tags = [s.tag for s in net.states.values()]
        if tags.count(L) == 1 and tags.count(N) == len(tags) - 1:
            return "ok"
        return "stall"


def leader_of(result) -> tuple | None:
    leaders = [p for p, s in result.states.items() if s.tag == L]
    return leaders[0] if len(leaders) == 1 else None
