import json

import pytest

from fccmatter.configuration import Configuration, ConfigurationError, gen_random_connected, random_orientations
from fccmatter.lattice import Coord
from fccmatter.orientation import IDENTITY, orientation_from_index
from fccmatter.runtime import (
    TRACE_SCHEMA,
    Network,
    Protocol,
    ProtocolError,
    local_view,
    read_trace,
    run,
)

R = Coord.from_real
O = Coord(0, 0, 0)


class Flood(Protocol):
    """The smallest particle floods a token; everyone forwards it once."""

    name = "flood"

    def init_state(self, net, p):
        return {"seen": False}

    def bootstrap(self, net):
        p = net.order[0]
        net.states[p]["seen"] = True
        for a in net.occupied_ports(p):
            net.send(p, a, "tok")

    def activate(self, net, p):
        st = net.states[p]
        if net.receive(p) and not st["seen"]:
            st["seen"] = True
            net.note(p, {"seen": True})
            for a in net.occupied_ports(p):
                net.send(p, a, "tok")


class Forever(Protocol):
    name = "forever"

    def init_state(self, net, p):
        return None

    def enabled(self, net, p):
        return True

    def activate(self, net, p):
        pass


class Counter(Protocol):
    name = "counter"

    def init_state(self, net, p):
        return 0

    def enabled(self, net, p):
        return net.round < 3

    def activate(self, net, p):
        net.states[p] += 1


def test_flood_reaches_everyone_and_is_bounded():
    cfg = gen_random_connected(25, 1)
    res = run(cfg, Flood(), seed=4)
    assert res.status == "ok"
    assert all(s["seen"] for s in res.states.values())
    assert res.messages == sum(len(Network(cfg, Flood()).occupied_ports(p)) for p in cfg.occupied)


def test_every_particle_activated_once_per_round():
    cfg = gen_random_connected(12, 3)
    res = run(cfg, Counter(), seed=1)
    assert res.rounds == 3
    assert set(res.states.values()) == {3}
    acts = [e for e in res.trace if e.kind == "activate"]
    for r in (1, 2, 3):
        assert sorted(e.particle for e in acts if e.round == r) == sorted(cfg.occupied)


def test_schedule_depends_on_seed_only():
    cfg = gen_random_connected(12, 3)
    order = lambda seed: [e.particle for e in run(cfg, Counter(), seed=seed).trace if e.kind == "activate"]
    assert order(5) == order(5)
    assert order(5) != order(6)


def test_timeout_and_limits():
    cfg = Configuration([O, R(1, 0, 0)])
    res = run(cfg, Forever(), round_limit=7)
    assert res.status == "timeout" and res.rounds == 7
    with pytest.raises(ValueError):
        run(cfg, Forever(), round_limit=0)
    with pytest.raises(ConfigurationError):
        run(Configuration([O, R(2, 0, 0)]), Flood())


def test_send_through_empty_port_fails():
    net = Network(Configuration([O, R(1, 0, 0)]), Flood())
    with pytest.raises(ProtocolError):
        net.send(O, 0, "x")


def test_messages_arrive_on_receiver_label():
    flip = orientation_from_index(5)  # quarter turn with vertical flip
    cfg = Configuration([O, R(0.5, 0.5, 1)], {R(0.5, 0.5, 1): flip})
    net = Network(cfg, Flood(), trace=False)
    net.send(O, 9, "hi")
    (port, msg), = net.inbox[R(0.5, 0.5, 1)]
    assert msg == "hi"
    assert flip.directions[port] == (-1, -1, -1)


def test_trace_round_trip(tmp_path):
    cfg = gen_random_connected(8, 2)
    cfg = cfg.with_orientations(random_orientations(cfg.occupied, 2))
    res = run(cfg, Flood(), seed=3)
    path = tmp_path / "t.jsonl"
    res.write_trace(path)
    header, events = read_trace(path)
    assert header["schema"] == TRACE_SCHEMA and header["version"] == 1
    assert header["algorithm"] == "flood" and header["seed"] == 3
    assert header["orientations"] == [cfg.orientations[p].index for p in sorted(cfg.occupied)]
    assert {e["kind"] for e in events} == {"activate", "send", "receive", "state-change"}
    assert [e["seq"] for e in events] == list(range(len(events)))
    assert path.read_text().splitlines() == res.trace_lines()
    bad = tmp_path / "bad.jsonl"
    bad.write_text(json.dumps({"schema": "other"}) + "\n")
    with pytest.raises(ValueError):
        read_trace(bad)
    untraced = run(cfg, Flood(), trace=False)
    with pytest.raises(ValueError):
        untraced.trace_lines()


def test_local_view_common_neighbours():
    # p and its +x neighbour share four common neighbour vertices
    cfg = Configuration([O, R(1, 0, 0), R(0.5, 0.5, 1)])
    v = local_view(cfg, O)
    assert v.occupied == {2, 9} and v.in_layer == {2}
    recs = v.common(None, 2)
    assert len(recs) == 4
    occupied = [c for c in recs if c.occupied]
    assert [(c.label_a, c.label_b) for c in occupied] == [(9, 8)]
    with pytest.raises(ProtocolError):
        v.common(None, 0)
    # marks default to every particle; an explicit mark set restricts them
    assert local_view(cfg, O, marked=[O]).marked == frozenset()


def test_local_view_uses_port_labels():
    half = orientation_from_index(4)  # half turn
    cfg = Configuration([O, R(1, 0, 0)], {O: half})
    v = local_view(cfg, O)
    assert v.occupied == {0}
    assert IDENTITY.directions[2] == half.directions[0]
