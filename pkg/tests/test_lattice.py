import pytest

from fccmatter.lattice import (
    DIRECTIONS,
    DOWN_PORTS,
    IN_LAYER_PORTS,
    OPPOSITE,
    UP_PORTS,
    Coord,
    LatticeError,
    are_adjacent,
    check_coord,
    corners,
    fcc_distance,
    layer_distance,
    lex_max,
    neighbor_coord,
    neighbors,
    port_of_canonical,
)

from _corpus import bfs_distances

R = Coord.from_real
O = Coord(0, 0, 0)


def test_from_real_and_parity():
    assert R(0.5, 0.5, 1) == Coord(1, 1, 1)
    assert R(1, 1, 2).real == (1.0, 1.0, 2)
    with pytest.raises(LatticeError):
        R(0.5, 0, 1)
    with pytest.raises(LatticeError):
        R(0.5, 0.5, 0)
    with pytest.raises(LatticeError):
        check_coord((1, 0, 0))


def test_direction_table_shape():
    assert len(set(DIRECTIONS)) == 12
    for d in DIRECTIONS:
        flat = abs(d[0]) == 2 and d[1] == 0 and d[2] == 0 or d[0] == 0 and abs(d[1]) == 2 and d[2] == 0
        diag = abs(d[0]) == 1 and abs(d[1]) == 1 and abs(d[2]) == 1
        assert flat != diag
    assert all(DIRECTIONS[a][2] == 0 for a in IN_LAYER_PORTS)
    assert all(DIRECTIONS[a][2] == -1 for a in DOWN_PORTS)
    assert all(DIRECTIONS[a][2] == 1 for a in UP_PORTS)


def test_neighbor_coord_examples():
    assert neighbor_coord(O, 0) == R(-1, 0, 0)
    assert neighbor_coord(O, 9) == R(0.5, 0.5, 1)
    assert neighbor_coord(R(1, 1, 2), 2) == R(2, 1, 2)
    for bad in (-1, 12, 1.5):
        with pytest.raises(LatticeError):
            neighbor_coord(O, bad)


def test_neighbors_of_origin():
    expected = {R(1, 0, 0), R(-1, 0, 0), R(0, 1, 0), R(0, -1, 0)}
    expected |= {R(sx * 0.5, sy * 0.5, sz) for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)}
    assert set(neighbors(O)) == expected
    assert len(set(neighbors(R(0.5, 0.5, 1)))) == 12
    assert O in neighbors(R(0.5, 0.5, 1))


def test_opposite_table():
    pairs = {0: 2, 1: 3, 4: 10, 5: 11, 6: 8, 7: 9}
    for a, b in pairs.items():
        assert OPPOSITE[a] == b and OPPOSITE[b] == a
    for c in (O, R(0.5, 1.5, -3)):
        for a in range(12):
            assert neighbor_coord(neighbor_coord(c, a), OPPOSITE[a]) == c


def test_distance_examples():
    # frozen after the BFS oracle check below
    assert fcc_distance(O, O) == 0
    assert fcc_distance(O, R(0.5, 0.5, 1)) == 1
    assert fcc_distance(O, R(2, 3, 0)) == 5
    assert fcc_distance(O, R(2.5, 0.5, 1)) == 3


def test_distance_examples_match_bfs():
    dist = bfs_distances(O, 6)
    assert dist[R(2, 3, 0)] == 5
    assert dist[R(2.5, 0.5, 1)] == 3


def test_distance_matches_bfs_from_off_origin_sources():
    for src in (R(0.5, 0.5, 1), R(-1.5, 2.5, -1), R(3, -2, 2)):
        dist = bfs_distances(src, 4)
        for v, d in dist.items():
            assert fcc_distance(src, v) == d
            assert fcc_distance(v, src) == d
            assert d >= abs(v.z - src.z)


def test_layer_distance():
    assert layer_distance(O, R(1, 1, 0)) == 2
    assert layer_distance(R(0.5, 0.5, 1), R(2.5, 0.5, 1)) == 2
    assert layer_distance(O, O) == 0
    with pytest.raises(LatticeError):
        layer_distance(O, R(0.5, 0.5, 1))


def test_corners():
    assert set(corners(O)) == {R(1, 1, 0), R(-1, 1, 0), R(1, -1, 0), R(-1, -1, 0)}
    assert set(corners(R(0.5, 0.5, 1))) == {R(1.5, 1.5, 1), R(-0.5, 1.5, 1), R(1.5, -0.5, 1), R(-0.5, -0.5, 1)}
    assert all(fcc_distance(O, c) == 2 for c in corners(O))


def test_misc_helpers():
    assert port_of_canonical((1, 1, 1)) == 9
    with pytest.raises(LatticeError):
        port_of_canonical((2, 2, 0))
    assert are_adjacent(O, R(0.5, -0.5, -1))
    assert not are_adjacent(O, R(1, 1, 0))
    assert lex_max([(0, 0, 0), (2, 0, -1), (2, 0, -3)]) == (2, 0, -1)
    with pytest.raises(LatticeError):
        lex_max([])
