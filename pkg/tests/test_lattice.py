import pytest

from ringpatterns.errors import DisconnectedComplex, NotInterior, NotSimplyConnected
from ringpatterns.lattice import (
    block_complex,
    build_complex,
    complex_from_json_dict,
    diagonal_classes,
    flower,
    squares_spanned_by,
)


def test_single_square():
    c = build_complex({(0, 0)})
    assert c.num_vertices == 4
    assert c.num_edges == 4
    assert len(c.interior_vertices) == 0
    assert c.num_vertices - c.num_edges + len(c.faces) == 1


def test_two_by_two_block():
    c = block_complex(2, 2)
    assert c.num_vertices == 9
    assert c.num_edges == 12
    assert c.interior_vertices == ((1, 1),)
    assert c.num_vertices - c.num_edges + len(c.faces) == 1
    assert not c.has_nonzigzag_boundary


def test_l_shape_counts():
    c = build_complex({(0, 0), (1, 0), (0, 1)})
    assert c.num_vertices == 8
    assert c.num_edges == 10
    assert len(c.interior_vertices) == 0
    # the inner corner (1, 1) touches three squares and carries all four
    # incident edges, so its degree is 4 and the boundary is not zigzag
    assert c.degree[(1, 1)] == 4
    assert len(c.incident_squares((1, 1))) == 3
    assert c.has_nonzigzag_boundary


def test_degrees_on_block():
    c = block_complex(2, 2)
    assert c.degree[(0, 0)] == 2
    assert c.degree[(1, 0)] == 3
    assert c.degree[(1, 1)] == 4


def test_empty_raises():
    with pytest.raises(ValueError):
        build_complex(set())


def test_disconnected():
    with pytest.raises(DisconnectedComplex):
        build_complex({(0, 0), (2, 0)})
    # sharing only a corner is not edge-connected either
    with pytest.raises(DisconnectedComplex):
        build_complex({(0, 0), (1, 1)})


def test_hole_is_rejected():
    ring = {(m, n) for m in range(3) for n in range(3)} - {(1, 1)}
    with pytest.raises(NotSimplyConnected):
        build_complex(ring)


def test_flower_order():
    c = block_complex(2, 2)
    assert flower(c, (1, 1)) == [(2, 1), (1, 2), (0, 1), (1, 0)]
    c3 = block_complex(3, 3)
    assert flower(c3, (1, 1)) == [(2, 1), (1, 2), (0, 1), (1, 0)]
    with pytest.raises(NotInterior):
        flower(c, (0, 0))


def test_diagonal_classes():
    c = block_complex(3, 3)
    even, odd = diagonal_classes(c)
    assert (0, 0) in even
    assert (1, 0) in odd
    assert (2, 3) in odd
    # 2-coloring: every edge joins the two classes
    for a, b in c.edges:
        assert ((a in even) and (b in odd)) or ((a in odd) and (b in even))
    assert even | odd == set(c.vertices)


def test_rebuild_idempotent():
    c = build_complex({(0, 0), (1, 0), (0, 1)})
    c2 = build_complex(c.squares)
    assert c2 == c
    assert c2.vertices == c.vertices
    assert c2.edges == c.edges


def test_every_edge_in_a_square():
    c = build_complex({(0, 0), (1, 0), (1, 1)})
    for e in c.edges:
        assert len(c.faces_of_edge(e)) >= 1


def test_interior_vertex_incidences():
    c = block_complex(3, 3)
    for v in c.interior_vertices:
        assert len(c.neighbors(v)) == 4
        assert len(c.incident_squares(v)) == 4


def test_json_roundtrip():
    c = build_complex({(0, 0), (1, 0), (0, 1)})
    data = c.to_json_dict()
    assert data["squares"] == [[0, 0], [0, 1], [1, 0]]
    assert [1, 1, 4] in data["boundary"]
    c2 = complex_from_json_dict(data)
    assert c2 == c


def test_squares_spanned_by():
    c = block_complex(2, 3)
    assert squares_spanned_by(c.vertices) == set(c.squares)
