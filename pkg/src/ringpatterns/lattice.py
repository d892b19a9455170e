"""Cell complexes made of unit squares of the integer lattice.

The set of squares is the primitive datum; vertices, edges, faces and the
boundary classification are always derived from it, never stored
independently, so the incidence structure cannot drift out of sync.
Vertices are ordered lexicographically by (m, n), which fixes a single
deterministic indexing for every vector quantity built on the complex
(radius fields, gradients, Hessian rows).

A square (m, n) has corners (m, n), (m+1, n), (m, n+1), (m+1, n+1).
Complexes must be edge-connected and simply connected; boundary vertices
of degree 4 (re-entrant staircase corners) are permitted but flagged,
because the variational solver only accepts degree-2/3 boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import DisconnectedComplex, NotInterior, NotSimplyConnected

Vertex = tuple[int, int]
Square = tuple[int, int]
Edge = tuple[Vertex, Vertex]

# Neighbour offsets in counter-clockwise order: east, north, west, south.
CCW_OFFSETS: tuple[tuple[int, int], ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))


def square_corners(sq: Square) -> tuple[Vertex, Vertex, Vertex, Vertex]:
    """Corners of a square in the order BL, BR, TR, TL."""
    m, n = sq
    return (m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)


def square_edges(sq: Square) -> tuple[Edge, Edge, Edge, Edge]:
    """The four edges of a square, each normalized to lexicographic order."""
    m, n = sq
    return (
        ((m, n), (m + 1, n)),          # bottom
        ((m + 1, n), (m + 1, n + 1)),  # right
        ((m, n + 1), (m + 1, n + 1)),  # top
        ((m, n), (m, n + 1)),          # left
    )


@dataclass(frozen=True, eq=False)
class LatticeComplex:
    """Derived incidence data for a set of unit squares.

    Instances are immutable after construction and safe to share between
    threads for read-only use.  Build them with :func:`build_complex`.
    """

    squares: frozenset[Square]
    vertices: tuple[Vertex, ...]            # lexicographically sorted
    edges: tuple[Edge, ...]                 # sorted, endpoints lex-ordered
    vertex_index: Mapping[Vertex, int]
    edge_index_array: np.ndarray            # (E, 2) vertex indices
    interior_mask: np.ndarray               # (V,) bool
    degree: Mapping[Vertex, int]            # incident edge count
    faces: tuple[Square, ...]               # sorted squares
    face_corner_indices: np.ndarray         # (F, 4) vertex indices BL,BR,TR,TL
    has_nonzigzag_boundary: bool = field(repr=False, default=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LatticeComplex):
            return NotImplemented
        return self.squares == other.squares

    def __hash__(self) -> int:
        return hash(self.squares)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def interior_vertices(self) -> tuple[Vertex, ...]:
        return tuple(v for v, keep in zip(self.vertices, self.interior_mask) if keep)

    @property
    def boundary_vertices(self) -> tuple[Vertex, ...]:
        return tuple(v for v, keep in zip(self.vertices, self.interior_mask) if not keep)

    def is_interior(self, v: Vertex) -> bool:
        return bool(self.interior_mask[self.vertex_index[v]])

    def neighbors(self, v: Vertex) -> list[Vertex]:
        """Existing lattice neighbours of ``v`` in CCW order (E, N, W, S)."""
        m, n = v
        out = []
        for dm, dn in CCW_OFFSETS:
            w = (m + dm, n + dn)
            if _norm_edge(v, w) in self._edge_set:
                out.append(w)
        return out

    def incident_squares(self, v: Vertex) -> list[Square]:
        """Squares of the complex having ``v`` as a corner."""
        m, n = v
        cands = ((m, n), (m - 1, n), (m - 1, n - 1), (m, n - 1))
        return [sq for sq in cands if sq in self.squares]

    def faces_of_edge(self, e: Edge) -> list[Square]:
        """The one or two squares an edge belongs to."""
        (a, b) = e
        if a[0] == b[0]:  # vertical edge
            cands = ((a[0], min(a[1], b[1])), (a[0] - 1, min(a[1], b[1])))
        else:             # horizontal edge
            cands = ((min(a[0], b[0]), a[1]), (min(a[0], b[0]), a[1] - 1))
        return [sq for sq in cands if sq in self.squares]

    @property
    def _edge_set(self) -> frozenset[Edge]:
        return self.__dict__.setdefault("_edge_set_cache", frozenset(self.edges))

    def to_json_dict(self) -> dict:
        return {
            "squares": [list(sq) for sq in sorted(self.squares)],
            "vertices": [list(v) for v in self.vertices],
            "boundary": [
                [v[0], v[1], self.degree[v]]
                for v in self.vertices
                if not self.interior_mask[self.vertex_index[v]]
            ],
        }


def _norm_edge(a: Vertex, b: Vertex) -> Edge:
    return (a, b) if a <= b else (b, a)


def build_complex(squares: Iterable[Square]) -> LatticeComplex:
    """Build a :class:`LatticeComplex` from its squares.

    Raises
    ------
    ValueError
        If ``squares`` is empty.
    DisconnectedComplex
        If the squares are not connected through shared edges.
    NotSimplyConnected
        If the Euler characteristic V - E + F differs from 1.
    """
    square_set = frozenset((int(m), int(n)) for m, n in squares)
    if not square_set:
        raise ValueError("a complex needs at least one square")

    _check_edge_connected(square_set)

    edge_set: set[Edge] = set()
    for sq in square_set:
        edge_set.update(square_edges(sq))
    vertex_set = {v for e in edge_set for v in e}

    vertices = tuple(sorted(vertex_set))
    edges = tuple(sorted(edge_set))
    vertex_index = {v: i for i, v in enumerate(vertices)}

    if len(vertices) - len(edges) + len(square_set) != 1:
        raise NotSimplyConnected(
            f"Euler characteristic V - E + F = "
            f"{len(vertices) - len(edges) + len(square_set)}, expected 1"
        )

    degree: dict[Vertex, int] = {v: 0 for v in vertices}
    for a, b in edges:
        degree[a] += 1
        degree[b] += 1

    interior_mask = np.zeros(len(vertices), dtype=bool)
    nonzigzag = False
    for v in vertices:
        m, n = v
        n_squares = sum(
            sq in square_set for sq in ((m, n), (m - 1, n), (m - 1, n - 1), (m, n - 1))
        )
        if n_squares == 4:
            interior_mask[vertex_index[v]] = True
        elif degree[v] == 4:
            nonzigzag = True

    edge_index_array = np.array(
        [[vertex_index[a], vertex_index[b]] for a, b in edges], dtype=np.int64
    )

    faces = tuple(sorted(square_set))
    face_corner_indices = np.array(
        [[vertex_index[c] for c in square_corners(sq)] for sq in faces],
        dtype=np.int64,
    )

    return LatticeComplex(
        squares=square_set,
        vertices=vertices,
        edges=edges,
        vertex_index=vertex_index,
        edge_index_array=edge_index_array,
        interior_mask=interior_mask,
        degree=degree,
        faces=faces,
        face_corner_indices=face_corner_indices,
        has_nonzigzag_boundary=nonzigzag,
    )


def _check_edge_connected(square_set: frozenset[Square]) -> None:
    start = next(iter(square_set))
    seen = {start}
    stack = [start]
    while stack:
        m, n = stack.pop()
        for nb in ((m + 1, n), (m - 1, n), (m, n + 1), (m, n - 1)):
            if nb in square_set and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    if len(seen) != len(square_set):
        raise DisconnectedComplex(
            f"only {len(seen)} of {len(square_set)} squares are reachable "
            "through shared edges"
        )


def flower(c: LatticeComplex, v: Vertex) -> list[Vertex]:
    """The four neighbours of an interior vertex in CCW order.

    Order is (m+1, n), (m, n+1), (m-1, n), (m, n-1).
    """
    if not c.is_interior(v):
        raise NotInterior(f"vertex {v} is not interior")
    m, n = v
    return [(m + dm, n + dn) for dm, dn in CCW_OFFSETS]


def diagonal_classes(c: LatticeComplex) -> tuple[set[Vertex], set[Vertex]]:
    """Partition vertices into the even (m+n even) and odd sublattices."""
    even = {v for v in c.vertices if (v[0] + v[1]) % 2 == 0}
    odd = {v for v in c.vertices if (v[0] + v[1]) % 2 == 1}
    return even, odd


def block_squares(width: int, height: int, origin: Vertex = (0, 0)) -> set[Square]:
    """Squares of a ``width`` x ``height`` rectangular block."""
    m0, n0 = origin
    return {(m0 + i, n0 + j) for i in range(width) for j in range(height)}


def block_complex(width: int, height: int, origin: Vertex = (0, 0)) -> LatticeComplex:
    return build_complex(block_squares(width, height, origin))


def complex_from_json_dict(data: Mapping) -> LatticeComplex:
    return build_complex((int(m), int(n)) for m, n in data["squares"])


def squares_spanned_by(vertices: Iterable[Vertex]) -> set[Square]:
    """All unit squares whose four corners are present in ``vertices``.

    Used to reconstruct a complex from a serialized field, which stores
    only per-vertex values.
    """
    vset = set(vertices)
    out = set()
    for m, n in vset:
        if {(m + 1, n), (m, n + 1), (m + 1, n + 1)} <= vset:
            out.add((m, n))
    return out
