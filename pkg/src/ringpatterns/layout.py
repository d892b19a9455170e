"""Realize a closure-satisfying field as rings in the plane.

Every square of the complex becomes an orthodiagonal quadrilateral of
centers: the two diagonals meet at the face's touching point F at right
angles.  With a right-handed orthonormal frame (u, w) per face,

    F     = z[BL] + r[BL] * u = z[BR] + R[BR] * w,
    z[TR] = F + r[TR] * u,
    z[TL] = F + R[TL] * w,

where r is the signed inner radius and R the outer radius of the ring at
each corner.  These identities encode all the pattern axioms at once:
the inner circles of the BL/TR corners and the outer circles of the
BR/TL corners pass through F, the tangencies along the diagonals are
external or internal according to the signs, and every edge length
satisfies |z_i - z_j|^2 = r_i^2 + R_j^2 = R_i^2 + r_j^2.

Knowing two adjacent centers of a face determines (u, w) by plain vector
algebra, no trigonometry involved; e.g. for the bottom edge

    z[BR] - z[BL] = r[BL] * u - R[BR] * w
    =>  u = (r[BL] * e + R[BR] * rot90(e)) / |e|^2,   e = z[BR] - z[BL],

and similarly for the other three edges.  Propagation walks the face
adjacency graph from a seeded edge; on simply connected complexes the
result is independent of the walk order exactly when the closure
condition holds, which is checked up front.

Fields tagged with ell0 == 0 are laid out as plain circle patterns with
radii exp(rho): both diagonal tangencies then use the same radius.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import ClosureViolation, InconsistentPropagation
from .lattice import LatticeComplex, Square, Vertex, square_corners
from .rings import RhoField, closure_residuals

_CLOSURE_TOL = 1e-8


def _pattern_radii(f: RhoField, ell0: float) -> tuple[np.ndarray, np.ndarray, float]:
    """Per-vertex (inner, outer) radii and the length scale for tolerances.

    The scale is the median outer radius: for moderate fields it is of
    the order of ell0, and it stays meaningful for strongly deformed
    fields where ell0 is tiny but the rings themselves are not.
    """
    if ell0 < 0:
        raise ValueError("ell0 must be >= 0")
    if ell0 == 0.0:
        radii = np.exp(f.values)
        return radii, radii, float(np.median(radii))
    r_out = ell0 * np.cosh(f.values)
    return ell0 * np.sinh(f.values), r_out, float(np.median(r_out))


def _rot90(v: np.ndarray) -> np.ndarray:
    return np.array([-v[1], v[0]])


def _cross2(a: np.ndarray, b: np.ndarray) -> float:
    return float(a[0] * b[1] - a[1] * b[0])


@dataclass(frozen=True)
class PlanarPattern:
    """Center positions and face touching points of a laid-out field."""

    rho: RhoField
    ell0: float                                  # 0 means circle-pattern semantics
    centers: Mapping[Vertex, tuple[float, float]]
    face_points: Mapping[Square, tuple[float, float]]

    @property
    def complex(self) -> LatticeComplex:
        return self.rho.complex

    def inner_radius(self, v: Vertex) -> float:
        if self.ell0 == 0.0:
            return math.exp(self.rho[v])
        return self.ell0 * math.sinh(self.rho[v])

    def outer_radius(self, v: Vertex) -> float:
        if self.ell0 == 0.0:
            return math.exp(self.rho[v])
        return self.ell0 * math.cosh(self.rho[v])

    def length_scale(self) -> float:
        if self.ell0 > 0:
            return self.ell0
        return float(np.median(np.exp(self.rho.values)))

    def to_json_dict(self) -> dict:
        return {
            "ell0": self.ell0,
            "rho": [[v[0], v[1], float(x)]
                    for v, x in zip(self.complex.vertices, self.rho.values)],
            "centers": [[v[0], v[1], float(p[0]), float(p[1])]
                        for v, p in sorted(self.centers.items())],
            "face_points": [[sq[0], sq[1], float(p[0]), float(p[1])]
                            for sq, p in sorted(self.face_points.items())],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "PlanarPattern":
        from .lattice import build_complex, squares_spanned_by

        rho_map = {(int(m), int(n)): float(x) for m, n, x in data["rho"]}
        c = build_complex(squares_spanned_by(rho_map))
        f = RhoField.from_mapping(c, rho_map, ell0=float(data["ell0"]))
        centers = {(int(m), int(n)): (float(x), float(y))
                   for m, n, x, y in data["centers"]}
        faces = {(int(m), int(n)): (float(x), float(y))
                 for m, n, x, y in data["face_points"]}
        return cls(rho=f, ell0=float(data["ell0"]), centers=centers, face_points=faces)


def layout(
    f: RhoField,
    ell0: float | None = None,
    seed_vertex: Vertex | None = None,
    seed_position: tuple[float, float] = (0.0, 0.0),
    seed_direction: float = 0.0,
    order: str = "bfs",
) -> PlanarPattern:
    """Compute center positions by propagating over faces.

    The seed vertex sits at ``seed_position`` with its first outgoing
    edge (CCW order E, N, W, S) pointing along ``seed_direction``.
    ``order`` selects the face traversal ("bfs" or "dfs"); on valid
    input both give the same pattern.

    Raises
    ------
    ClosureViolation
        If some interior closure residual exceeds 1e-8.
    InconsistentPropagation
        If two propagation routes disagree on a center (residuals too
        large) or a vertex is never reached.
    """
    if order not in ("bfs", "dfs"):
        raise ValueError("order must be 'bfs' or 'dfs'")
    c = f.complex
    res = closure_residuals(f)
    if res:
        worst = max(res, key=lambda v: abs(res[v]))
        if abs(res[worst]) >= _CLOSURE_TOL:
            raise ClosureViolation(
                f"closure residual {res[worst]:.3e} at vertex {worst} "
                f"exceeds {_CLOSURE_TOL}"
            )

    ell0_actual = float(ell0) if ell0 is not None else f.ell0
    r_in, r_out, scale = _pattern_radii(f, ell0_actual)
    tol = 1e-7 * scale
    idx = c.vertex_index

    if seed_vertex is None:
        seed_vertex = c.vertices[0]
    if seed_vertex not in idx:
        raise ValueError(f"seed vertex {seed_vertex} is not in the complex")
    nbrs = c.neighbors(seed_vertex)
    if not nbrs:
        raise ValueError("seed vertex has no incident edges")
    first = nbrs[0]

    known: dict[Vertex, np.ndarray] = {
        seed_vertex: np.asarray(seed_position, dtype=float)
    }
    d = math.sqrt(r_in[idx[seed_vertex]] ** 2 + r_out[idx[first]] ** 2)
    known[first] = known[seed_vertex] + d * np.array(
        [math.cos(seed_direction), math.sin(seed_direction)]
    )

    face_points: dict[Square, np.ndarray] = {}
    done: set[Square] = set()
    # Faces enter the queue only once one of their edges is fully known,
    # so every queued face is immediately processable.
    queue: deque[Square] = deque(c.faces_of_edge(_edge(seed_vertex, first)))
    pop = queue.popleft if order == "bfs" else queue.pop

    while queue:
        sq = pop()
        if sq in done:
            continue
        done.add(sq)
        corners = square_corners(sq)  # BL, BR, TR, TL
        pair = _known_adjacent_pair(corners, known)
        _fill_face(sq, corners, pair, known, face_points, r_in, r_out, idx, tol)
        for v, w in _face_edges(corners):
            for nb in c.faces_of_edge(_edge(v, w)):
                if nb not in done:
                    queue.append(nb)

    missing = [v for v in c.vertices if v not in known]
    if missing:
        raise InconsistentPropagation(
            f"{len(missing)} vertices were never reached, e.g. {missing[0]}"
        )

    return PlanarPattern(
        rho=f,
        ell0=ell0_actual,
        centers={v: (float(p[0]), float(p[1])) for v, p in known.items()},
        face_points={sq: (float(p[0]), float(p[1])) for sq, p in face_points.items()},
    )


def _edge(a: Vertex, b: Vertex):
    return (a, b) if a <= b else (b, a)


def _face_edges(corners):
    bl, br, tr, tl = corners
    return ((bl, br), (br, tr), (tl, tr), (bl, tl))


def _known_adjacent_pair(corners, known) -> int:
    for k, (v, w) in enumerate(_face_edges(corners)):
        if v in known and w in known:
            return k
    raise InconsistentPropagation(
        f"face {corners[0]} was queued without a known edge"
    )


def _fill_face(sq, corners, pair, known, face_points, r_in, r_out, idx, tol):
    bl, br, tr, tl = corners
    s = (r_in[idx[bl]], r_out[idx[br]], r_in[idx[tr]], r_out[idx[tl]])

    if pair == 0:      # bottom: e = r_bl*u - R_br*w
        e = known[br] - known[bl]
        u = (s[0] * e + s[1] * _rot90(e)) / (e @ e)
    elif pair == 1:    # right: e = r_tr*u + R_br*w
        e = known[tr] - known[br]
        u = (s[2] * e - s[1] * _rot90(e)) / (e @ e)
    elif pair == 2:    # top: e = r_tr*u - R_tl*w
        e = known[tr] - known[tl]
        u = (s[2] * e + s[3] * _rot90(e)) / (e @ e)
    else:              # left: e = r_bl*u + R_tl*w
        e = known[tl] - known[bl]
        u = (s[0] * e - s[3] * _rot90(e)) / (e @ e)
    w = _rot90(u)

    # Every face edge contains BL or TR, so one of them is known here.
    if bl in known:
        fp = known[bl] + s[0] * u
    else:
        fp = known[tr] - s[2] * u

    targets = (
        (bl, fp - s[0] * u),
        (br, fp - s[1] * w),
        (tr, fp + s[2] * u),
        (tl, fp + s[3] * w),
    )
    for v, pos in targets:
        if v in known:
            if np.max(np.abs(known[v] - pos)) > tol:
                raise InconsistentPropagation(
                    f"conflicting positions for vertex {v}: "
                    f"{tuple(known[v])} vs {tuple(pos)}"
                )
        else:
            known[v] = pos
    face_points[sq] = fp


@dataclass
class VerificationReport:
    """Per-edge and per-face errors of a planar pattern.

    ``orientation`` holds one flag per face: True if all its corner
    orientation checks match the sign convention, False if any fails,
    None if every check was degenerate (a vanishing inner radius).
    """

    edge_errors: dict[tuple[Vertex, Vertex], float]
    face_errors: dict[Square, float]
    orientation: dict[Square, bool | None]
    embedded: bool
    length_scale: float

    @property
    def max_edge_error(self) -> float:
        return max(self.edge_errors.values(), default=0.0)

    @property
    def max_face_error(self) -> float:
        return max(self.face_errors.values(), default=0.0)

    @property
    def max_error(self) -> float:
        return max(self.max_edge_error, self.max_face_error)

    def to_json_dict(self) -> dict:
        return {
            "max_edge_error": self.max_edge_error,
            "max_face_error": self.max_face_error,
            "embedded": self.embedded,
            "length_scale": self.length_scale,
            "edge_errors": [[a[0], a[1], b[0], b[1], float(e)]
                            for (a, b), e in sorted(self.edge_errors.items())],
            "face_errors": [[sq[0], sq[1], float(e)]
                            for sq, e in sorted(self.face_errors.items())],
            "orientation": [[sq[0], sq[1], flag]
                            for sq, flag in sorted(self.orientation.items())],
        }


def verify(p: PlanarPattern) -> VerificationReport:
    """Check the pattern axioms; reports errors, never raises."""
    c = p.complex
    r_in, r_out, scale = _pattern_radii(p.rho, p.ell0)
    idx = c.vertex_index
    pos = {v: np.asarray(p.centers[v], dtype=float) for v in c.vertices}

    edge_errors = {}
    for a, b in c.edges:
        d = float(np.linalg.norm(pos[a] - pos[b]))
        expected = math.sqrt(r_in[idx[a]] ** 2 + r_out[idx[b]] ** 2)
        edge_errors[(a, b)] = abs(d - expected)

    face_errors = {}
    orientation = {}
    for sq in c.faces:
        bl, br, tr, tl = square_corners(sq)
        fp = np.asarray(p.face_points[sq], dtype=float)
        errs = (
            abs(float(np.linalg.norm(fp - pos[bl])) - abs(r_in[idx[bl]])),
            abs(float(np.linalg.norm(fp - pos[br])) - r_out[idx[br]]),
            abs(float(np.linalg.norm(fp - pos[tr])) - abs(r_in[idx[tr]])),
            abs(float(np.linalg.norm(fp - pos[tl])) - r_out[idx[tl]]),
        )
        face_errors[sq] = max(errs)
        orientation[sq] = _face_orientation(sq, pos, fp, r_in, r_out, idx, scale)

    return VerificationReport(
        edge_errors=edge_errors,
        face_errors=face_errors,
        orientation=orientation,
        embedded=_embedded(p, pos, scale),
        length_scale=scale,
    )


def _circle_intersections(c1, rad1, c2, rad2):
    """The two intersection points of two circles (None if degenerate)."""
    d2 = float((c2 - c1) @ (c2 - c1))
    if d2 == 0.0:
        return None
    d = math.sqrt(d2)
    a = (d2 + rad1 * rad1 - rad2 * rad2) / (2 * d)
    h2 = rad1 * rad1 - a * a
    if h2 <= 0.0:
        return None
    h = math.sqrt(h2)
    ex = (c2 - c1) / d
    ey = _rot90(ex)
    mid = c1 + a * ex
    return mid + h * ey, mid - h * ey


def _other_intersection(center, rad, center2, rad2, fp):
    pts = _circle_intersections(center, rad, center2, rad2)
    if pts is None:
        return None
    dist0 = float(np.linalg.norm(pts[0] - fp))
    dist1 = float(np.linalg.norm(pts[1] - fp))
    return pts[0] if dist0 >= dist1 else pts[1]


def _face_orientation(sq, pos, fp, r_in, r_out, idx, scale):
    """Orientation flags via triples of intersection points on corner circles.

    For the two corners whose inner circle passes through the face point
    (BL and TR), the triple (second intersection with one neighbour's
    outer circle, face point, second intersection with the other
    neighbour's outer circle) runs counter-clockwise exactly when the
    corner's rho is positive.  The analogous check anchored on an outer
    circle is not a function of the orientation signs once quadrilaterals
    become non-embedded, so only the inner-anchored pair is checked.
    """
    bl, br, tr, tl = square_corners(sq)
    checks = (
        (bl, br, tl),  # inner circle of BL against outer circles of BR, TL
        (tr, tl, br),
    )
    flags = []
    for v, nb1, nb2 in checks:
        i = idx[v]
        rad = abs(r_in[i])
        if rad <= 1e-12 * scale:
            continue  # vanishing inner circle: orientation undefined
        p1 = _other_intersection(pos[v], rad, pos[nb1], r_out[idx[nb1]], fp)
        p2 = _other_intersection(pos[v], rad, pos[nb2], r_out[idx[nb2]], fp)
        if p1 is None or p2 is None:
            continue
        cross = _cross2(fp - p1, p2 - fp)
        if abs(cross) <= 1e-12 * scale * scale:
            continue
        flags.append((cross > 0) == (r_in[i] >= 0))
    if not flags:
        return None
    return all(flags)


def _kite_polygons(p: PlanarPattern, pos) -> list[np.ndarray]:
    """One cyclic quadrilateral (or boundary triangle) per edge."""
    c = p.complex
    polys = []
    for a, b in c.edges:
        flank = [np.asarray(p.face_points[sq]) for sq in c.faces_of_edge((a, b))]
        if len(flank) == 2:
            polys.append(np.array([pos[a], flank[0], pos[b], flank[1]]))
        else:
            polys.append(np.array([pos[a], flank[0], pos[b]]))
    return polys


def _embedded(p: PlanarPattern, pos, scale) -> bool:
    """True when no two kite interiors overlap (pairwise check)."""
    from shapely import STRtree
    from shapely.geometry import Polygon

    polys = []
    for arr in _kite_polygons(p, pos):
        poly = Polygon(arr)
        if not poly.is_valid or poly.area == 0.0:
            continue
        polys.append(poly)
    if not polys:
        return True
    tree = STRtree(polys)
    area_tol = 1e-9 * scale * scale
    for i, poly in enumerate(polys):
        for j in tree.query(poly):
            if j <= i:
                continue
            if poly.intersection(polys[j]).area > area_tol:
                return False
    return True
