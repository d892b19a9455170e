"""The convex functional whose critical points are ring patterns.

For a field rho on a complex with per-vertex target angle sums Phi the
functional is

    S(rho) = sum_edges [ Ti2(e^(rho_j - rho_i)) + Ti2(e^(rho_i - rho_j))
                         - (pi/2)(rho_i + rho_j) ]
             + sum_vertices Phi_i * rho_i,

where Ti2 is the inverse tangent integral

    Ti2(y) = integral_0^y arctan(t)/t dt = Im Li2(i y).

Its gradient component at vertex i is Phi_i + sum_j (2 arctan(e^(rho_i -
rho_j)) - pi); it vanishes exactly when the kite angles around i sum to
Phi_i.  The Hessian is the graph Laplacian with edge weights
sech(rho_i - rho_j): positive semidefinite with kernel spanned by the
constant shift.

Ti2 evaluation strategy (no external special-function dependency):

* y <= 1/2: alternating power series sum (-1)^k y^(2k+1) / (2k+1)^2,
  28 terms reach full double precision at y = 1/2;
* y >= 2: reflection Ti2(y) = Ti2(1/y) + (pi/2) ln y, then the series;
* 1/2 < y < 2: Ti2(1/2) plus a 40-node Gauss-Legendre panel over
  [1/2, y] (the integrand is analytic there, so this is exact to
  machine precision).

Written with exponent arguments, Ti2(e^u) = (pi/2) u + Ti2(e^-u) for
u >= 0, which is also the large-u asymptote (pi/2) u + y': no
intermediate exp ever overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.sparse as sp

from .errors import MissingWeight, NegativeArgument
from .lattice import LatticeComplex, Vertex
from .rings import RhoField, two_arctan_exp

#: Catalan's constant, Ti2(1).
CATALAN = 0.915965594177219015054603514932

_SERIES_K = np.arange(28)
_SERIES_COEF = (-1.0) ** _SERIES_K / (2 * _SERIES_K + 1) ** 2
_SERIES_POW = 2 * _SERIES_K + 1

_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


def _ti2_series(y: np.ndarray) -> np.ndarray:
    # y <= 0.5 so the 28-term tail is below 1e-18
    return (y[..., None] ** _SERIES_POW) @ _SERIES_COEF


_TI2_HALF = float(_ti2_series(np.asarray(0.5)))


def _ti2_panel(y: np.ndarray) -> np.ndarray:
    # Ti2(0.5) + integral over [0.5, y] of arctan(t)/t dt
    half_len = (y - 0.5) / 2.0
    mid = (y + 0.5) / 2.0
    t = mid[..., None] + half_len[..., None] * _GL_NODES
    vals = np.arctan(t) / t
    return _TI2_HALF + half_len * (vals @ _GL_WEIGHTS)


def ti2(y):
    """Inverse tangent integral Ti2(y) for y >= 0 (scalar or array)."""
    arr = np.asarray(y, dtype=float)
    if np.any(arr < 0):
        raise NegativeArgument("ti2 requires y >= 0")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.empty_like(arr)

    small = arr <= 0.5
    large = arr >= 2.0
    mid = ~(small | large)
    if np.any(small):
        out[small] = _ti2_series(arr[small])
    if np.any(large):
        ylarge = arr[large]
        out[large] = _ti2_series(1.0 / ylarge) + (math.pi / 2.0) * np.log(ylarge)
    if np.any(mid):
        out[mid] = _ti2_panel(arr[mid])
    return float(out[0]) if scalar else out


def ti2_exp(u):
    """Ti2(exp(u)) computed without overflow for any real u."""
    arr = np.atleast_1d(np.asarray(u, dtype=float))
    out = np.empty_like(arr)
    neg = arr <= math.log(0.5)
    pos = arr >= math.log(2.0)
    mid = ~(neg | pos)
    if np.any(neg):
        out[neg] = _ti2_series(np.exp(arr[neg]))
    if np.any(pos):
        # reflection; exp(-u) underflows harmlessly to 0 for huge u
        out[pos] = _ti2_series(np.exp(-arr[pos])) + (math.pi / 2.0) * arr[pos]
    if np.any(mid):
        out[mid] = _ti2_panel(np.exp(arr[mid]))
    return float(out[0]) if np.asarray(u).ndim == 0 else out


def edge_term(rho_i: float, rho_j: float) -> float:
    """Contribution of a single edge to the functional."""
    u = rho_i - rho_j
    return float(ti2_exp(-u) + ti2_exp(u) - (math.pi / 2.0) * (rho_i + rho_j))


class VertexWeights:
    """Target angle sums Phi, one per vertex.

    For a flat pattern Phi must be 2*pi at interior vertices and lie in
    (0, 2*pi) at boundary vertices, and the boundary values must sum to
    the complex's angle budget (see :func:`boundary_phi_budget`).  These
    constraints are checked by :meth:`validate`, not at construction, so
    that internal bookkeeping weights (e.g. for Dirichlet sweeps, where
    boundary weights only add a constant) remain expressible.
    """

    __slots__ = ("complex", "phi")

    def __init__(self, complex: LatticeComplex, phi: np.ndarray):
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (complex.num_vertices,):
            raise MissingWeight(
                f"expected {complex.num_vertices} weights, got shape {phi.shape}"
            )
        self.complex = complex
        self.phi = phi

    @classmethod
    def from_mapping(cls, complex: LatticeComplex, phi: Mapping[Vertex, float]) -> "VertexWeights":
        missing = [v for v in complex.vertices if v not in phi]
        if missing:
            raise MissingWeight(f"weights missing for {len(missing)} vertices, e.g. {missing[0]}")
        return cls(complex, np.array([phi[v] for v in complex.vertices], dtype=float))

    @classmethod
    def with_boundary(
        cls, complex: LatticeComplex, boundary_phi: Mapping[Vertex, float]
    ) -> "VertexWeights":
        """2*pi at interior vertices, prescribed values on the boundary."""
        phi = np.where(complex.interior_mask, 2.0 * math.pi, 0.0)
        weights = cls(complex, phi)
        for v, val in boundary_phi.items():
            i = complex.vertex_index[v]
            if complex.interior_mask[i]:
                raise ValueError(f"vertex {v} is interior; only boundary weights may be set")
            phi[i] = float(val)
        return weights

    def __getitem__(self, v: Vertex) -> float:
        return float(self.phi[self.complex.vertex_index[v]])

    def validate(self, tol: float = 1e-9) -> None:
        c = self.complex
        inside = self.phi[c.interior_mask]
        if inside.size and np.max(np.abs(inside - 2 * math.pi)) > tol:
            raise ValueError("interior weights must equal 2*pi")
        boundary = self.phi[~c.interior_mask]
        if np.any(boundary <= 0.0) or np.any(boundary >= 2 * math.pi):
            raise ValueError("boundary weights must lie strictly inside (0, 2*pi)")
        budget = boundary_phi_budget(c)
        if abs(boundary.sum() - budget) > tol:
            raise ValueError(
                f"boundary weights sum to {boundary.sum():.12g}, "
                f"but a flat pattern requires {budget:.12g}"
            )


def boundary_phi_budget(c: LatticeComplex) -> float:
    """Required sum of boundary angle weights for a flat pattern.

    A global shift of rho changes the functional by delta*(sum Phi -
    pi*E), so a critical point can only exist when the total weight is
    pi*E.  With 2*pi at each interior vertex this leaves

        sum_boundary Phi = pi*E - 2*pi*V_int

    which for a simple zigzag boundary with n_b vertices equals
    (3*n_b/2 - 2)*pi, i.e. the polygon angle sum (n_b - 2)*pi plus
    pi/2 per boundary vertex for the two boundary half-kites.
    """
    v_int = int(np.count_nonzero(c.interior_mask))
    return math.pi * c.num_edges - 2.0 * math.pi * v_int


@dataclass(frozen=True)
class EnergyReport:
    """Functional value, gradient and Hessian at one field."""

    value: float
    gradient: np.ndarray
    hessian: sp.csr_matrix

    def to_json_dict(self) -> dict:
        h = self.hessian.tocoo()
        return {
            "value": self.value,
            "gradient": [float(g) for g in self.gradient],
            "hessian": {
                "rows": h.row.tolist(),
                "cols": h.col.tolist(),
                "values": [float(x) for x in h.data],
            },
        }


def _check_weights(f: RhoField, w: VertexWeights) -> None:
    if w.complex is not f.complex and w.complex != f.complex:
        raise MissingWeight("weights were built for a different complex")


def energy(f: RhoField, w: VertexWeights) -> float:
    """Value of the functional S(rho)."""
    _check_weights(f, w)
    ei = f.complex.edge_index_array[:, 0]
    ej = f.complex.edge_index_array[:, 1]
    u = f.values[ei] - f.values[ej]
    edge_sum = float(
        np.sum(ti2_exp(-u) + ti2_exp(u) - (math.pi / 2.0) * (f.values[ei] + f.values[ej]))
    )
    return edge_sum + float(w.phi @ f.values)


def gradient(f: RhoField, w: VertexWeights) -> np.ndarray:
    """Gradient of S; component i is Phi_i + sum_j (2 arctan(e^(rho_i-rho_j)) - pi).

    At an interior vertex with Phi = 2*pi the component equals the
    closure residual.
    """
    _check_weights(f, w)
    ei = f.complex.edge_index_array[:, 0]
    ej = f.complex.edge_index_array[:, 1]
    a = two_arctan_exp(f.values[ei] - f.values[ej])  # angle term seen from i
    g = w.phi.copy()
    np.add.at(g, ei, a - math.pi)
    np.add.at(g, ej, -a)  # 2 arctan(e^(rho_j-rho_i)) - pi == -a
    return g


def _edge_sech(f: RhoField) -> np.ndarray:
    ei = f.complex.edge_index_array[:, 0]
    ej = f.complex.edge_index_array[:, 1]
    d = np.abs(f.values[ei] - f.values[ej])
    e = np.exp(-d)
    return 2.0 * e / (1.0 + e * e)


def hessian(f: RhoField) -> sp.csr_matrix:
    """Sparse Hessian: H_ij = -sech(rho_i - rho_j) on edges, row sums zero."""
    n = f.complex.num_vertices
    ei = f.complex.edge_index_array[:, 0]
    ej = f.complex.edge_index_array[:, 1]
    wts = _edge_sech(f)
    rows = np.concatenate([ei, ej, ei, ej])
    cols = np.concatenate([ej, ei, ei, ej])
    vals = np.concatenate([-wts, -wts, wts, wts])
    return sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()


def energy_report(f: RhoField, w: VertexWeights) -> EnergyReport:
    return EnergyReport(value=energy(f, w), gradient=gradient(f, w), hessian=hessian(f))
