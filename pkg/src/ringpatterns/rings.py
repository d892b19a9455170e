"""Ring geometry: radius fields, kite angles, closure, deformation.

Every ring (a pair of concentric circles) in a pattern of constant area
pi * ell0**2 is described by a single real parameter rho per vertex:

    R = ell0 * cosh(rho)   (outer radius, always positive)
    r = ell0 * sinh(rho)   (inner radius, signed; the sign encodes the
                            orientation of the ring)

The angle at vertex i of the cyclic quadrilateral spanned by two
neighbouring rings depends only on the difference rho_i - rho_j:

    phi_ij = pi - 2*arctan(exp(rho_i - rho_j))   for rho_i > 0 (and 0)
    phi_ij =    - 2*arctan(exp(rho_i - rho_j))   for rho_i < 0

A field of rho values extends to a planar pattern exactly when the
closure condition sum_j 2*arctan(exp(rho_i - rho_j)) = 2*pi holds at
every interior vertex.  All functions here are pure; fields are
immutable and safe to share.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

import numpy as np

from .errors import NotInterior
from .lattice import LatticeComplex, Vertex, flower

# exp(d) with |d| > _CLIP puts 2*arctan(exp(d)) within 1e-17 of its
# asymptote (0 or pi), so clipping there avoids overflow at no cost.
_CLIP = 40.0


def two_arctan_exp(d):
    """2 * arctan(exp(d)), elementwise, safe for any float input."""
    return 2.0 * np.arctan(np.exp(np.clip(d, -_CLIP, _CLIP)))


@dataclass(frozen=True)
class DeformationParam:
    """Shift parameter of the one-parameter family rho -> rho + delta."""

    delta: float


@dataclass(frozen=True)
class Ring:
    """One ring: center (may be unset before layout), rho and area scale."""

    rho: float
    ell0: float = 1.0
    center: tuple[float, float] | None = None

    @property
    def r(self) -> float:
        """Signed inner radius; positive means counter-clockwise."""
        return self.ell0 * math.sinh(self.rho)

    @property
    def R(self) -> float:
        """Outer radius, always positive."""
        return self.ell0 * math.cosh(self.rho)


class RhoField:
    """A map vertex -> rho over a lattice complex.

    Values are stored as a vector aligned with the complex's
    lexicographic vertex order.  ``ell0`` is the area scale used when the
    field is realized as rings; ``ell0 == 0`` tags the field as a plain
    circle pattern with radii exp(rho) (the zero-area limit).
    """

    __slots__ = ("complex", "values", "ell0")

    def __init__(self, complex: LatticeComplex, values: np.ndarray, ell0: float = 1.0):
        values = np.array(values, dtype=float)  # private copy, frozen below
        if values.shape != (complex.num_vertices,):
            raise ValueError(
                f"expected {complex.num_vertices} values, got shape {values.shape}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("rho values must be finite")
        if ell0 < 0:
            raise ValueError("ell0 must be >= 0")
        object.__setattr__(self, "complex", complex)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "ell0", float(ell0))
        values.setflags(write=False)

    def __setattr__(self, name, value):  # immutable
        raise AttributeError("RhoField is immutable")

    @classmethod
    def from_mapping(
        cls, complex: LatticeComplex, rho: Mapping[Vertex, float], ell0: float = 1.0
    ) -> "RhoField":
        try:
            values = np.array([rho[v] for v in complex.vertices], dtype=float)
        except KeyError as exc:
            raise KeyError(f"rho mapping misses vertex {exc.args[0]}") from None
        return cls(complex, values, ell0)

    @classmethod
    def from_function(
        cls, complex: LatticeComplex, fn: Callable[[int, int], float], ell0: float = 1.0
    ) -> "RhoField":
        return cls(complex, np.array([fn(m, n) for m, n in complex.vertices]), ell0)

    @classmethod
    def constant(cls, complex: LatticeComplex, value: float, ell0: float = 1.0) -> "RhoField":
        return cls(complex, np.full(complex.num_vertices, float(value)), ell0)

    def __getitem__(self, v: Vertex) -> float:
        return float(self.values[self.complex.vertex_index[v]])

    def __iter__(self) -> Iterator[Vertex]:
        return iter(self.complex.vertices)

    def as_dict(self) -> dict[Vertex, float]:
        return {v: float(x) for v, x in zip(self.complex.vertices, self.values)}

    def with_values(self, values: np.ndarray, ell0: float | None = None) -> "RhoField":
        return RhoField(self.complex, values, self.ell0 if ell0 is None else ell0)

    def ring(self, v: Vertex) -> Ring:
        return Ring(rho=self[v], ell0=self.ell0)

    def to_json_dict(self) -> dict:
        return {
            "ell0": self.ell0,
            "rho": [[v[0], v[1], float(x)] for v, x in zip(self.complex.vertices, self.values)],
        }


def kite_angle(rho_i: float, rho_j: float) -> float:
    """Signed angle at vertex i of the quadrilateral on edge (i, j).

    Returns a value in (-pi, pi] in exact arithmetic; for differences
    beyond 40 the angle is clamped to its asymptote, so -pi itself can
    be returned (the true value is then within 1e-17 of it).  At
    rho_i == 0 the positive branch is used; the closure condition does
    not depend on this choice.
    """
    a = two_arctan_exp(rho_i - rho_j)
    if rho_i >= 0:
        return math.pi - float(a)
    return -float(a)


def closure_residual(f: RhoField, v: Vertex) -> float:
    """sum_j 2*arctan(exp(rho_i - rho_j)) - 2*pi at an interior vertex."""
    rho_i = f[v]
    total = 0.0
    for w in flower(f.complex, v):
        total += float(two_arctan_exp(rho_i - f[w]))
    return total - 2.0 * math.pi


def closure_residual_vector(f: RhoField) -> np.ndarray:
    """Closure residuals for all vertices at once (lexicographic order).

    Entries at boundary vertices are meaningless (their angle sums are
    not constrained to 2*pi); use the interior mask to select.
    """
    c = f.complex
    ei = c.edge_index_array[:, 0]
    ej = c.edge_index_array[:, 1]
    t = two_arctan_exp(f.values[ei] - f.values[ej])
    res = np.full(c.num_vertices, -2.0 * math.pi)
    np.add.at(res, ei, t)
    np.add.at(res, ej, math.pi - t)  # 2 arctan(e^(rho_j - rho_i)) = pi - t
    return res


def closure_residuals(f: RhoField) -> dict[Vertex, float]:
    """Closure residuals at all interior vertices."""
    res = closure_residual_vector(f)
    c = f.complex
    return {
        v: float(res[c.vertex_index[v]])
        for v, inside in zip(c.vertices, c.interior_mask) if inside
    }


def max_closure_residual(f: RhoField) -> float:
    c = f.complex
    if not np.any(c.interior_mask):
        return 0.0
    res = closure_residual_vector(f)
    return float(np.max(np.abs(res[c.interior_mask])))


def deform(f: RhoField, d: DeformationParam | float) -> RhoField:
    """Shift the whole field: rho -> rho + delta.

    Closure residuals are unchanged because the closure condition only
    depends on differences of rho.
    """
    delta = d.delta if isinstance(d, DeformationParam) else float(d)
    return f.with_values(f.values + delta)


def rescaled_radii(rho, delta: float):
    """Inner and outer radii of the deformed pattern, rescaled to stay finite.

    r = 2*exp(-|delta|)*sinh(rho + delta),
    R = 2*exp(-|delta|)*cosh(rho + delta),
    evaluated as exp(rho + delta - |delta|) -/+ exp(-rho - delta - |delta|)
    so that no intermediate overflows for large |delta|.  As delta ->
    +/-inf both tend to exp(+/-rho) up to sign: (e^rho, e^rho) and
    (-e^-rho, e^-rho).
    """
    rho = np.asarray(rho, dtype=float)
    s = rho + delta
    a = np.exp(s - abs(delta))
    b = np.exp(-s - abs(delta))
    r = a - b
    R = a + b
    if rho.ndim == 0:
        return float(r), float(R)
    return r, R


def circle_limit(f: RhoField, sign: int) -> RhoField:
    """Logarithmic radii of the limiting circle pattern of the family.

    ``sign=+1`` gives the pattern with radii exp(rho); ``sign=-1`` gives
    the dual pattern with radii exp(-rho).  The result is tagged with
    ell0 = 0 (zero-area semantics).
    """
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    return f.with_values(sign * f.values, ell0=0.0)


def ring_distance(rho_i: float, rho_j: float, ell0: float) -> float:
    """Distance of neighbouring ring centers.

    d^2 = R_i^2 + r_j^2 = r_i^2 + R_j^2 = ell0^2 (cosh 2rho_i + cosh 2rho_j)/2.
    """
    return ell0 * math.sqrt((math.cosh(2 * rho_i) + math.cosh(2 * rho_j)) / 2.0)
