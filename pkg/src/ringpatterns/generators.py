"""Closed-form and recursive radius fields for the named patterns.

Doyle spiral:  rho(m, n) = m*x - n*y for a parameter x + iy != 0.  All
closure residuals vanish identically because neighbour differences come
in pairs +/-x and +/-y and arctan(t) + arctan(1/t) = pi/2.

Erf pattern:   rho(m, n) = a*m*n, a > 0.  Same pairing argument.

Power map z^alpha (0 < alpha < 2): positive circle radii r(m, n) on the
sector V = {(m, n): m >= |n|}, symmetric in n, normalized by r(0,0) = 1
and r(0,1) = tan(alpha*pi/4).  The radii satisfy a quadrilateral
relation on every square of the sector,

    r00*r10*(-2n-a) + r10*r11*(2(m+1)-a)
      + r11*r01*(2(n+1)-a) + r01*r00*(-2m-a) = 0

(corner shorthand on square (m, n)), and a four-point vertex relation

    (m+n)(r^2 - rE*rS)(rN + rE) + (n-m)(r^2 - rN*rE)(rE + rS) = 0

away from the upper diagonal n = m.  The log-radii of the resulting
pattern satisfy the closure condition at every interior vertex.

The radii are computed on the half-wedge 0 <= n <= m and mirrored.
Three exact consequences of the relations drive the sweep:

* on a diagonal square the quadrilateral relation factorizes, giving
  r(m+1, m+1) = r(m, m) * (2m + a) / (2m + 2 - a);
* the closure condition at a diagonal vertex, whose two neighbour pairs
  coincide by symmetry, reduces to arctan(rE/c) + arctan(rS/c) = pi/2,
  i.e. r(m+1, m) = r(m, m)^2 / r(m, m-1);
* each remaining square determines its bottom-right radius linearly.

The sweep amplifies rounding error geometrically, so it runs in
extended precision (mpmath) and is rounded to float once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from .errors import NonpositiveRadius
from .lattice import LatticeComplex, Vertex, build_complex
from .rings import RhoField


@dataclass(frozen=True)
class DoyleParams:
    x: float
    y: float

    def __post_init__(self):
        if self.x == 0.0 and self.y == 0.0:
            raise ValueError("Doyle parameters (x, y) must not both be zero")


@dataclass(frozen=True)
class ErfParams:
    a: float

    def __post_init__(self):
        if not self.a > 0:
            raise ValueError("Erf parameter a must be positive")


@dataclass(frozen=True)
class ZAlphaParams:
    alpha: float
    extent: int = 8

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise ValueError("alpha must lie in the open interval (0, 2); "
                             "approximate the alpha = 2 endpoint by 2 - 1e-3")
        if self.extent < 1:
            raise ValueError("extent must be >= 1")


def doyle_field(c: LatticeComplex, p: DoyleParams, ell0: float = 1.0) -> RhoField:
    """rho(m, n) = m*x - n*y on all vertices of the complex."""
    return RhoField.from_function(c, lambda m, n: m * p.x - n * p.y, ell0=ell0)


def erf_field(c: LatticeComplex, p: ErfParams, ell0: float = 1.0) -> RhoField:
    """rho(m, n) = a*m*n on all vertices of the complex."""
    return RhoField.from_function(c, lambda m, n: p.a * m * n, ell0=ell0)


def centered_block_complex(extent: int) -> LatticeComplex:
    """Square block of squares covering [-extent, extent]^2 in vertices."""
    if extent < 1:
        raise ValueError("extent must be >= 1")
    rng = range(-extent, extent)
    return build_complex({(m, n) for m in rng for n in rng})


def sector_squares(extent: int) -> set[Vertex]:
    """Squares whose four corners lie in the sector {m >= |n|, m <= extent}."""
    out = set()
    for m in range(1, extent):
        for n in range(-m, m):
            if max(abs(n), abs(n + 1)) <= m:
                out.add((m, n))
    return out


def sector_complex(extent: int) -> LatticeComplex:
    """The lattice complex of the power-map sector."""
    if extent < 2:
        raise ValueError("extent must be >= 2 to contain at least one square")
    return build_complex(sector_squares(extent))


def _wedge_sweep(alpha: float, extent: int) -> dict[Vertex, mpmath.mpf]:
    """Radii on the half-wedge 0 <= n <= m <= extent in extended precision."""
    a = mpmath.mpf(alpha)
    r: dict[Vertex, mpmath.mpf] = {
        (0, 0): mpmath.mpf(1),
        (1, 0): mpmath.tan(a * mpmath.pi / 4),
        (1, 1): a / (2 - a),
    }
    for m in range(1, extent):
        r[(m + 1, m + 1)] = r[(m, m)] * (2 * m + a) / (2 * m + 2 - a)
        r[(m + 1, m)] = r[(m, m)] ** 2 / r[(m, m - 1)]
        for n in range(m - 1, -1, -1):
            num = (2 * m + a) * r[(m, n)] - (2 * n + 2 - a) * r[(m + 1, n + 1)]
            den = (2 * m + 2 - a) * r[(m + 1, n + 1)] - (2 * n + a) * r[(m, n)]
            if den == 0:
                raise NonpositiveRadius(f"radius propagation degenerate at {(m + 1, n)}")
            r[(m + 1, n)] = r[(m, n + 1)] * num / den
    return r


def zalpha_radii(p: ZAlphaParams) -> dict[Vertex, float]:
    """Circle radii of the power-map pattern on {(m, n): |n| <= m <= extent}.

    The returned map also carries the two seed values at (0, 1) and
    (0, -1).  Raises :class:`NonpositiveRadius` if propagation leaves the
    positive cone (it does not for alpha in (0, 2)).
    """
    # ~7 digits are lost over 12 columns in double precision; scale the
    # working precision with the extent so the float64 result is exact.
    with mpmath.workdps(30 + 3 * p.extent):
        wedge = _wedge_sweep(p.alpha, p.extent)
        out: dict[Vertex, float] = {}
        for (m, n), v in wedge.items():
            f = float(v)
            if not (f > 0 and math.isfinite(f)):
                raise NonpositiveRadius(f"non-positive radius {f} at {(m, n)}")
            out[(m, n)] = f
            out[(m, -n)] = f
        out[(0, 1)] = out[(0, -1)] = out[(1, 0)]
    return out


def zalpha_rho_field(p: ZAlphaParams) -> RhoField:
    """Log-radii of the power-map pattern on the sector complex."""
    radii = zalpha_radii(p)
    c = sector_complex(p.extent)
    return RhoField.from_mapping(c, {v: math.log(radii[v]) for v in c.vertices})
