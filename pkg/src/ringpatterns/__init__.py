"""Orthogonal ring patterns on square-grid complexes.

A ring pattern assigns a pair of concentric circles to every vertex of a
subcomplex of the integer lattice so that neighbouring rings intersect
orthogonally and the four relevant circles of every square meet in one
point.  All rings share one area pi * ell0**2, so a single parameter rho
per vertex (outer radius ell0*cosh rho, signed inner radius ell0*sinh
rho) describes the pattern; a field of rho values extends to a planar
pattern exactly when a closure condition holds at interior vertices.

The package provides the combinatorics (:mod:`ringpatterns.lattice`),
the per-edge geometry (:mod:`ringpatterns.rings`), the convex functional
with gradient and Hessian (:mod:`ringpatterns.energy`), a Newton solver
for Dirichlet and Neumann boundary-value problems
(:mod:`ringpatterns.solver`), closed-form generators
(:mod:`ringpatterns.generators`), the planar layout with an axiom
verifier (:mod:`ringpatterns.layout`) and a CLI with SVG rendering
(:mod:`ringpatterns.cli`).
"""

from .energy import (
    CATALAN,
    EnergyReport,
    VertexWeights,
    boundary_phi_budget,
    edge_term,
    energy,
    energy_report,
    gradient,
    hessian,
    ti2,
)
from .errors import (
    ClosureViolation,
    DisconnectedComplex,
    InconsistentPropagation,
    MissingWeight,
    NegativeArgument,
    NonZigzagBoundary,
    NonpositiveRadius,
    NotInterior,
    NotSimplyConnected,
    PhiSumMismatch,
    RingPatternError,
    SingularHessian,
)
from .generators import (
    DoyleParams,
    ErfParams,
    ZAlphaParams,
    centered_block_complex,
    doyle_field,
    erf_field,
    sector_complex,
    zalpha_radii,
    zalpha_rho_field,
)
from .lattice import (
    LatticeComplex,
    block_complex,
    build_complex,
    diagonal_classes,
    flower,
)
from .layout import PlanarPattern, VerificationReport, layout, verify
from .rings import (
    DeformationParam,
    RhoField,
    Ring,
    circle_limit,
    closure_residual,
    closure_residual_vector,
    closure_residuals,
    deform,
    kite_angle,
    max_closure_residual,
    rescaled_radii,
)
from .solver import BoundaryConditions, SolveOptions, SolveResult, dual_phi, solve

__version__ = "0.1.0"

__all__ = [
    "CATALAN",
    "BoundaryConditions",
    "ClosureViolation",
    "DeformationParam",
    "DisconnectedComplex",
    "DoyleParams",
    "EnergyReport",
    "ErfParams",
    "InconsistentPropagation",
    "LatticeComplex",
    "MissingWeight",
    "NegativeArgument",
    "NonZigzagBoundary",
    "NonpositiveRadius",
    "NotInterior",
    "NotSimplyConnected",
    "PhiSumMismatch",
    "PlanarPattern",
    "RhoField",
    "Ring",
    "RingPatternError",
    "SingularHessian",
    "SolveOptions",
    "SolveResult",
    "VerificationReport",
    "VertexWeights",
    "ZAlphaParams",
    "block_complex",
    "boundary_phi_budget",
    "build_complex",
    "centered_block_complex",
    "circle_limit",
    "closure_residual",
    "closure_residual_vector",
    "closure_residuals",
    "deform",
    "diagonal_classes",
    "doyle_field",
    "dual_phi",
    "edge_term",
    "energy",
    "energy_report",
    "erf_field",
    "flower",
    "gradient",
    "hessian",
    "kite_angle",
    "layout",
    "max_closure_residual",
    "rescaled_radii",
    "sector_complex",
    "solve",
    "ti2",
    "verify",
    "zalpha_radii",
    "zalpha_rho_field",
]
