"""Newton solver for boundary-value problems on the functional.

Dirichlet mode pins rho on the boundary and solves for the interior;
Neumann mode prescribes the boundary angle sums Phi and solves for all
vertices with one gauge vertex pinned to rho = 0 (the Hessian kernel is
the constant shift).  The functional is strictly convex on the reduced
variable set, so damped Newton with Armijo backtracking converges from
any start.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .energy import VertexWeights, boundary_phi_budget, energy, gradient, hessian
from .errors import NonZigzagBoundary, PhiSumMismatch, SingularHessian
from .lattice import LatticeComplex, Vertex
from .rings import RhoField

#: Problem size above which the Newton step falls back to Jacobi-CG.
_DIRECT_SOLVE_LIMIT = 100_000


@dataclass(frozen=True)
class BoundaryConditions:
    """Either Dirichlet (fixed boundary rho) or Neumann (boundary Phi)."""

    mode: str  # "dirichlet" | "neumann"
    dirichlet_rho: Mapping[Vertex, float] | None = None
    neumann_phi: Mapping[Vertex, float] | None = None
    gauge_vertex: Vertex | None = None

    @classmethod
    def dirichlet(cls, rho: Mapping[Vertex, float]) -> "BoundaryConditions":
        return cls(mode="dirichlet", dirichlet_rho=dict(rho))

    @classmethod
    def neumann(
        cls, phi: Mapping[Vertex, float], gauge_vertex: Vertex | None = None
    ) -> "BoundaryConditions":
        return cls(mode="neumann", neumann_phi=dict(phi), gauge_vertex=gauge_vertex)

    def to_json_dict(self) -> dict:
        if self.mode == "dirichlet":
            return {
                "mode": "dirichlet",
                "values": [[v[0], v[1], float(x)] for v, x in sorted(self.dirichlet_rho.items())],
            }
        out = {
            "mode": "neumann",
            "phi": [[v[0], v[1], float(x)] for v, x in sorted(self.neumann_phi.items())],
        }
        if self.gauge_vertex is not None:
            out["gauge"] = list(self.gauge_vertex)
        return out

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "BoundaryConditions":
        mode = data.get("mode")
        if mode == "dirichlet":
            return cls.dirichlet({(int(m), int(n)): float(x) for m, n, x in data["values"]})
        if mode == "neumann":
            gauge = data.get("gauge")
            return cls.neumann(
                {(int(m), int(n)): float(x) for m, n, x in data["phi"]},
                gauge_vertex=tuple(int(t) for t in gauge) if gauge is not None else None,
            )
        raise ValueError(f"unknown boundary condition mode: {mode!r}")


@dataclass(frozen=True)
class SolveOptions:
    tol_grad: float = 1e-10      # max-norm of the reduced gradient
    max_iter: int = 100
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5

    def __post_init__(self):
        if self.tol_grad <= 0:
            raise ValueError("tol_grad must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass
class SolveResult:
    field: RhoField
    converged: bool
    iterations: int
    final_grad_norm: float
    energy_trace: list[float] = field(default_factory=list)
    message: str = ""

    def report_json_dict(self) -> dict:
        return {
            "converged": self.converged,
            "iterations": self.iterations,
            "final_grad_norm": self.final_grad_norm,
            "energy_trace": [float(e) for e in self.energy_trace],
            "message": self.message,
        }


def dual_phi(c: LatticeComplex, phi: Mapping[Vertex, float]) -> dict[Vertex, float]:
    """Boundary weights of the dual pattern.

    Each kite angle complements to pi under rho -> -rho, so a boundary
    vertex of degree d gets d*pi - Phi.  If rho solves the Neumann
    problem for phi, then -rho solves it for the dual weights.
    """
    return {v: c.degree[v] * math.pi - val for v, val in phi.items()}


def solve(
    c: LatticeComplex,
    bc: BoundaryConditions,
    opts: SolveOptions | None = None,
    initial: RhoField | np.ndarray | None = None,
) -> SolveResult:
    """Minimize the functional under the given boundary conditions.

    The returned field satisfies the closure condition at interior
    vertices (Dirichlet) resp. the prescribed angle sums at boundary
    vertices (Neumann) up to the gradient tolerance.

    Raises
    ------
    NonZigzagBoundary
        If the complex has a boundary vertex of degree 4.
    PhiSumMismatch
        If Neumann weights are incompatible with a flat pattern.
    SingularHessian
        If the reduced Newton system cannot be solved (should not occur
        on valid input).
    """
    opts = opts or SolveOptions()
    if c.has_nonzigzag_boundary:
        raise NonZigzagBoundary(
            "the variational solver requires a zigzag boundary "
            "(all boundary vertices of degree 2 or 3)"
        )

    boundary = [v for v in c.vertices if not c.interior_mask[c.vertex_index[v]]]

    if bc.mode == "dirichlet":
        if bc.dirichlet_rho is None:
            raise ValueError("Dirichlet mode needs dirichlet_rho")
        missing = [v for v in boundary if v not in bc.dirichlet_rho]
        if missing:
            raise ValueError(f"Dirichlet data missing for boundary vertex {missing[0]}")
        free_mask = c.interior_mask.copy()
        # Boundary weights only contribute a constant in Dirichlet mode.
        phi = np.where(c.interior_mask, 2.0 * math.pi, 0.0)
        x0 = np.zeros(c.num_vertices)
        for v in boundary:
            x0[c.vertex_index[v]] = float(bc.dirichlet_rho[v])
    elif bc.mode == "neumann":
        if bc.neumann_phi is None:
            raise ValueError("Neumann mode needs neumann_phi")
        missing = [v for v in boundary if v not in bc.neumann_phi]
        if missing:
            raise ValueError(f"Neumann data missing for boundary vertex {missing[0]}")
        extra = [v for v in bc.neumann_phi if v not in set(boundary)]
        if extra:
            raise ValueError(f"Neumann data given for non-boundary vertex {extra[0]}")
        vals = np.array([bc.neumann_phi[v] for v in boundary])
        if np.any(vals <= 0.0) or np.any(vals >= 2.0 * math.pi):
            raise ValueError("Neumann weights must lie strictly inside (0, 2*pi)")
        budget = boundary_phi_budget(c)
        if abs(vals.sum() - budget) > 1e-9:
            raise PhiSumMismatch(
                f"boundary angle sums total {vals.sum():.12g}, "
                f"flat patterns require {budget:.12g} "
                f"(= pi*E - 2*pi*V_int for this complex)"
            )
        gauge = bc.gauge_vertex if bc.gauge_vertex is not None else c.vertices[0]
        if gauge not in c.vertex_index:
            raise ValueError(f"gauge vertex {gauge} is not in the complex")
        free_mask = np.ones(c.num_vertices, dtype=bool)
        free_mask[c.vertex_index[gauge]] = False
        phi = np.where(c.interior_mask, 2.0 * math.pi, 0.0)
        for v in boundary:
            phi[c.vertex_index[v]] = float(bc.neumann_phi[v])
        x0 = np.zeros(c.num_vertices)
    else:
        raise ValueError(f"unknown boundary condition mode: {bc.mode!r}")

    if initial is not None:
        init = initial.values if isinstance(initial, RhoField) else np.asarray(initial, float)
        x0[free_mask] = init[free_mask]
        if bc.mode == "neumann":
            # keep the gauge vertex at 0 by shifting the start
            x0 = x0 - x0[~free_mask][0] if np.any(~free_mask) else x0

    weights = VertexWeights(c, phi)
    x = x0.copy()
    free = np.flatnonzero(free_mask)
    trace: list[float] = []

    if free.size == 0:
        f = RhoField(c, x)
        return SolveResult(f, True, 0, 0.0, [energy(f, weights)], "no free variables")

    f = RhoField(c, x)
    e_val = energy(f, weights)
    trace.append(e_val)
    g = gradient(f, weights)[free]
    grad_norm = float(np.max(np.abs(g)))

    iterations = 0
    converged = grad_norm < opts.tol_grad
    message = "converged at start" if converged else ""

    while not converged and iterations < opts.max_iter:
        iterations += 1
        h = hessian(f)[free][:, free].tocsc()
        step = _newton_step(h, g)
        descent = float(g @ step)
        if not np.isfinite(descent) or descent >= 0:
            raise SingularHessian("Newton direction is not a descent direction")

        t = 1.0
        accepted = False
        for _ in range(60):
            x_new = x.copy()
            x_new[free] += t * step
            f_new = RhoField(c, x_new)
            e_new = energy(f_new, weights)
            if e_new <= e_val + opts.armijo_c * t * descent:
                accepted = True
                break
            t *= opts.backtrack_factor
        if not accepted:
            message = "line search stalled"
            break

        x, f, e_val = x_new, f_new, e_new
        trace.append(e_val)
        g = gradient(f, weights)[free]
        grad_norm = float(np.max(np.abs(g)))
        if grad_norm < opts.tol_grad:
            converged = True
            message = f"converged in {iterations} iterations"

    if not converged and not message:
        message = "maximum iterations exceeded"

    return SolveResult(
        field=RhoField(c, x),
        converged=converged,
        iterations=iterations,
        final_grad_norm=grad_norm,
        energy_trace=trace,
        message=message,
    )


def _newton_step(h: sp.csc_matrix, g: np.ndarray) -> np.ndarray:
    """Solve h @ s = -g, sparse-direct below the CG fallback threshold."""
    if h.shape[0] <= _DIRECT_SOLVE_LIMIT:
        try:
            lu = spla.splu(h)
            step = lu.solve(-g)
        except RuntimeError as exc:
            raise SingularHessian(str(exc)) from exc
        if not np.all(np.isfinite(step)):
            raise SingularHessian("direct solve produced non-finite step")
        return step
    jacobi = sp.diags(1.0 / h.diagonal())
    step, info = spla.cg(h, -g, M=jacobi, rtol=1e-12, atol=0.0)
    if info != 0:
        raise SingularHessian(f"CG failed to converge (info={info})")
    return step
