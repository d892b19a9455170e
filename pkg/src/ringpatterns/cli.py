"""Command-line front end.

Subcommands
-----------
generate   emit a named field (doyle, erf, zalpha) as JSON
solve      solve a boundary-value problem on a complex
deform     shift a field's rho values by delta
dual       negate a field (the dual pattern's log-radii)
render     lay out a field and write SVG (optionally a delta sweep)
verify     check a laid-out pattern against the pattern axioms

Exit codes: 0 success, 1 verification/convergence/geometry failure,
2 usage or input parse error.

File formats (JSON):
  complex   {"squares": [[m, n], ...]}
  field     {"ell0": 1.0, "rho": [[m, n, value], ...]}
  bc        {"mode": "dirichlet", "values": [[m, n, rho], ...]}
            {"mode": "neumann", "phi": [[m, n, phi], ...], "gauge": [m, n]}
  pattern   {"ell0": ..., "rho": [...], "centers": [[m, n, x, y], ...],
             "face_points": [[m, n, x, y], ...]}

A field file does not carry its complex; the squares are recovered as
all unit squares whose four corners carry a value.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import generators, layout as layout_mod
from .errors import RingPatternError
from .lattice import build_complex, complex_from_json_dict, squares_spanned_by
from .render import RenderOptions, render_svg
from .rings import RhoField, deform
from .solver import BoundaryConditions, SolveOptions, solve

_VERIFY_TOL = 1e-8


def _dump_json(data: dict, out: str | None) -> None:
    text = json.dumps(data, indent=2) + "\n"
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _load_field(path: str) -> RhoField:
    data = _load_json(path)
    rho_map = {(int(m), int(n)): float(x) for m, n, x in data["rho"]}
    c = build_complex(squares_spanned_by(rho_map))
    return RhoField.from_mapping(c, rho_map, ell0=float(data.get("ell0", 1.0)))


def _cmd_generate(args) -> int:
    if args.kind == "doyle":
        c = generators.centered_block_complex(args.extent)
        f = generators.doyle_field(c, generators.DoyleParams(args.x, args.y), ell0=args.ell0)
    elif args.kind == "erf":
        if args.a is None:
            raise ValueError("erf requires --a")
        c = generators.centered_block_complex(args.extent)
        f = generators.erf_field(c, generators.ErfParams(args.a), ell0=args.ell0)
    else:
        if args.alpha is None:
            raise ValueError("zalpha requires --alpha")
        p = generators.ZAlphaParams(alpha=args.alpha, extent=args.extent)
        f = generators.zalpha_rho_field(p)
        if args.ell0 != 1.0:
            f = f.with_values(f.values, ell0=args.ell0)
    _dump_json(f.to_json_dict(), args.out)
    return 0


def _cmd_solve(args) -> int:
    c = complex_from_json_dict(_load_json(args.complex))
    bc = BoundaryConditions.from_json_dict(_load_json(args.bc))
    if args.gauge is not None:
        m, n = (int(t) for t in args.gauge.split(","))
        bc = BoundaryConditions(mode=bc.mode, dirichlet_rho=bc.dirichlet_rho,
                                neumann_phi=bc.neumann_phi, gauge_vertex=(m, n))
    opts = SolveOptions(tol_grad=args.tol, max_iter=args.max_iter)
    result = solve(c, bc, opts)
    _dump_json(result.field.to_json_dict(), args.out)
    report = result.report_json_dict()
    sys.stderr.write(json.dumps(report, indent=2) + "\n")
    return 0 if result.converged else 1


def _cmd_deform(args) -> int:
    f = _load_field(args.field)
    _dump_json(deform(f, args.delta).to_json_dict(), args.out)
    return 0


def _cmd_dual(args) -> int:
    f = _load_field(args.field)
    _dump_json(f.with_values(-f.values).to_json_dict(), args.out)
    return 0


def _render_one(f: RhoField, delta: float | None, ell0: float | None, args) -> str:
    if delta is not None:
        # rescale by 2 e^{-|delta|} so the sweep stays in frame
        f = deform(f, delta)
        ell0 = 2.0 * math.exp(-abs(delta))
    pattern = layout_mod.layout(f, ell0=ell0)
    opts = RenderOptions(
        canvas_size=args.size,
        show_inner=not args.no_inner,
        show_outer=not args.no_outer,
        show_touching_points=args.show_touching,
        stroke_width=args.stroke_width,
    )
    return render_svg(pattern, opts)


def _cmd_render(args) -> int:
    f = _load_field(args.field)
    deltas = args.delta if args.delta else [None]
    base = Path(args.out) if args.out else Path("pattern.svg")
    for d in deltas:
        svg = _render_one(f, d, args.ell0, args)
        if d is None or len(deltas) == 1:
            path = base
        else:
            path = base.with_name(f"{base.stem}_delta{d:+g}{base.suffix or '.svg'}")
        path.write_text(svg)
        sys.stderr.write(f"wrote {path}\n")
    return 0


def _cmd_verify(args) -> int:
    pattern = layout_mod.PlanarPattern.from_json_dict(_load_json(args.pattern))
    report = layout_mod.verify(pattern)
    _dump_json(report.to_json_dict(), args.out)
    return 0 if report.max_error < _VERIFY_TOL else 1


def _cmd_layout(args) -> int:
    f = _load_field(args.field)
    pattern = layout_mod.layout(f, ell0=args.ell0)
    _dump_json(pattern.to_json_dict(), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ringpatterns",
        description="Generate, solve, deform, lay out and render orthogonal ring patterns.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="emit a named field as JSON")
    g.add_argument("kind", choices=["doyle", "erf", "zalpha"])
    g.add_argument("--x", type=float, default=0.3, help="doyle: horizontal log-ratio")
    g.add_argument("--y", type=float, default=0.2, help="doyle: vertical log-ratio")
    g.add_argument("--a", type=float, default=None, help="erf: growth parameter (> 0)")
    g.add_argument("--alpha", type=float, default=None, help="zalpha: exponent in (0, 2)")
    g.add_argument("--extent", type=int, default=8)
    g.add_argument("--ell0", type=float, default=1.0)
    g.add_argument("--out", default=None)
    g.set_defaults(func=_cmd_generate)

    s = sub.add_parser("solve", help="solve a boundary-value problem")
    s.add_argument("--complex", required=True, help="complex JSON file")
    s.add_argument("--bc", required=True, help="boundary conditions JSON file")
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--max-iter", type=int, default=100)
    s.add_argument("--gauge", default=None, metavar="M,N",
                   help="gauge vertex for Neumann mode")
    s.add_argument("--out", default=None)
    s.set_defaults(func=_cmd_solve)

    d = sub.add_parser("deform", help="shift a field by delta")
    d.add_argument("--field", required=True)
    d.add_argument("--delta", type=float, required=True)
    d.add_argument("--out", default=None)
    d.set_defaults(func=_cmd_deform)

    du = sub.add_parser("dual", help="negate a field")
    du.add_argument("--field", required=True)
    du.add_argument("--out", default=None)
    du.set_defaults(func=_cmd_dual)

    lo = sub.add_parser("layout", help="lay out a field, write the pattern JSON")
    lo.add_argument("--field", required=True)
    lo.add_argument("--ell0", type=float, default=None)
    lo.add_argument("--out", default=None)
    lo.set_defaults(func=_cmd_layout)

    r = sub.add_parser("render", help="render a field as SVG")
    r.add_argument("--field", required=True)
    r.add_argument("--delta", type=float, action="append", default=None,
                   help="deformation shift; repeatable for a sweep")
    r.add_argument("--ell0", type=float, default=None)
    r.add_argument("--out", default=None)
    r.add_argument("--size", type=int, default=800)
    r.add_argument("--stroke-width", type=float, default=1.2)
    r.add_argument("--no-inner", action="store_true")
    r.add_argument("--no-outer", action="store_true")
    r.add_argument("--show-touching", action="store_true")
    r.set_defaults(func=_cmd_render)

    v = sub.add_parser("verify", help="verify a laid-out pattern")
    v.add_argument("--pattern", required=True)
    v.add_argument("--out", default=None)
    v.set_defaults(func=_cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except RingPatternError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
