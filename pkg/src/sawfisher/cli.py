"""Command-line front end: ``saw <command> [mode] [flags]``.

Exit status: 0 success, 1 an identity or inequality check failed, 2 usage or
configuration error (including a ball too small for exact counts), 3 a
resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .analysis import (
    estimate_mu,
    exponent_diagnostics,
    hexagonal_mu,
    iterate_mu,
    solve_mu_tilde,
    h_eval,
)
from .checks import bipartite_run, fisher_identity_run, midedge_radius, sandwich_run
from .errors import InsufficientRadius, NotInGraph, ParseError, SawError
from .fisher import fisher_black, fisher_full, gasket_iterate, iterate_fisher
from .lattice import (
    BUILTIN_NAMES,
    ORIGINAL,
    LatticeSpec,
    VertexId,
    ball_to_dot,
    build_ball,
    builtin,
    domain_midedges,
    dump_spec,
    load_spec,
    seed_vertices,
    validate_structure,
)
from .render import KINDS, render_figure
from .saw.counts import (
    ANY,
    ORIGINAL_E,
    CountSeries,
    count_from_midedges,
    count_from_vertices,
    displacement_series,
    required_radius_midedges,
    two_point_series,
    weighted_black_white,
    weighted_pqr,
)

# connective constants known in closed form, used as defaults by ``exponents``
KNOWN_MU = {
    "hexagonal": float(hexagonal_mu()),
    "ladder": (1 + 5**0.5) / 2,
    "tree3": 2.0,
    "line": 1.0,
}
# every built-in is vertex-transitive
VERTEX_TRANSITIVE = set(BUILTIN_NAMES)


# ---------------------------------------------------------------------------
# argument parsing


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("global options")
    g.add_argument("--lattice", default="hexagonal", help=f"built-in lattice ({', '.join(BUILTIN_NAMES)})")
    g.add_argument("--spec-file", type=Path, help="JSON lattice spec; overrides --lattice")
    g.add_argument("--radius", type=int, help="ball radius (default: smallest exact radius)")
    g.add_argument("--n-max", type=int, default=10, help="longest walk length (default 10)")
    g.add_argument("--degree", type=int, default=12, help="degree N for identity checks (default 12)")
    g.add_argument("--workers", type=int, default=1, help="enumeration threads (default 1)")
    g.add_argument("--precision", type=int, default=60, help="decimal digits for fixed-point work (min 50)")
    g.add_argument("--out", type=Path, help="output file (default stdout)")
    g.add_argument("--format", choices=("json", "csv", "dot", "svg"), help="output format")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="saw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lattice", parents=[common], help="list, show or validate lattice specs")
    p.add_argument("mode", choices=("list", "show", "validate"))

    p = sub.add_parser("ball", parents=[common], help="build a finite ball")
    p.add_argument("mode", choices=("build",))
    p.add_argument("--fisher", choices=("none", "full", "black"), default="none",
                   help="transform the lattice first")

    p = sub.add_parser("count", parents=[common], help="exact SAW counts")
    p.add_argument("mode", nargs="?", default="vertices",
                   choices=("vertices", "midedges", "twopoint", "displacement", "weighted"))
    p.add_argument("--fisher", choices=("none", "full", "black"), default="none",
                   help="count on the transformed lattice")
    p.add_argument("--source", help="start vertex 'c1,c2/local' (default: first seed)")
    p.add_argument("--target", help="end vertex for twopoint")
    p.add_argument("--end-filter", choices=("any", "original"), default="any",
                   help="midedges: keep only walks ending on original edges")
    p.add_argument("--starts", choices=("all", "original"), default="all",
                   help="midedges: start from all domain mid-edges or only original ones")
    p.add_argument("--weights", choices=("black_white", "pqr"), default="black_white")

    p = sub.add_parser("transform", parents=[common], help="Fisher transformations")
    p.add_argument("mode", choices=("full", "black", "iterate", "gasket"))
    p.add_argument("-k", type=int, default=1, help="iterations for iterate/gasket")

    p = sub.add_parser("verify", parents=[common], help="coefficient-wise identity checks")
    p.add_argument("mode", choices=("fisher", "sandwich", "bipartite"))
    p.add_argument("--kind", choices=("full_fisher", "bipartite"), default="full_fisher",
                   help="sandwich variant")

    p = sub.add_parser("mu", parents=[common], help="connective-constant tools")
    p.add_argument("mode", choices=("estimate", "iterate", "solve-tilde"))
    p.add_argument("--mu0-inv", default="0.5", help="iterate: starting value 1/mu_0 in [1/2, 1]")
    p.add_argument("--k-max", type=int, default=60)
    p.add_argument("--tol", default="1e-12")
    p.add_argument("--mu", help="solve-tilde: input constant (default sqrt(2+sqrt 2))")
    p.add_argument("--series", type=Path, help="estimate: read a CountSeries JSON instead of counting")

    p = sub.add_parser("exponents", parents=[common], help="truncated exponent diagnostics")
    p.add_argument("--mu", type=float, help="connective constant (default: known value or ratio estimate)")
    p.add_argument("--eta", type=float, help="eta for the exponent-relation residual")

    p = sub.add_parser("render", parents=[common], help="SVG/DOT figures")
    p.add_argument("--kind", choices=KINDS, default="lattice_ball")
    p.add_argument("--fisher", choices=("full", "black"), default="black", help="fisher_image variant")
    p.add_argument("-k", type=int, default=3, help="gasket iterations")
    p.add_argument("--mu0-inv", default="0.5", help="convergence_plot start")
    return parser


# ---------------------------------------------------------------------------
# helpers


def write_atomic(path: Path | None, text: str) -> None:
    """Write via a temp file in the target directory, then rename over."""
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _spec(args) -> LatticeSpec:
    if args.spec_file is not None:
        try:
            text = args.spec_file.read_text(encoding="utf-8")
        except OSError as exc:
            raise ParseError(f"cannot read spec file: {exc}") from None
        return load_spec(text)
    return builtin(args.lattice)


def _transformed(spec: LatticeSpec, which: str) -> LatticeSpec:
    if which == "full":
        return fisher_full(spec).transformed
    if which == "black":
        return fisher_black(spec).transformed
    return spec


def _check_config(args) -> None:
    if args.workers < 1:
        raise SawError("RunConfig: --workers must be >= 1")
    if args.n_max < 0:
        raise SawError("RunConfig: --n-max must be >= 0")
    if args.radius is not None and args.radius < 0:
        raise SawError("RunConfig: --radius must be >= 0")


def parse_vertex(text: str) -> VertexId:
    try:
        cell, local = text.split("/")
        coords = tuple(int(c) for c in cell.split(",")) if cell else ()
        return VertexId(coords, int(local))
    except ValueError:
        raise ParseError(f"vertex {text!r} must look like 'c1,c2/local'") from None


def _seed_distance(spec: LatticeSpec, v: VertexId, limit: int = 200) -> int:
    """Graph distance from the seed set, found by growing balls."""
    for r in range(limit + 1):
        if v in build_ball(spec, r).index:
            return r
    raise NotInGraph(f"vertex {v.label()} is farther than {limit} from the seeds")


def _ball_for(spec: LatticeSpec, args, required: int):
    """Ball at ``--radius`` or at the smallest exact radius."""
    radius = required if args.radius is None else args.radius
    if radius < required:
        raise InsufficientRadius(required, radius)
    return build_ball(spec, radius)


def _emit(args, obj, default: str = "json") -> None:
    fmt = args.format or default
    if fmt == "json":
        text = obj.to_json() if hasattr(obj, "to_json") else json.dumps(obj, indent=2, sort_keys=True) + "\n"
    elif fmt == "csv":
        if not hasattr(obj, "to_csv"):
            raise SawError(f"--format csv is not available for {type(obj).__name__}")
        text = obj.to_csv()
    else:
        raise SawError(f"--format {fmt} is not available for this command")
    write_atomic(args.out, text)


# ---------------------------------------------------------------------------
# commands


def cmd_lattice(args) -> int:
    if args.mode == "list":
        write_atomic(args.out, json.dumps(list(BUILTIN_NAMES), indent=2) + "\n")
        return 0
    spec = _spec(args)
    if args.mode == "show":
        write_atomic(args.out, dump_spec(spec))
        return 0
    rep = validate_structure(spec)
    _emit(args, {"name": spec.name, **rep.__dict__})
    return 0


def cmd_ball(args) -> int:
    spec = _transformed(_spec(args), args.fisher)
    ball = build_ball(spec, 3 if args.radius is None else args.radius)
    fmt = args.format or "dot"
    if fmt == "dot":
        write_atomic(args.out, ball_to_dot(ball))
    elif fmt == "svg":
        write_atomic(args.out, render_figure("lattice_ball", ball))
    else:
        summary = {
            "graph_id": spec.name,
            "radius": ball.radius,
            "seeds": [s.label() for s in ball.seeds],
            "vertices": len(ball.vertices),
            "edges": len(ball.edges),
            "boundary": len(ball.boundary),
            "interior_degrees_ok": ball.interior_ok(),
        }
        _emit(args, summary)
    return 0


def cmd_count(args) -> int:
    spec = _transformed(_spec(args), args.fisher)
    n = args.n_max
    mode = args.mode
    if mode in ("vertices", "twopoint"):
        source = parse_vertex(args.source) if args.source else seed_vertices(spec)[0]
        required = _seed_distance(spec, source) + n + 1
        ball = _ball_for(spec, args, required)
        if mode == "vertices":
            result = count_from_vertices(ball, [source], n, workers=args.workers)
        else:
            if not args.target:
                raise SawError("twopoint needs --target")
            target = parse_vertex(args.target)
            if target not in ball.index:
                raise NotInGraph(f"target {target.label()} is outside the ball of radius {ball.radius}")
            result = two_point_series(ball, source, target, n, workers=args.workers)
        _emit(args, result)
        return 0
    ball = _ball_for(spec, args, midedge_radius(n))
    origin = ORIGINAL if args.starts == "original" else None
    starts = domain_midedges(ball, origin)
    # the fixed default above is generous; re-check against the real starts
    need = required_radius_midedges(ball, starts, n)
    if ball.radius < need:
        raise InsufficientRadius(need, ball.radius)
    if mode == "midedges":
        end = ORIGINAL_E if args.end_filter == "original" else ANY
        result = count_from_midedges(ball, starts, n, end, workers=args.workers)
    elif mode == "displacement":
        result = displacement_series(ball, starts, n, workers=args.workers)
    elif args.weights == "black_white":
        result = weighted_black_white(ball, starts, n, workers=args.workers)
    else:
        result = weighted_pqr(ball, domain_midedges(ball, ORIGINAL), n, workers=args.workers)
    _emit(args, result)
    return 0


def cmd_transform(args) -> int:
    if args.mode == "gasket":
        g = gasket_iterate(args.k)
        fmt = args.format or "svg"
        if fmt == "json":
            data = {
                "k": args.k,
                "vertices": g.n_vertices,
                "positions": [[round(x, 12), round(y, 12)] for x, y in g.positions],
                "edges": [list(e) for e in g.edges],
                "stubs": [v for v, _ in g.stubs],
            }
            _emit(args, data)
        else:
            write_atomic(args.out, render_figure("gasket", g, fmt))
        return 0
    spec = _spec(args)
    if args.mode == "iterate":
        chain = iterate_fisher(spec, args.k)
        data = [r.to_dict() for r in chain]
        write_atomic(args.out, json.dumps(data, indent=2, sort_keys=True) + "\n")
        return 0
    res = fisher_full(spec) if args.mode == "full" else fisher_black(spec)
    write_atomic(args.out, json.dumps(res.to_dict(), indent=2, sort_keys=True) + "\n")
    return 0


def cmd_verify(args) -> int:
    spec = _spec(args)
    N = args.degree
    if N < 0:
        raise SawError("RunConfig: --degree must be >= 0")
    if args.mode == "fisher":
        report = fisher_identity_run(spec, N, args.workers)
    elif args.mode == "sandwich":
        report = sandwich_run(args.kind, spec, N, args.workers)
    else:
        report = bipartite_run(spec, N, args.workers)
    _emit(args, report)
    return 0 if report.passed else 1


def cmd_mu(args) -> int:
    if args.mode == "iterate":
        trace = iterate_mu(args.mu0_inv, args.k_max, args.tol, args.precision)
        _emit(args, trace)
        return 0
    if args.mode == "solve-tilde":
        import mpmath

        mu = hexagonal_mu(args.precision) if args.mu is None else args.mu
        tilde = solve_mu_tilde(mu, args.precision)
        with mpmath.mp.workdps(max(50, args.precision)):
            mu = mpmath.mpf(mu)
            resid = abs(h_eval(1 / tilde) - 1 / mu**2)
            out = {
                "mu": mpmath.nstr(mu, 30),
                "mu_tilde": mpmath.nstr(tilde, 30),
                "residual": mpmath.nstr(resid, 5),
            }
        _emit(args, out)
        return 0
    if args.series is not None:
        try:
            series = CountSeries.from_dict(json.loads(args.series.read_text(encoding="utf-8")))
        except (OSError, ValueError, KeyError) as exc:
            raise ParseError(f"cannot read series file: {exc}") from None
        transitive = False
        series.single_vertex = len(series.start_set) == 1 and series.start_mode == "vertex"
        cubic = True
    else:
        spec = _spec(args)
        source = seed_vertices(spec)[0]
        ball = _ball_for(spec, args, args.n_max + 1)
        series = count_from_vertices(ball, [source], args.n_max, workers=args.workers)
        transitive = args.spec_file is None and spec.name in VERTEX_TRANSITIVE
        cubic = validate_structure(spec).is_cubic
    _emit(args, estimate_mu(series, vertex_transitive=transitive, cubic=cubic))
    return 0


def cmd_exponents(args) -> int:
    spec = _spec(args)
    n = args.n_max
    ball = _ball_for(spec, args, midedge_radius(n))
    starts = domain_midedges(ball)
    series = count_from_midedges(ball, starts, n, workers=args.workers)
    disp = displacement_series(ball, starts, n, workers=args.workers)
    mu = args.mu
    if mu is None:
        mu = KNOWN_MU.get(spec.name) if args.spec_file is None else None
    if mu is None:
        mu = float(estimate_mu(series, cubic=False).last_ratio)
    report = exponent_diagnostics(series, disp, mu, eta=args.eta)
    _emit(args, report)
    return 0


def cmd_render(args) -> int:
    kind = args.kind
    fmt = args.format or "svg"
    if kind == "gasket":
        data = gasket_iterate(args.k)
    elif kind == "convergence_plot":
        data = iterate_mu(args.mu0_inv, 40, "1e-12", args.precision)
    elif kind == "series_plot":
        spec = _spec(args)
        ball = _ball_for(spec, args, args.n_max + 1)
        data = count_from_vertices(ball, [seed_vertices(spec)[0]], args.n_max, workers=args.workers)
    else:
        spec = _spec(args)
        if kind == "fisher_image":
            spec = _transformed(spec, args.fisher)
        data = build_ball(spec, 4 if args.radius is None else args.radius)
    write_atomic(args.out, render_figure(kind, data, fmt))
    return 0


COMMANDS = {
    "lattice": cmd_lattice,
    "ball": cmd_ball,
    "count": cmd_count,
    "transform": cmd_transform,
    "verify": cmd_verify,
    "mu": cmd_mu,
    "exponents": cmd_exponents,
    "render": cmd_render,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _check_config(args)
        return COMMANDS[args.command](args)
    except SawError as exc:
        print(f"saw: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"saw: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
