"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 malformed input or violated
precondition, 3 numeric/conditioning failure (including failed experiment
checks).  Every artifact is written deterministically: rerunning the same
invocation yields byte-identical output.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import serialize
from .cubature import (
    apply_rule,
    general_error_bound,
    poincare_constant,
    q_set_deviation_bound,
    q_set_interval,
    spline_cubature_weights,
)
from .errors import (
    BandwidthTooLargeError,
    ClosureSaturatedError,
    ConditioningError,
    CoverageError,
    DimensionError,
    EmptyQSetError,
    GraphCubError,
    GraphFormatError,
    InvalidParameterError,
    NotUniquenessSetError,
    NumericError,
)
from .experiments import run_experiment
from .frames import (
    convergence_factor,
    dual_frame_weights,
    empirical_frame_bounds,
    frame_iterate,
    frame_system,
    pp_bounds,
)
from .graphs import (
    Graph,
    build_cycle,
    build_grid,
    build_path,
    edge_list_text,
    integrate,
    read_edge_list,
    vertex_set,
)
from .spectral import bandlimited_space, eigendecompose
from .splines import SplineProblem, interpolate, lagrangian_basis, variational_residual

_INPUT_ERRORS = (
    GraphFormatError,
    InvalidParameterError,
    DimensionError,
    CoverageError,
    BandwidthTooLargeError,
    NotUniquenessSetError,
    ClosureSaturatedError,
    EmptyQSetError,
)
_NUMERIC_ERRORS = (ConditioningError, NumericError)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_vertex_spec(spec: str, graph: Graph) -> np.ndarray:
    """Resolve a vertex-set mini-language expression.

    Forms: "every-other", "every-kth:K", "remove-every-kth:K" (drops
    indices congruent to K-1 mod K), "range:A..B" (inclusive),
    "list:FILE" (one original label per line), or a comma-separated list
    of canonical indices.
    """
    n = graph.vertex_count
    if spec == "every-other":
        return vertex_set(graph, np.arange(0, n, 2))
    if spec.startswith("every-kth:") or spec.startswith("remove-every-kth:"):
        head, _, tail = spec.partition(":")
        try:
            step = int(tail)
        except ValueError:
            raise InvalidParameterError(f"bad step in vertex spec {spec!r}")
        if step < 2:
            raise InvalidParameterError("vertex-spec step must be at least 2")
        hit = np.arange(n) % step == step - 1
        members = np.nonzero(~hit if head == "remove-every-kth" else hit)[0]
        return vertex_set(graph, members)
    if spec.startswith("range:"):
        body = spec[len("range:"):]
        try:
            lo, hi = body.split("..")
            lo, hi = int(lo), int(hi)
        except ValueError:
            raise InvalidParameterError(f"bad range in vertex spec {spec!r}")
        if hi < lo:
            raise InvalidParameterError("range upper end below lower end")
        return vertex_set(graph, np.arange(lo, hi + 1))
    if spec.startswith("list:"):
        path = spec[len("list:"):]
        with open(path, "r", encoding="utf-8") as fh:
            labels = serialize.parse_vertex_lines(fh.read())
        return vertex_set(graph, [graph.index_of(lab) for lab in labels])
    try:
        members = [int(tok) for tok in spec.split(",") if tok.strip() != ""]
    except ValueError:
        raise InvalidParameterError(f"unrecognized vertex spec {spec!r}")
    if not members:
        raise InvalidParameterError(f"vertex spec {spec!r} selects nothing")
    return vertex_set(graph, members)


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_graph(path) -> Graph:
    return read_edge_list(path)


def _read_text(path) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _samples_from_args(graph, subset, args) -> np.ndarray:
    """Sample values on a subset from either a full signal or a samples file."""
    if getattr(args, "signal", None):
        full = serialize.parse_signal_csv(graph, _read_text(args.signal))
        return full[subset]
    if getattr(args, "values", None):
        pairs = {}
        text = _read_text(args.values)
        rows = text.splitlines()
        if not rows or rows[0].strip().lower() != "vertex,value":
            raise GraphFormatError('values file must start with "vertex,value"')
        for lineno, raw in enumerate(rows[1:], start=2):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise GraphFormatError("expected vertex,value", line=lineno)
            pairs[graph.index_of(int(parts[0]))] = float(parts[1])
        missing = [int(v) for v in subset if int(v) not in pairs]
        if missing:
            raise GraphFormatError(
                f"values file misses {len(missing)} sample vertices (first: {missing[0]})"
            )
        return np.array([pairs[int(v)] for v in subset])
    raise InvalidParameterError("provide sample data via --signal or --values")


# -- command handlers ---------------------------------------------------------


def _cmd_graph(args) -> int:
    if args.subcommand == "gen-cycle":
        graph = build_cycle(args.n)
    elif args.subcommand == "gen-path":
        graph = build_path(args.n)
    elif args.subcommand == "gen-grid":
        graph = build_grid(args.rows, args.cols)
    else:
        graph = _load_graph(args.file)
        summary = {
            "vertices": graph.vertex_count,
            "edges": graph.edge_count,
            "max_degree": graph.max_degree,
        }
        if args.out:
            _emit(edge_list_text(graph), args.out)
        sys.stdout.write(serialize.dumps(summary))
        return 0
    _emit(edge_list_text(graph), args.out)
    return 0


def _cmd_spectrum(args) -> int:
    graph = _load_graph(args.graph)
    decomposition = eigendecompose(graph)
    if args.subcommand == "eigs":
        if args.format == "json":
            text = serialize.dumps(
                {"eigenvalues": [float(v) for v in decomposition.eigenvalues]}
            )
        else:
            text = serialize.spectrum_csv(decomposition)
    else:
        space = bandlimited_space(decomposition, args.omega)
        text = serialize.dumps(serialize.band_report(space))
    _emit(text, args.out)
    return 0


def _cmd_spline(args) -> int:
    graph = _load_graph(args.graph)
    subset = parse_vertex_spec(args.u, graph)
    problem = SplineProblem(graph, subset, args.k, args.eps)
    basis = lagrangian_basis(problem)
    if args.subcommand == "basis":
        text = serialize.dumps(serialize.basis_report(basis))
    else:
        samples = _samples_from_args(graph, problem.sample_set, args)
        spline = interpolate(basis, samples)
        if args.report:
            text = serialize.dumps(
                {
                    "integral": float(spline.values.sum()),
                    "residual_off_samples": variational_residual(spline),
                }
            )
        else:
            text = serialize.spline_csv(graph, spline.values)
    _emit(text, args.out)
    return 0


def _resolve_poincare(graph, subset, override):
    exact = poincare_constant(graph, subset)
    if override is None:
        return exact.constant, exact.constant, "exact"
    if override < exact.constant:
        raise InvalidParameterError(
            f"certificate {override} is below the exact Poincare constant "
            f"{exact.constant}; bounds would be invalid"
        )
    return float(override), exact.constant, "certificate"


def _cmd_cubature(args) -> int:
    graph = _load_graph(args.graph)
    subset = parse_vertex_spec(args.u, graph)
    complement = np.setdiff1d(np.arange(graph.vertex_count), subset)
    if args.subcommand == "weights":
        problem = SplineProblem(graph, subset, args.k, args.eps)
        rule = spline_cubature_weights(problem)
        _emit(serialize.dumps(serialize.rule_report(graph, rule)), args.out)
        return 0
    if args.subcommand == "bound":
        lam, exact, source = _resolve_poincare(graph, complement, args.lambda_cert)
        problem = SplineProblem(graph, subset, args.k, args.eps)
        rule = spline_cubature_weights(problem)
        full = serialize.parse_signal_csv(graph, _read_text(args.signal))
        measured = abs(integrate(full) - apply_rule(rule, full[subset]))
        bound = general_error_bound(graph, full, complement, lam, args.k, args.eps)
        _emit(
            serialize.dumps(
                {
                    "k": args.k,
                    "measured_error": measured,
                    "bound": bound,
                    "lambda_used": lam,
                    "lambda_exact": exact,
                    "lambda_source": source,
                }
            ),
            args.out,
        )
        return 0
    if args.subcommand == "bound-sweep":
        lam, _, _ = _resolve_poincare(graph, complement, args.lambda_cert)
        full = serialize.parse_signal_csv(graph, _read_text(args.signal))
        rows = []
        k = 1
        while k <= args.k_max:
            problem = SplineProblem(graph, subset, k, args.eps)
            rule = spline_cubature_weights(problem)
            measured = abs(integrate(full) - apply_rule(rule, full[subset]))
            bound = general_error_bound(graph, full, complement, lam, k, args.eps)
            rows.append((k, measured, bound))
            k *= 2
        if args.plot_data:
            lines = ["x,y"] + [
                f"{k},{serialize.format_float(bound)}" for k, _, bound in rows
            ]
            _emit("\n".join(lines) + "\n", args.out)
        else:
            _emit(serialize.bound_sweep_csv(rows), args.out)
        return 0
    # qset
    problem = SplineProblem(graph, subset, args.k, args.eps)
    basis = lagrangian_basis(problem)
    samples = _samples_from_args(graph, problem.sample_set, args)
    interval = q_set_interval(problem, samples, args.cap, basis=basis)
    payload = serialize.qset_report(interval)
    payload["weighted_sum"] = apply_rule(spline_cubature_weights(problem, basis), samples)
    if (args.k & (args.k - 1)) == 0:
        lam, _, source = _resolve_poincare(graph, complement, args.lambda_cert)
        payload["deviation_bound"] = q_set_deviation_bound(
            problem, samples, args.cap, lam, basis=basis
        )
        payload["lambda_used"] = lam
        payload["lambda_source"] = source
    _emit(serialize.dumps(payload), args.out)
    return 0


def _cmd_lambda(args) -> int:
    graph = _load_graph(args.graph)
    subset = parse_vertex_spec(args.s, graph)
    report = poincare_constant(graph, subset)
    _emit(serialize.dumps(serialize.lambda_report(graph, report)), args.out)
    return 0


def _cmd_frames(args) -> int:
    graph = _load_graph(args.graph)
    subset = parse_vertex_spec(args.u, graph)
    if args.subcommand == "factor":
        delta = convergence_factor(graph, subset)
        d0, k0 = graph.relative_degree_stats(subset, 0)
        _emit(
            serialize.dumps(
                {"delta": delta, "outward_degree": d0, "inward_degree": k0}
            ),
            args.out,
        )
        return 0
    decomposition = eigendecompose(graph)
    space = bandlimited_space(decomposition, args.omega)
    system = frame_system(space, subset)
    if args.subcommand == "bounds":
        empirical = empirical_frame_bounds(system)
        payload = {
            "omega": space.omega,
            "dim": space.dim,
            "empirical": {"A": empirical.lower, "B": empirical.upper},
        }
        if args.theory_n is not None:
            theory = pp_bounds(graph, subset, args.omega, args.theory_n)
            payload["theoretical"] = {
                "A": theory.lower,
                "B": theory.upper,
                "gamma": theory.gamma,
                "source": theory.source,
            }
        _emit(serialize.dumps(payload), args.out)
        return 0
    if args.subcommand == "weights":
        rule = dual_frame_weights(system)
        _emit(serialize.dumps(serialize.rule_report(graph, rule)), args.out)
        return 0
    # iterate
    true_signal = None
    if args.signal:
        raw = serialize.parse_signal_csv(graph, _read_text(args.signal))
        true_signal = space.project(raw)
        samples = true_signal[system.sample_set]
    else:
        samples = _samples_from_args(graph, system.sample_set, args)
    bounds = None
    if args.theory_bounds:
        bounds = pp_bounds(graph, subset, args.omega, 1)
    iteration = frame_iterate(
        system, samples, args.steps, bounds=bounds, true_signal=true_signal
    )
    if args.plot_data:
        series = (
            iteration.residual_norms
            if iteration.residual_norms is not None
            else iteration.residual_bounds()
        )
        lines = ["x,y"] + [
            f"{i},{serialize.format_float(series[i])}" for i in range(iteration.steps + 1)
        ]
        _emit("\n".join(lines) + "\n", args.out)
    else:
        _emit(serialize.iteration_trace_csv(iteration), args.out)
    return 0


def _cmd_experiment(args) -> int:
    report = run_experiment(args.name, args.scale)
    _emit(serialize.dumps(report.as_dict()), args.out)
    if not report.passed:
        failed = [c.name for c in report.checks if not c.passed]
        print(f"error: {len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return 3
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="graphcub", description=__doc__)
    commands = parser.add_subparsers(dest="command", required=True)

    graph = commands.add_parser("graph", help="generate or validate graphs")
    graph_sub = graph.add_subparsers(dest="subcommand", required=True)
    cycle = graph_sub.add_parser("gen-cycle")
    cycle.add_argument("n", type=int)
    path = graph_sub.add_parser("gen-path")
    path.add_argument("n", type=int)
    grid = graph_sub.add_parser("gen-grid")
    grid.add_argument("rows", type=int)
    grid.add_argument("cols", type=int)
    load = graph_sub.add_parser("load")
    load.add_argument("file")
    for sub in (cycle, path, grid, load):
        sub.add_argument("--out", default=None)

    spectrum = commands.add_parser("spectrum", help="eigenvalues and band reports")
    spectrum_sub = spectrum.add_subparsers(dest="subcommand", required=True)
    eigs = spectrum_sub.add_parser("eigs")
    eigs.add_argument("--format", choices=("csv", "json"), default="csv")
    band = spectrum_sub.add_parser("band")
    band.add_argument("--omega", type=float, required=True)
    for sub in (eigs, band):
        sub.add_argument("--graph", required=True)
        sub.add_argument("--out", default=None)

    spline = commands.add_parser("spline", help="variational spline interpolation")
    spline_sub = spline.add_subparsers(dest="subcommand", required=True)
    sp_interp = spline_sub.add_parser("interpolate")
    sp_interp.add_argument("--values", default=None)
    sp_interp.add_argument("--signal", default=None)
    sp_interp.add_argument("--report", action="store_true",
                           help="emit integral and residual instead of the spline")
    sp_basis = spline_sub.add_parser("basis")
    for sub in (sp_interp, sp_basis):
        sub.add_argument("--graph", required=True)
        sub.add_argument("--u", required=True)
        sub.add_argument("--k", type=int, required=True)
        sub.add_argument("--eps", type=float, required=True)
        sub.add_argument("--out", default=None)

    cubature = commands.add_parser("cubature", help="spline cubature and bounds")
    cubature_sub = cubature.add_subparsers(dest="subcommand", required=True)
    cw = cubature_sub.add_parser("weights")
    cb = cubature_sub.add_parser("bound")
    cb.add_argument("--signal", required=True)
    cb.add_argument("--lambda-cert", type=float, default=None)
    cs = cubature_sub.add_parser("bound-sweep")
    cs.add_argument("--signal", required=True)
    cs.add_argument("--k-max", type=int, default=8)
    cs.add_argument("--lambda-cert", type=float, default=None)
    cs.add_argument("--plot-data", action="store_true")
    cq = cubature_sub.add_parser("qset")
    cq.add_argument("--values", default=None)
    cq.add_argument("--signal", default=None)
    cq.add_argument("--cap", type=float, required=True)
    cq.add_argument("--lambda-cert", type=float, default=None)
    for sub in (cw, cb, cs, cq):
        sub.add_argument("--graph", required=True)
        sub.add_argument("--u", required=True)
        sub.add_argument("--eps", type=float, required=True)
        sub.add_argument("--out", default=None)
    for sub in (cw, cb, cq):
        sub.add_argument("--k", type=int, required=True)

    lam = commands.add_parser("lambda", help="exact Poincare constants")
    lam.add_argument("--graph", required=True)
    lam.add_argument("--s", required=True)
    lam.add_argument("--out", default=None)
    lam.set_defaults(subcommand=None)

    frames = commands.add_parser("frames", help="bandlimited frames and iteration")
    frames_sub = frames.add_subparsers(dest="subcommand", required=True)
    fb = frames_sub.add_parser("bounds")
    fb.add_argument("--omega", type=float, required=True)
    fb.add_argument("--theory-n", type=int, default=None)
    fw = frames_sub.add_parser("weights")
    fw.add_argument("--omega", type=float, required=True)
    ff = frames_sub.add_parser("factor")
    fi = frames_sub.add_parser("iterate")
    fi.add_argument("--omega", type=float, required=True)
    fi.add_argument("--steps", type=int, required=True)
    fi.add_argument("--signal", default=None)
    fi.add_argument("--samples", dest="values", default=None)
    fi.add_argument("--theory-bounds", action="store_true")
    fi.add_argument("--plot-data", action="store_true")
    for sub in (fb, fw, ff, fi):
        sub.add_argument("--graph", required=True)
        sub.add_argument("--u", required=True)
        sub.add_argument("--out", default=None)

    experiment = commands.add_parser("experiment", help="preset experiments")
    experiment.add_argument("name", choices=("ex1", "ex2", "ex3"))
    experiment.add_argument("--scale", type=int, default=None)
    experiment.add_argument("--out", default=None)
    experiment.set_defaults(subcommand=None)

    return parser


_HANDLERS = {
    "graph": _cmd_graph,
    "spectrum": _cmd_spectrum,
    "spline": _cmd_spline,
    "cubature": _cmd_cubature,
    "lambda": _cmd_lambda,
    "frames": _cmd_frames,
    "experiment": _cmd_experiment,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        return handler(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GraphCubError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
