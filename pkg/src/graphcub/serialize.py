"""Deterministic report serialization and the file formats of the CLI.

All floats are written with 17 significant digits so identical inputs
produce byte-identical artifacts; dict insertion order is preserved.
"""

from __future__ import annotations

import json

import numpy as np

from .cubature import CubatureRule, LambdaReport, QSetInterval
from .errors import GraphFormatError, InvalidParameterError
from .frames import FrameIteration
from .graphs import Graph
from .spectral import BandlimitedSpace, EigenDecomposition
from .splines import LagrangianBasis

__all__ = [
    "format_float",
    "dumps",
    "spectrum_csv",
    "band_report",
    "signal_csv",
    "parse_signal_csv",
    "parse_vertex_lines",
    "spline_csv",
    "basis_report",
    "rule_report",
    "lambda_report",
    "iteration_trace_csv",
    "bound_sweep_csv",
]


def format_float(x: float) -> str:
    """Fixed 17-significant-digit decimal form (round-trip safe)."""
    return format(float(x), ".17g")


def _encode(obj) -> str:
    if isinstance(obj, dict):
        items = ", ".join(f"{json.dumps(str(k))}: {_encode(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_encode(v) for v in obj) + "]"
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist())
    if isinstance(obj, bool) or isinstance(obj, np.bool_):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return format_float(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    raise InvalidParameterError(f"cannot serialize value of type {type(obj).__name__}")


def dumps(obj) -> str:
    """Deterministic JSON text with fixed float formatting."""
    return _encode(obj) + "\n"


# -- spectra and bands --------------------------------------------------------


def spectrum_csv(decomposition: EigenDecomposition) -> str:
    lines = ["index,eigenvalue"]
    for i, val in enumerate(decomposition.eigenvalues):
        lines.append(f"{i},{format_float(val)}")
    return "\n".join(lines) + "\n"


def band_report(space: BandlimitedSpace) -> dict:
    return {
        "omega": float(space.omega),
        "dim": int(space.dim),
        "eigenvalues": [float(v) for v in space.band_eigenvalues],
    }


# -- signals and vertex sets --------------------------------------------------


def signal_csv(graph: Graph, values) -> str:
    lines = ["vertex,value"]
    for v in range(graph.vertex_count):
        lines.append(f"{graph.labels[v]},{format_float(values[v])}")
    return "\n".join(lines) + "\n"


def parse_signal_csv(graph: Graph, text: str) -> np.ndarray:
    """Read a "vertex,value" document covering every vertex exactly once."""
    values = np.full(graph.vertex_count, np.nan)
    rows = text.splitlines()
    if not rows or rows[0].strip().lower() != "vertex,value":
        raise GraphFormatError('signal file must start with the header "vertex,value"')
    for lineno, raw in enumerate(rows[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise GraphFormatError("expected vertex,value", line=lineno)
        try:
            vertex = graph.index_of(int(parts[0]))
            value = float(parts[1])
        except (ValueError, InvalidParameterError) as exc:
            raise GraphFormatError(str(exc), line=lineno)
        if not np.isnan(values[vertex]):
            raise GraphFormatError(f"vertex {parts[0]} listed twice", line=lineno)
        values[vertex] = value
    if np.isnan(values).any():
        missing = int(np.isnan(values).sum())
        raise GraphFormatError(f"signal file misses {missing} vertices")
    return values


def parse_vertex_lines(text: str) -> list[int]:
    """Read a vertex-set file: one label per line, '#' comments allowed."""
    out: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            out.append(int(line))
        except ValueError:
            raise GraphFormatError(f"not a vertex label: {line!r}", line=lineno)
    return out


# -- splines and rules --------------------------------------------------------


def spline_csv(graph: Graph, values) -> str:
    return signal_csv(graph, values)


def basis_report(basis: LagrangianBasis) -> dict:
    problem = basis.problem
    return {
        "U": [int(graph_label) for graph_label in problem.graph.labels[problem.sample_set]],
        "k": problem.order,
        "epsilon": problem.epsilon,
        "vectors": [[float(x) for x in col] for col in basis.vectors.T],
    }


def rule_report(graph: Graph, rule: CubatureRule) -> dict:
    return {
        "U": [int(v) for v in graph.labels[rule.sample_set]],
        "weights": [float(w) for w in rule.weights],
        "kind": rule.kind,
        "params": dict(rule.params),
    }


def lambda_report(graph: Graph, report: LambdaReport) -> dict:
    return {
        "S": [int(v) for v in graph.labels[report.members]],
        "lambda": float(report.constant),
        "method": report.method,
    }


def qset_report(interval: QSetInterval) -> dict:
    return {
        "a": interval.lower,
        "b": interval.upper,
        "midpoint": interval.midpoint,
        "seminorm": interval.seminorm,
        "cap": interval.cap,
    }


# -- iteration traces ---------------------------------------------------------


def iteration_trace_csv(iteration: FrameIteration) -> str:
    """Trace rows "n,residual_norm,integral_estimate,bound".

    The residual column is empty when the true signal was not supplied;
    the bound column always carries the a-priori geometric bound.
    """
    bounds = iteration.residual_bounds()
    lines = ["n,residual_norm,integral_estimate,bound"]
    for i in range(iteration.steps + 1):
        if iteration.residual_norms is None:
            res = ""
        else:
            res = format_float(iteration.residual_norms[i])
        lines.append(
            f"{i},{res},{format_float(iteration.integrals[i])},{format_float(bounds[i])}"
        )
    return "\n".join(lines) + "\n"


def bound_sweep_csv(rows) -> str:
    """Rows (k, measured_error, bound) as "k,measured_error,bound"."""
    lines = ["k,measured_error,bound"]
    for k, measured, bound in rows:
        lines.append(f"{int(k)},{format_float(measured)},{format_float(bound)}")
    return "\n".join(lines) + "\n"
