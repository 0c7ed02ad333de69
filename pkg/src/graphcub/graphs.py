"""Finite simple connected graphs, their Laplacians and vertex-set combinatorics."""

from __future__ import annotations

import numpy as np

from .errors import (
    ClosureSaturatedError,
    DimensionError,
    GraphFormatError,
    InvalidParameterError,
)

__all__ = [
    "Graph",
    "build_cycle",
    "build_path",
    "build_grid",
    "from_edge_list",
    "read_edge_list",
    "edge_list_text",
    "vertex_set",
    "as_signal",
    "inner_product",
    "norm",
    "integrate",
]


def _is_connected(adj: np.ndarray) -> bool:
    n = adj.shape[0]
    visited = np.zeros(n, dtype=bool)
    visited[0] = True
    frontier = adj[0].copy()
    while True:
        new = frontier & ~visited
        if not new.any():
            break
        visited |= new
        frontier = adj[new].any(axis=0)
    return bool(visited.all())


class Graph:
    """Simple undirected unweighted connected graph on vertices 0..n-1.

    Construction validates symmetry, the empty diagonal and connectivity;
    at least two vertices are required.  Instances are immutable and safe
    for concurrent read-only use.

    Parameters
    ----------
    adjacency : (n, n) array_like of bool
        Symmetric adjacency relation with empty diagonal.
    labels : sequence of int, optional
        Original vertex labels, retained for reporting.  Defaults to
        0..n-1.
    """

    def __init__(self, adjacency, labels=None):
        adj = np.array(adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise InvalidParameterError("adjacency must be a square matrix")
        n = adj.shape[0]
        if n < 2:
            raise InvalidParameterError("a graph needs at least two vertices")
        if adj.diagonal().any():
            raise GraphFormatError("self-loops are not allowed")
        if not np.array_equal(adj, adj.T):
            raise GraphFormatError("adjacency must be symmetric")
        if not _is_connected(adj):
            raise GraphFormatError("graph must be connected")
        adj.setflags(write=False)
        self._adj = adj
        if labels is None:
            lab = np.arange(n, dtype=np.int64)
        else:
            lab = np.asarray(labels, dtype=np.int64).copy()
            if lab.shape != (n,):
                raise InvalidParameterError("labels must have one entry per vertex")
            if len(np.unique(lab)) != n:
                raise InvalidParameterError("labels must be distinct")
        lab.setflags(write=False)
        self._labels = lab
        deg = adj.sum(axis=1).astype(np.int64)
        deg.setflags(write=False)
        self._degrees = deg
        self._laplacian = None

    @property
    def vertex_count(self) -> int:
        return self._adj.shape[0]

    @property
    def adjacency(self) -> np.ndarray:
        return self._adj

    @property
    def labels(self) -> np.ndarray:
        return self._labels

    @property
    def degrees(self) -> np.ndarray:
        return self._degrees

    @property
    def max_degree(self) -> int:
        return int(self._degrees.max())

    @property
    def edge_count(self) -> int:
        return int(self._degrees.sum()) // 2

    @property
    def laplacian(self) -> np.ndarray:
        """Dense combinatorial Laplacian (degree matrix minus adjacency)."""
        if self._laplacian is None:
            lap = np.diag(self._degrees.astype(float)) - self._adj.astype(float)
            lap.setflags(write=False)
            self._laplacian = lap
        return self._laplacian

    def edges(self):
        """Sorted list of edges (u, v) with u < v, in canonical indices."""
        iu, iv = np.nonzero(np.triu(self._adj, k=1))
        return list(zip(iu.tolist(), iv.tolist()))

    def index_of(self, label: int) -> int:
        """Canonical index of an original vertex label."""
        hits = np.nonzero(self._labels == label)[0]
        if hits.size == 0:
            raise InvalidParameterError(f"unknown vertex label {label}")
        return int(hits[0])

    # -- signal operations ------------------------------------------------

    def laplacian_apply(self, values) -> np.ndarray:
        """Apply the Laplacian: (Lf)(v) = sum over neighbors u of f(v)-f(u)."""
        f = as_signal(self, values)
        return self.laplacian @ f

    # -- vertex-set combinatorics -----------------------------------------

    def vertex_boundary(self, members) -> np.ndarray:
        """Vertices outside the set adjacent to at least one member."""
        subset = vertex_set(self, members, allow_empty=True)
        mask = np.zeros(self.vertex_count, dtype=bool)
        mask[subset] = True
        if subset.size == 0:
            return subset
        touched = self._adj[subset].any(axis=0)
        return np.nonzero(touched & ~mask)[0].astype(np.int64)

    def closure(self, members, steps: int = 1) -> np.ndarray:
        """Iterated closure: members together with their boundary, repeated."""
        if not isinstance(steps, (int, np.integer)) or steps < 0:
            raise InvalidParameterError("closure steps must be a nonnegative integer")
        subset = vertex_set(self, members)
        current = np.zeros(self.vertex_count, dtype=bool)
        current[subset] = True
        for _ in range(steps):
            grown = current | self._adj[current].any(axis=0)
            if np.array_equal(grown, current):
                break
            current = grown
        return np.nonzero(current)[0].astype(np.int64)

    def relative_degree_stats(self, members, steps: int = 0) -> tuple[int, int]:
        """Outward/inward adjacency extremes across the closure's boundary.

        Returns (D, K): D is the largest number of boundary neighbors seen
        from inside the iterated closure, K the smallest number of closure
        neighbors seen from its boundary.  Fails when the closure already
        covers every vertex (the boundary is empty).
        """
        core = self.closure(members, steps)
        boundary = self.vertex_boundary(core)
        if boundary.size == 0:
            raise ClosureSaturatedError(
                f"closure of the set after {steps} steps covers all vertices; "
                "its boundary is empty"
            )
        outward = self._adj[np.ix_(core, boundary)].sum(axis=1)
        inward = self._adj[np.ix_(boundary, core)].sum(axis=1)
        return int(outward.max()), int(inward.min())


# -- validators -------------------------------------------------------------


def vertex_set(graph: Graph, members, allow_empty: bool = False) -> np.ndarray:
    """Canonicalize a vertex subset: sorted, deduplicated, range-checked."""
    arr = np.atleast_1d(np.asarray(members, dtype=np.int64))
    if arr.ndim != 1:
        raise InvalidParameterError("a vertex set must be one-dimensional")
    if arr.size == 0:
        if allow_empty:
            return arr
        raise InvalidParameterError("vertex set must not be empty")
    if arr.min() < 0 or arr.max() >= graph.vertex_count:
        raise InvalidParameterError(
            f"vertex indices must lie in 0..{graph.vertex_count - 1}"
        )
    return np.unique(arr)


def as_signal(graph: Graph, values) -> np.ndarray:
    """Validate a real-valued signal on the graph's vertices."""
    f = np.asarray(values, dtype=float)
    if f.shape != (graph.vertex_count,):
        raise DimensionError(
            f"signal must have length {graph.vertex_count}, got shape {f.shape}"
        )
    if not np.all(np.isfinite(f)):
        raise InvalidParameterError("signal entries must be finite")
    return f


# -- inner products ---------------------------------------------------------


def inner_product(f, h) -> float:
    """Euclidean inner product of two signals."""
    a = np.asarray(f, dtype=float)
    b = np.asarray(h, dtype=float)
    if a.shape != b.shape:
        raise DimensionError(f"length mismatch: {a.shape} vs {b.shape}")
    return float(a @ b)


def norm(f) -> float:
    """Euclidean norm of a signal."""
    return float(np.linalg.norm(np.asarray(f, dtype=float)))


def integrate(f) -> float:
    """Integral of a signal: the plain sum of its values over all vertices."""
    return float(np.sum(np.asarray(f, dtype=float)))


# -- constructors ------------------------------------------------------------


def build_cycle(n: int) -> Graph:
    """Cycle graph on n >= 3 vertices; every vertex has degree 2."""
    if not isinstance(n, (int, np.integer)) or n < 3:
        raise InvalidParameterError("a cycle needs at least 3 vertices")
    adj = np.zeros((n, n), dtype=bool)
    idx = np.arange(n)
    adj[idx, (idx + 1) % n] = True
    adj[(idx + 1) % n, idx] = True
    return Graph(adj)


def build_path(n: int) -> Graph:
    """Path graph on n >= 2 vertices."""
    if not isinstance(n, (int, np.integer)) or n < 2:
        raise InvalidParameterError("a path needs at least 2 vertices")
    adj = np.zeros((n, n), dtype=bool)
    idx = np.arange(n - 1)
    adj[idx, idx + 1] = True
    adj[idx + 1, idx] = True
    return Graph(adj)


def build_grid(rows: int, cols: int) -> Graph:
    """Rectangular grid graph with rows*cols >= 2 vertices."""
    ok = (
        isinstance(rows, (int, np.integer))
        and isinstance(cols, (int, np.integer))
        and rows >= 1
        and cols >= 1
        and rows * cols >= 2
    )
    if not ok:
        raise InvalidParameterError("grid needs rows, cols >= 1 and at least 2 vertices")
    n = rows * cols
    adj = np.zeros((n, n), dtype=bool)
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                adj[v, v + 1] = adj[v + 1, v] = True
            if r + 1 < rows:
                adj[v, v + cols] = adj[v + cols, v] = True
    return Graph(adj)


def from_edge_list(text: str) -> Graph:
    """Parse an edge-list document into a graph.

    One edge per line as two whitespace-separated nonnegative integer
    labels; '#' starts a comment line and blank lines are ignored.  Loops,
    repeated edges and disconnected inputs are rejected.  Vertex labels are
    canonicalized to 0..n-1 (sorted by label, the original labels are kept).
    """
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(
                f"expected two vertex labels, got {len(parts)} tokens", line=lineno
            )
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"labels must be integers: {line!r}", line=lineno)
        if u < 0 or v < 0:
            raise GraphFormatError("labels must be nonnegative", line=lineno)
        if u == v:
            raise GraphFormatError(f"loop at vertex {u}", line=lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}", line=lineno)
        seen.add(key)
        edges.append(key)
    if not edges:
        raise GraphFormatError("edge list contains no edges")
    labels = np.unique(np.array(edges, dtype=np.int64).ravel())
    index = {int(lab): i for i, lab in enumerate(labels)}
    n = labels.size
    adj = np.zeros((n, n), dtype=bool)
    for u, v in edges:
        adj[index[u], index[v]] = True
        adj[index[v], index[u]] = True
    return Graph(adj, labels=labels)


def read_edge_list(path) -> Graph:
    """Load a graph from an edge-list file."""
    with open(path, "r", encoding="utf-8") as fh:
        return from_edge_list(fh.read())


def edge_list_text(graph: Graph) -> str:
    """Serialize a graph back to edge-list text using its original labels."""
    lines = [
        f"{graph.labels[u]} {graph.labels[v]}" for u, v in graph.edges()
    ]
    return "\n".join(lines) + "\n"
