"""Laplacian eigendecomposition and bandlimited subspaces.

The bandlimited space with cutoff ``omega`` is spanned by the Laplacian
eigenvectors whose eigenvalues do not exceed the cutoff; it plays the role
a Paley-Wiener space plays on the real line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvalidParameterError, NumericError
from .graphs import Graph, as_signal, norm

__all__ = [
    "BAND_TOL",
    "EigenDecomposition",
    "BandlimitedSpace",
    "eigendecompose",
    "bandlimited_space",
    "bernstein_margin",
    "random_bandlimited",
]

# Absolute tolerance for including an eigenvalue in a band (cutoff is inclusive).
BAND_TOL = 1e-9

_ORTHO_TOL = 1e-9
_RECON_TOL = 1e-8


@dataclass(frozen=True)
class EigenDecomposition:
    """Full symmetric eigendecomposition of a graph Laplacian.

    Eigenvalues are ascending and clamped to be nonnegative; eigenvector j
    (column j) pairs with eigenvalue j.  The sign of each eigenvector is
    fixed so its first nonzero coordinate is positive, which makes reports
    reproducible across platforms.
    """

    graph: Graph
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def __post_init__(self):
        self.eigenvalues.setflags(write=False)
        self.eigenvectors.setflags(write=False)


def eigendecompose(graph: Graph) -> EigenDecomposition:
    """Eigendecompose the combinatorial Laplacian of a connected graph."""
    lap = graph.laplacian
    try:
        values, vectors = np.linalg.eigh(lap)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver failed: {exc}") from exc
    if values[0] < -_ORTHO_TOL:
        raise NumericError(
            f"Laplacian produced eigenvalue {values[0]:.3e} below -{_ORTHO_TOL:.0e}"
        )
    values = np.maximum(values, 0.0)
    # deterministic sign: first coordinate above noise level is positive
    for j in range(vectors.shape[1]):
        col = vectors[:, j]
        nz = np.nonzero(np.abs(col) > 1e-12)[0]
        if nz.size and col[nz[0]] < 0:
            vectors[:, j] = -col
    gram_err = np.abs(vectors.T @ vectors - np.eye(vectors.shape[0])).max()
    if gram_err > _ORTHO_TOL:
        raise NumericError(f"eigenvectors not orthonormal (max defect {gram_err:.3e})")
    scale = max(1.0, np.abs(lap).max())
    recon_err = np.abs(lap - (vectors * values) @ vectors.T).max()
    if recon_err > _RECON_TOL * scale:
        raise NumericError(f"eigendecomposition residual {recon_err:.3e} too large")
    return EigenDecomposition(graph, values, vectors)


@dataclass(frozen=True)
class BandlimitedSpace:
    """Span of the Laplacian eigenvectors with eigenvalues up to a cutoff."""

    decomposition: EigenDecomposition
    omega: float
    dim: int

    @property
    def graph(self) -> Graph:
        return self.decomposition.graph

    @property
    def basis(self) -> np.ndarray:
        """Orthonormal basis, one column per retained eigenvector."""
        return self.decomposition.eigenvectors[:, : self.dim]

    @property
    def band_eigenvalues(self) -> np.ndarray:
        return self.decomposition.eigenvalues[: self.dim]

    def coords(self, values) -> np.ndarray:
        """Coordinates of a signal against the band basis."""
        f = as_signal(self.graph, values)
        return self.basis.T @ f

    def synthesize(self, coords) -> np.ndarray:
        """Signal with the given band coordinates."""
        c = np.asarray(coords, dtype=float)
        if c.shape != (self.dim,):
            raise DimensionError(f"expected {self.dim} coordinates, got {c.shape}")
        return self.basis @ c

    def project(self, values) -> np.ndarray:
        """Orthogonal projection onto the band (idempotent, self-adjoint)."""
        return self.synthesize(self.coords(values))

    def theta_vector(self, vertex: int) -> np.ndarray:
        """Projection of the vertex indicator onto the band.

        Taking the inner product of a bandlimited signal with this vector
        evaluates the signal at the vertex.
        """
        n = self.graph.vertex_count
        if not 0 <= int(vertex) < n:
            raise InvalidParameterError(f"vertex must lie in 0..{n - 1}")
        return self.basis @ self.basis[int(vertex)]

    def contains(self, values, tol: float = 1e-9) -> bool:
        """Whether a signal lies in the band up to a relative tolerance."""
        f = as_signal(self.graph, values)
        scale = max(norm(f), 1e-300)
        return norm(f - self.project(f)) <= tol * scale


def bandlimited_space(decomposition: EigenDecomposition, omega: float) -> BandlimitedSpace:
    """Bandlimited space for a cutoff; eigenvalue 0 is always retained."""
    w = float(omega)
    if not np.isfinite(w) or w < 0:
        raise InvalidParameterError("cutoff omega must be a finite nonnegative real")
    dim = int(np.searchsorted(decomposition.eigenvalues, w + BAND_TOL, side="right"))
    dim = max(dim, 1)
    return BandlimitedSpace(decomposition, w, dim)


def bernstein_margin(graph: Graph, values, omega: float, s_max: int = 4) -> float:
    """Worst ratio of iterated-Laplacian growth against the cutoff's powers.

    Returns max over s = 1..s_max of |L^s f| / (omega^s |f|); a value at
    most 1 (plus rounding slack) certifies the signal obeys the Bernstein
    inequality up to s_max, the membership test for the bandlimited space.
    """
    f = as_signal(graph, values)
    base = norm(f)
    if base == 0.0:
        raise InvalidParameterError("the zero signal carries no Bernstein margin")
    if not np.isfinite(omega) or omega <= 0:
        raise InvalidParameterError("omega must be positive")
    if not isinstance(s_max, (int, np.integer)) or s_max < 1:
        raise InvalidParameterError("s_max must be a positive integer")
    worst = 0.0
    x = f
    for s in range(1, int(s_max) + 1):
        x = graph.laplacian @ x
        worst = max(worst, norm(x) / (float(omega) ** s * base))
    return worst


def random_bandlimited(space: BandlimitedSpace, rng, scale: float = 1.0) -> np.ndarray:
    """Random member of the band with the requested Euclidean norm."""
    coords = rng.standard_normal(space.dim)
    length = np.linalg.norm(coords)
    if length == 0.0:
        coords[0] = 1.0
        length = 1.0
    return space.synthesize(coords * (scale / length))
