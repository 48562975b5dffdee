"""Density operators, amplitudes (purifications), and gauge transformations.

An amplitude is a square matrix W with rho = W W^dag; the state lives on
H and the ancilla is the dual space, so purifications never leave the
dim x dim square shape. Parallelity between two amplitudes means their
overlap W^dag W' is Hermitian positive semidefinite; the residual below
measures the failure of that condition.
"""

from __future__ import annotations

from functools import cached_property

import numpy as np

from .errors import DimensionMismatch, InvalidState, SupportMismatch
from .linalg import (
    DEFAULT_TOL,
    as_square_matrix,
    dagger,
    hermitian_sqrt,
    is_partial_isometry,
    op_norm,
)

__all__ = [
    "DensityOperator",
    "Amplitude",
    "GaugeIsometry",
    "standard_purification",
    "apply_gauge",
    "parallelity_residual",
]


class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace operator.

    Eigen-data is computed once on first use and cached; instances are
    treated as immutable values.
    """

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        matrix = as_square_matrix(matrix)
        herm = op_norm(matrix - dagger(matrix))
        if herm > tol:
            raise InvalidState(f"density matrix not Hermitian (defect {herm:.3e})")
        matrix = (matrix + dagger(matrix)) / 2
        w, V = np.linalg.eigh(matrix)
        if w[0] < -tol:
            raise InvalidState(f"density matrix has eigenvalue {w[0]:.3e} < -tol")
        tr = float(np.trace(matrix).real)
        if abs(tr - 1.0) > tol * matrix.shape[0]:
            raise InvalidState(f"density matrix trace must be 1, got {tr!r}")
        self.matrix = matrix
        self.dim = matrix.shape[0]
        self.tol = tol
        self._eigs = (np.clip(w, 0.0, 1.0), V)

    @classmethod
    def pure(cls, vector, tol: float = DEFAULT_TOL) -> "DensityOperator":
        v = np.asarray(vector, dtype=complex).reshape(-1)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise InvalidState("cannot build a state from the zero vector")
        v = v / n
        return cls(np.outer(v, v.conj()), tol=tol)

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityOperator":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def eigenvalues(self) -> np.ndarray:
        """Spectrum in ascending order, clipped to [0, 1]."""
        return self._eigs[0]

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthonormal eigenvectors as columns, matching ``eigenvalues``."""
        return self._eigs[1]

    @cached_property
    def sqrt(self) -> np.ndarray:
        w, V = self._eigs
        R = (V * np.sqrt(w)) @ dagger(V)
        return (R + dagger(R)) / 2

    def rank(self, tol: float | None = None) -> int:
        tol = self.tol if tol is None else tol
        w = self.eigenvalues
        top = w[-1]
        if top <= 0.0:
            return 0
        return int(np.count_nonzero(w > tol * top))

    @cached_property
    def support(self) -> np.ndarray:
        """Projector onto the range (eigenvectors above the rank cutoff)."""
        w, V = self._eigs
        kept = V[:, w > self.tol * max(w[-1], self.tol)]
        P = kept @ dagger(kept)
        return (P + dagger(P)) / 2

    def __repr__(self):
        return f"DensityOperator(dim={self.dim}, rank={self.rank()})"


class Amplitude:
    """Square matrix W whose state is W W^dag."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        matrix = as_square_matrix(matrix)
        # Raises InvalidState when W W^dag is not a density operator.
        self._state = DensityOperator(matrix @ dagger(matrix), tol=tol)
        self.matrix = matrix
        self.dim = matrix.shape[0]

    def state(self) -> DensityOperator:
        return self._state

    def __repr__(self):
        return f"Amplitude(dim={self.dim})"


class GaugeIsometry:
    """Validated partial isometry used as a t-independent gauge."""

    def __init__(self, matrix, tol: float = DEFAULT_TOL):
        matrix = as_square_matrix(matrix)
        if not is_partial_isometry(matrix, tol):
            raise InvalidState("gauge matrix is not a partial isometry")
        self.matrix = matrix
        self.dim = matrix.shape[0]

    @classmethod
    def unitary(cls, matrix, tol: float = DEFAULT_TOL) -> "GaugeIsometry":
        return cls(matrix, tol=tol)


def standard_purification(rho: DensityOperator) -> Amplitude:
    """The amplitude rho^{1/2}, i.e. phase factor = identity on the support."""
    if not isinstance(rho, DensityOperator):
        rho = DensityOperator(rho)
    return Amplitude(hermitian_sqrt(rho.matrix, rho.tol))


def apply_gauge(W: Amplitude, S: GaugeIsometry, tol: float = DEFAULT_TOL) -> Amplitude:
    """Right-multiply an amplitude by a gauge isometry, W -> W S.

    Raises SupportMismatch when the gauged amplitude no longer purifies
    the same state, which happens exactly when the left support of S
    fails to cover the right support of W.
    """
    if W.dim != S.dim:
        raise DimensionMismatch(f"amplitude dim {W.dim} vs gauge dim {S.dim}")
    gauged = W.matrix @ S.matrix
    drift = op_norm(gauged @ dagger(gauged) - W.matrix @ dagger(W.matrix))
    if drift > tol * W.dim:
        raise SupportMismatch(f"gauged amplitude changes the state by {drift:.3e}")
    return Amplitude(gauged)


def parallelity_residual(W: Amplitude, W2: Amplitude) -> float:
    """How far the pair (W, W2) is from being parallel.

    Returns max(||M - M^dag||, |min(0, lambda_min((M+M^dag)/2))|) for
    M = W^dag W2: zero (up to tolerance) iff the overlap is Hermitian
    PSD. Strict positivity is deliberately not required; rank-deficient
    states make it unattainable.
    """
    a = W.matrix if isinstance(W, Amplitude) else as_square_matrix(W)
    b = W2.matrix if isinstance(W2, Amplitude) else as_square_matrix(W2)
    if a.shape != b.shape:
        raise DimensionMismatch(f"amplitude shapes {a.shape} vs {b.shape}")
    M = dagger(a) @ b
    herm = op_norm(M - dagger(M))
    w = np.linalg.eigvalsh((M + dagger(M)) / 2)
    return float(max(herm, abs(min(0.0, w[0]))))
