"""Dense complex-matrix primitives.

All routines operate on small square numpy arrays (dim <= ~64). Rank
decisions use a relative singular-value cutoff tol * sigma_max, and
partial isometries are completed by zero on the kernel, so that the
kernel of the extracted isometry equals the kernel of the input.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidState, NotHermitian, NotPSD

__all__ = [
    "DEFAULT_TOL",
    "PolarFactors",
    "as_square_matrix",
    "dagger",
    "op_norm",
    "hermitian_sqrt",
    "support_projector",
    "polar",
    "polar_isometry",
    "is_partial_isometry",
    "unitary_exp",
    "transition_probability",
]

DEFAULT_TOL = 1e-9


def as_square_matrix(M) -> np.ndarray:
    """Coerce to a finite square complex ndarray."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    if not np.isfinite(M).all():
        raise ValueError("matrix entries must be finite")
    return M


def dagger(M: np.ndarray) -> np.ndarray:
    return M.conj().T


def op_norm(M: np.ndarray) -> float:
    """Spectral (operator) norm."""
    M = np.atleast_2d(np.asarray(M))
    if not M.any():
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitian_sqrt(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian PSD square root via eigendecomposition.

    Eigenvalues in [-tol, 0) are clamped to zero (round-off safety);
    anything more negative raises NotPSD. The result R is Hermitian,
    commutes with M, and satisfies R @ R = M up to round-off.
    """
    M = as_square_matrix(M)
    herm_defect = op_norm(M - dagger(M))
    if herm_defect > tol:
        raise NotHermitian(f"||M - M^dag|| = {herm_defect:.3e} > tol = {tol:.3e}")
    w, V = np.linalg.eigh((M + dagger(M)) / 2)
    if w[0] < -tol:
        raise NotPSD(f"eigenvalue {w[0]:.3e} < -tol = {-tol:.3e}")
    w = np.clip(w, 0.0, None)
    R = (V * np.sqrt(w)) @ dagger(V)
    return (R + dagger(R)) / 2


def support_projector(M, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Hermitian projector onto the range of M.

    Keeps singular directions with sigma > tol * sigma_max; the zero
    matrix maps to the zero projector.
    """
    M = as_square_matrix(M)
    U, s, _ = np.linalg.svd(M)
    if s.size == 0 or s[0] <= 0.0:
        return np.zeros_like(M)
    kept = U[:, s > tol * s[0]]
    P = kept @ dagger(kept)
    return (P + dagger(P)) / 2


@dataclass(frozen=True)
class PolarFactors:
    """One-sided polar decomposition of a square matrix.

    ``left``  means X = isometry @ positive_part with positive_part = (X^dag X)^{1/2};
    ``right`` means X = positive_part @ isometry with positive_part = (X X^dag)^{1/2}.
    The isometry is the unique partial isometry with Ker(isometry) = Ker(X).
    """

    isometry: np.ndarray
    positive_part: np.ndarray
    side: str


def polar(X, side: str = "left", tol: float = DEFAULT_TOL) -> PolarFactors:
    """Polar decomposition with the zero-on-kernel isometry convention.

    Singular directions below tol * sigma_max are dropped from the
    isometry, so the left and right decompositions share one partial
    isometry (their positive parts differ).
    """
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    X = as_square_matrix(X)
    U, s, Vh = np.linalg.svd(X)
    if s.size and s[0] > 0.0:
        keep = s > tol * s[0]
        isometry = U[:, keep] @ Vh[keep, :]
    else:
        isometry = np.zeros_like(X)
    if side == "left":
        positive = dagger(Vh) @ (s[:, None] * Vh)
    else:
        positive = U @ (s[:, None] * dagger(U))
    positive = (positive + dagger(positive)) / 2
    return PolarFactors(isometry=isometry, positive_part=positive, side=side)


def polar_isometry(X, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Just the shared partial isometry of the polar decomposition."""
    return polar(X, side="left", tol=tol).isometry


def is_partial_isometry(S, tol: float = DEFAULT_TOL) -> bool:
    """True iff S S^dag S = S within tolerance (S^dag S is a projector)."""
    S = as_square_matrix(S)
    return op_norm(S @ dagger(S) @ S - S) <= tol


def unitary_exp(H, t: float, tol: float = DEFAULT_TOL) -> np.ndarray:
    """exp(-i t H) for Hermitian H, computed by eigendecomposition.

    Exact for this problem class; no series or scaling-squaring.
    """
    H = as_square_matrix(H)
    defect = op_norm(H - dagger(H))
    if defect > tol:
        raise NotHermitian(f"generator deviates from Hermitian by {defect:.3e}")
    w, V = np.linalg.eigh((H + dagger(H)) / 2)
    return (V * np.exp(-1j * t * w)) @ dagger(V)


def _validate_density(m: np.ndarray, tol: float, what: str) -> np.ndarray:
    m = as_square_matrix(m)
    herm = op_norm(m - dagger(m))
    if herm > tol:
        raise InvalidState(f"{what}: not Hermitian (defect {herm:.3e})")
    w = np.linalg.eigvalsh((m + dagger(m)) / 2)
    if w[0] < -tol:
        raise InvalidState(f"{what}: negative eigenvalue {w[0]:.3e}")
    tr = float(np.trace(m).real)
    if abs(tr - 1.0) > tol * m.shape[0]:
        raise InvalidState(f"{what}: trace must be 1, got {tr!r}")
    return m


def transition_probability(rho, sigma, tol: float = DEFAULT_TOL) -> float:
    """Transition probability (Tr[(rho^{1/2} sigma rho^{1/2})^{1/2}])^2.

    Evaluated through the identity with the nuclear norm of
    rho^{1/2} sigma^{1/2}, which avoids taking square roots of round-off
    eigenvalues. A real number in [0, 1]; equals 1 iff the states
    coincide and |<psi|phi>|^2 for pure states. Symmetric.
    """
    r = _validate_density(getattr(rho, "matrix", rho), tol, "rho")
    s = _validate_density(getattr(sigma, "matrix", sigma), tol, "sigma")
    if r.shape != s.shape:
        raise InvalidState(f"dimension mismatch: {r.shape} vs {s.shape}")
    sv = np.linalg.svd(hermitian_sqrt(r, tol) @ hermitian_sqrt(s, tol), compute_uv=False)
    fid = float(np.sum(sv) ** 2)
    return min(max(fid, 0.0), 1.0)
