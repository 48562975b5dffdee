"""Off-diagonal holonomy invariants, nodal diagnosis, and phase functionals.

An order-l invariant is the ordered product of l single-path holonomy
invariants W(tau) W^dag(0). Its trace functional can vanish (a nodal
point); orthogonal left and right supports force that, and the diagnosis
below reports the overlap alongside the phase. An undefined phase is a
reported value, never an exception.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, Inconsistent, ZeroOperator
from .linalg import (
    DEFAULT_TOL,
    as_square_matrix,
    dagger,
    op_norm,
    polar_isometry,
    support_projector,
)
from .transport import TransportResult

__all__ = [
    "OffDiagInvariant",
    "NodalDiagnosis",
    "off_diagonal_invariant",
    "support_overlap",
    "nu_functional",
    "holonomy_isometry",
    "alternative_ordering",
    "principal_angle",
]


@dataclass(frozen=True)
class OffDiagInvariant:
    """Ordered product of single-path holonomy invariants."""

    operator: np.ndarray
    order: int
    path_indices: tuple
    constituents: tuple


@dataclass(frozen=True)
class NodalDiagnosis:
    """Trace functional of an invariant together with its nodal status.

    ``phase`` is present iff ``phase_defined``; ``support_overlap`` is the
    operator norm of the product of the left and right support projectors.
    """

    trace: complex
    trace_magnitude: float
    support_overlap: float
    phase_defined: bool
    phase: float | None


def principal_angle(z: complex) -> float:
    """Argument of z in (-pi, pi], with arg(negative real) = +pi.

    A tiny imaginary part (relative 1e-12) is snapped to +0.0 first so
    round-off cannot flip pi into -pi.
    """
    z = complex(z)
    im = 0.0 if abs(z.imag) <= 1e-12 * abs(z) else z.imag
    return math.atan2(im, z.real)


def _invariant_matrix(result) -> np.ndarray:
    if isinstance(result, TransportResult):
        return result.invariant
    return as_square_matrix(result)


def off_diagonal_invariant(results, indices=None) -> OffDiagInvariant:
    """Multiply the invariants of the given transports, in order.

    Order 1 reduces exactly to the single-path holonomy invariant.
    """
    mats = [_invariant_matrix(r) for r in results]
    if not mats:
        raise ValueError("need at least one transport result")
    dim = mats[0].shape[0]
    for m in mats:
        if m.shape[0] != dim:
            raise DimensionMismatch("constituent invariants differ in dimension")
    if indices is None:
        indices = tuple(range(1, len(mats) + 1))
    op = mats[0]
    for m in mats[1:]:
        op = op @ m
    return OffDiagInvariant(
        operator=op,
        order=len(mats),
        path_indices=tuple(int(i) for i in indices),
        constituents=tuple(mats),
    )


def support_overlap(X, tol: float = DEFAULT_TOL) -> float:
    """Operator norm of P_left P_right for the supports of X X^dag and X^dag X."""
    op = X.operator if isinstance(X, OffDiagInvariant) else as_square_matrix(X)
    p_left = support_projector(op @ dagger(op), tol)
    p_right = support_projector(dagger(op) @ op, tol)
    return op_norm(p_left @ p_right)


def nu_functional(A, X, tol: float = DEFAULT_TOL) -> NodalDiagnosis:
    """Phase functional arg Tr[A X] with explicit nodal diagnosis.

    The phase counts as defined when |Tr[A X]| exceeds tol * dim. The
    support overlap is a property of X alone and is reported regardless
    of A.
    """
    op = X.operator if isinstance(X, OffDiagInvariant) else as_square_matrix(X)
    A = as_square_matrix(A)
    if A.shape != op.shape:
        raise DimensionMismatch(f"observable shape {A.shape} vs invariant {op.shape}")
    trace = complex(np.trace(A @ op))
    magnitude = abs(trace)
    overlap = support_overlap(op, tol)
    defined = magnitude > tol * op.shape[0]
    phase = principal_angle(trace) if defined else None
    return NodalDiagnosis(
        trace=trace,
        trace_magnitude=magnitude,
        support_overlap=overlap,
        phase_defined=defined,
        phase=phase,
    )


def holonomy_isometry(X, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Shared partial isometry of the left and right polar decompositions.

    The two extraction routes (through (X^dag X)^{1/2} and (X X^dag)^{1/2})
    are computed independently and must agree; disagreement raises
    Inconsistent because it would contradict the uniqueness argument.
    """
    op = X.operator if isinstance(X, OffDiagInvariant) else as_square_matrix(X)
    scale = op_norm(op)
    if scale <= tol:
        raise ZeroOperator("cannot extract an isometry from a vanishing invariant")
    u_svd = polar_isometry(op, tol)

    def _pinv_sqrt(h):
        # Cut on the squared scale: eigh noise of X^dag X sits near
        # eps * sigma_max^2 and must stay below the kernel threshold.
        w, V = np.linalg.eigh((h + dagger(h)) / 2)
        w = np.clip(w, 0.0, None)
        top = max(w[-1], tol)
        inv = np.where(w > tol * top, 1.0 / np.sqrt(np.clip(w, tol * top, None)), 0.0)
        return (V * inv) @ dagger(V)

    u_left = op @ _pinv_sqrt(dagger(op) @ op)
    u_right = _pinv_sqrt(op @ dagger(op)) @ op
    atol = max(1e-8, tol * op.shape[0]) * max(1.0, scale)
    if op_norm(u_left - u_right) > atol or op_norm(u_left - u_svd) > atol:
        raise Inconsistent("left and right polar isometries disagree")
    return u_svd


def alternative_ordering(results, indices=None) -> np.ndarray:
    """Cyclically shifted product W_1^dag(0) X_2 ... X_l W_1(tau).

    Shares its trace with the standard ordering but transforms as
    S^dag Y S under a global gauge on the first path.
    """
    if not results:
        raise ValueError("need at least one transport result")
    first = results[0]
    if not isinstance(first, TransportResult):
        raise TypeError("alternative_ordering needs TransportResult inputs")
    dim = first.initial_amplitude.dim
    middle = np.eye(dim, dtype=complex)
    for r in results[1:]:
        m = _invariant_matrix(r)
        if m.shape[0] != dim:
            raise DimensionMismatch("constituent invariants differ in dimension")
        middle = middle @ m
    return dagger(first.initial_amplitude.matrix) @ middle @ first.final_amplitude.matrix
