"""Interferometric off-diagonal phases and their clash with holonomy transport.

The interferometric definition Phi[Tr(U rho_1^{1/l} U rho_2^{1/l} ...)]
imposes a much weaker transport condition (per-eigenstate) than the
operator parallelity behind the holonomy invariants, so away from pure
states the two phase assignments generally disagree. The report below
runs both pipelines, each under its own convention, and never reuses
one transport for the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotUnitary
from .linalg import DEFAULT_TOL, as_square_matrix, dagger, op_norm
from .evolution import EvolutionSpec, TimeGrid, unitary_at
from .offdiag import nu_functional, off_diagonal_invariant, principal_angle
from .state import Amplitude, DensityOperator
from .transport import TransportResult, discrete_holonomy

__all__ = [
    "PermutedFamily",
    "InterferometricPhase",
    "DiscrepancyReport",
    "interferometric_offdiag_phase",
    "discrepancy_report",
    "wrap_angle",
]


def wrap_angle(delta: float) -> float:
    """Reduce an angle difference to (-pi, pi]."""
    out = math.fmod(delta + math.pi, 2 * math.pi)
    if out <= 0:
        out += 2 * math.pi
    return out - math.pi


@dataclass(frozen=True)
class PermutedFamily:
    """States sharing a spectrum, differing by eigenvalue permutations.

    ``eigenvectors`` holds an orthonormal set as columns; member k is
    sum_i lambda[permutations[k][i]] |v_i><v_i|.
    """

    base_eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    permutations: tuple

    def __post_init__(self):
        lam = np.asarray(self.base_eigenvalues, dtype=float)
        V = np.asarray(self.eigenvectors, dtype=complex)
        if V.ndim != 2 or V.shape[1] != lam.size:
            raise ValueError("need one eigenvector column per eigenvalue")
        gram = dagger(V) @ V
        if op_norm(gram - np.eye(lam.size)) > 1e-9:
            raise ValueError("eigenvectors must be orthonormal")
        if lam.min() < -1e-12 or abs(lam.sum() - 1.0) > 1e-9:
            raise ValueError("eigenvalues must be a probability vector")
        perms = tuple(tuple(int(i) for i in p) for p in self.permutations)
        for p in perms:
            if sorted(p) != list(range(lam.size)):
                raise ValueError(f"{p} is not a permutation of the eigenvalue indices")
        object.__setattr__(self, "base_eigenvalues", lam)
        object.__setattr__(self, "eigenvectors", V)
        object.__setattr__(self, "permutations", perms)

    def __len__(self) -> int:
        return len(self.permutations)

    @property
    def dim(self) -> int:
        return self.eigenvectors.shape[0]

    def state(self, k: int) -> DensityOperator:
        lam = self.base_eigenvalues[list(self.permutations[k])]
        V = self.eigenvectors
        return DensityOperator((V * lam) @ dagger(V))

    def is_rank_one(self, tol: float = DEFAULT_TOL) -> bool:
        lam = np.sort(self.base_eigenvalues)
        return bool(lam[-1] > 1.0 - tol * lam.size)


@dataclass(frozen=True)
class InterferometricPhase:
    """Phase factor Phi[trace] with the raw trace kept for auditing."""

    trace: complex
    defined: bool
    factor: complex | None

    @property
    def phase(self) -> float | None:
        return None if self.factor is None else principal_angle(self.factor)


def _nth_root(rho: DensityOperator, l: int, tol: float) -> np.ndarray:
    w = np.clip(rho.eigenvalues, 0.0, None)
    top = max(w[-1], tol)
    w = np.where(w > tol * top, w, 0.0)
    V = rho.eigenvectors
    return (V * w ** (1.0 / l)) @ dagger(V)


def interferometric_offdiag_phase(
    U_final, family: PermutedFamily, l: int, tol: float = DEFAULT_TOL
):
    """Phi[Tr(U rho_{j_1}^{1/l} U rho_{j_2}^{1/l} ... U rho_{j_l}^{1/l})].

    Returns an InterferometricPhase; the factor is None (undefined) when
    the trace magnitude does not exceed tol. The caller is responsible
    for using a unitary that parallel-transports each common eigenstate.
    """
    U = as_square_matrix(U_final)
    if op_norm(dagger(U) @ U - np.eye(U.shape[0])) > max(tol, 1e-12) * U.shape[0]:
        raise NotUnitary("evolution operator is not unitary within tolerance")
    if l < 1 or l > len(family):
        raise ValueError(f"order l = {l} needs {l} family members, have {len(family)}")
    if family.dim != U.shape[0]:
        raise DimensionMismatch("family and unitary dimensions differ")
    prod = np.eye(U.shape[0], dtype=complex)
    for k in range(l):
        prod = prod @ U @ _nth_root(family.state(k), l, tol)
    trace = complex(np.trace(prod))
    if abs(trace) <= tol:
        return InterferometricPhase(trace=trace, defined=False, factor=None)
    return InterferometricPhase(trace=trace, defined=True, factor=trace / abs(trace))


@dataclass(frozen=True)
class DiscrepancyReport:
    """Both off-diagonal phase assignments for one nominal evolution."""

    interferometric: InterferometricPhase
    holonomy_trace: complex
    holonomy_factor: complex | None
    nu: float | None
    gamma: float | None
    difference: float | None
    eigenstate_transport_residual: float
    rank_one: bool
    order: int
    n_steps: int


def _eigenstate_transport_residual(spec, family, grid) -> float:
    """Max |<v_k| U^dag dU/dt |v_k>| over eigenvectors and grid times.

    Uses the analytic generator when the spec provides one (exact); only
    sampled evolutions fall back to central differences.
    """
    from .evolution import RotatingFrame, StaticHamiltonian, rotating_generator

    V = family.eigenvectors
    if isinstance(spec, StaticHamiltonian):
        # U^dag dU/dt = -i H for all t.
        diag = np.diagonal(dagger(V) @ spec.hamiltonian @ V)
        return float(np.max(np.abs(diag)))
    if isinstance(spec, RotatingFrame):
        worst = 0.0
        for t in grid.times:
            U = unitary_at(spec, float(t))
            gen = dagger(U) @ rotating_generator(spec, float(t)) @ U
            worst = max(worst, float(np.max(np.abs(np.diagonal(dagger(V) @ gen @ V)))))
        return worst
    ts = grid.times
    dt = float(ts[1] - ts[0])
    us = [unitary_at(spec, float(t)) for t in ts]
    worst = 0.0
    for k in range(1, len(ts) - 1):
        gen = dagger(us[k]) @ ((us[k + 1] - us[k - 1]) / (2 * dt))
        diag = dagger(V) @ gen @ V
        worst = max(worst, float(np.max(np.abs(np.diagonal(diag)))))
    return worst


def _closed_form_result(U_tau: np.ndarray, rho: DensityOperator) -> TransportResult:
    """Exact parallel lift W(t) = U(t) rho^{1/2} for eigenstate-transporting U."""
    w0 = rho.sqrt
    wt = U_tau @ w0
    return TransportResult(
        relative_phase_factor=U_tau @ rho.support,
        initial_amplitude=Amplitude(w0),
        final_amplitude=Amplitude(wt),
        invariant=wt @ dagger(w0),
        max_step_parallelity_residual=0.0,
        n_steps=0,
    )


def discrepancy_report(
    spec: EvolutionSpec,
    family: PermutedFamily,
    l: int,
    grid: TimeGrid | None = None,
    tol: float = DEFAULT_TOL,
) -> DiscrepancyReport:
    """Evaluate the interferometric phase and the holonomy phase side by side.

    Rank-one members under an eigenstate-transporting unitary are lifted
    in closed form (the constant ancilla gauge is then exact); everything
    else goes through the discrete transporter on ``grid``.
    """
    if grid is None:
        grid = TimeGrid.uniform(spec.tau, 1000)
    U_tau = unitary_at(spec, spec.tau)
    gamma = interferometric_offdiag_phase(U_tau, family, l, tol)

    residual = _eigenstate_transport_residual(spec, family, grid)
    rank_one = family.is_rank_one(tol)
    use_closed_form = rank_one and residual <= 1e-8

    results = []
    from .evolution import density_path

    for k in range(l):
        rho = family.state(k)
        if use_closed_form:
            results.append(_closed_form_result(U_tau, rho))
        else:
            results.append(discrete_holonomy(density_path(rho, spec, grid), tol))
    X = off_diagonal_invariant(results)
    diag = nu_functional(np.eye(family.dim), X, tol)
    factor = None
    if diag.phase_defined:
        factor = diag.trace / abs(diag.trace)
    difference = None
    if gamma.defined and diag.phase_defined:
        difference = wrap_angle(gamma.phase - diag.phase)
    return DiscrepancyReport(
        interferometric=gamma,
        holonomy_trace=diag.trace,
        holonomy_factor=factor,
        nu=diag.phase,
        gamma=gamma.phase,
        difference=difference,
        eigenstate_transport_residual=residual,
        rank_one=rank_one,
        order=l,
        n_steps=0 if use_closed_form else grid.n_steps,
    )
