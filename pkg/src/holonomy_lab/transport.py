"""Parallel transport of amplitudes along a density-operator path.

The transporter is a finite product: for each step the partial isometry
of the polar decomposition of rho_{k+1}^{1/2} rho_k^{1/2} is applied, which
makes every consecutive amplitude pair exactly parallel. The product,
restricted to the support of rho(0), is the relative phase factor; grid
times never enter, so the result depends only on the ordered states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, GridTooCoarse, OrthogonalStep
from .evolution import EvolutionSpec, TimeGrid, unitary_at
from .linalg import (
    DEFAULT_TOL,
    as_square_matrix,
    dagger,
    is_partial_isometry,
    op_norm,
    polar_isometry,
)
from .state import Amplitude, DensityOperator, parallelity_residual

__all__ = [
    "TransportResult",
    "AncillaGauge",
    "discrete_holonomy",
    "transport_equation_residual",
    "pure_parallelity_residual",
    "solve_ancilla_gauge",
]


@dataclass(frozen=True)
class TransportResult:
    """Outcome of transporting one path.

    ``invariant`` is final_amplitude @ initial_amplitude^dag, equal to
    rho(tau)^{1/2} V(tau) rho(0)^{1/2} by construction.
    """

    relative_phase_factor: np.ndarray
    initial_amplitude: Amplitude
    final_amplitude: Amplitude
    invariant: np.ndarray
    max_step_parallelity_residual: float
    n_steps: int


@dataclass(frozen=True)
class AncillaGauge:
    """Partial isometries B(t_k) acting on the ancilla factor."""

    samples: tuple
    grid: TimeGrid
    rank_deficient: bool = False

    def __post_init__(self):
        samples = tuple(as_square_matrix(B) for B in self.samples)
        object.__setattr__(self, "samples", samples)
        if len(samples) != self.grid.times.size:
            raise ValueError("one gauge sample per grid time is required")
        for k, B in enumerate(samples):
            if not is_partial_isometry(B, 1e-8):
                raise ValueError(f"gauge sample {k} is not a partial isometry")


def _transport(path, tol, keep_amplitudes):
    if len(path) < 2:
        raise ValueError("a path needs at least two states")
    dim = path[0].dim
    for rho in path:
        if rho.dim != dim:
            raise DimensionMismatch("path states differ in dimension")
    sqrts = [rho.sqrt for rho in path]
    V = path[0].support.copy()
    prev_amp = sqrts[0] @ V  # equals rho(0)^{1/2}
    amps = [prev_amp] if keep_amplitudes else None
    max_residual = 0.0
    for k in range(len(path) - 1):
        M = sqrts[k + 1] @ sqrts[k]
        U, s, Vh = np.linalg.svd(M)
        # The singular values of sqrt(rho_{k+1}) sqrt(rho_k) sum to the
        # square root of the transition probability of the step.
        fid = float(np.sum(s) ** 2)
        if fid <= tol:
            raise OrthogonalStep(
                f"transition probability {fid:.3e} <= tol between steps {k} and {k + 1}"
            )
        keep = s > tol * s[0]
        step = U[:, keep] @ Vh[keep, :]
        V = step @ V
        amp = sqrts[k + 1] @ V
        max_residual = max(max_residual, parallelity_residual(prev_amp, amp))
        prev_amp = amp
        if keep_amplitudes:
            amps.append(amp)
    result = TransportResult(
        relative_phase_factor=V,
        initial_amplitude=Amplitude(sqrts[0]),
        final_amplitude=Amplitude(prev_amp),
        invariant=prev_amp @ dagger(sqrts[0]),
        max_step_parallelity_residual=max_residual,
        n_steps=len(path) - 1,
    )
    return (result, amps) if keep_amplitudes else result


def discrete_holonomy(path: list[DensityOperator], tol: float = DEFAULT_TOL) -> TransportResult:
    """Transport the standard purification of path[0] along the whole path.

    Raises OrthogonalStep when a consecutive pair has transition
    probability below tol (the holonomy is undefined along such paths).
    """
    return _transport(path, tol, keep_amplitudes=False)


def _derivatives(samples: np.ndarray, dt: float) -> np.ndarray:
    """Second-order time derivatives: central inside, one-sided at the ends."""
    d = np.empty_like(samples)
    d[1:-1] = (samples[2:] - samples[:-2]) / (2 * dt)
    d[0] = (-3 * samples[0] + 4 * samples[1] - samples[2]) / (2 * dt)
    d[-1] = (3 * samples[-1] - 4 * samples[-2] + samples[-3]) / (2 * dt)
    return d


def _uniform_dt(grid: TimeGrid) -> float:
    steps = np.diff(grid.times)
    if steps.size and (steps.max() - steps.min()) > 1e-9 * steps.max():
        raise ValueError("finite differences need a uniform grid")
    return float(steps[0])


def transport_equation_residual(
    spec: EvolutionSpec, gauge: AncillaGauge, rho0: DensityOperator
) -> float:
    """Residual of the operator transport equation for W(t) = U(t) rho0^{1/2} B(t).

    Checks 2 rho^{1/2} U^dag dU/dt rho^{1/2} = B dB^dag/dt rho - rho dB/dt B^dag
    with finite-difference derivatives; the max runs over interior grid
    points. A small value certifies that the gauge makes the lift parallel.
    """
    n = gauge.grid.times.size
    if n < 3:
        raise GridTooCoarse("need at least three grid points for central differences")
    dt = _uniform_dt(gauge.grid)
    us = np.array([unitary_at(spec, float(t)) for t in gauge.grid.times])
    bs = np.array(gauge.samples)
    du = _derivatives(us, dt)
    db = _derivatives(bs, dt)
    R = rho0.sqrt
    rho = rho0.matrix
    worst = 0.0
    for k in range(1, n - 1):
        lhs = 2 * R @ dagger(us[k]) @ du[k] @ R
        rhs = bs[k] @ dagger(db[k]) @ rho - rho @ db[k] @ dagger(bs[k])
        worst = max(worst, op_norm(lhs - rhs))
    return worst


def pure_parallelity_residual(spec: EvolutionSpec, gauge: AncillaGauge, psi, phi) -> float:
    """Scalar transport-equation residual for a pure state.

    Max over the grid of |<psi|U^dag dU/dt|psi> - <phi|B^dag dB/dt|phi>|.
    """
    n = gauge.grid.times.size
    if n < 3:
        raise GridTooCoarse("need at least three grid points for central differences")
    dt = _uniform_dt(gauge.grid)
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    phi = np.asarray(phi, dtype=complex).reshape(-1)
    us = np.array([unitary_at(spec, float(t)) for t in gauge.grid.times])
    bs = np.array(gauge.samples)
    du = _derivatives(us, dt)
    db = _derivatives(bs, dt)
    worst = 0.0
    for k in range(n):
        a = psi.conj() @ (dagger(us[k]) @ du[k]) @ psi
        b = phi.conj() @ (dagger(bs[k]) @ db[k]) @ phi
        worst = max(worst, abs(a - b))
    return worst


def solve_ancilla_gauge(
    spec: EvolutionSpec,
    rho0: DensityOperator,
    grid: TimeGrid,
    tol: float = DEFAULT_TOL,
) -> AncillaGauge:
    """Recover B(t_k) such that U(t_k) rho0^{1/2} B(t_k) is the parallel lift.

    B(t_k) = rho0^{-1/2} U^dag(t_k) W(t_k) on the support of rho0 (zero
    off-support), snapped to the nearest partial isometry. For
    rank-deficient rho0 the off-support block is undetermined; the gauge
    is flagged rather than rejected.
    """
    from .evolution import density_path

    path = density_path(rho0, spec, grid)
    _, amps = _transport(path, tol, keep_amplitudes=True)
    w, V = np.linalg.eigh(rho0.matrix)
    top = max(w[-1], tol)
    inv_sqrt = np.where(w > tol * top, 1.0 / np.sqrt(np.clip(w, tol * top, None)), 0.0)
    pinv_root = (V * inv_sqrt) @ dagger(V)
    samples = []
    for t, Wt in zip(grid.times, amps):
        B = pinv_root @ dagger(unitary_at(spec, float(t))) @ Wt
        samples.append(polar_isometry(B, tol))
    deficient = rho0.rank(tol) < rho0.dim
    return AncillaGauge(samples=tuple(samples), grid=grid, rank_deficient=deficient)
