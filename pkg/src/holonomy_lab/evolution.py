"""Unitary path generation: Hamiltonian specs, time grids, density paths."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, GridMiss, NotUnitary, OutOfRange
from .linalg import DEFAULT_TOL, as_square_matrix, dagger, op_norm, unitary_exp
from .state import DensityOperator

__all__ = [
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "StaticHamiltonian",
    "RotatingFrame",
    "SampledUnitaries",
    "TimeGrid",
    "unitary_at",
    "rotating_generator",
    "density_path",
]

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

_T_ATOL = 1e-12


@dataclass(frozen=True)
class TimeGrid:
    """Strictly increasing times from 0 to tau."""

    times: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or t.size < 2:
            raise ValueError("a time grid needs at least two points")
        if abs(t[0]) > _T_ATOL:
            raise ValueError("time grid must start at 0")
        if np.any(np.diff(t) <= 0):
            raise ValueError("time grid must be strictly increasing")
        object.__setattr__(self, "times", t)

    @classmethod
    def uniform(cls, tau: float, n_steps: int = 1000) -> "TimeGrid":
        if n_steps < 1:
            raise ValueError("n_steps must be positive")
        return cls(np.linspace(0.0, float(tau), n_steps + 1))

    @property
    def n_steps(self) -> int:
        return self.times.size - 1

    @property
    def tau(self) -> float:
        return float(self.times[-1])


@dataclass(frozen=True)
class StaticHamiltonian:
    """Evolution under a time-independent Hermitian generator."""

    hamiltonian: np.ndarray
    tau: float

    def __post_init__(self):
        H = as_square_matrix(self.hamiltonian)
        if op_norm(H - dagger(H)) > 1e-9:
            raise ValueError("static Hamiltonian must be Hermitian")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        object.__setattr__(self, "hamiltonian", H)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class RotatingFrame:
    """Resonant spin-flipper drive on the first factor of a bipartite space.

    The propagator is the closed-form product

        U(t) = exp(+i t H_eff) exp(+i omega t sigma_z / 2)  (x) identity,
        H_eff = (u_z + omega/2) sigma_z + u_xy sigma_x.

    The relative phases of the two factors are fixed so that the
    closed-form ancilla gauge of the Bell scenarios solves the parallel
    transport equation; see ``rotating_generator`` for the instantaneous
    Hermitian generator of this family.
    """

    u_z: float
    u_xy: float
    omega: float
    tau: float
    subsystem_dims: tuple[int, int] = (2, 2)

    def __post_init__(self):
        if self.subsystem_dims[0] != 2:
            raise ValueError("the driven subsystem must be a qubit")
        if self.tau < 0:
            raise ValueError("tau must be non-negative")

    @classmethod
    def spin_flipper(cls, u: float = 1.0) -> "RotatingFrame":
        """Single free scale u > 0: u_z = u_xy = -u/2, omega = u, tau = pi/omega."""
        if u <= 0:
            raise ValueError("the free scale u must be positive")
        return cls(u_z=-u / 2, u_xy=-u / 2, omega=u, tau=np.pi / u)

    @property
    def dim(self) -> int:
        return self.subsystem_dims[0] * self.subsystem_dims[1]

    @property
    def effective_hamiltonian(self) -> np.ndarray:
        return (self.u_z + self.omega / 2) * SIGMA_Z + self.u_xy * SIGMA_X


@dataclass(frozen=True)
class SampledUnitaries:
    """Explicit unitaries on a grid; queries off the grid are errors."""

    unitaries: tuple
    grid: TimeGrid
    tol: float = field(default=DEFAULT_TOL)

    def __post_init__(self):
        us = tuple(as_square_matrix(U) for U in self.unitaries)
        if len(us) != self.grid.times.size:
            raise ValueError("one unitary per grid time is required")
        dim = us[0].shape[0]
        eye = np.eye(dim)
        if op_norm(us[0] - eye) > self.tol * dim:
            raise NotUnitary("the first sampled unitary must be the identity")
        for k, U in enumerate(us):
            if U.shape[0] != dim:
                raise DimensionMismatch("sampled unitaries differ in dimension")
            if op_norm(dagger(U) @ U - eye) > self.tol * dim:
                raise NotUnitary(f"sample {k} is not unitary within tolerance")
        object.__setattr__(self, "unitaries", us)

    @property
    def tau(self) -> float:
        return self.grid.tau

    @property
    def dim(self) -> int:
        return self.unitaries[0].shape[0]


EvolutionSpec = StaticHamiltonian | RotatingFrame | SampledUnitaries


def _check_time(spec, t: float) -> None:
    if t < -_T_ATOL or t > spec.tau + max(_T_ATOL, 1e-12 * spec.tau):
        raise OutOfRange(f"t = {t!r} outside [0, {spec.tau!r}]")


def unitary_at(spec: EvolutionSpec, t: float) -> np.ndarray:
    """Evaluate the path unitary U(t); U(0) is always the identity."""
    _check_time(spec, t)
    if isinstance(spec, StaticHamiltonian):
        return unitary_exp(spec.hamiltonian, t)
    if isinstance(spec, RotatingFrame):
        # exp(+i t H_eff) exp(+i omega t sigma_z / 2) on the driven qubit.
        left = unitary_exp(spec.effective_hamiltonian, -t)
        right = unitary_exp(SIGMA_Z, -spec.omega * t / 2)
        return np.kron(left @ right, np.eye(spec.subsystem_dims[1], dtype=complex))
    if isinstance(spec, SampledUnitaries):
        hits = np.flatnonzero(np.isclose(spec.grid.times, t, rtol=0.0, atol=_T_ATOL * max(1.0, spec.tau)))
        if hits.size == 0:
            raise GridMiss(f"t = {t!r} is not a sample point; resample instead of interpolating")
        return spec.unitaries[int(hits[0])]
    raise TypeError(f"unknown evolution spec {type(spec).__name__}")


def rotating_generator(spec: RotatingFrame, t: float) -> np.ndarray:
    """Instantaneous Hermitian generator H(t) = i dU/dt U^dag of the rotating family.

    Useful as the input to an independent time-ordered integrator when
    cross-checking the closed-form product.
    """
    if not isinstance(spec, RotatingFrame):
        raise TypeError("rotating_generator needs a RotatingFrame spec")
    heff = spec.effective_hamiltonian
    R = unitary_exp(heff, -t)  # exp(+i t H_eff)
    h = -heff - (spec.omega / 2) * (R @ SIGMA_Z @ dagger(R))
    h = (h + dagger(h)) / 2
    return np.kron(h, np.eye(spec.subsystem_dims[1], dtype=complex))


def density_path(rho0: DensityOperator, spec: EvolutionSpec, grid: TimeGrid) -> list[DensityOperator]:
    """Conjugate rho0 by U(t) on every grid time.

    The spectrum is invariant along the path; each element is validated
    as a density operator.
    """
    if rho0.dim != spec.dim:
        raise DimensionMismatch(f"state dim {rho0.dim} vs evolution dim {spec.dim}")
    path = []
    for t in grid.times:
        U = unitary_at(spec, float(t))
        path.append(DensityOperator(U @ rho0.matrix @ dagger(U), tol=rho0.tol))
    return path
