import numpy as np
import pytest

from holonomy_lab.errors import DimensionMismatch, InvalidState, SupportMismatch
from holonomy_lab.linalg import op_norm
from holonomy_lab.state import (
    Amplitude,
    DensityOperator,
    GaugeIsometry,
    apply_gauge,
    parallelity_residual,
    standard_purification,
)

from conftest import (
    PSI_MINUS,
    PSI_PLUS,
    dyad,
    random_density_matrix,
    random_unitary,
    rho1_matrix,
)


# -------------------------------------------------------------- DensityOperator

def test_density_operator_validation():
    with pytest.raises(InvalidState):
        DensityOperator(np.array([[0.5, 0.5], [0.0, 0.5]]))  # not Hermitian
    with pytest.raises(InvalidState):
        DensityOperator(np.diag([1.2, -0.2]))  # negative eigenvalue
    with pytest.raises(InvalidState, match="trace"):
        DensityOperator(np.diag([0.4, 0.4]))


def test_density_operator_eigendata():
    rho = DensityOperator(rho1_matrix(0.5))
    assert rho.dim == 4
    assert rho.rank() == 2
    assert np.allclose(np.sort(rho.eigenvalues)[-2:], [1 / 3, 2 / 3])
    V = rho.eigenvectors
    assert np.allclose(V.conj().T @ V, np.eye(4), atol=1e-12)


def test_pure_and_maximally_mixed():
    rho = DensityOperator.pure(np.array([3.0, 4.0j]))  # normalizes
    assert rho.rank() == 1
    assert np.trace(rho.matrix).real == pytest.approx(1.0)
    mm = DensityOperator.maximally_mixed(3)
    assert np.allclose(mm.matrix, np.eye(3) / 3)


def test_support_projector_of_state():
    rho = DensityOperator(rho1_matrix(0.5))
    P = rho.support
    expected = dyad(PSI_PLUS, PSI_PLUS) + dyad(PSI_MINUS, PSI_MINUS)
    assert np.allclose(P, expected, atol=1e-12)


# --------------------------------------------------------- standard_purification

def test_purification_of_pure_state():
    rho = DensityOperator.pure(np.array([1.0, 0.0]))
    W = standard_purification(rho)
    assert np.allclose(W.matrix, np.diag([1.0, 0.0]))


def test_purification_of_maximally_mixed():
    W = standard_purification(DensityOperator.maximally_mixed(2))
    assert np.allclose(W.matrix, np.eye(2) / np.sqrt(2))


def test_purification_recovers_state(rng):
    rho = DensityOperator(random_density_matrix(rng, 5))
    W = standard_purification(rho)
    assert op_norm(W.matrix @ W.matrix.conj().T - rho.matrix) < 1e-12


def test_amplitude_rejects_non_state():
    with pytest.raises(InvalidState):
        Amplitude(np.eye(2))  # W W^dag has trace 2


# ------------------------------------------------------------------ apply_gauge

def test_apply_gauge_identity():
    W = standard_purification(DensityOperator(rho1_matrix(0.5)))
    out = apply_gauge(W, GaugeIsometry(np.eye(4)))
    assert np.allclose(out.matrix, W.matrix)


def test_apply_gauge_unitary_preserves_state(rng):
    rho = DensityOperator(random_density_matrix(rng, 4))
    W = standard_purification(rho)
    S = GaugeIsometry(random_unitary(rng, 4))
    out = apply_gauge(W, S)
    assert op_norm(out.matrix @ out.matrix.conj().T - rho.matrix) < 1e-12


def test_apply_gauge_moves_ancilla_only():
    # W = |0><0|, S = |0><1|: the purification moves to |0><1|, same state.
    W = Amplitude(np.diag([1.0, 0.0]))
    S = GaugeIsometry(np.array([[0.0, 1.0], [0.0, 0.0]]))
    out = apply_gauge(W, S)
    assert np.allclose(out.matrix, np.array([[0.0, 1.0], [0.0, 0.0]]))
    assert np.allclose(out.state().matrix, W.state().matrix)


def test_apply_gauge_support_mismatch():
    W = Amplitude(np.diag([1.0, 0.0]))
    S = GaugeIsometry(np.array([[0.0, 0.0], [1.0, 0.0]]))  # left support misses W
    with pytest.raises(SupportMismatch):
        apply_gauge(W, S)


def test_apply_gauge_dimension_mismatch():
    W = Amplitude(np.diag([1.0, 0.0]))
    with pytest.raises(DimensionMismatch):
        apply_gauge(W, GaugeIsometry(np.eye(3)))


def test_gauge_isometry_validation():
    with pytest.raises(InvalidState):
        GaugeIsometry(np.diag([2.0, 0.0]))


# --------------------------------------------------------- parallelity_residual

def test_parallelity_of_amplitude_with_itself(rng):
    W = standard_purification(DensityOperator(random_density_matrix(rng, 4)))
    assert parallelity_residual(W, W) < 1e-14


def test_parallelity_detects_phase():
    rho = DensityOperator.pure(np.array([1.0, 0.0]))
    W = standard_purification(rho)
    W2 = Amplitude(W.matrix * np.exp(1j * np.pi / 2))
    assert parallelity_residual(W, W2) > 0.5


def test_parallelity_swap_symmetry(rng):
    W = standard_purification(DensityOperator(random_density_matrix(rng, 3)))
    W2 = Amplitude(random_unitary(rng, 3) @ standard_purification(
        DensityOperator(random_density_matrix(rng, 3))).matrix)
    assert parallelity_residual(W, W2) == pytest.approx(parallelity_residual(W2, W), abs=1e-12)


def test_parallelity_of_transported_neighbours():
    # Consecutive amplitudes from the transporter are parallel by construction.
    from holonomy_lab.evolution import StaticHamiltonian, TimeGrid, density_path
    from holonomy_lab.transport import discrete_holonomy

    rho = DensityOperator(rho1_matrix(0.5))
    spec = StaticHamiltonian(np.kron(np.array([[0, -1j], [1j, 0]]), np.eye(2)), tau=np.pi / 2)
    res = discrete_holonomy(density_path(rho, spec, TimeGrid.uniform(np.pi / 2, 200)))
    assert res.max_step_parallelity_residual <= 1e-8
