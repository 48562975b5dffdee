import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from holonomy_lab.errors import InvalidState, NotHermitian, NotPSD
from holonomy_lab.linalg import (
    hermitian_sqrt,
    is_partial_isometry,
    op_norm,
    polar,
    support_projector,
    transition_probability,
    unitary_exp,
)

from conftest import (
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    dyad,
    random_density_matrix,
    random_hermitian,
    random_unitary,
    rho1_matrix,
    rho1_tau_matrix,
    usf_matrix,
)


# ---------------------------------------------------------------- hermitian_sqrt

def test_sqrt_identity_is_idempotent():
    assert np.allclose(hermitian_sqrt(np.eye(4)), np.eye(4))


def test_sqrt_diagonal():
    assert np.allclose(hermitian_sqrt(np.diag([4.0, 1.0, 0.0, 0.0])), np.diag([2.0, 1.0, 0.0, 0.0]))


def test_sqrt_bell_mixture_against_eigendecomposition():
    # Oracle: sqrt built directly from the known eigendecomposition.
    eps = 0.5
    expected = (dyad(PSI_MINUS, PSI_MINUS) + np.sqrt(eps) * dyad(PSI_PLUS, PSI_PLUS)) / np.sqrt(1 + eps)
    R = hermitian_sqrt(rho1_matrix(eps))
    assert np.allclose(R, expected, atol=1e-12)
    assert np.allclose(R @ R, rho1_matrix(eps), atol=1e-12)


def test_sqrt_commutes_with_input(rng):
    M = random_density_matrix(rng, 5)
    R = hermitian_sqrt(M)
    assert op_norm(R @ M - M @ R) < 1e-12


def test_sqrt_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sqrt_rejects_negative_eigenvalue():
    with pytest.raises(NotPSD):
        hermitian_sqrt(np.diag([1.0, -1e-3]))


def test_sqrt_clamps_tiny_negative():
    R = hermitian_sqrt(np.diag([1.0, -1e-12]))
    assert np.allclose(R, np.diag([1.0, 0.0]))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=2, max_value=8), st.integers(min_value=0, max_value=2**31 - 1))
def test_sqrt_squares_back_randomized(dim, seed):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    M = A @ A.conj().T
    R = hermitian_sqrt(M)
    assert op_norm(R @ R - M) <= 1e-10 * max(1.0, op_norm(M))


# ------------------------------------------------------------ support_projector

def test_support_of_zero_matrix():
    assert np.allclose(support_projector(np.zeros((3, 3))), np.zeros((3, 3)))


def test_support_of_rank_one_dyad():
    P = support_projector(dyad(PHI_PLUS, PSI_MINUS))
    assert np.allclose(P, dyad(PHI_PLUS, PHI_PLUS), atol=1e-12)


def test_support_of_static_invariant_is_phi_plane():
    # X1 = U_sf rho1(0) has left range span{Phi+, Phi-} for eps > 0.
    X = usf_matrix() @ rho1_matrix(0.5)
    P = support_projector(X @ X.conj().T)
    expected = dyad(PHI_PLUS, PHI_PLUS) + dyad(PHI_MINUS, PHI_MINUS)
    assert np.allclose(P, expected, atol=1e-12)
    # SVD oracle computed right here.
    U, s, _ = np.linalg.svd(X)
    kept = U[:, s > 1e-9 * s[0]]
    assert np.allclose(P, kept @ kept.conj().T, atol=1e-12)


def test_support_is_projector(rng):
    X = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    P = support_projector(X)
    assert np.allclose(P @ P, P, atol=1e-12)
    assert np.allclose(P @ X, X, atol=1e-12)


# ------------------------------------------------------------------------ polar

def test_polar_of_unitary(rng):
    V = random_unitary(rng, 4)
    f = polar(V, "left")
    assert np.allclose(f.isometry, V, atol=1e-12)
    assert np.allclose(f.positive_part, np.eye(4), atol=1e-12)


def test_polar_of_singular_diagonal():
    f = polar(np.diag([2.0, 0.0]), "right")
    assert np.allclose(f.isometry, np.diag([1.0, 0.0]))
    assert np.allclose(f.positive_part, np.diag([2.0, 0.0]))


def test_polar_static_order_two_invariant():
    # X12 = U_sf rho1(0) U_sf rho2(0) at eps = 0.5 is a negative operator on
    # the Phi plane, so its isometry is minus the plane projector.
    usf = usf_matrix()
    X = usf @ rho1_matrix(0.5) @ usf @ rho1_tau_matrix(0.5)
    expected = -(dyad(PHI_PLUS, PHI_PLUS) + dyad(PHI_MINUS, PHI_MINUS))
    left = polar(X, "left")
    right = polar(X, "right")
    assert np.allclose(left.isometry, expected, atol=1e-10)
    assert op_norm(left.isometry - right.isometry) < 1e-10
    # SVD oracle, written out independently.
    U, s, Vh = np.linalg.svd(X)
    kept = s > 1e-9 * s[0]
    assert np.allclose(U[:, kept] @ Vh[kept, :], expected, atol=1e-10)


def test_polar_reconstruction_and_kernel(rng):
    X = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    X[:, 0] = 0.0  # force a kernel direction
    f = polar(X, "left")
    assert op_norm(f.isometry @ f.positive_part - X) < 1e-10
    # Ker(isometry) contains Ker(X): the zeroed column stays zeroed.
    e0 = np.zeros(5)
    e0[0] = 1.0
    assert np.linalg.norm(f.isometry @ e0) < 1e-10
    assert is_partial_isometry(f.isometry)


def test_polar_matches_scipy_on_full_rank(rng):
    # scipy computes the unitary polar factor; on full-rank inputs the
    # partial-isometry convention coincides with it.
    X = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    u_scipy, p_scipy = scipy.linalg.polar(X, side="right")
    f = polar(X, "left")
    assert op_norm(f.isometry - u_scipy) < 1e-10
    assert op_norm(f.positive_part - p_scipy) < 1e-10


# ---------------------------------------------------------- is_partial_isometry

def test_partial_isometry_examples():
    assert is_partial_isometry(np.eye(3))
    assert is_partial_isometry(np.diag([1.0, 0.0]))
    assert not is_partial_isometry(np.diag([2.0, 0.0]))
    assert is_partial_isometry(usf_matrix())


# ------------------------------------------------------------------ unitary_exp

def test_unitary_exp_at_zero(rng):
    H = random_hermitian(rng, 4)
    assert np.allclose(unitary_exp(H, 0.0), np.eye(4))


def test_unitary_exp_spin_flip():
    # exp(-i (pi/2) sigma_y x 1) sends (|0>, |1>) to (|1>, -|0>) on the first factor.
    H = np.kron(np.array([[0, -1j], [1j, 0]]), np.eye(2))
    U = unitary_exp(H, np.pi / 2)
    assert np.allclose(U, usf_matrix(), atol=1e-12)
    e00 = np.array([1, 0, 0, 0], dtype=complex)
    e10 = np.array([0, 0, 1, 0], dtype=complex)
    assert np.allclose(U @ e00, e10, atol=1e-12)
    assert np.allclose(U @ e10, -e00, atol=1e-12)


def test_unitary_exp_sigma_z_scalar_oracle():
    # Scalar exponentials on the eigenbasis: diag(e^{-it}, e^{+it}).
    U = unitary_exp(np.diag([1.0, -1.0]), np.pi / 2)
    assert np.allclose(U, np.diag([-1j, 1j]), atol=1e-12)
    assert np.allclose(unitary_exp(np.diag([1.0, -1.0]), np.pi), -np.eye(2), atol=1e-12)


def test_unitary_exp_group_law(rng):
    H = random_hermitian(rng, 3)
    assert op_norm(unitary_exp(H, 1.1) @ unitary_exp(H, 0.6) - unitary_exp(H, 1.7)) < 1e-12


def test_unitary_exp_stays_unitary(rng):
    H = random_hermitian(rng, 4)
    for t in np.linspace(0.0, 10.0, 11):
        U = unitary_exp(H, float(t))
        assert op_norm(U.conj().T @ U - np.eye(4)) < 1e-10


def test_unitary_exp_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        unitary_exp(np.array([[0.0, 1.0], [0.0, 0.0]]), 1.0)


# ------------------------------------------------------- transition_probability

def test_transition_probability_of_identical_states(rng):
    rho = random_density_matrix(rng, 4)
    assert transition_probability(rho, rho) == pytest.approx(1.0, abs=1e-12)


def test_transition_probability_orthogonal_pure():
    a = np.diag([1.0, 0.0]).astype(complex)
    b = np.diag([0.0, 1.0]).astype(complex)
    assert transition_probability(a, b) == pytest.approx(0.0, abs=1e-12)


def test_transition_probability_bell_mixtures_orthogonal():
    # rho1(0) lives on the Psi plane, rho1(tau) on the Phi plane.
    assert transition_probability(rho1_matrix(0.5), rho1_tau_matrix(0.5)) < 1e-12


def test_transition_probability_pure_overlap(rng):
    for _ in range(10):
        a = rng.normal(size=3) + 1j * rng.normal(size=3)
        b = rng.normal(size=3) + 1j * rng.normal(size=3)
        a, b = a / np.linalg.norm(a), b / np.linalg.norm(b)
        f = transition_probability(np.outer(a, a.conj()), np.outer(b, b.conj()))
        assert f == pytest.approx(abs(a.conj() @ b) ** 2, abs=1e-12)


def test_transition_probability_against_sandwich_formula(rng):
    # Independent route: eigenvalues of the sandwiched operator.
    rho = random_density_matrix(rng, 4)
    sigma = random_density_matrix(rng, 4)
    R = hermitian_sqrt(rho)
    w = np.clip(np.linalg.eigvalsh(R @ sigma @ R), 0.0, None)
    expected = float(np.sum(np.sqrt(w)) ** 2)
    assert transition_probability(rho, sigma) == pytest.approx(expected, abs=1e-10)


def test_transition_probability_symmetric_and_bounded(rng):
    rho = random_density_matrix(rng, 3, rank=2)
    sigma = random_density_matrix(rng, 3)
    f = transition_probability(rho, sigma)
    assert 0.0 <= f <= 1.0
    assert f == pytest.approx(transition_probability(sigma, rho), abs=1e-12)


def test_transition_probability_rejects_invalid():
    with pytest.raises(InvalidState):
        transition_probability(np.diag([0.4, 0.4]), np.diag([0.5, 0.5]))
