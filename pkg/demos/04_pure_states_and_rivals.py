# Pure-state reduction and the rival interferometric phase.
#
# For rank-1 states moved by a unitary that parallel-transports them, the
# trace of the order-l invariant collapses to a cyclic product of
# overlaps <psi_1|U|psi_2><psi_2|U|psi_3>...<psi_l|U|psi_1>, and the
# interferometric definition Phi[Tr(U rho^{1/l} ... )] assigns exactly
# the same phase. Away from pure states the two constructions impose
# different transport conditions and genuinely disagree.

import numpy as np

from holonomy_lab import (
    PermutedFamily,
    StaticHamiltonian,
    TimeGrid,
    discrepancy_report,
)
from holonomy_lab.linalg import unitary_exp

rng = np.random.default_rng(11)
dim = 4

Q = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))[0]
H = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
H = (H + H.conj().T) / 2
for k in range(dim):
    v = Q[:, k]
    H = H - (v.conj() @ H @ v).real * np.outer(v, v.conj())  # parallel-transporting
spec = StaticHamiltonian(H, tau=1.0)

U = unitary_exp(H, 1.0)
barg = (Q[:, 0].conj() @ U @ Q[:, 1]) * (Q[:, 1].conj() @ U @ Q[:, 0])
print(f"Bargmann product of overlaps:      arg = {np.angle(barg):+.6f}")

lam_pure = np.zeros(dim)
lam_pure[0] = 1.0
swap = (1, 0) + tuple(range(2, dim))
pure_family = PermutedFamily(lam_pure, Q, (tuple(range(dim)), swap))
rep = discrepancy_report(spec, pure_family, l=2)
print(f"pure family:  gamma = {rep.gamma:+.6f}   nu = {rep.nu:+.6f}   "
      f"difference = {rep.difference:+.2e}")

lam_mixed = np.array([1.0, 0.5, 0.25, 0.125])
lam_mixed = lam_mixed / lam_mixed.sum()
mixed_family = PermutedFamily(lam_mixed, Q, (tuple(range(dim)), swap))
rep = discrepancy_report(spec, mixed_family, l=2, grid=TimeGrid.uniform(1.0, 2000))
print(f"mixed family: gamma = {rep.gamma:+.6f}   nu = {rep.nu:+.6f}   "
      f"difference = {rep.difference:+.6f}")
print()
print("The pure difference sits at numerical zero; the mixed one does not.")
print("Each pipeline ran under its own transport convention: the holonomy")
print("side through the discrete transporter, the interferometric side")
print("straight from U(tau) and the l-th roots of the states.")
