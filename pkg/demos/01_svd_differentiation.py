"""
Differentiating a thin SVD
==========================

A 3x2 deformation gradient F factors as U * diag(s1, s2) * V^T with
rotations U (3x3, third column = deformed surface normal) and V (2x2).
When F moves with velocity Fdot, the factors move too: the singular
values drift and the frames spin.  svd_rates recovers those speeds in
closed form; here we sanity-check them against finite differences.
"""

import numpy as np

from membrane_eig import svd32, svd_rates

rng = np.random.default_rng(7)
f = rng.uniform(-2.0, 2.0, (3, 2))
fdot = rng.uniform(-1.0, 1.0, (3, 2))

svd = svd32(f)
print("F =\n", f)
print("sigma =", svd.sigma)
print("deformed normal =", svd.u[:, 2])

rates = svd_rates(svd, fdot)
print("\nclosed-form rates:")
print("  sigma_dot =", rates.sigma_dot)
print("  omega (3D spin of U) =", rates.omega)
print("  alpha (spin of V)    =", rates.alpha)

# Finite-difference comparison: advance F a tiny step along Fdot and
# watch how the factors actually move.
h = 1e-6
ahead = svd32(f + h * fdot)
behind = svd32(f - h * fdot)

fd_sigma_dot = (np.array(ahead.sigma) - np.array(behind.sigma)) / (2.0 * h)
print("\nfinite-difference sigma_dot =", fd_sigma_dot)
print("agreement:", np.max(np.abs(fd_sigma_dot - rates.sigma_dot)))

# The spin of U, expressed in U's own column frame: U(t) ~ U(0) (I + t G)
# with G antisymmetric, so G = U^T Udot and omega = (G21, G02, G10).
fd_udot = (ahead.u - behind.u) / (2.0 * h)
gen = svd.u.T @ fd_udot
fd_omega = np.array([gen[2, 1], gen[0, 2], gen[1, 0]])
print("\nfinite-difference omega =", fd_omega)
print("agreement:", np.max(np.abs(fd_omega - rates.omega)))

# Same idea for the 2x2 frame: alpha is the (0, 1) entry of V^T Vdot.
fd_vdot = (ahead.v - behind.v) / (2.0 * h)
fd_alpha = (svd.v.T @ fd_vdot)[0, 1]
print("\nfinite-difference alpha =", fd_alpha)
print("agreement:", abs(fd_alpha - rates.alpha))
