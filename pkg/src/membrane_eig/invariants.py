"""Stretch invariants of a 3x2 deformation gradient: values, gradients,
Hessian-vector products, and full closed-form Hessian eigensystems.

With F = U pad(sigma1, sigma2) V^T the three invariants are

    I1 = sigma1 + sigma2        (sum of principal stretches)
    I2 = F : F = sigma1^2 + sigma2^2
    I3 = sigma1 * sigma2        (area stretch ratio)

and they satisfy I1^2 = I2 + 2*I3.  Any isotropic membrane energy density is
a function of these three, so its gradient and Hessian are assembled from the
per-invariant pieces computed here.

Every Hessian here is a linear operator on 3x2 matrices.  Its six eigenpairs
(eigenvalue, unit-Frobenius-norm 3x2 eigenmatrix) are returned in a fixed
slot order used package-wide:

    [diag-block mode 1, diag-block mode 2, twist, flip, normal-1, normal-2]

where, writing L[C] = U C V^T for a 3x2 coefficient matrix C,

    twist    = L[[0,-1],[1,0],[0,0]] / sqrt(2)
    flip     = L[[0, 1],[1,0],[0,0]] / sqrt(2)
    normal-1 = L[[0, 0],[0,0],[1,0]]
    normal-2 = L[[0, 0],[0,0],[0,1]]

and the two diag-block modes lie in span{L[E11], L[E22]} (in-plane diagonal
perturbations).  The first four slots have an identically zero third row in
the rotated frame; the last two live entirely in that row.
"""

import math
from dataclasses import dataclass

import numpy as np

from .svd import SIGMA_EPS

__all__ = [
    "DegenerateHessian",
    "Invariants",
    "EigenSystem6",
    "invariants",
    "invariant_gradients",
    "invariant_hvp",
    "invariant_eigensystem",
]

_SQRT_HALF = math.sqrt(0.5)

# Coefficient matrices of the recurring modes, in the rotated frame.
_C_SCALE = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]) * _SQRT_HALF
_C_ANTISCALE = np.array([[1.0, 0.0], [0.0, -1.0], [0.0, 0.0]]) * _SQRT_HALF
_C_TWIST = np.array([[0.0, -1.0], [1.0, 0.0], [0.0, 0.0]]) * _SQRT_HALF
_C_FLIP = np.array([[0.0, 1.0], [1.0, 0.0], [0.0, 0.0]]) * _SQRT_HALF
_C_D1 = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]])
_C_D2 = np.array([[0.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
_C_E12 = np.array([[0.0, 1.0], [0.0, 0.0], [0.0, 0.0]])
_C_E21 = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]])
_C_N1 = np.array([[0.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
_C_N2 = np.array([[0.0, 0.0], [0.0, 0.0], [0.0, 1.0]])


class DegenerateHessian(ValueError):
    """An invariant Hessian formula divides by a vanishing sigma combination."""

    def __init__(self, invariant, sigma):
        self.invariant = invariant
        self.sigma = tuple(sigma)
        super().__init__(
            f"Hessian of {invariant} is degenerate at sigma = {self.sigma}"
        )


@dataclass(frozen=True)
class Invariants:
    """Invariant values at one deformation gradient."""

    i1: float
    i2: float
    i3: float


@dataclass(frozen=True, eq=False)
class EigenSystem6:
    """Six eigenpairs of a Hessian acting on 3x2 matrices.

    ``values`` is shape (6,), ``matrices`` is shape (6, 3, 2) with
    unit-Frobenius-norm, pairwise-orthogonal eigenmatrices, ordered by the
    package-wide slot convention (see module docstring).
    """

    values: np.ndarray
    matrices: np.ndarray

    def pairs(self):
        """Iterate (eigenvalue, eigenmatrix) pairs in slot order."""
        return zip(self.values, self.matrices)

    def apply(self, x):
        """Apply the represented operator: sum_i values[i] (q_i : x) q_i."""
        dots = np.einsum("kij,ij->k", self.matrices, np.asarray(x, float))
        return np.einsum("k,kij->ij", self.values * dots, self.matrices)

    def dense6(self):
        """Materialize as a symmetric 6x6 matrix over row-major flattening."""
        q = self.matrices.reshape(6, 6)
        return (q.T * self.values) @ q


def _lift(svd, coeffs):
    return svd.u @ coeffs @ svd.v.T


def invariants(svd):
    """Invariant values from a decomposition."""
    s1, s2 = svd.sigma
    return Invariants(i1=s1 + s2, i2=s1 * s1 + s2 * s2, i3=s1 * s2)


def invariant_gradients(svd, f):
    """Gradients of (I1, I2, I3) with respect to F, each a 3x2 array.

    g1 = U pad(1, 1) V^T, g2 = 2 F, g3 = U pad(sigma2, sigma1) V^T.
    Defined for every decomposition, degenerate or not.
    """
    s1, s2 = svd.sigma
    g1 = svd.u[:, :2] @ svd.v.T
    g2 = 2.0 * np.asarray(f, dtype=float)
    g3 = (svd.u[:, :2] * (s2, s1)) @ svd.v.T
    return g1, g2, g3


def _rotated(svd, fdot):
    return svd.u.T @ np.asarray(fdot, dtype=float) @ svd.v


def _hvp_i1(svd, w):
    # w = U^T Fdot V.  Divides by sigma1 + sigma2, sigma1, sigma2.
    s1, s2 = svd.sigma
    s12 = s1 + s2
    coeffs = np.array(
        [
            [0.0, (w[0, 1] - w[1, 0]) / s12],
            [(w[1, 0] - w[0, 1]) / s12, 0.0],
            [w[2, 0] / s1, w[2, 1] / s2],
        ]
    )
    return _lift(svd, coeffs)


def _hvp_i3(svd, w):
    # Divides by sigma1 and sigma2.
    s1, s2 = svd.sigma
    coeffs = np.array(
        [
            [w[1, 1], -w[1, 0]],
            [-w[0, 1], w[0, 0]],
            [(s2 / s1) * w[2, 0], (s1 / s2) * w[2, 1]],
        ]
    )
    return _lift(svd, coeffs)


def _require(svd, invariant):
    s1, s2 = svd.sigma
    if s1 <= SIGMA_EPS or s2 <= SIGMA_EPS or s1 + s2 <= SIGMA_EPS:
        raise DegenerateHessian(invariant, svd.sigma)


def invariant_hvp(svd, fdot):
    """Hessian-vector products (H1:Fdot, H2:Fdot, H3:Fdot).

    H2:Fdot = 2 Fdot exactly.  H1 and H3 are evaluated through the rotated
    frame and require nondegenerate singular values.

    Raises
    ------
    DegenerateHessian
        Naming the first invariant whose sigma requirement fails.
    """
    fdot = np.asarray(fdot, dtype=float)
    _require(svd, "I1")
    w = _rotated(svd, fdot)
    h1 = _hvp_i1(svd, w)
    h2 = 2.0 * fdot
    _require(svd, "I3")
    h3 = _hvp_i3(svd, w)
    return h1, h2, h3


def _system(svd, block_pairs, lam_twist, lam_flip, lam_n1, lam_n2):
    (la, ca), (lb, cb) = block_pairs
    values = np.array([la, lb, lam_twist, lam_flip, lam_n1, lam_n2])
    matrices = np.stack(
        [
            _lift(svd, ca),
            _lift(svd, cb),
            _lift(svd, _C_TWIST),
            _lift(svd, _C_FLIP),
            _lift(svd, _C_N1),
            _lift(svd, _C_N2),
        ]
    )
    return EigenSystem6(values=values, matrices=matrices)


def invariant_eigensystem(which, svd):
    """Closed-form eigensystem of one invariant's Hessian.

    Parameters
    ----------
    which : str
        "I1", "I2", or "I3".
    svd : Svd32

    Returns
    -------
    EigenSystem6

    Notes
    -----
    I2's Hessian is 2 * identity, so any orthonormal basis works; the lifted
    canonical basis is returned (E11, E22, E12, E21, E31, E32 order).  I1 and
    I3 require nondegenerate singular values.
    """
    s1, s2 = svd.sigma
    if which == "I2":
        values = np.full(6, 2.0)
        matrices = np.stack(
            [
                _lift(svd, _C_D1),
                _lift(svd, _C_D2),
                _lift(svd, _C_E12),
                _lift(svd, _C_E21),
                _lift(svd, _C_N1),
                _lift(svd, _C_N2),
            ]
        )
        return EigenSystem6(values=values, matrices=matrices)
    if which == "I1":
        _require(svd, "I1")
        return _system(
            svd,
            ((0.0, _C_SCALE), (0.0, _C_ANTISCALE)),
            2.0 / (s1 + s2),
            0.0,
            1.0 / s1,
            1.0 / s2,
        )
    if which == "I3":
        _require(svd, "I3")
        return _system(
            svd,
            ((1.0, _C_SCALE), (-1.0, _C_ANTISCALE)),
            1.0,
            -1.0,
            s2 / s1,
            s1 / s2,
        )
    raise ValueError(f"unknown invariant {which!r}; expected 'I1', 'I2' or 'I3'")
