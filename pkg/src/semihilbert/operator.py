"""A-bounded operators and their compressions onto range(A).

In finite dimensions ``T`` is A-bounded exactly when it maps null(A) into
null(A), i.e. when ``A^{1/2} T N = 0`` for a basis ``N`` of null(A).  The
compression ``T_hat = Q* A^{1/2} T (A^{1/2})^+ Q`` then carries every
A-seminorm quantity of ``T`` as an ordinary matrix quantity.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EmptyRange, NotABounded, SpaceMismatch
from .linalg import as_matrix, sigma_max, svd

TOL_BOUNDED = 1e-10


@dataclass(frozen=True, eq=False)
class ACompressedOperator:
    space: object
    T: np.ndarray
    That: np.ndarray
    bound_residual: float

    def __repr__(self):
        return f"ACompressedOperator(n={self.T.shape[0]}, r={self.That.shape[0]})"


def _square(space, T, name="T"):
    T = as_matrix(T, name)
    if T.shape != (space.n, space.n):
        raise DimensionMismatch(f"{name} must be {space.n}x{space.n}, got {T.shape}")
    return T


def _bound_scale(space, T):
    return max(1.0, np.sqrt(max(space.eigvals[0], 0.0)) * sigma_max(T)) if space.n else 1.0


def check_a_bounded(space, T, tol=TOL_BOUNDED):
    """Return ``(bounded, residual)`` with ``residual = ||A^{1/2} T N||_F``."""
    T = _square(space, T)
    if space.Nbasis.shape[1] == 0:
        return True, 0.0
    residual = float(np.linalg.norm(space.B @ T @ space.Nbasis))
    return residual <= tol * _bound_scale(space, T), residual


def compress_op(space, T, tol=TOL_BOUNDED):
    T = _square(space, T)
    bounded, residual = check_a_bounded(space, T, tol)
    if not bounded:
        raise NotABounded(
            f"operator does not preserve null(A): residual {residual:.3e}", residual
        )
    Qh = space.Q.conj().T
    That = Qh @ space.B @ T @ space.Bplus @ space.Q
    return ACompressedOperator(space, T, That, residual)


def op_seminorm(op):
    """``||T||_A``, the largest singular value of the compression."""
    if op.That.size == 0:
        return 0.0
    return float(svd(op.That).s[0])


def min_modulus(op):
    """``m_A(S) = inf ||Sx||_A`` over A-unit x: the smallest singular value of the compression."""
    if op.That.size == 0:
        raise EmptyRange("A = 0: there are no A-unit vectors")
    return float(svd(op.That).s[-1])


def same_space(opT, opS):
    if opT.space is not opS.space:
        raise SpaceMismatch("operators live on different semi-Hilbert spaces")


def pencil_seminorm(opT, opS, gamma):
    """``||T + gamma S||_A`` computed from the compressions by linearity."""
    same_space(opT, opS)
    return sigma_max(opT.That + gamma * opS.That)
