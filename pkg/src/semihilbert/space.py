"""Semi-inner-product geometry induced by a positive semidefinite weight ``A``.

Vectors are compressed isometrically onto ``range(A)``: ``u = Q* A^{1/2} x``
satisfies ``<u_x, u_y> = <Ax, y>``, so every A-quantity becomes an ordinary
Euclidean quantity in ``C^r``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotNormalizable, NotPositive
from .linalg import as_matrix, hermitian_eig

TOL_ZERO = 1e-10


@dataclass(frozen=True, eq=False)
class SemiHilbertSpace:
    A: np.ndarray
    eigvals: np.ndarray  # descending
    r: int
    Q: np.ndarray  # n x r, orthonormal basis of range(A)
    Nbasis: np.ndarray  # n x (n - r), orthonormal basis of null(A)
    B: np.ndarray  # A^{1/2}
    Bplus: np.ndarray  # pseudoinverse of A^{1/2}
    tol_rank: float
    tol_zero: float

    @property
    def n(self):
        return self.A.shape[0]

    @property
    def sqrt_eigvals(self):
        """Square roots of the r retained eigenvalues (the diagonal of Q* B Q)."""
        return np.sqrt(self.eigvals[: self.r])

    def __repr__(self):
        return f"SemiHilbertSpace(n={self.n}, r={self.r})"


def build_space(A, tol_rank=None, tol_zero=TOL_ZERO):
    """Factor the weight ``A`` and return its :class:`SemiHilbertSpace`.

    The rank is the number of eigenvalues above ``tol_rank * lambda_1``
    (default ``tol_rank = n * 1e-12``).  ``A = 0`` is accepted and gives
    ``r = 0``.
    """
    A = as_matrix(A, "A")
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    if tol_rank is None:
        tol_rank = max(n, 1) * 1e-12
    eig = hermitian_eig(A)
    lam = eig.values
    top = lam[0] if n else 0.0
    scale = np.max(np.abs(lam)) if n else 0.0
    if n and lam[-1] < -max(tol_rank, 1e-10) * scale:
        raise NotPositive(f"A has a negative eigenvalue {lam[-1]:.3e}")
    r = int(np.sum(lam > tol_rank * top)) if top > 0 else 0

    U = eig.vectors
    Q = U[:, :r]
    Nb = U[:, r:]
    root = np.sqrt(lam[:r])
    B = (Q * root) @ Q.conj().T
    Bplus = (Q / root) @ Q.conj().T if r else np.zeros((n, n), complex)
    return SemiHilbertSpace(A, lam, r, Q, Nb, B, Bplus, tol_rank, tol_zero)


def _vec(space, x, name="x"):
    x = np.asarray(x, dtype=complex)
    if x.shape != (space.n,):
        raise DimensionMismatch(f"{name} must have length {space.n}, got shape {x.shape}")
    return x


def sip(space, x, y):
    """Semi-inner product ``<Ax, y>`` (linear in ``x``)."""
    x = _vec(space, x)
    y = _vec(space, y, "y")
    return complex(np.vdot(y, space.A @ x))


def seminorm_vec(space, x):
    x = _vec(space, x)
    return float(np.linalg.norm(space.B @ x))


def is_a_orthogonal(space, x, y, tol=1e-10):
    scale = max(1.0, seminorm_vec(space, x) * seminorm_vec(space, y))
    return abs(sip(space, x, y)) <= tol * scale


def compress_vec(space, x):
    """``Q* A^{1/2} x``: Euclidean coordinates of ``x`` in the A-geometry."""
    x = _vec(space, x)
    return space.Q.conj().T @ (space.B @ x)


def lift_vec(space, u):
    """Right inverse of :func:`compress_vec`; the result lies in range(A)."""
    u = np.asarray(u, dtype=complex)
    if u.shape != (space.r,):
        raise DimensionMismatch(f"u must have length {space.r}, got shape {u.shape}")
    return space.Bplus @ (space.Q @ u)


def a_normalize(space, x):
    """Scale ``x`` to A-seminorm one; raises NotNormalizable for A-null vectors."""
    nx = seminorm_vec(space, x)
    if nx <= space.tol_zero:
        raise NotNormalizable(f"||x||_A = {nx:.3e} is numerically zero")
    return np.asarray(x, dtype=complex) / nx
