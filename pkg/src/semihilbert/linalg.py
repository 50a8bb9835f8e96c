"""Dense complex linear algebra used by the rest of the package.

The eigensolver is a cyclic complex Jacobi method; the SVD is derived from the
Hermitian eigendecomposition of ``M* M``.  Both are deterministic and accurate
for the small matrices this package works with (n up to a few dozen).

Optimisation loops that evaluate the largest singular value thousands of times
go through :func:`sigma_max` / :func:`svdvals`, which call LAPACK.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NoConvergence, NotHermitian

TOL_EIG = 1e-12
MAX_SWEEPS = 60


@dataclass(frozen=True)
class HermitianEigen:
    values: np.ndarray  # real, descending
    vectors: np.ndarray  # unitary, columns are eigenvectors


@dataclass(frozen=True)
class SvdResult:
    s: np.ndarray  # descending, length min(m, n)
    U: np.ndarray  # m x min(m, n), orthonormal columns
    V: np.ndarray  # n x min(m, n), orthonormal columns


def as_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D complex array."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} has non-finite entries")
    return M


def _rotation(app, aqq, apq):
    """2x2 unitary that diagonalises [[app, apq], [conj(apq), aqq]]."""
    mag = abs(apq)
    phase = apq / mag
    theta = (aqq - app) / (2.0 * mag)
    t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0)) if theta != 0 else 1.0
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # [[a, |b|], [|b|, d]] = D* H D with D = diag(1, conj(phase)); real Jacobi on the middle factor.
    return np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])


def hermitian_eig(M, tol_eig=TOL_EIG):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Eigenvalues are returned in descending order.  Raises ``NotHermitian`` when
    ``||M - M*||_F > tol_eig * ||M||_F`` and ``NoConvergence`` if the sweep
    budget runs out.
    """
    M = as_matrix(M)
    n, m = M.shape
    if n != m:
        raise DimensionMismatch(f"hermitian_eig needs a square matrix, got {M.shape}")
    norm = np.linalg.norm(M)
    if np.linalg.norm(M - M.conj().T) > tol_eig * norm:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    if n == 0 or norm == 0.0:
        return HermitianEigen(np.zeros(n), np.eye(n, dtype=complex))

    H = 0.5 * (M + M.conj().T)
    V = np.eye(n, dtype=complex)
    target = 1e-15 * norm
    for _ in range(MAX_SWEEPS):
        off = np.linalg.norm(H - np.diag(np.diag(H)))
        if off <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = H[p, q]
                if abs(apq) <= 1e-300:
                    continue
                G = _rotation(H[p, p].real, H[q, q].real, apq)
                idx = [p, q]
                H[:, idx] = H[:, idx] @ G
                H[idx, :] = G.conj().T @ H[idx, :]
                H[p, q] = H[q, p] = 0.0
                H[p, p] = H[p, p].real
                H[q, q] = H[q, q].real
                V[:, idx] = V[:, idx] @ G
    else:
        raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")

    values = np.diag(H).real.copy()
    order = np.argsort(-values, kind="stable")
    return HermitianEigen(values[order], V[:, order])


def _orthonormal_complement(U, m):
    """Columns extending the orthonormal columns of ``U`` (m x j) to m x m."""
    basis = [U[:, i] for i in range(U.shape[1])]
    for e in np.eye(m, dtype=complex):
        v = e.copy()
        for _ in range(2):
            for b in basis:
                v = v - b * np.vdot(b, v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis.append(v / nv)
        if len(basis) == m:
            break
    return np.column_stack(basis[U.shape[1]:]) if len(basis) > U.shape[1] else np.zeros((m, 0), complex)


def svd(M, tol_eig=TOL_EIG):
    """Thin SVD of ``M`` via the Hermitian eigendecomposition of ``M* M``.

    Left vectors for tiny singular values are rebuilt by Gram-Schmidt so that
    ``U`` always has orthonormal columns.
    """
    M = as_matrix(M)
    m, n = M.shape
    if m < n:
        r = svd(M.conj().T, tol_eig)
        return SvdResult(r.s, r.V, r.U)
    k = n
    if k == 0:
        return SvdResult(np.zeros(0), np.zeros((m, 0), complex), np.zeros((n, 0), complex))

    G = M.conj().T @ M
    eig = hermitian_eig(0.5 * (G + G.conj().T), tol_eig)
    V = eig.vectors
    MV = M @ V
    # singular values from column norms are more accurate than sqrt of eigenvalues
    s = np.linalg.norm(MV, axis=0)
    order = np.argsort(-s, kind="stable")
    s, V, MV = s[order], V[:, order], MV[:, order]

    U = np.zeros((m, k), dtype=complex)
    cut = max(s[0], 1.0e-300) * 1e-8
    good = s > cut
    U[:, good] = MV[:, good] / s[good]
    # re-orthonormalise (modified Gram-Schmidt) and complete the small-sigma columns
    basis = []
    for j in range(k):
        if not good[j]:
            continue
        v = U[:, j]
        for b in basis:
            v = v - b * np.vdot(b, v)
        U[:, j] = v / np.linalg.norm(v)
        basis.append(U[:, j])
    missing = np.flatnonzero(~good)
    if missing.size:
        fill = _orthonormal_complement(np.column_stack(basis) if basis else np.zeros((m, 0), complex), m)
        U[:, missing] = fill[:, : missing.size]
    return SvdResult(s, U, V)


def pinv(M, tol_rank=None):
    """Moore-Penrose pseudoinverse; singular values below ``tol_rank * s1`` count as zero."""
    M = as_matrix(M)
    m, n = M.shape
    if tol_rank is None:
        tol_rank = max(m, n) * 1e-12
    res = svd(M)
    if res.s.size == 0 or res.s[0] == 0.0:
        return np.zeros((n, m), dtype=complex)
    keep = res.s > tol_rank * res.s[0]
    return (res.V[:, keep] / res.s[keep]) @ res.U[:, keep].conj().T


def sigma_max(M):
    """Largest singular value (LAPACK); 0 for empty matrices."""
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def svdvals(M):
    if M.size == 0:
        return np.zeros(0)
    return np.linalg.svd(M, compute_uv=False)
