"""A-Birkhoff-James orthogonality via the convex set W_A(T, S).

With ``V`` an orthonormal basis of the maximal right singular subspace of the
compression ``T_hat``, the set W_A(T, S) is the numerical range of

    C = V* S_hat* T_hat V,

because ``<Tx, Sx>_A = (S_hat u)* (T_hat u)`` for ``u`` the compressed ``x``.
``T`` is orthogonal to ``S`` exactly when ``0`` lies in that numerical range,
which is decided through the support function
``h(theta) = lambda_max((e^{-i theta} C + e^{i theta} C*) / 2)``.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .errors import WitnessNotFound, ZeroOperator
from .linalg import svd
from .operator import op_seminorm, same_space
from .space import lift_vec, seminorm_vec, sip

TOL_MULT = 1e-8
TOL_MEMBER = 1e-9  # relative to ||T||_A ||S||_A
TOL_WITNESS = 1e-7
N_THETA = 256

_GOLD = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class MaximalSubspace:
    V: np.ndarray  # r x k, orthonormal columns
    k: int
    sigma1: float


@dataclass(frozen=True, eq=False)
class OrthogonalitySet:
    C: np.ndarray
    thetas: np.ndarray
    h: np.ndarray
    points: np.ndarray  # complex boundary points b(theta_j)
    vectors: np.ndarray  # (m, k) unit vectors with w* C w = b(theta_j)
    contains_zero: bool
    margin: float
    tol_member: float
    radius: float  # ||T||_A ||S||_A, a bound on |xi| for xi in the set

    def polygon(self):
        """Boundary polygon as a list of ``(re, im)`` pairs."""
        return [(float(z.real), float(z.imag)) for z in self.points]

    def csv_lines(self):
        return [
            f"{float(t)!r},{float(h)!r},{float(z.real)!r},{float(z.imag)!r}"
            for t, h, z in zip(self.thetas, self.h, self.points)
        ]


@dataclass(frozen=True, eq=False)
class BJResult:
    orthogonal: bool
    margin: float
    wset: object = None  # OrthogonalitySet, or None for the zero-operator shortcuts
    reason: str = "wset"


@dataclass(frozen=True, eq=False)
class Witness:
    x: np.ndarray
    u: np.ndarray  # compressed x, a unit vector in C^r
    seminorm_gap: float
    sip_residual: float
    method: str = field(default="")


def maximal_subspace(opT, tol_mult=TOL_MULT):
    """Right singular vectors of ``T_hat`` whose singular value is within ``tol_mult`` of the top."""
    res = svd(opT.That) if opT.That.size else None
    s1 = float(res.s[0]) if res is not None else 0.0
    if s1 <= opT.space.tol_zero:
        raise ZeroOperator(f"||T||_A = {s1:.3e} is numerically zero")
    keep = res.s >= s1 * (1.0 - tol_mult)
    V = res.V[:, keep]
    return MaximalSubspace(V, V.shape[1], s1)


def _herm_parts(C, thetas):
    ph = np.exp(-1j * np.asarray(thetas))[:, None, None]
    return 0.5 * (ph * C + np.conj(ph) * C.conj().T)


def _support_batch(C, thetas):
    vals, vecs = np.linalg.eigh(_herm_parts(C, thetas))
    return vals[:, -1], vecs[:, :, -1]


def wset_support(C, theta):
    """Support value ``h(theta)`` of the numerical range of ``C`` and a unit vector attaining it."""
    C = np.atleast_2d(np.asarray(C, dtype=complex))
    h, w = _support_batch(C, [theta])
    return float(h[0]), w[0]


def _golden_min(f, a, b, tol=1e-12, max_iter=200):
    c = b - _GOLD * (b - a)
    d = a + _GOLD * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _GOLD * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLD * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def _refined_margin(C, thetas, h, n_minima=3):
    """min over theta of h: coarse grid then golden-section around the lowest local minima."""
    m = len(h)
    left, right = np.roll(h, 1), np.roll(h, -1)
    minima = np.flatnonzero((h <= left) & (h <= right))
    minima = minima[np.argsort(h[minima])][:n_minima]
    best_val, best_theta = float(h.min()), float(thetas[np.argmin(h)])
    step = 2.0 * np.pi / m

    def hfun(t):
        return float(_support_batch(C, [t])[0][0])

    for j in minima:
        t, v = _golden_min(hfun, thetas[j] - step, thetas[j] + step)
        if v < best_val:
            best_val, best_theta = v, t
    return best_val, best_theta


def _compressed_C(opT, opS, tol_mult):
    ms = maximal_subspace(opT, tol_mult)
    TV = opT.That @ ms.V
    SV = opS.That @ ms.V
    return SV.conj().T @ TV, ms


def wset_build(opT, opS, m=N_THETA, tol_mult=TOL_MULT, tol_member=TOL_MEMBER):
    """Sample W_A(T, S) through its support function at ``m`` equispaced angles."""
    same_space(opT, opS)
    C, ms = _compressed_C(opT, opS, tol_mult)
    thetas = 2.0 * np.pi * np.arange(m) / m
    h, W = _support_batch(C, thetas)
    points = np.einsum("ij,jk,ik->i", W.conj(), C, W)
    margin, _ = _refined_margin(C, thetas, h)
    radius = ms.sigma1 * op_seminorm(opS)
    tol = tol_member * radius
    return OrthogonalitySet(C, thetas, h, points, W, margin >= -tol, margin, tol, radius)


def bj_check(opT, opS, m=N_THETA, tol_mult=TOL_MULT, tol_member=TOL_MEMBER):
    """Decide ``T _|_BJ_A S``: ``||T + gamma S||_A >= ||T||_A`` for every complex gamma."""
    same_space(opT, opS)
    tol_zero = opT.space.tol_zero
    if op_seminorm(opT) <= tol_zero:
        return BJResult(True, 0.0, None, "zero T")
    if op_seminorm(opS) <= tol_zero:
        return BJResult(True, 0.0, None, "zero S")
    ws = wset_build(opT, opS, m, tol_mult, tol_member)
    return BJResult(ws.contains_zero, ws.margin, ws)


# -- witness search ---------------------------------------------------------


def _hit(C, a, b, z):
    """Unit ``v`` in span(a, b) with ``v* C v = z``, for ``z`` on the segment [a*Ca, b*Cb].

    Writes ``v = a + t e^{i phi} b``; the phase ``phi`` makes the cross term
    collinear with the segment and ``t`` solves the remaining real quadratic.
    """
    alpha = np.vdot(a, C @ a) - z
    beta = np.vdot(b, C @ b) - z
    if abs(alpha) <= 1e-300:
        return a
    if abs(beta) <= 1e-300:
        return b
    omega = np.conj(alpha) / abs(alpha)
    Cz = C - z * np.eye(C.shape[0])
    p = omega * np.vdot(a, Cz @ b)
    q = omega * np.vdot(b, Cz @ a)
    mix = p - np.conj(q)
    phase = np.conj(mix) / abs(mix) if abs(mix) > 0 else 1.0
    R = (phase * p + np.conj(phase) * q).real
    qa, qb = (omega * beta).real, abs(alpha)
    if qa >= 0:
        return None
    disc = R * R - 4.0 * qa * qb
    roots = (-R + np.array([1.0, -1.0]) * np.sqrt(max(disc, 0.0))) / (2.0 * qa)
    t = roots[np.argmin(np.abs(roots))]
    v = a + t * phase * b
    nv = np.linalg.norm(v)
    return v / nv if nv > 0 else None


def _constructive_zero(C, points, vectors, tol):
    """Locate 0 inside the sampled boundary polygon and solve for it on two 2-D subspaces."""
    mags = np.abs(points)
    j0 = int(np.argmin(mags))
    if mags[j0] <= tol:
        return vectors[j0]
    l = int(np.argmax(mags))
    bl, wl = points[l], vectors[l]
    rel = points * np.conj(bl) / mags[l]  # rotate so b_l sits on the positive real axis
    # b_l and some b_j on opposite sides of 0 along a line
    opposite = np.flatnonzero((rel.real < 0) & (np.abs(rel.imag) <= 1e-12 * mags[l]))
    if opposite.size:
        j = opposite[np.argmin(rel[opposite].real)]
        return _hit(C, wl, vectors[j], 0.0)
    # exit point of the ray from b_l through 0 on the polygon boundary
    m = len(points)
    d = -bl / mags[l]
    best = None
    for j in range(m):
        e = points[(j + 1) % m] - points[j]
        rhs = points[j] - bl
        mat = np.array([[d.real, -e.real], [d.imag, -e.imag]])
        det = np.linalg.det(mat)
        if abs(det) <= 1e-14 * max(1.0, abs(e)):
            continue
        s, t = np.linalg.solve(mat, [rhs.real, rhs.imag])
        if -1e-12 <= t <= 1 + 1e-12 and s >= mags[l] * (1 - 1e-12):
            if best is None or s > best[0]:
                best = (s, j, min(max(t, 0.0), 1.0))
    if best is None:
        return None
    _, j, t = best
    p = points[j] + t * (points[(j + 1) % m] - points[j])
    xp = _hit(C, vectors[j], vectors[(j + 1) % m], p)
    if xp is None:
        return None
    return _hit(C, wl, xp, 0.0)


def _modulus_sq(xr, C, k):
    x = xr[:k] + 1j * xr[k:]
    b = np.vdot(x, x).real
    q = np.vdot(x, C @ x)
    g = (np.conj(q) * (C @ x) + q * (C.conj().T @ x)) / b**2 - 2.0 * abs(q) ** 2 * x / b**3
    return abs(q) ** 2 / b**2, 2.0 * np.concatenate([g.real, g.imag])


def _descend_zero(C, rng, runs, tol):
    k = C.shape[0]
    best = None
    for _ in range(runs):
        x0 = rng.standard_normal(2 * k)
        res = minimize(_modulus_sq, x0, args=(C, k), jac=True, method="BFGS",
                       options={"gtol": 1e-14, "maxiter": 500})
        x = res.x[:k] + 1j * res.x[k:]
        x = x / np.linalg.norm(x)
        val = abs(np.vdot(x, C @ x))
        if best is None or val < best[0]:
            best = (val, x)
        if val <= tol:
            break
    return best[1]


def _make_witness(opT, opS, V, w, method):
    space = opT.space
    u = V @ w
    u = u / np.linalg.norm(u)
    x = lift_vec(space, u)
    Tx, Sx = opT.T @ x, opS.T @ x
    gap = abs(seminorm_vec(space, Tx) - op_seminorm(opT))
    return Witness(x, u, gap, abs(sip(space, Tx, Sx)), method)


def witness(opT, opS, restarts=8, tol_witness=TOL_WITNESS, seed=0, tol_mult=TOL_MULT, wset=None):
    """An A-unit ``x`` with ``||Tx||_A = ||T||_A`` and ``<Tx, Sx>_A = 0``.

    Requires ``T`` to be orthogonal to ``S``.  The search first walks the
    sampled boundary of W_A(T, S) and solves exactly on two-dimensional
    subspaces; if that misses it falls back to ``8 * restarts`` randomised
    descents of ``|w* C w|^2`` over the unit sphere.
    """
    same_space(opT, opS)
    C, ms = _compressed_C(opT, opS, tol_mult)
    ok = lambda wit: wit.sip_residual <= tol_witness and wit.seminorm_gap <= tol_witness  # noqa: E731
    tried = []
    if ms.k == 1:
        wit = _make_witness(opT, opS, ms.V, np.ones(1, complex), "simple")
        if ok(wit):
            return wit
        tried.append(wit)
    else:
        ws = wset if wset is not None else wset_build(opT, opS, tol_mult=tol_mult)
        w = _constructive_zero(C, ws.points, ws.vectors, 1e-3 * tol_witness)
        if w is not None:
            wit = _make_witness(opT, opS, ms.V, w, "boundary")
            if ok(wit):
                return wit
            tried.append(wit)
        rng = np.random.default_rng(seed)
        w = _descend_zero(C, rng, 8 * restarts, 1e-3 * tol_witness)
        wit = _make_witness(opT, opS, ms.V, w, "descent")
        if ok(wit):
            return wit
        tried.append(wit)
    best = min(tried, key=lambda wt: wt.sip_residual)
    ws = wset if wset is not None else wset_build(opT, opS, tol_mult=tol_mult)
    raise WitnessNotFound(
        f"no witness within {tol_witness:g} (best |<Tx,Sx>_A| = {best.sip_residual:.3e}, "
        f"margin {ws.margin:.3e})",
        ws.margin,
    )


def pythagorean_check(wit, opT, opS, gammas):
    """Largest deviation of ``||Tx + g Sx||^2_A`` from ``||Tx||^2_A + |g|^2 ||Sx||^2_A`` over ``gammas``."""
    space = opT.space
    Tx, Sx = opT.T @ wit.x, opS.T @ wit.x
    nt = seminorm_vec(space, Tx) ** 2
    ns = seminorm_vec(space, Sx) ** 2
    worst = 0.0
    for g in gammas:
        lhs = seminorm_vec(space, Tx + g * Sx) ** 2
        worst = max(worst, abs(lhs - nt - abs(g) ** 2 * ns))
    return worst
