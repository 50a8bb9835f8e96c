"""The A-distance ``d_A(T, CS) = inf_gamma ||T + gamma S||_A`` by three routes.

* ``dist_gamma``: direct convex minimisation of ``gamma -> sigma_1(T_hat + gamma S_hat)``.
* ``dist_phi``: square root of the supremum of the projection functional
  ``||Tx||^2_A - |<Tx, Sx>_A|^2 / ||Sx||^2_A`` over A-unit ``x``.
* ``dist_pairs``: supremum of ``|<Tx, y>_A|`` over A-unit ``x, y`` with ``<Sx, y>_A = 0``.

The two supremum routes only ever approach the distance from below, so the
convex minimum arbitrates.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .errors import EmptyRange, NotNormalized
from .linalg import sigma_max, svd
from .operator import compress_op, min_modulus, same_space

N_GRID = 33
RESTARTS = 64
_ROUND = 1e-14  # relative rounding allowance when comparing sigma_1 values
STRETCH = 1e-2  # regularisation of the stretched coordinates, relative to ||S_hat||


@dataclass(frozen=True, eq=False)
class DistanceResult:
    d_gamma: float
    zeta0: complex
    d_phi: float
    d_pairs: float
    agreement: float
    phi_maximizer: np.ndarray
    zeta_unique: bool


@dataclass(frozen=True, eq=False)
class ZetaReport:
    status: str  # "pass", "fail" or "skipped"
    zeta0: complex
    d: float
    min_modulus: float
    min_slack: float  # smallest slack of the inequality centred at zeta0
    perturbations_rejected: tuple  # one bool per perturbed centre
    perturbation_slack: tuple  # most negative slack found for each perturbed centre


@dataclass(frozen=True)
class InfSup:
    lhs: float
    rhs: float
    gap: float


def gamma_grid(radius, n=5):
    """``n x n`` square lattice of complex numbers on ``[-radius, radius]^2`` (contains 0 for odd n)."""
    t = np.linspace(-radius, radius, n)
    return (t[:, None] + 1j * t[None, :]).ravel()


def grid_radius(nT, nS, tol_zero=1e-10):
    """``2 ||T||_A / ||S||_A``, the disk outside which no ``g`` beats ``g = 0``.

    Returns 1 when ``||S||_A`` is at rounding level, where the ratio is noise.
    """
    if nS <= tol_zero * max(1.0, nT):
        return 1.0
    return 2.0 * nT / nS


# -- convex minimisation over gamma ------------------------------------------


def _pencil_values(That, Shat, gammas):
    stack = That[None, :, :] + np.asarray(gammas)[:, None, None] * Shat[None, :, :]
    return np.linalg.svd(stack, compute_uv=False)[:, 0]


def _pencil_gradient(That, Shat, g):
    """Gradient of sigma_1 w.r.t. (Re g, Im g) and the relative gap sigma_1 - sigma_2."""
    U, s, Vh = np.linalg.svd(That + g * Shat)
    c = np.vdot(U[:, 0], Shat @ Vh[0].conj())
    gap = (s[0] - s[1]) / s[0] if len(s) > 1 and s[0] > 0 else 1.0
    return np.array([c.real, -c.imag]), gap


def _newton_polish(That, Shat, z, f, scale, iters=8):
    """Newton steps on the gradient of a smooth minimum; kept only while they help."""
    x = np.array([z.real, z.imag])
    fx = f(complex(*x))
    for _ in range(iters):
        grad, gap = _pencil_gradient(That, Shat, complex(*x))
        if gap < 1e-6 or np.linalg.norm(grad) == 0.0:
            break
        h = 1e-7 * scale
        J = np.empty((2, 2))
        for i in range(2):
            e = np.zeros(2)
            e[i] = h
            gp, _ = _pencil_gradient(That, Shat, complex(*(x + e)))
            gm, _ = _pencil_gradient(That, Shat, complex(*(x - e)))
            J[:, i] = (gp - gm) / (2 * h)
        try:
            step = np.linalg.solve(J, grad)
        except np.linalg.LinAlgError:
            break
        xn = x - step
        fn = f(complex(*xn))
        gn, _ = _pencil_gradient(That, Shat, complex(*xn))
        if fn <= fx * (1 + _ROUND) and np.linalg.norm(gn) < np.linalg.norm(grad):
            x, fx = xn, fn
        else:
            break
    return complex(*x), fx


def _nearest_to_zero(X):
    """Point of the numerical range of ``X`` closest to 0 (0 itself when inside)."""
    if X.shape[0] == 1:
        return X[0, 0]
    thetas = 2.0 * np.pi * np.arange(64) / 64
    ph = np.exp(-1j * thetas)[:, None, None]
    h = np.linalg.eigvalsh(0.5 * (ph * X + np.conj(ph) * X.conj().T))[:, -1]
    j = int(np.argmin(h))

    def hfun(t):
        e = np.exp(-1j * t)
        return np.linalg.eigvalsh(0.5 * (e * X + np.conj(e) * X.conj().T))[-1]

    lo, hi = thetas[j] - 2 * np.pi / 64, thetas[j] + 2 * np.pi / 64
    for _ in range(80):
        m1, m2 = lo + (hi - lo) / 3, hi - (hi - lo) / 3
        if hfun(m1) < hfun(m2):
            hi = m2
        else:
            lo = m1
    t = 0.5 * (lo + hi)
    hmin = hfun(t)
    return 0j if hmin >= 0 else hmin * np.exp(1j * t)


def _cluster(That, Shat, z, rel=1e-9):
    U, s, Vh = np.linalg.svd(That + z * Shat)
    k = int(np.sum(s >= s[0] * (1 - rel)))
    return U[:, :k], Vh[:k].conj().T


def _subgradient_polish(That, Shat, z, f, iters=30):
    """Steepest descent along the min-norm subgradient with an exact line search.

    The subdifferential of ``sigma_1`` at a cluster of top singular pairs is
    ``{(Re xi, -Im xi) : xi in W(U_k* S_hat V_k)}``; the line minimum is found by
    bisection on the sign of the directional derivative, which pins the
    minimiser far below the square-root-of-epsilon floor of value comparisons.
    """
    fz = f(z)
    nS = sigma_max(Shat)
    for _ in range(iters):
        Uk, Vk = _cluster(That, Shat, z)
        p = _nearest_to_zero(Uk.conj().T @ Shat @ Vk)
        if abs(p) <= 1e-15 * nS:
            break
        direction = -np.conj(p) / abs(p)  # minus the min-norm subgradient, as a complex step

        def slope(t):
            Uk, Vk = _cluster(That, Shat, z + t * direction)
            G = Uk.conj().T @ (direction * Shat) @ Vk
            return np.linalg.eigvalsh(0.5 * (G + G.conj().T))[-1]

        lo, hi = 0.0, 1e-9 * (1.0 + abs(z))
        for _ in range(200):
            if slope(hi) >= 0:
                break
            lo, hi = hi, 2 * hi
        for _ in range(100):
            mid = 0.5 * (lo + hi)
            if mid in (lo, hi):
                break
            if slope(mid) >= 0:
                hi = mid
            else:
                lo = mid
        zn = z + lo * direction
        fn = f(zn)
        if lo == 0.0 or fn > fz * (1 + _ROUND):
            break
        z, fz = zn, fn
    return z, fz


def dist_gamma(opT, opS, n_grid=N_GRID):
    """``(d, zeta0)`` with ``d = min_gamma ||T + gamma S||_A`` attained at ``zeta0``.

    A coarse grid on the disk ``|gamma| <= 2 ||T||_A / ||S||_A`` (which holds
    every minimiser) seeds a restarted Nelder-Mead search; a Newton polish on
    the gradient follows when the top singular value is simple there.
    """
    same_space(opT, opS)
    That, Shat = opT.That, opS.That
    nT, nS = sigma_max(That), sigma_max(Shat)
    tol_zero = opT.space.tol_zero
    if nS <= tol_zero:
        return nT, 0j
    if nT == 0.0:
        return 0.0, 0j
    if That.shape[0] == 1:
        z = -That[0, 0] / Shat[0, 0] if abs(Shat[0, 0]) > 0 else 0j
        return float(abs(That[0, 0] + z * Shat[0, 0])), complex(z)

    radius = 2.0 * nT / nS
    t = np.linspace(-radius, radius, n_grid)
    grid = (t[:, None] + 1j * t[None, :]).ravel()
    grid = grid[np.abs(grid) <= radius * (1 + 1e-12)]
    vals = _pencil_values(That, Shat, grid)
    j = int(np.argmin(vals))
    best_z, best_f = complex(grid[j]), float(vals[j])

    def f(z):
        return sigma_max(That + z * Shat)

    def fr(p):
        return f(complex(p[0], p[1]))

    step = t[1] - t[0]
    for _ in range(12):
        x0 = np.array([best_z.real, best_z.imag])
        simplex = np.array([x0, x0 + [step, 0.0], x0 + [0.0, step]])
        res = minimize(fr, x0, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-14 * (1 + abs(best_z)),
                                "fatol": 1e-16 * max(best_f, 1e-300), "maxiter": 4000, "maxfev": 8000})
        improved = res.fun < best_f * (1 - 1e-15)
        if res.fun <= best_f:
            best_z, best_f = complex(res.x[0], res.x[1]), float(res.fun)
        step = max(step * 0.1, 1e-12 * (1 + abs(best_z)))
        if not improved and step < 1e-6 * radius:
            break
    # the polishes pin the minimiser through derivative information; their values
    # may sit a rounding error above the simplex value, which is accepted
    z, fz = _newton_polish(That, Shat, best_z, f, radius)
    if fz <= best_f * (1 + _ROUND):
        best_z, best_f = z, fz
    z, fz = _subgradient_polish(That, Shat, best_z, f)
    if fz <= best_f * (1 + _ROUND):
        best_z, best_f = z, fz
    return float(best_f), complex(best_z)


# -- the projection functional ----------------------------------------------


def phi(opT, opS, u):
    """``||T_hat u||^2 - |<T_hat u, S_hat u>|^2 / ||S_hat u||^2`` (or ``||T_hat u||^2`` if ``S_hat u = 0``)."""
    same_space(opT, opS)
    u = np.asarray(u, dtype=complex)
    if abs(np.linalg.norm(u) - 1.0) > 1e-8:
        raise NotNormalized(f"u has norm {np.linalg.norm(u):.6g}, expected 1")
    Tu, Su = opT.That @ u, opS.That @ u
    a = np.vdot(Tu, Tu).real
    ns = np.linalg.norm(Su)
    if ns <= opT.space.tol_zero * max(sigma_max(opS.That), 1e-300):
        return float(a)
    # ||T_hat u||^2 - |<T_hat u, S_hat u>|^2 / ||S_hat u||^2 equals the squared norm of
    # T_hat u minus its projection on S_hat u; the residual form avoids cancellation
    P = Tu - (np.vdot(Su, Tu) / ns**2) * Su
    return float(np.vdot(P, P).real)


def _phi_rows(That, Shat, X, zero_cut):
    """Projection functional and its Wirtinger gradient for each row of ``X``."""
    b = np.sum(np.abs(X) ** 2, axis=1)
    TX, SX = X @ That.T, X @ Shat.T
    a = np.sum(np.abs(TX) ** 2, axis=1)
    e = np.sum(np.abs(SX) ** 2, axis=1)
    c = np.sum(np.conj(SX) * TX, axis=1)
    TtTx = TX @ That.conj()
    Mx, Mhx = TX @ Shat.conj(), SX @ That.conj()
    StSx = SX @ Shat.conj()
    zero = e <= zero_cut**2 * b
    es = np.where(zero, 1.0, e)
    val = a / b - np.where(zero, 0.0, np.abs(c) ** 2 / (es * b))
    grad = TtTx / b[:, None] - (a / b**2)[:, None] * X
    corr = (np.conj(c)[:, None] * Mx + c[:, None] * Mhx) / (es * b)[:, None] - (
        np.abs(c) ** 2
    )[:, None] * (StSx / (es**2 * b)[:, None] + X / (es * b**2)[:, None])
    grad = grad - np.where(zero[:, None], 0.0, corr)
    return val, grad


def _random_sphere(rng, count, r):
    X = rng.standard_normal((count, r)) + 1j * rng.standard_normal((count, r))
    return X / np.linalg.norm(X, axis=1, keepdims=True)


def _starts(rng, count, Shat):
    """Starting points: half uniform on the sphere, half ``S_hat^+ w`` for uniform ``w``.

    The objectives depend on the direction of ``S_hat u``, which turns fastest
    where ``||S_hat u||`` is small; the second half concentrates there.
    """
    r = Shat.shape[0]
    X = _random_sphere(rng, count, r)
    half = count // 2
    if half:
        Y = X[count - half:] @ np.linalg.pinv(Shat).T
        X[count - half:] = Y / np.linalg.norm(Y, axis=1, keepdims=True)
    return X


def _stretch(Shat):
    """``(S_hat* S_hat + mu^2)^(-1/2)`` with ``mu = STRETCH * ||S_hat||``.

    Ascending over ``y`` with ``u = M y / ||M y||`` widens the narrow peaks
    that sit where ``||S_hat u||`` is small.
    """
    w, V = np.linalg.eigh(Shat.conj().T @ Shat)
    mu2 = (STRETCH * sigma_max(Shat)) ** 2
    return (V / np.sqrt(np.clip(w, 0.0, None) + mu2)) @ V.conj().T


def _split(rng, count, Shat):
    """Starting rows and the map applied to each: first half plain, second half stretched."""
    r = Shat.shape[0]
    plain = count - count // 2
    Y = np.vstack([_starts(rng, plain, Shat), _random_sphere(rng, count - plain, r)])
    maps = [np.eye(r), _stretch(Shat)]
    return Y, plain, maps


def _kernel_candidate(That, Shat, tol_zero):
    """Best ``||T_hat u||`` over unit ``u`` in ker(S_hat), or None when the kernel is trivial."""
    res = svd(Shat)
    K = res.V[:, res.s <= tol_zero * max(res.s[0], 1e-300)]
    if K.shape[1] == 0:
        return None
    sub = svd(That @ K)
    return float(sub.s[0]), K @ sub.V[:, 0]


def _ascend_phi(That, Shat, rng, restarts, zero_cut, iters=300):
    """Projected gradient ascent; returns unit rows ``u`` and their phi values."""
    Y, plain, maps = _split(rng, restarts, Shat)
    out = []
    for M, rows in zip(maps, (slice(0, plain), slice(plain, restarts))):
        Z = Y[rows]

        def f(Z):
            v, g = _phi_rows(That, Shat, Z @ M.T, zero_cut)
            return v, g @ M.conj()

        val, grad = f(Z)
        eta = np.full(len(Z), 1.0 / max(sigma_max(That) ** 2, 1e-300))
        for _ in range(iters):
            W = Z + eta[:, None] * grad
            W /= np.linalg.norm(W, axis=1, keepdims=True)
            nval, ngrad = f(W)
            up = nval >= val
            Z[up], val[up], grad[up] = W[up], nval[up], ngrad[up]
            eta = np.where(up, eta * 1.5, eta * 0.5)
        X = Z @ M.T
        out.append((X / np.linalg.norm(X, axis=1, keepdims=True), val))
    return np.vstack([o[0] for o in out]), np.concatenate([o[1] for o in out])


def _polish_phi(That, Shat, x0, zero_cut):
    r = That.shape[0]

    def negphi(p):
        x = (p[:r] + 1j * p[r:])[None, :]
        v, g = _phi_rows(That, Shat, x, zero_cut)
        return -v[0], -2.0 * np.concatenate([g[0].real, g[0].imag])

    res = minimize(negphi, np.concatenate([x0.real, x0.imag]), jac=True, method="BFGS",
                   options={"gtol": 1e-13, "maxiter": 1000})
    x = res.x[:r] + 1j * res.x[r:]
    return x / np.linalg.norm(x)


def dist_phi(opT, opS, restarts=RESTARTS, seed=0):
    """``(sqrt(sup phi), maximiser)`` by multi-start ascent on the unit sphere of ``C^r``."""
    same_space(opT, opS)
    That, Shat = opT.That, opS.That
    r = That.shape[0]
    if r == 0:
        raise EmptyRange("A = 0: the unit sphere of range(A) is empty")
    tol_zero = opT.space.tol_zero
    nS = sigma_max(Shat)
    if nS <= tol_zero:
        res = svd(That)
        return float(res.s[0]), res.V[:, 0]
    zero_cut = tol_zero * nS

    candidates = []
    kern = _kernel_candidate(That, Shat, tol_zero)
    if kern is not None:
        candidates.append((kern[0] ** 2, kern[1]))
    rng = np.random.default_rng(seed)
    X, val = _ascend_phi(That, Shat, rng, restarts, zero_cut)
    order = np.argsort(-val, kind="stable")
    for i in order[: min(4, restarts)]:
        x = _polish_phi(That, Shat, X[i], zero_cut)
        candidates.append((phi(opT, opS, x), x))
        x = X[i] / np.linalg.norm(X[i])
        candidates.append((phi(opT, opS, x), x))
    best_val, best_x = max(candidates, key=lambda c: c[0])
    return float(np.sqrt(max(best_val, 0.0))), best_x


# -- pairs (x, y) with Sx A-orthogonal to y -------------------------------------


def _pair_values(That, Shat, X):
    """``max_v |<T_hat u, v>|`` over unit ``v`` orthogonal to ``S_hat u``, for each row ``u`` of ``X``."""
    X = X / np.linalg.norm(X, axis=1, keepdims=True)
    TX, SX = X @ That.T, X @ Shat.T
    ns = np.sum(np.abs(SX) ** 2, axis=1)
    coef = np.sum(np.conj(SX) * TX, axis=1) / np.where(ns > 0, ns, 1.0)
    P = TX - np.where(ns > 0, coef, 0.0)[:, None] * SX
    # with v = P / ||P||, |<T_hat u, v>| = ||P||; using ||P|| avoids normalising rounding noise
    return np.linalg.norm(P, axis=1)


def _numeric_gradient(fun, X, h):
    """Central-difference gradient of a row-wise function of complex rows."""
    G = np.zeros_like(X)
    for j in range(X.shape[1]):
        for unit in (1.0, 1j):
            E = np.zeros_like(X)
            E[:, j] = unit * h
            G[:, j] += unit * (fun(X + E) - fun(X - E)) / (2 * h)
    return G


def dist_pairs(opT, opS, restarts=RESTARTS, seed=1, iters=200):
    """``sup |<T_hat u, v>|`` over unit ``u, v`` with ``<S_hat u, v> = 0``.

    For fixed ``u`` the best ``v`` is the normalised projection of
    ``T_hat u`` off ``S_hat u``; the outer problem over ``u`` is climbed by
    projected gradient steps with central-difference gradients from
    ``restarts`` seeded starting points, then the best few are polished.
    Half the restarts climb in stretched coordinates (see ``_stretch``).
    """
    same_space(opT, opS)
    That, Shat = opT.That, opS.That
    r = That.shape[0]
    if r == 0:
        raise EmptyRange("A = 0: the unit sphere of range(A) is empty")
    tol_zero = opT.space.tol_zero
    if sigma_max(Shat) <= tol_zero:
        return sigma_max(That)

    best = 0.0
    kern = _kernel_candidate(That, Shat, tol_zero)
    if kern is not None:
        best = kern[0]

    def fun(X):
        return _pair_values(That, Shat, X)

    rng = np.random.default_rng(seed)
    Y, plain, maps = _split(rng, restarts, Shat)
    parts = []
    for M, rows in zip(maps, (slice(0, plain), slice(plain, restarts))):
        Z = Y[rows]

        def g(Z):
            return fun(Z @ M.T)

        val = g(Z)
        eta = np.full(len(Z), 1.0 / max(sigma_max(That), 1e-300))
        for _ in range(iters):
            G = _numeric_gradient(g, Z, 1e-6)
            W = Z + eta[:, None] * G
            W /= np.linalg.norm(W, axis=1, keepdims=True)
            nval = g(W)
            up = nval >= val
            Z[up], val[up] = W[up], nval[up]
            eta = np.where(up, eta * 1.5, eta * 0.5)
        X = Z @ M.T
        parts.append((X / np.linalg.norm(X, axis=1, keepdims=True), val))
    X = np.vstack([p[0] for p in parts])
    val = np.concatenate([p[1] for p in parts])

    def neg(p):
        return -fun((p[:r] + 1j * p[r:])[None, :])[0]

    for i in np.argsort(-val, kind="stable")[: min(2, restarts)]:
        res = minimize(neg, np.concatenate([X[i].real, X[i].imag]), method="BFGS",
                       options={"gtol": 1e-10, "maxiter": 500})
        best = max(best, -res.fun, float(val[i]))
    return float(best)


# -- property checks ----------------------------------------------------------


def _pythagorean_slack(That, Shat, center, gammas, m2):
    base = sigma_max(That + center * Shat) ** 2
    vals = _pencil_values(That, Shat, center + np.asarray(gammas)) ** 2
    return vals - base - np.abs(gammas) ** 2 * m2


def zeta_unique_check(opT, opS, gammas=None, eps=1e-2, tol=1e-8, zeta=None):
    """Check the Pythagorean inequality centred at the minimiser and its uniqueness.

    ``(a)`` ``||T + (zeta0 + g) S||^2_A >= ||T + zeta0 S||^2_A + |g|^2 m_A(S)^2``
    on the grid; ``(b)`` for eight centres ``zeta0 + eps e^{i k pi/4}`` the same
    inequality fails for some probe ``g``.  Returns status "skipped" when
    ``m_A(S)`` is numerically zero.
    """
    same_space(opT, opS)
    That, Shat = opT.That, opS.That
    m = min_modulus(opS)
    d, z0 = zeta if zeta is not None else dist_gamma(opT, opS)
    if m <= opT.space.tol_zero:
        return ZetaReport("skipped", z0, d, m, float("nan"), (), ())
    if gammas is None:
        gammas = gamma_grid(2.0 * sigma_max(That + z0 * Shat) / sigma_max(Shat))
    gammas = np.asarray(gammas, dtype=complex)
    slack = _pythagorean_slack(That, Shat, z0, gammas, m * m)
    rejected, worst = [], []
    for k in range(8):
        z1 = z0 + eps * np.exp(1j * np.pi * k / 4)
        probes = np.append(gammas, z0 - z1)
        s1 = _pythagorean_slack(That, Shat, z1, probes, m * m)
        worst.append(float(s1.min()))
        rejected.append(bool(s1.min() < -tol))
    ok = slack.min() >= -tol and all(rejected)
    return ZetaReport("pass" if ok else "fail", z0, d, m, float(slack.min()),
                      tuple(rejected), tuple(worst))


def infsup_check(opT, opS, restarts=RESTARTS, seed=0):
    """``lhs = d_A(T, CS)^2`` against ``rhs = sup_x inf_gamma ||(T + gamma S)x||^2_A = sup phi``."""
    d, _ = dist_gamma(opT, opS)
    dp, _ = dist_phi(opT, opS, restarts, seed)
    lhs, rhs = d * d, dp * dp
    return InfSup(lhs, rhs, abs(lhs - rhs))


def fujii_nakamoto_check(opT, restarts=RESTARTS, seed=0):
    """Distance from ``T`` to the scalars against ``sup ||T_hat u - <T_hat u, u> u||``."""
    space = opT.space
    opI = compress_op(space, np.eye(space.n))
    d, _ = dist_gamma(opT, opI)
    if space.r == 0:
        return d, 0.0
    value, _ = dist_phi(opT, opI, restarts, seed)
    return d, value


def distance(opT, opS, restarts=RESTARTS, seed=0):
    """All three routes to ``d_A(T, CS)`` plus their largest pairwise discrepancy."""
    d, z0 = dist_gamma(opT, opS)
    if opT.That.shape[0] == 0:
        return DistanceResult(0.0, 0j, 0.0, 0.0, 0.0, np.zeros(0, complex), False)
    dp, x = dist_phi(opT, opS, restarts, seed)
    dq = dist_pairs(opT, opS, restarts, seed + 1)
    agreement = max(abs(d - dp), abs(d - dq), abs(dp - dq))
    unique = min_modulus(opS) > opT.space.tol_zero
    return DistanceResult(d, z0, dp, dq, agreement, x, unique)

