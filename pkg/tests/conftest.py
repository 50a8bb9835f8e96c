import numpy as np
import pytest

from semihilbert.operator import compress_op
from semihilbert.space import build_space

EXACT = 1e-10


def ops(A, T, S, **kw):
    space = build_space(np.asarray(A, dtype=complex), **kw)
    return space, compress_op(space, T), compress_op(space, S)


def cgauss(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unit_rows(rng, count, k):
    X = cgauss(rng, count, k)
    return X / np.linalg.norm(X, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def brute_gamma(That, Shat, n=400):
    """min over gamma of sigma_1(That + gamma Shat): dense grid on the feasible disk, then Nelder-Mead."""
    from scipy.optimize import minimize

    nT = np.linalg.norm(That, 2)
    nS = np.linalg.norm(Shat, 2)
    if nS == 0:
        return nT, 0j
    R = 2 * nT / nS
    t = np.linspace(-R, R, n)
    G = (t[:, None] + 1j * t[None, :]).ravel()
    G = G[np.abs(G) <= R * (1 + 1e-12)]
    vals = np.linalg.svd(That[None] + G[:, None, None] * Shat[None], compute_uv=False)[:, 0]
    g0 = G[np.argmin(vals)]
    f = lambda p: np.linalg.norm(That + complex(p[0], p[1]) * Shat, 2)  # noqa: E731
    step = 2 * R / (n - 1)
    best = minimize(f, [g0.real, g0.imag], method="Nelder-Mead",
                    options={"xatol": 1e-13, "fatol": 1e-15, "maxiter": 20000,
                             "initial_simplex": [[g0.real, g0.imag], [g0.real + step, g0.imag],
                                                 [g0.real, g0.imag + step]]})
    # a nested golden-section pass along each axis guards against a stalled simplex
    x = best.x.copy()
    fx = f(x)
    for _ in range(20):
        for axis in (0, 1):
            a, b = x[axis] - step, x[axis] + step
            for _ in range(80):
                c, d = b - 0.618 * (b - a), a + 0.618 * (b - a)
                xc, xd = x.copy(), x.copy()
                xc[axis], xd[axis] = c, d
                if f(xc) < f(xd):
                    b = d
                else:
                    a = c
            xn = x.copy()
            xn[axis] = 0.5 * (a + b)
            if f(xn) < fx:
                x, fx = xn, f(xn)
    return fx, complex(x[0], x[1])


def sampled_numerical_range(C, rng, count=100000):
    W = unit_rows(rng, count, C.shape[0])
    return np.einsum("ij,jk,ik->i", W.conj(), C, W)


# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
