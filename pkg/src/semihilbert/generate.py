"""Seeded random problem instances (A, T, S).

All randomness comes from ``numpy.random.default_rng`` (PCG64).  Instance
``i`` of a run seeded with ``s`` uses ``default_rng([s, i])``, so any single
instance can be regenerated without replaying the others.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import BadRank
from .operator import compress_op
from .orthogonality import maximal_subspace
from .space import build_space

VARIANTS = ("generic", "orthogonal-pair", "degenerate", "degenerate-orthogonal")


@dataclass(eq=False)
class ProblemInstance:
    A: np.ndarray
    T: np.ndarray
    S: np.ndarray
    seed: object = None
    meta: dict = field(default_factory=dict)


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def gen_psd(n, r, seed=None):
    """``A = G G*`` with ``G`` an ``n x r`` complex Gaussian matrix (``A = 0`` for ``r = 0``)."""
    if not 0 <= r <= n:
        raise BadRank(f"rank {r} outside [0, {n}]")
    rng = _rng(seed)
    if r == 0:
        return np.zeros((n, n), dtype=complex)
    G = _cgauss(rng, n, r)
    A = G @ G.conj().T
    return 0.5 * (A + A.conj().T)


def gen_abounded(space, seed=None, That=None):
    """Random A-bounded operator ``Q X Q* + N Y Q* + N Z N*``.

    The block ``Q* T N`` (null(A) into range(A)) is zero, which is exactly
    A-boundedness.  If ``That`` is given, ``X`` is chosen so that the
    compression of the result equals it.
    """
    rng = _rng(seed)
    n, r = space.n, space.r
    Q, N = space.Q, space.Nbasis
    if That is None:
        X = _cgauss(rng, r, r)
    else:
        root = space.sqrt_eigvals
        X = (That * root[None, :]) / root[:, None]
    Y = _cgauss(rng, n - r, r)
    Z = _cgauss(rng, n - r, n - r)
    return Q @ X @ Q.conj().T + N @ Y @ Q.conj().T + N @ Z @ N.conj().T


def _repeated_top(rng, r, k):
    """``r x r`` matrix whose largest singular value has multiplicity ``k``."""
    U, _ = np.linalg.qr(_cgauss(rng, r, r))
    W, _ = np.linalg.qr(_cgauss(rng, r, r))
    top = 1.0 + rng.random()
    s = np.concatenate([np.full(k, top), top * rng.uniform(0.05, 0.9, r - k)])
    return (U * s) @ W.conj().T


def orthogonalize_pair(space, T, S, seed=None):
    """Modify ``S`` on range(A) so that 0 lies in W_A(T, S).

    Picks a random unit ``y`` in the maximal subspace of ``T_hat`` and removes
    the component of ``S_hat y`` along ``T_hat y`` with a rank-one update of
    the range block, which keeps ``S`` A-bounded.
    """
    rng = _rng(seed)
    opT, opS = compress_op(space, T), compress_op(space, S)
    ms = maximal_subspace(opT)
    w = _cgauss(rng, ms.k)
    y = ms.V @ (w / np.linalg.norm(w))
    z = opT.That @ y
    delta = np.outer(z * (np.vdot(z, opS.That @ y) / np.vdot(z, z).real), y.conj())
    root = space.sqrt_eigvals
    lifted = space.Q @ ((delta * root[None, :]) / root[:, None]) @ space.Q.conj().T
    return S - lifted


def gen_instance(n, r, seed=None, variant="generic", identity_weight=False):
    """One :class:`ProblemInstance` of the requested variant.

    ``degenerate`` variants give the compression of ``T`` a top singular value
    of multiplicity 2..4, so W_A(T, S) is a genuine 2-D convex set.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; expected one of {VARIANTS}")
    rng = _rng(seed)
    if identity_weight:
        r = n
        A = np.eye(n, dtype=complex)
    else:
        A = gen_psd(n, r, rng)
    space = build_space(A)
    meta = {"n": n, "rank": r, "variant": variant}
    That = None
    if variant.startswith("degenerate") and space.r >= 2:
        k = int(rng.integers(2, min(space.r, 4) + 1))
        That = _repeated_top(rng, space.r, k)
        meta["multiplicity"] = k
    T = gen_abounded(space, rng, That)
    S = gen_abounded(space, rng)
    if variant.endswith("orthogonal") or variant == "orthogonal-pair":
        if space.r >= 1:
            S = orthogonalize_pair(space, T, S, rng)
    return ProblemInstance(A, T, S, seed if not isinstance(seed, np.random.Generator) else None, meta)
