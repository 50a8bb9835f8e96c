"""Run every property check on one instance, and fuzz many instances.

Each check records a name, a status (``pass``, ``fail`` or ``skipped``), the
measured value, the tolerance it was held to and a payload of supporting
numbers.  ``overall`` is the conjunction of the non-skipped statuses.
"""

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .distance import (
    dist_gamma,
    dist_pairs,
    dist_phi,
    gamma_grid,
    grid_radius,
    zeta_unique_check,
)
from .errors import SemiHilbertError, WitnessNotFound
from .generate import VARIANTS, gen_instance
from .linalg import sigma_max
from .operator import compress_op, min_modulus, op_seminorm
from .orthogonality import bj_check, pythagorean_check, witness
from .space import build_space

THREADS_ENV = "SEMIHILBERT_THREADS"


@dataclass
class Tolerances:
    tol_rank: float = None
    tol_zero: float = 1e-10
    tol_member: float = 1e-9
    equivalence: float = 1e-7  # relative drop of d below ||T||_A
    inequality: float = 1e-8  # slack of the pencil inequalities
    witness: float = 1e-7
    pythagorean: float = 1e-6
    phi: float = 1e-5
    pairs: float = 1e-4
    infsup: float = 1e-5
    scalar: float = 1e-5
    wset: float = 1e-8  # polytope inflation, relative to ||T||_A ||S||_A
    wset_samples: int = 1000
    restarts: int = 64


@dataclass
class Check:
    name: str
    status: str
    value: float = None
    tolerance: float = None
    payload: dict = field(default_factory=dict)


@dataclass
class VerifyReport:
    checks: list
    overall: bool
    seed: object
    tolerances: dict

    def failed(self):
        return [c.name for c in self.checks if c.status == "fail"]

    def to_dict(self):
        return {
            "overall": self.overall,
            "seed": self.seed,
            "tolerances": self.tolerances,
            "checks": [_plain(asdict(c)) for c in self.checks],
        }


def _plain(obj):
    """Convert numpy scalars, arrays and complex numbers into JSON-friendly values."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _status(ok):
    return "pass" if ok else "fail"


def _inside_polytope(xi, thetas, h, slack):
    """Largest violation of ``Re(e^{-i theta} xi) <= h(theta) + slack`` over samples ``xi``."""
    proj = (np.exp(-1j * thetas)[None, :] * np.asarray(xi)[:, None]).real
    return float(np.max(proj - h[None, :] - slack))


def wset_samples(C, count, rng):
    """``count`` points ``w* C w`` for uniformly random unit ``w``."""
    k = C.shape[0]
    W = rng.standard_normal((count, k)) + 1j * rng.standard_normal((count, k))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    return np.einsum("ij,jk,ik->i", W.conj(), C, W)


def classical_bj(T, S, tol=1e-9, tol_mult=1e-8, sdp_tol=1e-6):
    """Orthogonality of ``T`` to ``S`` in the plain operator norm, from the SVD of ``T``.

    ``T`` is orthogonal to ``S`` iff 0 lies in the numerical range of
    ``V* S* T V`` with ``V`` the top right singular subspace of ``T``.  A
    1x1 block is tested directly; larger blocks go through a small
    semidefinite program ``min |tr(C rho)|`` over density matrices, solved by
    an interior-point method and accepted at ``sdp_tol`` relative.
    """
    U, s, Vh = np.linalg.svd(T)
    scale = max(s[0], 1e-300) * max(np.linalg.norm(S, 2), 1e-300)
    if s[0] <= tol or np.linalg.norm(S, 2) <= tol:
        return True, 0.0
    k = int(np.sum(s >= s[0] * (1 - tol_mult)))
    V = Vh[:k].conj().T
    C = V.conj().T @ S.conj().T @ T @ V
    if k == 1:
        value = abs(C[0, 0])
        return value <= tol * scale, value
    import cvxpy as cp

    rho = cp.Variable((k, k), hermitian=True)
    z = cp.trace(C @ rho)
    prob = cp.Problem(cp.Minimize(cp.abs(z)), [rho >> 0, cp.real(cp.trace(rho)) == 1])
    prob.solve(solver=cp.CLARABEL)
    value = float(prob.value)
    return value <= sdp_tol * scale, value


def verify_all(instance, tolerances=None):
    """Run the full check list on a :class:`ProblemInstance`."""
    tol = tolerances or Tolerances()
    checks = []
    report = lambda: VerifyReport(  # noqa: E731
        checks,
        all(c.status != "fail" for c in checks),
        _plain(instance.seed),
        _plain(asdict(tol)),
    )

    # validation
    try:
        space = build_space(instance.A, tol.tol_rank, tol.tol_zero)
        opT = compress_op(space, instance.T)
        opS = compress_op(space, instance.S)
    except SemiHilbertError as exc:
        residual = getattr(exc, "residual", None)
        checks.append(Check("validation", "fail", residual, 1e-10,
                            {"error": type(exc).__name__, "message": str(exc)}))
        return report()
    checks.append(Check("validation", "pass", max(opT.bound_residual, opS.bound_residual), 1e-10,
                        {"n": space.n, "r": space.r}))

    nT, nS = op_seminorm(opT), op_seminorm(opS)
    r = space.r
    m = min_modulus(opS) if r else 0.0
    scale = max(nT * nS, 1e-300)

    # seminorm structure: ||T||_A is reached by the top right singular vector
    if r:
        sv = np.linalg.svd(opT.That)
        u = sv[2][0].conj()
        gap = abs(np.linalg.norm(opT.That @ u) - nT)
        checks.append(Check("seminorm_structure", _status(gap <= 1e-10 * max(1.0, nT)), gap, 1e-10,
                            {"seminorm_T": nT, "seminorm_S": nS, "min_modulus_S": m}))
    else:
        checks.append(Check("seminorm_structure", "skipped", payload={"reason": "r = 0"}))

    bj = bj_check(opT, opS, tol_member=tol.tol_member)
    d, z0 = dist_gamma(opT, opS)

    # W_A(T, S) is convex, inside its support polytope and bounded by ||T|| ||S||
    if bj.wset is not None:
        ws = bj.wset
        rng = np.random.default_rng(0)
        xi = wset_samples(ws.C, tol.wset_samples, rng)
        excess = _inside_polytope(xi, ws.thetas, ws.h, tol.wset * scale)
        bound = float(np.max(np.abs(xi))) - scale
        ok = excess <= 0 and bound <= 1e-10
        checks.append(Check("wset_convex_bounded", _status(ok), max(excess, bound), tol.wset,
                            {"k": ws.C.shape[0], "polytope_excess": excess, "modulus_excess": bound}))
    else:
        checks.append(Check("wset_convex_bounded", "skipped", payload={"reason": bj.reason}))

    # orthogonality <=> distance attained at gamma = 0 <=> strengthened inequality
    attained = d >= nT * (1 - tol.equivalence)
    payload = {"orthogonal": bj.orthogonal, "margin": bj.margin, "d": d, "seminorm_T": nT,
               "zeta0": z0}
    ok = bj.orthogonal == attained
    worst = 0.0
    if bj.orthogonal and nS > tol.tol_zero:
        grid = gamma_grid(grid_radius(nT, nS, tol.tol_zero))
        vals = np.array([sigma_max(opT.That + g * opS.That) for g in grid]) ** 2
        worst = float(np.min(vals - nT**2 - np.abs(grid) ** 2 * m * m))
        ok = ok and worst >= -tol.inequality
        payload["inequality_slack"] = worst
    if not bj.orthogonal:
        payload["refuting_gamma"] = z0
    checks.append(Check("orthogonality_equivalence", _status(ok), abs(d - nT), tol.equivalence * nT,
                        payload))

    # classical criterion when the weight is the identity
    if np.allclose(instance.A, np.eye(space.n), atol=0, rtol=0):
        agree, value = classical_bj(instance.T, instance.S)
        checks.append(Check("classical_reduction", _status(agree == bj.orthogonal), value, None,
                            {"classical": agree, "weighted": bj.orthogonal}))
    else:
        checks.append(Check("classical_reduction", "skipped", payload={"reason": "A is not I"}))

    # witness and pythagorean identity
    if bj.orthogonal and bj.wset is not None:
        try:
            wit = witness(opT, opS, tol_witness=tol.witness, wset=bj.wset)
            res = max(wit.sip_residual, wit.seminorm_gap)
            checks.append(Check("witness", "pass", res, tol.witness,
                                {"method": wit.method, "x": wit.x,
                                 "sip_residual": wit.sip_residual,
                                 "seminorm_gap": wit.seminorm_gap}))
            grid = gamma_grid(max(1.0, grid_radius(nT, nS, tol.tol_zero)))
            viol = pythagorean_check(wit, opT, opS, grid)
            checks.append(Check("pythagorean_identity", _status(viol <= tol.pythagorean), viol,
                                tol.pythagorean))
        except WitnessNotFound as exc:
            marginal = abs(exc.margin) <= 10 * tol.tol_member * scale
            checks.append(Check("witness", "skipped" if marginal else "fail", None, tol.witness,
                                {"margin": exc.margin, "marginal": marginal, "message": str(exc)}))
            checks.append(Check("pythagorean_identity", "skipped",
                                payload={"reason": "no witness"}))
    else:
        reason = "not orthogonal" if not bj.orthogonal else bj.reason
        checks.append(Check("witness", "skipped", payload={"reason": reason}))
        checks.append(Check("pythagorean_identity", "skipped", payload={"reason": reason}))

    # minimiser and its uniqueness
    if r and m > tol.tol_zero:
        zr = zeta_unique_check(opT, opS, tol=tol.inequality, zeta=(d, z0))
        # the perturbation probe can only bite when eps^2 m^2 exceeds the tolerance
        probe_matters = (1e-2 * m) ** 2 > 10 * tol.inequality
        ok = zr.min_slack >= -tol.inequality and (all(zr.perturbations_rejected) or not probe_matters)
        checks.append(Check("zeta_unique", _status(ok), zr.min_slack, tol.inequality,
                            {"zeta0": z0, "min_modulus": m,
                             "perturbations_rejected": zr.perturbations_rejected,
                             "perturbation_slack": zr.perturbation_slack,
                             "probe_conclusive": probe_matters}))
    else:
        checks.append(Check("zeta_unique", "skipped",
                            payload={"reason": "m_A(S) is zero", "zeta0": z0, "min_modulus": m}))

    if not r:
        for name in ("phi_formula", "pairs_formula", "infsup", "scalar_distance"):
            checks.append(Check(name, "skipped", payload={"reason": "r = 0"}))
        return report()

    dp, x = dist_phi(opT, opS, tol.restarts, 0)
    err = abs(d * d - dp * dp)
    checks.append(Check("phi_formula", _status(err <= tol.phi * max(1.0, d * d)), err, tol.phi,
                        {"d_gamma": d, "d_phi": dp, "maximizer": x}))

    dq = dist_pairs(opT, opS, tol.restarts, 1)
    err = abs(d - dq)
    checks.append(Check("pairs_formula", _status(err <= tol.pairs * max(1.0, d)), err, tol.pairs,
                        {"d_gamma": d, "d_pairs": dq}))

    lhs, rhs = d * d, dp * dp
    checks.append(Check("infsup", _status(abs(lhs - rhs) <= tol.infsup * max(1.0, lhs)),
                        abs(lhs - rhs), tol.infsup, {"lhs": lhs, "rhs": rhs}))

    opI = compress_op(space, np.eye(space.n))
    dI, _ = dist_gamma(opT, opI)
    fI, _ = dist_phi(opT, opI, tol.restarts, 0)
    err = abs(dI - fI)
    checks.append(Check("scalar_distance", _status(err <= tol.scalar * max(1.0, dI)), err,
                        tol.scalar, {"d": dI, "formula_value": fI}))
    return report()


# -- fuzzing --------------------------------------------------------------------


def fuzz_instance(seed, index, dim):
    """Instance ``index`` of a fuzz run: ``n`` in 1..dim, rank 1..n, variants in rotation.

    Every fifth instance uses the identity weight so the classical reduction
    is exercised.
    """
    rng = np.random.default_rng([seed, index])
    n = int(rng.integers(1, dim + 1))
    r = int(rng.integers(1, n + 1))
    variant = VARIANTS[index % len(VARIANTS)]
    inst = gen_instance(n, r, rng, variant, identity_weight=index % 5 == 4)
    inst.seed = [seed, index]
    return inst


def _fuzz_one(args):
    seed, index, dim, tol = args
    return verify_all(fuzz_instance(seed, index, dim), tol)


def thread_count(threads=None):
    if threads is None:
        env = os.environ.get(THREADS_ENV)
        threads = int(env) if env else os.cpu_count() or 1
    return max(1, int(threads))


def parallel_map(fun, items, threads=None):
    """``list(map(fun, items))``, spread over processes; results keep input order."""
    items = list(items)
    threads = min(thread_count(threads), max(1, len(items)))
    if threads == 1:
        return [fun(it) for it in items]
    with ProcessPoolExecutor(threads) as pool:
        return list(pool.map(fun, items, chunksize=max(1, len(items) // (4 * threads))))


def fuzz(count, dim=6, seed=0, tolerances=None, threads=None):
    """Verify ``count`` seeded instances; returns ``(summary, reports)`` in index order."""
    tol = tolerances or Tolerances()
    reports = parallel_map(_fuzz_one, [(seed, i, dim, tol) for i in range(count)], threads)
    failures = [
        {"seed": rep.seed, "checks": rep.failed()} for rep in reports if not rep.overall
    ]
    per_check = {}
    for rep in reports:
        for c in rep.checks:
            tally = per_check.setdefault(c.name, {"pass": 0, "fail": 0, "skipped": 0})
            tally[c.status] += 1
    summary = {
        "count": count,
        "dim": dim,
        "seed": seed,
        "violations": len(failures),
        "failures": failures,
        "checks": per_check,
    }
    return summary, reports
