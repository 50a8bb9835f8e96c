import numpy as np
import pytest

from semihilbert.distance import dist_gamma, gamma_grid
from semihilbert.errors import SpaceMismatch, WitnessNotFound, ZeroOperator
from semihilbert.generate import gen_abounded, gen_instance, gen_psd, orthogonalize_pair
from semihilbert.linalg import sigma_max
from semihilbert.operator import compress_op, min_modulus, op_seminorm
from semihilbert.orthogonality import (
    bj_check,
    maximal_subspace,
    pythagorean_check,
    witness,
    wset_build,
    wset_support,
)
from semihilbert.space import build_space, seminorm_vec, sip
from semihilbert.verify import classical_bj

from conftest import EXACT, brute_gamma, ops, sampled_numerical_range


def test_maximal_subspace_fixtures():
    _, opT, _ = ops(np.eye(2), np.diag([3.0, 1.0]), np.eye(2))
    ms = maximal_subspace(opT)
    assert ms.k == 1
    assert np.allclose(np.abs(ms.V[:, 0]), [1, 0], atol=EXACT)
    _, opT, _ = ops(np.eye(2), np.eye(2), np.eye(2))
    ms = maximal_subspace(opT)
    assert ms.k == 2
    assert np.allclose(ms.V.conj().T @ ms.V, np.eye(2), atol=EXACT)


def test_maximal_subspace_random(rng):
    for _ in range(10):
        sp = build_space(gen_psd(5, 4, rng))
        op = compress_op(sp, gen_abounded(sp, rng))
        ms = maximal_subspace(op)
        s1 = np.linalg.svd(op.That, compute_uv=False)[0]
        assert ms.k == 1
        assert abs(np.linalg.norm(op.That @ ms.V[:, 0]) - s1) <= 1e-10


def test_maximal_subspace_zero():
    _, opT, _ = ops(np.eye(2), np.zeros((2, 2)), np.eye(2))
    with pytest.raises(ZeroOperator):
        maximal_subspace(opT)
    with pytest.raises(ZeroOperator):
        wset_build(opT, opT)


def test_support_fixtures():
    h, w = wset_support(np.array([[1.0]]), 0.0)
    assert abs(h - 1) <= EXACT
    h, w = wset_support(np.diag([1.0, -1.0]), 0.0)
    assert abs(h - 1) <= EXACT
    assert np.allclose(np.abs(w), [1, 0], atol=EXACT)


def test_support_brute_force(rng):
    C = np.diag([1.0, 1j])
    xi = sampled_numerical_range(C, rng)
    for theta, expect in [(0.0, 1.0), (np.pi / 2, 1.0), (np.pi, 0.0)]:
        h, w = wset_support(C, theta)
        assert abs(h - expect) <= 1e-12
        assert abs((np.exp(-1j * theta) * np.vdot(w, C @ w)).real - h) <= 1e-12
        assert abs(np.max((np.exp(-1j * theta) * xi).real) - h) <= 1e-3


def test_wset_segment_misses_zero(rng):
    _, opT, opS = ops(np.eye(2), np.eye(2), np.diag([1.0, -1j]))
    ws = wset_build(opT, opS)
    assert np.allclose(ws.C, np.diag([1.0, 1j]), atol=EXACT)
    assert not ws.contains_zero
    assert abs(ws.margin + np.sqrt(2) / 2) <= 1e-10
    # brute force: the support function at 5 pi / 4 over sampled points
    xi = sampled_numerical_range(ws.C, rng)
    brute = np.max((np.exp(-1j * 5 * np.pi / 4) * xi).real)
    assert abs(brute - ws.margin) <= 1e-3
    assert brute <= ws.margin + 1e-12


def test_wset_fixtures():
    _, opT, opS = ops(np.eye(2), np.diag([1.0, -1.0]), np.eye(2))
    ws = wset_build(opT, opS)
    assert ws.contains_zero
    assert np.allclose(sorted(np.linalg.eigvals(ws.C).real), [-1, 1], atol=EXACT)
    pts = np.array(ws.points)
    assert np.allclose(pts.imag, 0, atol=EXACT)
    assert abs(pts.real.max() - 1) <= EXACT and abs(pts.real.min() + 1) <= EXACT
    _, opT, opS = ops(np.eye(2), np.eye(2), np.eye(2))
    ws = wset_build(opT, opS)
    assert not ws.contains_zero
    assert np.allclose(ws.points, 1, atol=EXACT)


def _random_wset(rng, variant="degenerate"):
    inst = gen_instance(5, 4, rng, variant)
    sp = build_space(inst.A)
    opT, opS = compress_op(sp, inst.T), compress_op(sp, inst.S)
    return opT, opS, wset_build(opT, opS)


def test_wset_boundary_invariants(rng):
    for _ in range(10):
        opT, opS, ws = _random_wset(rng)
        rot = np.exp(-1j * ws.thetas)
        tol = 1e-10 * max(1.0, ws.radius)
        assert np.max(np.abs((rot * ws.points).real - ws.h)) <= tol
        # every sampled boundary point satisfies every sampled support inequality
        proj = (rot[:, None] * np.asarray(ws.points)[None, :]).real
        assert np.max(proj - ws.h[:, None]) <= tol
        recon = np.einsum("ij,jk,ik->i", ws.vectors.conj(), ws.C, ws.vectors)
        assert np.max(np.abs(recon - ws.points)) <= tol
        assert np.max(np.abs(ws.points)) <= op_seminorm(opT) * op_seminorm(opS) + 1e-10


def test_wset_convexity_midpoints(rng):
    for _ in range(10):
        _, _, ws = _random_wset(rng)
        xi = sampled_numerical_range(ws.C, rng, 2000)
        mid = 0.5 * (xi[:1000] + xi[1000:])
        proj = (np.exp(-1j * ws.thetas)[None, :] * mid[:, None]).real
        assert np.max(proj - ws.h[None, :]) <= 1e-10 * max(1.0, ws.radius)


def test_bj_fixtures():
    _, opT, opS = ops(np.eye(2), np.diag([1.0, -1.0]), np.eye(2))
    assert bj_check(opT, opS).orthogonal
    _, opT, opS = ops(np.eye(2), np.eye(2), np.eye(2))
    res = bj_check(opT, opS)
    assert not res.orthogonal and abs(res.margin + 1) <= EXACT
    _, opT, opS = ops(np.eye(2), np.zeros((2, 2)), np.eye(2))
    assert bj_check(opT, opS).orthogonal
    _, opT, opS = ops(np.diag([1.0, 0.0]), np.eye(2), np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert bj_check(opT, opS).orthogonal


def test_bj_space_mismatch():
    _, opT, _ = ops(np.eye(2), np.eye(2), np.eye(2))
    _, _, opS = ops(np.eye(2), np.eye(2), np.eye(2))
    with pytest.raises(SpaceMismatch):
        bj_check(opT, opS)


def test_bj_agrees_with_brute_distance(rng):
    A = np.diag([1.0, 1.0, 0.0])
    sp = build_space(A)
    for i in range(30):
        T, S = gen_abounded(sp, rng), gen_abounded(sp, rng)
        if i % 2:
            S = orthogonalize_pair(sp, T, S, rng)
        opT, opS = compress_op(sp, T), compress_op(sp, S)
        d, _ = brute_gamma(opT.That, opS.That)
        nT = op_seminorm(opT)
        assert bj_check(opT, opS).orthogonal == (d >= nT - 1e-7 * nT)


def test_bj_homogeneous(rng):
    for i in range(20):
        inst = gen_instance(4, 3, rng, ("generic", "orthogonal-pair")[i % 2])
        sp = build_space(inst.A)
        base = bj_check(compress_op(sp, inst.T), compress_op(sp, inst.S)).orthogonal
        a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
        scaled = bj_check(compress_op(sp, a * inst.T), compress_op(sp, b * inst.S)).orthogonal
        assert scaled == base


def test_bj_identity_weight_matches_classical(rng):
    for i in range(20):
        inst = gen_instance(4, 4, rng, ("generic", "orthogonal-pair", "degenerate",
                                        "degenerate-orthogonal")[i % 4], identity_weight=True)
        sp = build_space(inst.A)
        ours = bj_check(compress_op(sp, inst.T), compress_op(sp, inst.S)).orthogonal
        assert ours == classical_bj(inst.T, inst.S)[0]


def test_witness_fixture_swap():
    sp, opT, opS = ops(np.eye(2), np.diag([1.0, -1.0]), np.eye(2))
    wit = witness(opT, opS)
    assert np.allclose(np.abs(wit.x), [1 / np.sqrt(2)] * 2, atol=EXACT)
    assert abs(seminorm_vec(sp, wit.x) - 1) <= EXACT
    assert abs(seminorm_vec(sp, opT.T @ wit.x) - 1) <= EXACT
    assert abs(sip(sp, opT.T @ wit.x, wit.x)) <= EXACT


def test_witness_fixture_s_vanishes_on_range():
    A = np.diag([1.0, 0.0])
    sp, opT, opS = ops(A, np.array([[2.0, 0.0], [0.0, 3.0]]), np.array([[0.0, 0.0], [0.0, 1.0]]))
    assert np.allclose(opS.That, 0, atol=EXACT)
    wit = witness(opT, opS)
    assert np.allclose(np.abs(wit.x), [1, 0], atol=EXACT)
    assert wit.sip_residual <= EXACT


def test_witness_random_orthogonal_pairs(rng):
    found = 0
    for i in range(40):
        n = int(rng.integers(2, 7))
        r = int(rng.integers(1, n + 1))
        inst = gen_instance(n, r, rng, ("orthogonal-pair", "degenerate-orthogonal")[i % 2])
        sp = build_space(inst.A)
        opT, opS = compress_op(sp, inst.T), compress_op(sp, inst.S)
        wit = witness(opT, opS)
        assert wit.sip_residual <= 1e-7 and wit.seminorm_gap <= 1e-7
        assert abs(seminorm_vec(sp, wit.x) - 1) <= 1e-10
        found += 1
        g = np.array([1.0, 1j, -2 + 3j, 0.5 - 0.25j])
        viol = pythagorean_check(wit, opT, opS, g)
        nSx = seminorm_vec(sp, opS.T @ wit.x)
        assert viol <= np.max(2 * np.abs(g)) * 1e-7 * nSx + 1e-10
    assert found == 40


def test_witness_not_found_reports_margin():
    _, opT, opS = ops(np.eye(2), np.eye(2), np.eye(2))
    with pytest.raises(WitnessNotFound) as info:
        witness(opT, opS)
    assert abs(info.value.margin + 1) <= EXACT


def test_pythagorean_fixtures():
    _, opT, opS = ops(np.eye(2), np.diag([1.0, -1.0]), np.eye(2))
    wit = witness(opT, opS)
    assert pythagorean_check(wit, opT, opS, [1, 1j, -2 + 3j]) <= EXACT
    assert pythagorean_check(wit, opT, opS, [0]) == 0.0


def test_equivalence_inequality_when_orthogonal(rng):
    for i in range(20):
        inst = gen_instance(4, 3, rng, "orthogonal-pair")
        sp = build_space(inst.A)
        opT, opS = compress_op(sp, inst.T), compress_op(sp, inst.S)
        assert bj_check(opT, opS).orthogonal
        nT, m = op_seminorm(opT), min_modulus(opS)
        grid = gamma_grid(2 * nT / op_seminorm(opS))
        for g in grid:
            val = sigma_max(opT.That + g * opS.That) ** 2
            assert val >= nT**2 + abs(g) ** 2 * m**2 - 1e-8
        d, _ = dist_gamma(opT, opS)
        assert d >= nT * (1 - 1e-7)
