"""Property-based tests: invariants that must hold for every generated instance."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from semihilbert.distance import dist_gamma, phi
from semihilbert.generate import VARIANTS, gen_abounded, gen_instance, gen_psd
from semihilbert.linalg import hermitian_eig, pinv, svd
from semihilbert.operator import compress_op, min_modulus, op_seminorm, pencil_seminorm
from semihilbert.orthogonality import bj_check, wset_build
from semihilbert.space import build_space, compress_vec, lift_vec, sip

seeds = st.integers(0, 2**32 - 1)
dims = st.integers(1, 6)
finite = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def instances(draw, variants=VARIANTS):
    n = draw(st.integers(2, 6))
    r = draw(st.integers(1, n))
    inst = gen_instance(n, r, draw(seeds), draw(st.sampled_from(variants)))
    sp = build_space(inst.A)
    return sp, compress_op(sp, inst.T), compress_op(sp, inst.S)


@settings(max_examples=60, deadline=None)
@given(n=dims, seed=seeds)
def test_eig_reconstructs(n, seed):
    rng = np.random.default_rng(seed)
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    H = G + G.conj().T
    eig = hermitian_eig(H)
    R = (eig.vectors * eig.values) @ eig.vectors.conj().T
    assert np.linalg.norm(R - H) <= 1e-12 * np.linalg.norm(H) * 10


@settings(max_examples=60, deadline=None)
@given(m=dims, n=dims, seed=seeds, rank=st.integers(0, 6))
def test_svd_and_pinv(m, n, seed, rank):
    rng = np.random.default_rng(seed)
    k = min(rank, m, n)
    M = (rng.standard_normal((m, k)) + 1j * rng.standard_normal((m, k))) @ (
        rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n)))
    res = svd(M)
    assert np.all(np.diff(res.s) <= 1e-12 * max(1.0, res.s[0]))
    assert abs(res.s[0] - np.linalg.norm(M, 2)) <= 1e-8 * max(1.0, res.s[0])
    P = pinv(M)
    scale = max(1.0, np.linalg.norm(M)) * max(1.0, np.linalg.norm(P))
    assert np.linalg.norm(M @ P @ M - M) <= 1e-9 * scale * max(1.0, np.linalg.norm(M))
    assert np.linalg.norm(P @ M @ P - P) <= 1e-9 * scale * max(1.0, np.linalg.norm(P))


@settings(max_examples=60, deadline=None)
@given(n=dims, seed=seeds, data=st.data())
def test_space_round_trip_and_cauchy_schwarz(n, seed, data):
    r = data.draw(st.integers(0, n))
    rng = np.random.default_rng(seed)
    sp = build_space(gen_psd(n, r, rng))
    assert sp.r == r
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    nx, ny = np.linalg.norm(compress_vec(sp, x)), np.linalg.norm(compress_vec(sp, y))
    assert abs(sip(sp, x, y)) <= nx * ny * (1 + 1e-12) + 1e-10
    u = compress_vec(sp, x)
    assert np.allclose(compress_vec(sp, lift_vec(sp, u)), u, atol=1e-9 * max(1.0, np.linalg.norm(u)))


@settings(max_examples=40, deadline=None)
@given(inst=instances())
def test_operator_bounds(inst):
    sp, opT, opS = inst
    nT, nS = op_seminorm(opT), op_seminorm(opS)
    assert min_modulus(opS) <= nS + 1e-12
    total = op_seminorm(compress_op(sp, opT.T + opS.T))
    assert total <= nT + nS + 1e-10
    phase = np.exp(0.7j)
    assert abs(op_seminorm(compress_op(sp, phase * opT.T)) - nT) <= 1e-10 * max(1.0, nT)


@settings(max_examples=40, deadline=None)
@given(inst=instances(), g=st.tuples(finite, finite))
def test_pencil_never_below_distance(inst, g):
    _, opT, opS = inst
    d, z = dist_gamma(opT, opS)
    gamma = complex(*g)
    assert pencil_seminorm(opT, opS, gamma) >= d - 1e-9 * max(1.0, d)
    assert d <= op_seminorm(opT) + 1e-12


@settings(max_examples=40, deadline=None)
@given(inst=instances(), seed=seeds)
def test_phi_is_a_lower_bound(inst, seed):
    _, opT, opS = inst
    d, _ = dist_gamma(opT, opS)
    rng = np.random.default_rng(seed)
    r = opT.That.shape[0]
    for _ in range(10):
        u = rng.standard_normal(r) + 1j * rng.standard_normal(r)
        u /= np.linalg.norm(u)
        value = phi(opT, opS, u)
        assert value >= -1e-12
        assert value <= d * d * (1 + 1e-9) + 1e-12


@settings(max_examples=30, deadline=None)
@given(inst=instances(), seed=seeds)
def test_wset_samples_stay_inside(inst, seed):
    _, opT, opS = inst
    if op_seminorm(opT) <= 1e-10:
        return
    ws = wset_build(opT, opS)
    rng = np.random.default_rng(seed)
    k = ws.C.shape[0]
    W = rng.standard_normal((200, k)) + 1j * rng.standard_normal((200, k))
    W /= np.linalg.norm(W, axis=1, keepdims=True)
    xi = np.einsum("ij,jk,ik->i", W.conj(), ws.C, W)
    proj = (np.exp(-1j * ws.thetas)[None, :] * xi[:, None]).real
    scale = max(1.0, ws.radius)
    assert np.max(proj - ws.h[None, :]) <= 1e-10 * scale
    assert np.max(np.abs(xi)) <= ws.radius + 1e-10


@settings(max_examples=30, deadline=None)
@given(inst=instances(), a=st.tuples(finite, finite), b=st.tuples(finite, finite))
def test_orthogonality_is_homogeneous(inst, a, b):
    sp, opT, opS = inst
    alpha, beta = complex(*a), complex(*b)
    if abs(alpha) < 1e-3 or abs(beta) < 1e-3:
        return
    base = bj_check(opT, opS)
    scaled = bj_check(compress_op(sp, alpha * opT.T), compress_op(sp, beta * opS.T))
    # decisions can only differ for instances sitting on the tolerance boundary
    if abs(base.margin) > 1e-6 * max(1e-300, op_seminorm(opT) * op_seminorm(opS)):
        assert scaled.orthogonal == base.orthogonal


@settings(max_examples=30, deadline=None)
@given(n=st.integers(1, 5), seed=seeds)
def test_generator_outputs_are_bounded(n, seed):
    rng = np.random.default_rng(seed)
    r = int(rng.integers(0, n + 1))
    sp = build_space(gen_psd(n, r, rng))
    T = gen_abounded(sp, rng)
    compress_op(sp, T)
