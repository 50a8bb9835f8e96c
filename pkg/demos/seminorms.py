"""A singular weight and what it does to norms.

With A = diag(4, 0) only the first coordinate is seen: every vector along e2
has seminorm zero, and operators are measured on the range of A only.
"""

import numpy as np

from semihilbert import build_space, check_a_bounded, compress_op, min_modulus, op_seminorm, seminorm_vec, sip

A = np.diag([4.0, 0.0])
space = build_space(A)
print("rank", space.r, "eigenvalues", space.eigvals)

x = np.array([1.0, 7.0])
print("<x, e1>_A =", sip(space, x, [1.0, 0.0]))
print("||x||_A   =", seminorm_vec(space, x))

# T must map the null space of A into itself to have a finite seminorm
for T in (np.array([[0.0, 1.0], [0.0, 0.0]]), np.array([[2.0, 0.0], [5.0, 3.0]])):
    bounded, residual = check_a_bounded(space, T)
    print(T.tolist(), "A-bounded:", bounded, "residual", residual)

T = np.array([[2.0, 0.0], [5.0, 3.0]])
op = compress_op(space, T)
print("compressed T:", op.That.ravel())
print("||T||_A =", op_seminorm(op), " m_A(T) =", min_modulus(op))

# a rank 3 weight on C^5 and a random A-bounded operator
rng = np.random.default_rng(1)
from semihilbert import gen_abounded, gen_psd

space = build_space(gen_psd(5, 3, rng))
T = gen_abounded(space, rng)
op = compress_op(space, T)
print("\nrank", space.r, "of 5;  ||T||_A =", op_seminorm(op), " plain norm", np.linalg.norm(T, 2))
