"""Deciding orthogonality, and producing the vector that proves it.

T is orthogonal to S in the Birkhoff-James sense when ||T + gS||_A >= ||T||_A
for every complex g.  The test is whether zero lies in the convex set W
built from the directions where T attains its seminorm.
"""

import numpy as np

from semihilbert import (
    bj_check,
    build_space,
    compress_op,
    dist_gamma,
    gen_instance,
    pythagorean_check,
    witness,
    wset_build,
)

I2 = np.eye(2)
T, S = np.diag([1.0, -1.0]), I2
space = build_space(I2)
opT, opS = compress_op(space, T), compress_op(space, S)
res = bj_check(opT, opS)
print("diag(1,-1) against I:", res.orthogonal, "margin", res.margin)

wit = witness(opT, opS)
print("witness", np.round(wit.x, 6), "sip residual", wit.sip_residual)
print("pythagorean violation", pythagorean_check(wit, opT, opS, [1, 1j, -2 + 3j]))

# W is a segment [-1, 1] here; zero sits in the middle
ws = wset_build(opT, opS)
print("W vertices:", np.unique(np.round(ws.polygon(), 6), axis=0).tolist())

# a case that fails, and the g that shows it
opT = compress_op(space, np.diag([3.0, 1.0]))
res = bj_check(opT, opS)
d, g = dist_gamma(opT, opS)
print("\ndiag(3,1) against I:", res.orthogonal, " ||T + gS||_A =", d, "at g =", g)

# random orthogonal pairs under a singular weight
print("\nseed  n r  orthogonal  witness residual")
for seed in range(5):
    inst = gen_instance(4, 2, seed, "orthogonal-pair")
    space = build_space(inst.A)
    opT, opS = compress_op(space, inst.T), compress_op(space, inst.S)
    w = witness(opT, opS)
    print(f"{seed:4d}  4 2  {bj_check(opT, opS).orthogonal!s:10}  {w.sip_residual:.1e}")
