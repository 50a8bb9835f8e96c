"""Three ways to the distance from T to the line through S.

dist_gamma minimises ||T + gS||_A directly, dist_phi maximises a projection
functional over unit vectors and dist_pairs maximises over orthonormal pairs.
They should agree.
"""

import numpy as np

from semihilbert import (
    build_space,
    compress_op,
    dist_gamma,
    dist_pairs,
    dist_phi,
    fujii_nakamoto_check,
    gen_instance,
    infsup_check,
    zeta_unique_check,
)
from semihilbert.generate import VARIANTS

print("n r variant               d_gamma     d_phi       d_pairs")
for seed in range(6):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    r = int(rng.integers(1, n + 1))
    variant = VARIANTS[seed % len(VARIANTS)]
    inst = gen_instance(n, r, rng, variant)
    space = build_space(inst.A)
    opT, opS = compress_op(space, inst.T), compress_op(space, inst.S)
    d, _ = dist_gamma(opT, opS)
    print(f"{n} {r} {variant:21} {d:.8f}  {dist_phi(opT, opS)[0]:.8f}  {dist_pairs(opT, opS):.8f}")

inst = gen_instance(4, 3, 11)
space = build_space(inst.A)
opT, opS = compress_op(space, inst.T), compress_op(space, inst.S)

rep = zeta_unique_check(opT, opS)
print("\nminimiser", rep.zeta0, "status", rep.status, "worst slack", rep.min_slack)

rep = infsup_check(opT, opS)
print("inf-sup: lhs", rep.lhs, "rhs", rep.rhs, "gap", rep.gap)

d, value = fujii_nakamoto_check(opT)
print("distance to scalars", d, "formula", value)
