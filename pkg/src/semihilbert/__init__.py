"""Operator geometry on a finite-dimensional space with a positive semidefinite weight.

A weight ``A >= 0`` defines the semi-inner product ``<x, y>_A = <Ax, y>``.
This package computes A-seminorms of operators, decides A-Birkhoff-James
orthogonality (with witness vectors), builds the convex set W_A(T, S) and
computes the distance from ``T`` to the multiples of ``S`` by three
independent formulas.
"""

from .distance import (
    DistanceResult,
    dist_gamma,
    dist_pairs,
    dist_phi,
    fujii_nakamoto_check,
    gamma_grid,
    grid_radius,
    infsup_check,
    phi,
    zeta_unique_check,
)
from .errors import *  # noqa: F401,F403
from .generate import ProblemInstance, gen_abounded, gen_instance, gen_psd, orthogonalize_pair
from .io import load_problem, problem_from_json, problem_to_json, save_problem
from .linalg import hermitian_eig, pinv, svd
from .operator import (
    ACompressedOperator,
    check_a_bounded,
    compress_op,
    min_modulus,
    op_seminorm,
    pencil_seminorm,
)
from .orthogonality import (
    bj_check,
    maximal_subspace,
    pythagorean_check,
    witness,
    wset_build,
    wset_support,
)
from .space import (
    SemiHilbertSpace,
    a_normalize,
    build_space,
    compress_vec,
    is_a_orthogonal,
    lift_vec,
    seminorm_vec,
    sip,
)
from .verify import Tolerances, VerifyReport, fuzz, verify_all

__version__ = "0.1.0"
