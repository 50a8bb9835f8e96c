"""Command-line interface: ``semihilbert <command> --in problem.json``.

Results go to standard output as JSON (or to ``--out``).  Exit codes: 0 on
success, 1 for invalid input, 2 when a numerical procedure fails, 3 when
``verify`` or ``fuzz`` finds a property violation.
"""

import argparse
import json
import sys

from . import errors
from .distance import (
    RESTARTS,
    dist_gamma,
    dist_pairs,
    dist_phi,
    fujii_nakamoto_check,
    infsup_check,
    zeta_unique_check,
)
from .generate import VARIANTS, gen_instance
from .io import load_problem, problem_to_json
from .operator import check_a_bounded, compress_op, min_modulus, op_seminorm
from .orthogonality import N_THETA, TOL_MEMBER, bj_check, wset_build, witness
from .space import TOL_ZERO, build_space
from .verify import Tolerances, _plain, fuzz, verify_all

EXIT_OK, EXIT_INPUT, EXIT_NUMERIC, EXIT_VIOLATION = 0, 1, 2, 3

_INPUT_ERRORS = (
    errors.InputFormatError,
    errors.DimensionMismatch,
    errors.NotHermitian,
    errors.NotPositive,
    errors.NotABounded,
    errors.SpaceMismatch,
    errors.EmptyRange,
    errors.BadRank,
    errors.NotNormalized,
    errors.NotNormalizable,
)


class _Done(Exception):
    """Carries a result that is printed but ends with a non-zero exit code."""

    def __init__(self, payload, code):
        self.payload, self.code = payload, code


def _load(args, need_ops=True):
    if not args.input:
        raise errors.InputFormatError("--in is required for this command")
    inst = load_problem(args.input)
    space = build_space(inst.A, args.tol_rank, args.tol_zero)
    if not need_ops:
        return inst, space, None, None
    return inst, space, compress_op(space, inst.T), compress_op(space, inst.S)


def cmd_space_info(args):
    _, space, _, _ = _load(args, need_ops=False)
    return {"n": space.n, "r": space.r, "eigvals": space.eigvals, "tol_rank": space.tol_rank}


def cmd_is_abounded(args):
    inst, space, _, _ = _load(args, need_ops=False)
    out = {}
    for name in ("T", "S"):
        bounded, residual = check_a_bounded(space, getattr(inst, name))
        out[name] = {"bounded": bounded, "residual": residual}
    return out


def cmd_seminorm(args):
    _, _, opT, opS = _load(args)
    return {"T": op_seminorm(opT), "S": op_seminorm(opS)}


def cmd_minmod(args):
    _, _, opT, opS = _load(args)
    return {"T": min_modulus(opT), "S": min_modulus(opS)}


def cmd_bj_check(args):
    _, _, opT, opS = _load(args)
    res = bj_check(opT, opS, m=args.grid or N_THETA, tol_member=args.tol_member)
    out = {"orthogonal": res.orthogonal, "margin": res.margin}
    if res.wset is None:
        out["reason"] = res.reason
    if not res.orthogonal:
        d, z0 = dist_gamma(opT, opS)
        out["refuting_gamma"] = z0
        out["refuting_seminorm"] = d
    return out


def cmd_witness(args):
    _, _, opT, opS = _load(args)
    wit = witness(opT, opS, restarts=args.restarts or 8, seed=args.seed)
    return {"x": wit.x, "u": wit.u, "seminorm_gap": wit.seminorm_gap,
            "sip_residual": wit.sip_residual, "method": wit.method}


def cmd_wset(args):
    _, _, opT, opS = _load(args)
    ws = wset_build(opT, opS, m=args.grid or N_THETA, tol_member=args.tol_member)
    out = {"C": ws.C, "contains_zero": ws.contains_zero, "margin": ws.margin,
           "polygon": ws.polygon(), "support": list(zip(ws.thetas, ws.h))}
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write("\n".join(ws.csv_lines()) + "\n")
    return out


def cmd_distance(args):
    _, _, opT, opS = _load(args)
    restarts = args.restarts or RESTARTS
    out = {}
    if args.method in ("gamma", "all"):
        d, z0 = dist_gamma(opT, opS, **({"n_grid": args.grid} if args.grid else {}))
        out.update(d_gamma=d, zeta0=z0)
    if args.method in ("phi", "all"):
        dp, x = dist_phi(opT, opS, restarts, args.seed)
        out.update(d_phi=dp, phi_maximizer=x)
    if args.method in ("pairs", "all"):
        out["d_pairs"] = dist_pairs(opT, opS, restarts, args.seed + 1)
    values = [out[k] for k in ("d_gamma", "d_phi", "d_pairs") if k in out]
    if len(values) > 1:
        out["agreement"] = max(values) - min(values)
    return out


def cmd_zeta(args):
    _, _, opT, opS = _load(args)
    rep = zeta_unique_check(opT, opS)
    out = {"status": rep.status, "zeta0": rep.zeta0, "d": rep.d, "min_modulus": rep.min_modulus,
           "min_slack": rep.min_slack, "perturbations_rejected": rep.perturbations_rejected,
           "perturbation_slack": rep.perturbation_slack}
    if rep.status == "fail":
        raise _Done(out, EXIT_VIOLATION)
    return out


def cmd_infsup(args):
    _, _, opT, opS = _load(args)
    rep = infsup_check(opT, opS, args.restarts or RESTARTS, args.seed)
    d, value = fujii_nakamoto_check(opT, args.restarts or RESTARTS, args.seed)
    return {"lhs": rep.lhs, "rhs": rep.rhs, "gap": rep.gap,
            "scalar_distance": {"d": d, "formula_value": value}}


def _tolerances(args):
    tol = Tolerances(tol_rank=args.tol_rank, tol_zero=args.tol_zero, tol_member=args.tol_member)
    if args.restarts:
        tol.restarts = args.restarts
    return tol


def cmd_verify(args):
    inst = load_problem(args.input) if args.input else None
    if inst is None:
        raise errors.InputFormatError("--in is required for this command")
    rep = verify_all(inst, _tolerances(args))
    out = rep.to_dict()
    if not rep.overall:
        validation = rep.checks[0]
        code = EXIT_INPUT if validation.status == "fail" else EXIT_VIOLATION
        raise _Done(out, code)
    return out


def cmd_fuzz(args):
    summary, _ = fuzz(args.count, args.dim, args.seed, _tolerances(args))
    if summary["violations"]:
        raise _Done(summary, EXIT_VIOLATION)
    return summary


def cmd_gen(args):
    rank = args.dim if args.rank is None else args.rank
    inst = gen_instance(args.dim, rank, args.seed, args.variant, args.identity)
    return problem_to_json(inst)


COMMANDS = {
    "space-info": (cmd_space_info, "rank, eigenvalues and tolerances of the weight A"),
    "is-abounded": (cmd_is_abounded, "null-preservation test for T and S"),
    "seminorm": (cmd_seminorm, "operator A-seminorms of T and S"),
    "minmod": (cmd_minmod, "A-minimum moduli of T and S"),
    "bj-check": (cmd_bj_check, "decide whether T is A-Birkhoff-James orthogonal to S"),
    "witness": (cmd_witness, "A-unit x with ||Tx||_A = ||T||_A and <Tx, Sx>_A = 0"),
    "wset": (cmd_wset, "boundary polygon of W_A(T, S)"),
    "distance": (cmd_distance, "distance from T to the multiples of S"),
    "zeta": (cmd_zeta, "minimiser of ||T + gamma S||_A and its uniqueness check"),
    "infsup": (cmd_infsup, "inf-sup equality and the distance of T to the scalars"),
    "verify": (cmd_verify, "run every property check on one problem"),
    "fuzz": (cmd_fuzz, "verify many seeded random problems"),
    "gen": (cmd_gen, "write a seeded random problem"),
}


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--in", dest="input", metavar="FILE", help="problem JSON file")
    common.add_argument("--out", metavar="FILE", help="write the JSON result here instead of stdout")
    common.add_argument("--tol-rank", type=float, default=None,
                        help="relative eigenvalue cut for rank(A) (default n*1e-12)")
    common.add_argument("--tol-zero", type=float, default=TOL_ZERO)
    common.add_argument("--tol-member", type=float, default=TOL_MEMBER,
                        help="zero-membership tolerance, relative to ||T||_A ||S||_A")
    common.add_argument("--restarts", type=int, default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--grid", type=int, default=None,
                        help="support samples for bj-check/wset, coarse grid side for distance")

    parser = argparse.ArgumentParser(prog="semihilbert", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text)
        if name == "wset":
            p.add_argument("--csv", metavar="FILE", help="also write theta,h,re,im lines")
        elif name == "distance":
            p.add_argument("--method", choices=("gamma", "phi", "pairs", "all"), default="all")
        elif name == "fuzz":
            p.add_argument("--count", type=int, default=500)
            p.add_argument("--dim", type=int, default=6)
        elif name == "gen":
            p.add_argument("--dim", type=int, default=3)
            p.add_argument("--rank", type=int, default=None)
            p.add_argument("--variant", choices=VARIANTS, default="generic")
            p.add_argument("--identity", action="store_true", help="use A = I")
    return parser


def _emit(payload, args, stream=None):
    text = json.dumps(_plain(payload), indent=2)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text, file=stream or sys.stdout)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    fun = COMMANDS[args.command][0]
    try:
        _emit(fun(args), args)
        return EXIT_OK
    except _Done as done:
        _emit(done.payload, args)
        return done.code
    except (OSError,) + _INPUT_ERRORS as exc:
        return _fail(exc, EXIT_INPUT)
    except errors.SemiHilbertError as exc:
        return _fail(exc, EXIT_NUMERIC)


def _fail(exc, code):
    error = {"error": type(exc).__name__, "message": str(exc)}
    for attr in ("residual", "margin"):
        if hasattr(exc, attr):
            error[attr] = getattr(exc, attr)
    print(json.dumps(_plain(error)), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
