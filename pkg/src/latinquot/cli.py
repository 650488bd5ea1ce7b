"""Command line front end.

Every subcommand prints one JSON document on stdout.  Exit codes: 0 success,
1 precondition or validation failure, 2 malformed input, 3 internal error.
Failures print a single ``error: <kind>: <reason>`` line on stderr.
"""

from __future__ import annotations

import argparse
import sys

from . import documents as docs
from .errors import InvariantError, PreconditionError
from .explore import reverify, test_conjectures
from .hyper import (
    SupportSet,
    find_gqq_not_guqq,
    find_statement_a_counterexample,
    hyper_numbers,
)
from .lift import QuotientInstance, lift_hilton, lift_partial, lift_real, verify_lift
from .margin import MarginSpec, class_decompose, padded_decompose, perm_decompose
from .tensor import Matrix3, PairSet, Partition, RationalMatrix3, quotient

EXIT_OK, EXIT_INVALID, EXIT_MALFORMED, EXIT_INTERNAL = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(f"error: malformed: {message}\n")
        raise SystemExit(EXIT_MALFORMED)


def _int_list(text):
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _hyper_doc(H):
    h = hyper_numbers(H)
    return {"rho": h.rho, "alpha_bar": h.alpha_bar, "alpha_star": docs.fraction_to_str(h.alpha_star)}


def cmd_quotient(args):
    M = docs.matrix_from_doc(docs.load(args.matrix))
    sigma = Partition.parse(args.partition)
    axes = range(1, M.ndim + 1) if args.axis == "all" else [int(args.axis)]
    for axis in axes:
        if axis > M.ndim:
            raise PreconditionError(f"axis {axis} invalid for a {M.ndim}-indexed matrix")
        M = quotient(M, axis, sigma)
    return docs.matrix_to_doc(M)


def _instance(path, need_r=True):
    M, r, S, beta = docs.instance_from_doc(docs.load(path))
    k = M.dims[0]
    if M.ndim != 3:
        raise PreconditionError("instances need a 3-indexed matrix")
    if need_r:
        if isinstance(M, RationalMatrix3):
            raise PreconditionError("lift needs an integer matrix; use lift-real")
        if r is None:
            raise PreconditionError("lift instances need block sizes r")
    elif isinstance(M, Matrix3):
        M = RationalMatrix3(M.array)
    return M, r, (S if S is not None else PairSet.empty(k)), beta


def cmd_lift(args):
    M, r, S, _ = _instance(args.instance)
    res = lift_partial(QuotientInstance(M, r, S))
    return docs.lift_to_doc(res)


def cmd_lift_real(args):
    M, _, S, beta = _instance(args.instance, need_r=False)
    out = lift_real(M, beta if beta is not None else 1, S)
    doc = docs.lift_to_doc(out.lift)
    doc.update(
        block_size=out.block_size,
        scale=out.scale,
        instance=docs.instance_to_doc(out.instance.M, out.instance.r, out.instance.S),
        rational_solution=docs.matrix_to_doc(out.rational_solution),
    )
    return doc


def cmd_verify(args):
    M, r, S, _ = _instance(args.instance)
    res = docs.lift_from_doc(docs.load(args.lift))
    check = verify_lift(QuotientInstance(M, r, S), res)
    doc = {"ok": bool(check), "reasons": list(check.reasons)}
    if not check:
        return doc, "; ".join(check.reasons)
    return doc


def cmd_decompose(args):
    M = docs.matrix_from_doc(docs.load(args.matrix))
    if M.ndim != 2:
        raise PreconditionError("decompose works on 2-indexed matrices")
    if args.mode == "perm":
        pieces = perm_decompose(M)
    else:
        if args.rows is None or args.cols is None or args.k is None:
            raise PreconditionError(f"--mode {args.mode} needs --rows, --cols and --k")
        if args.mode == "class":
            pieces = class_decompose(M, args.rows, args.cols, args.k)
        else:
            spec = MarginSpec(args.rows, args.cols, frozenset(args.exact or ()))
            pieces = padded_decompose(M, spec, args.k)
    return {"pieces": [docs.matrix_to_doc(P) for P in pieces]}


def cmd_hyper(args):
    H = docs.support_from_doc(docs.load(args.support))
    doc = docs.support_to_doc(H)
    doc.update(_hyper_doc(H))
    return doc


def cmd_counterexample(args):
    if args.which == "A":
        M = find_statement_a_counterexample()
        H = SupportSet.of(M)
        doc = {"which": "A", "matrix": docs.matrix_to_doc(M), "support": docs.support_to_doc(H)}
    else:
        H, M, r = find_gqq_not_guqq()
        res = lift_hilton(M, r)
        doc = {
            "which": "gqq",
            "matrix": docs.matrix_to_doc(M),
            "r": list(r),
            "support": docs.support_to_doc(H),
            "lift": docs.lift_to_doc(res),
        }
    doc.update(_hyper_doc(H))
    return doc


def cmd_explore(args):
    rep = test_conjectures(
        args.k, args.rmax, policy=args.policy, samples=args.samples, seed=args.seed, threads=args.threads
    )
    doc = rep.to_dict()
    doc["reverified"] = all(reverify(e, args.k, args.rmax) for e in rep.counterexamples)
    return doc


def build_parser():
    p = _Parser(prog="latinquot", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("quotient", help="quotient a matrix by a partition")
    q.add_argument("--axis", required=True, choices=["1", "2", "3", "all"])
    q.add_argument("--partition", required=True, help='blocks like "1,2|3,4"')
    q.add_argument("matrix")
    q.set_defaults(func=cmd_quotient)

    q = sub.add_parser("lift", help="lift a quotient instance to a partial Latin square")
    q.add_argument("instance")
    q.set_defaults(func=cmd_lift)

    q = sub.add_parser("lift-real", help="uniform lift of a rational instance")
    q.add_argument("instance")
    q.set_defaults(func=cmd_lift_real)

    q = sub.add_parser("verify", help="check a lift against its instance")
    q.add_argument("instance")
    q.add_argument("lift")
    q.set_defaults(func=cmd_verify)

    q = sub.add_parser("decompose", help="decompose a 2-indexed matrix")
    q.add_argument("--mode", required=True, choices=["perm", "class", "padded"])
    q.add_argument("--rows", type=_int_list, help="row margin R")
    q.add_argument("--cols", type=_int_list, help="column margin S")
    q.add_argument("--k", type=int, help="number of pieces")
    q.add_argument("--exact", type=_int_list, help="1-based columns with exact sums")
    q.add_argument("matrix")
    q.set_defaults(func=cmd_decompose)

    q = sub.add_parser("hyper", help="rho, alpha-bar and alpha* of a support set")
    q.add_argument("support")
    q.set_defaults(func=cmd_hyper)

    q = sub.add_parser("counterexample", help="re-derive a witness by search")
    q.add_argument("--which", required=True, choices=["A", "gqq"])
    q.set_defaults(func=cmd_counterexample)

    q = sub.add_parser("explore", help="bounded search for conjecture counterexamples")
    q.add_argument("--k", type=int, required=True)
    q.add_argument("--rmax", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--samples", type=int, default=200)
    q.add_argument("--policy", choices=["exhaustive", "sample"])
    q.add_argument("--threads", type=int, default=1)
    q.set_defaults(func=cmd_explore)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_MALFORMED
    try:
        out = args.func(args)
    except docs.MalformedDocument as exc:
        sys.stderr.write(f"error: malformed: {exc}\n")
        return EXIT_MALFORMED
    except PreconditionError as exc:
        sys.stderr.write(f"error: invalid: {exc}\n")
        return EXIT_INVALID
    except InvariantError as exc:
        sys.stderr.write(f"error: internal: {exc}\n")
        return EXIT_INTERNAL
    code = EXIT_OK
    if isinstance(out, tuple):
        out, reason = out
        sys.stderr.write(f"error: invalid: {reason}\n")
        code = EXIT_INVALID
    sys.stdout.write(docs.dumps(out) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
