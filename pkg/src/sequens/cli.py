"""Command-line interface.

Each subcommand reads documents (a path, or ``-`` for stdin), calls one
library operation, and writes the result document to stdout.

Exit status: 0 success, 1 validation error, 2 parse/usage error, 3 a
theorem check failed.
"""

import argparse
import math
import os
import sys

import numpy as np

from . import complement as cmp
from . import effects as eff
from . import harness
from . import observables as obs
from . import spectral as spc
from .errors import ParseError, SequensError
from .io import parse_document, serialize_document, serialize_record
from .numerics import TolerancePolicy, set_policy
from .qubit import qubit_example

EXIT_OK, EXIT_INVALID, EXIT_PARSE, EXIT_CHECK = 0, 1, 2, 3
TOL_ENV = "SEQUENS_TOL"


def _read(path):
    try:
        if path == "-":
            return parse_document(sys.stdin.read())
        with open(path, encoding="utf-8") as fh:
            return parse_document(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", path) from None


def _expect(obj, kinds, path):
    if not isinstance(obj, kinds):
        names = "/".join(k.__name__ for k in kinds) if isinstance(kinds, tuple) else kinds.__name__
        raise ParseError(f"expected {names}, got {type(obj).__name__}", path)
    return obj


def _range(text):
    lo, sep, hi = text.partition("..")
    try:
        lo, hi = int(lo), int(hi if sep else lo)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected LO..HI, got {text!r}") from None
    return lo, hi


def _cmd_validate(args):
    obj = _read(args.file)
    fields = {"valid": True, "type": type(obj).__name__}
    if isinstance(obj, obs.Observable):
        fields.update(outcomes=len(obj), sharp=obj.is_sharp, atomic=obj.is_atomic)
    return serialize_record("validation", fields)


def _cmd_seqprod(args):
    a = _expect(_read(args.a), eff.Effect, args.a)
    b = _expect(_read(args.b), eff.Effect, args.b)
    return eff.seq_product(a, b)


def _cmd_complement(args):
    x = _expect(_read(args.file), (eff.Effect, obs.Observable), args.file)
    return eff.complement_effect(x) if isinstance(x, eff.Effect) else cmp.complement_obs(x)


def _cmd_condition(args):
    B = _expect(_read(args.B), obs.Observable, args.B)
    A = _expect(_read(args.A), obs.Observable, args.A)
    return obs.condition_obs(B, A)


def _cmd_condition_state(args):
    rho = _expect(_read(args.rho), eff.State, args.rho)
    A = _expect(_read(args.A), obs.Observable, args.A)
    return obs.condition_state_obs(rho, A)


def _cmd_cond_prob(args):
    rho = _expect(_read(args.rho), eff.State, args.rho)
    b = _expect(_read(args.b), eff.Effect, args.b)
    a = _expect(_read(args.a), eff.Effect, args.a)
    return eff.conditional_probability(rho, b, a)


def _cmd_mix(args):
    try:
        weights = [float(w) for w in args.weights.split(",")]
    except ValueError:
        raise ParseError("weights must be comma-separated numbers", "weights") from None
    Bs = [_expect(_read(f), obs.Observable, f) for f in args.files]
    return obs.mixture(weights, Bs)


def _cmd_postprocess(args):
    nu = _expect(_read(args.nu), obs.ClassicalChannel, args.nu)
    A = _expect(_read(args.A), obs.Observable, args.A)
    return obs.post_process(nu, A)


def _cmd_opcond(args):
    T = _expect(_read(args.T), np.ndarray, args.T)
    S = _expect(_read(args.S), np.ndarray, args.S)
    return spc.condition_operator(T, S).matrix


def _cmd_spectral(args):
    return spc.spectral_observable(_expect(_read(args.T), np.ndarray, args.T))


def _cmd_obs_op(args):
    return obs.observable_operator(_expect(_read(args.A), obs.Observable, args.A))


def _cmd_fhat(args):
    A = _expect(_read(args.A), obs.Observable, args.A)
    table = _expect(_read(args.table), dict, args.table)
    return obs.f_hat(A, table)


def _cmd_iterate_complement(args):
    A = _expect(_read(args.A), obs.Observable, args.A)
    if args.m < 1:
        raise ParseError("m must be a positive integer", "m")
    if args.closed_form:
        return cmp.closed_form_complement(A, args.m)
    return cmp.iterate_complement(A, args.m)


def _cmd_bicondition(args):
    B, A, C = (_expect(_read(f), obs.Observable, f) for f in (args.B, args.A, args.C))
    return obs.bicondition(B, A, C, args.grouping)


def _cmd_check(args):
    if args.list:
        return serialize_record("check-registry", {k: c.description for k, c in harness.REGISTRY.items()})
    spec = harness.RandomSpec(seed=args.seed, dims=args.dims, outcomes=args.outcomes, trials=args.trials)
    return harness.run_all(spec, workers=args.workers, theorem_id=args.theorem)


def _cmd_example_qubit(args):
    out = qubit_example(args.x, args.y, args.phi_angle, args.psi_angle)
    return serialize_record("example-qubit", out)


def build_parser():
    p = argparse.ArgumentParser(prog="sequens", description=__doc__.splitlines()[0])
    p.add_argument("--tol", type=float, help=f"absolute tolerance (overrides ${TOL_ENV})")
    p.add_argument("-o", "--output", help="write the result here instead of stdout")
    # same flags after the subcommand; SUPPRESS keeps them from clobbering the top-level values
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("-o", "--output", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *positionals, help=None):
        sp = sub.add_parser(name, help=help, parents=[common])
        for pos in positionals:
            sp.add_argument(pos)
        sp.set_defaults(func=fn)
        return sp

    add("validate", _cmd_validate, "file", help="parse and validate a document")
    add("seqprod", _cmd_seqprod, "a", "b", help="sequential product a o b of two effects")
    add("complement", _cmd_complement, "file", help="complement of an effect or n-observable")
    add("condition", _cmd_condition, "B", "A", help="observable B conditioned on A")
    add("condition-state", _cmd_condition_state, "rho", "A", help="state conditioned on an observable")
    add("cond-prob", _cmd_cond_prob, "rho", "b", "a", help="probability of b given a in rho")
    sp = add("mix", _cmd_mix, "weights", help="mixture of observables (weights comma-separated)")
    sp.add_argument("files", nargs="+")
    add("postprocess", _cmd_postprocess, "nu", "A", help="post-processing of A by a classical channel")
    add("opcond", _cmd_opcond, "T", "S", help="operator T conditioned on operator S")
    add("spectral", _cmd_spectral, "T", help="spectral observable of a Hermitian matrix")
    add("obs-op", _cmd_obs_op, "A", help="observable operator sum_x x a_x")
    add("fhat", _cmd_fhat, "A", "table", help="sum_x f(x) a_x for a function table")
    sp = add("iterate-complement", _cmd_iterate_complement, "A", help="m-fold complement")
    sp.add_argument("m", type=int)
    sp.add_argument("--closed-form", action="store_true", help="use the closed form instead of iterating")
    sp = add("bicondition", _cmd_bicondition, "B", "A", "C", help="((B|A)|C) or (B|(A|C))")
    sp.add_argument("--grouping", choices=("left", "right"), default="left")
    sp = add("check", _cmd_check, help="run the randomized identity checks")
    sp.add_argument("--theorem", help="run only this check id")
    sp.add_argument("--seed", type=int, default=7)
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--dims", type=_range, default=(2, 5), metavar="LO..HI")
    sp.add_argument("--outcomes", type=_range, default=(2, 4), metavar="LO..HI")
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--list", action="store_true", help="list registered check ids")
    sp = add("example-qubit", _cmd_example_qubit, help="two dichotomic atomic qubit observables")
    sp.add_argument("--x", type=float, nargs=2, default=(1.0, -1.0), metavar=("X1", "X2"))
    sp.add_argument("--y", type=float, nargs=2, default=(1.0, -1.0), metavar=("Y1", "Y2"))
    sp.add_argument("--phi-angle", type=float, default=0.0, help="rotation of the A basis (radians)")
    sp.add_argument("--psi-angle", type=float, default=math.pi / 4, help="rotation of the B basis (radians)")
    return p


def _policy(args):
    tol = args.tol
    if tol is None and os.environ.get(TOL_ENV):
        try:
            tol = float(os.environ[TOL_ENV])
        except ValueError:
            raise ParseError(f"${TOL_ENV} is not a number") from None
    if tol is None:
        return TolerancePolicy()
    base = TolerancePolicy()
    return TolerancePolicy(atol=tol, eig_clamp=min(base.eig_clamp, tol), cluster_tol=base.cluster_tol)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        set_policy(_policy(args))
        result = args.func(args)
        text = result if isinstance(result, str) else serialize_document(result)
    except ParseError as exc:
        print(f"sequens: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (SequensError, ValueError, KeyError) as exc:
        print(f"sequens: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if isinstance(result, list) and not all(r.passed for r in result):
        return EXIT_CHECK
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
