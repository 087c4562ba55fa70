"""Command line front end: `picard-theta <command> ...`.

Exit status is 0 on success, 1 when a verification fails and 2 for usage or
input errors.
"""

import argparse
import json
import sys

from . import deformation as dfm
from . import dieudonne as dd
from . import fj
from . import frame as fr
from . import qfield as qf
from . import unitary as un
from .suites import SUITES, Check, Params, SuiteReport, run_suite


class InputError(Exception):
    """Bad user input; reported with exit status 2."""


def parse_kelem(ctx, text):
    """An element of K written "a:b" for a + b*sqrt(d), or a JSON KElem."""
    text = text.strip()
    try:
        if text.startswith("{"):
            x = qf.KElem.from_json(json.loads(text))
            return ctx.coerce(x)
        a, _, b = text.partition(":")
        return ctx.elem(qf.parse_rational(a), qf.parse_rational(b or "0"))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed element {text!r}: {exc}") from None


def parse_ideal(ctx, text):
    """An ideal given by O_K-generators separated by ";"."""
    gens = [parse_kelem(ctx, g) for g in text.split(";") if g.strip()]
    try:
        return qf.FracIdeal.generated_by(ctx, *gens)
    except ValueError as exc:
        raise InputError(f"ideal {text!r}: {exc}") from None


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from None


def _emit(args, report, text, result=None):
    if args.json:
        obj = report.to_json()
        if result is not None:
            obj["result"] = result
        print(json.dumps(obj, indent=2))
    else:
        print(text)


def _single(args, name, anchor, ok, detail=""):
    return SuiteReport(name, (Check(f"{name}.result", anchor, ok, detail),), args.seed, args.trials)


def cmd_verify(args):
    try:
        d = args.d if args.d is not None else qf.inert_discriminant(args.p)
        params = Params(p=args.p, d=d, N=args.N, seed=args.seed, trials=args.trials)
        qf.FqField(params.p, params.d)
        qf.FieldCtx(params.d)
        un.cusp_width(params.N, qf.FieldCtx(params.d))
        fj.default_trunc()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = run_suite(args.suite, params)
    _emit(args, report, report.table())
    return 0 if report.overall else 1


def cmd_stratify(args):
    obj = _load_json(args.infile)
    try:
        D = dd.UnitaryDModule.from_json(obj)
    except ValueError as exc:
        raise InputError(f"{args.infile}: {exc}") from None
    try:
        stratum = dd.stratify(D)
    except dd.InadmissibleModule as exc:
        _emit(args, _single(args, "stratify", "admissible unitary Dieudonne module", False, exc.failed), str(exc),
              {"stratum": None})
        return 1
    _emit(args, _single(args, "stratify", "stratum of the module", True, stratum.value), stratum.value,
          {"stratum": stratum.value})
    return 0


def cmd_theta(args):
    if args.iters < 0:
        raise InputError("--iters must be non-negative")
    obj = _load_json(args.infile)
    try:
        f = fj.QExpansion.from_json(obj)
        g = fj.theta_iter(f, args.iters)
    except ValueError as exc:
        raise InputError(f"{args.infile}: {exc}") from None
    out = g.to_json()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(out, fh)
            fh.write("\n")
        text = f"wrote {args.out} (weight {g.weight})"
    else:
        text = json.dumps(out)
    _emit(args, _single(args, "theta", "Theta on Fourier-Jacobi expansions", True, f"weight {g.weight}"), text, out)
    return 0


def cmd_cycle(args):
    p = args.p
    if not qf.is_prime(p) or p < 3:
        raise InputError(f"p = {p} must be an odd prime")
    if args.drop == "last":
        drop = p - 2
    else:
        try:
            drop = int(args.drop)
        except ValueError:
            raise InputError(f"--drop must be an index or 'last', got {args.drop!r}") from None
    try:
        weights = fj.theta_cycle(fj.CycleSpec(p, args.k, drop))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    inc = fj.cycle_increments(p, drop)
    lines = ["i  filtration"]
    for i, w in enumerate(weights):
        lines.append(f"{i}  {w}" + ("  <- drop" if i == drop else ""))
    lines.append(f"closes at {weights[-1] + inc[-1]}")
    closes = weights[-1] + inc[-1] == args.k
    _emit(args, _single(args, "cycle", "theta cycle closes", closes, f"drop at {drop}"), "\n".join(lines),
          {"weights": weights, "drop": drop})
    return 0 if closes else 1


def cmd_fermat(args):
    try:
        n = dfm.fermat_count(args.p)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    expected = args.p**3 + 1
    _emit(args, _single(args, "fermat", "Fermat curve point count p^3 + 1", n == expected, str(n)),
          f"{n} (expected {expected} = p^3+1)", {"count": n, "expected": expected})
    return 0 if n == expected else 1


def cmd_width(args):
    try:
        M = un.cusp_width(args.N, qf.FieldCtx(args.d))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(args, _single(args, "width", "width of the cusp", True, str(M)), str(M), {"M": M})
    return 0


def cmd_split(args):
    try:
        ctx = qf.FieldCtx(args.d)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    datum = fr.SemiAbDatum(parse_ideal(ctx, args.a), parse_ideal(ctx, args.b), parse_kelem(ctx, args.u))
    split = fr.semiab_split(datum)
    word = "split" if split else "nonsplit"
    _emit(args, _single(args, "split", "extension splitting criterion", True, word), word, {"split": split})
    return 0


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a machine-readable report")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for random sweeps")
    common.add_argument("--trials", type=int, default=argparse.SUPPRESS, help="size of random sweeps")

    parser = argparse.ArgumentParser(prog="picard-theta", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    parser.add_argument("--seed", type=int, default=0, help="seed for random sweeps")
    parser.add_argument("--trials", type=int, default=20, help="size of random sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("suite", choices=["all", *SUITES])
    p.add_argument("--p", type=int, default=3)
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--N", type=int, default=4)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("stratify", parents=[common], help="classify a Dieudonne module")
    p.add_argument("--in", dest="infile", required=True)
    p.set_defaults(func=cmd_stratify)

    p = sub.add_parser("theta", parents=[common], help="apply Theta to an expansion")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--iters", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("cycle", parents=[common], help="print a theta cycle")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--drop", required=True)
    p.set_defaults(func=cmd_cycle)

    p = sub.add_parser("fermat", parents=[common], help="count points on the Fermat curve")
    p.add_argument("--p", type=int, required=True)
    p.set_defaults(func=cmd_fermat)

    p = sub.add_parser("width", parents=[common], help="width of the cusp")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.set_defaults(func=cmd_width)

    p = sub.add_parser("split", parents=[common], help="splitting of a semi-abelian extension")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--u", required=True)
    p.set_defaults(func=cmd_split)
    return parser


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
