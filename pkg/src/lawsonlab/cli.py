"""``lawson-lab`` command line interface.

Exit codes: 0 success, 2 configuration/input error, 3 reference failure.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .diagnostics import CONDITIONS, regularity_sweep
from .errors import (
    ConfigError, DegenerateInput, InvariantError, LimitExceeded, ParseError,
    ReferenceNotConverged, UnknownTableau,
)
from .harness import ExperimentConfig, regularity_csv, run_check_order, run_convergence, run_regularity
from .spectral import LinearProblem, NLSProblem

EXIT_OK, EXIT_CONFIG, EXIT_REFERENCE = 0, 2, 3


def _floats(text):
    return tuple(float(x) for x in text.split(",") if x.strip())


def _ints(text):
    return tuple(int(x) for x in text.split(",") if x.strip())


def _strs(text):
    return tuple(x.strip() for x in text.split(",") if x.strip())


def _add_problem_flags(p, *, problem="linear", alpha="0,1,2,3", methods="lawson-euler,exp-euler"):
    p.add_argument("--problem", choices=("linear", "nls"), default=problem)
    p.add_argument("--potential", choices=("sin", "quad", "zero"), default="sin")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--alpha", type=_floats, default=_floats(alpha))
    p.add_argument("--N", type=int, default=256)
    p.add_argument("--tau-max-exp", type=int, default=4, help="largest step is 2^-k")
    p.add_argument("--tau-min-exp", type=int, default=10, help="smallest step is 2^-k")
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--method", type=_strs, default=_strs(methods))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", type=Path, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lawson-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-order", help="certify the classical order of a tableau")
    p.add_argument("--tableau", required=True, help="builtin name or tableau file")
    p.add_argument("--p-max", type=int, default=5)
    p.add_argument("--out", type=Path, default=None, help="append a CSV row here")

    p = sub.add_parser("convergence", help="observed orders for the linear Schrodinger problem")
    _add_problem_flags(p)

    p = sub.add_parser("nls-convergence", help="observed orders for the cubic NLS")
    _add_problem_flags(p, problem="nls", alpha="6", methods="lawson-heun2,lawson-rk4")

    p = sub.add_parser("regularity", help="discrete Sobolev norms of random data versus N")
    p.add_argument("--alpha", type=_floats, default=(0.0, 1.0, 2.0))
    p.add_argument("--mu", type=_floats, default=(0.0, 1.0, 2.0, 3.0))
    p.add_argument("--N", type=_ints, default=(128, 256, 512, 1024, 2048))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)

    p = sub.add_parser("commutator-sweep", help="sampled sup of a regularity condition versus N")
    p.add_argument("--condition", choices=CONDITIONS, default="linear-o1")
    p.add_argument("--problem", choices=("linear", "nls"), default="linear")
    p.add_argument("--potential", choices=("sin", "quad", "zero"), default="sin")
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=3.0)
    p.add_argument("--N", type=_ints, default=(128, 256, 512))
    p.add_argument("--tau", type=float, default=2.0 ** -4)
    p.add_argument("--T", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=None)
    return parser


def _convergence(args) -> int:
    cfg = ExperimentConfig(
        problem=args.problem, potential=args.potential, beta=args.beta, N=args.N,
        alphas=args.alpha, methods=args.method, tau_max_exp=args.tau_max_exp,
        tau_min_exp=args.tau_min_exp, T=args.T, seed=args.seed,
        out=str(args.out) if args.out else None, workers=args.workers,
    )
    report = run_convergence(cfg)
    print(report.summary())
    if args.out is None:
        sys.stdout.write(report.errors_csv())
    return EXIT_OK


def _check_order(args) -> int:
    cert, text, row = run_check_order(args.tableau, args.p_max)
    print(text)
    if args.out:
        new = not args.out.exists()
        with open(args.out, "a") as fh:
            if new:
                fh.write("# lawson-lab v1\ntableau,max_order_checked,certified_order,witness\n")
            fh.write(row)
    else:
        sys.stdout.write(row)
    return EXIT_OK


def _regularity(args) -> int:
    rows = []
    for alpha in args.alpha:
        rows.extend(run_regularity(alpha, args.mu, args.N, args.seed))
    text = regularity_csv(rows)
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _commutator_sweep(args) -> int:
    if args.problem == "nls":
        make = lambda N: NLSProblem(N, args.beta)  # noqa: E731
    else:
        make = lambda N: LinearProblem(N, args.potential)  # noqa: E731
    try:
        report = regularity_sweep(args.condition, make, args.alpha, args.N, seed=args.seed,
                                  T=args.T, tau=args.tau)
    except TypeError as exc:
        raise ConfigError(str(exc)) from None
    for n, s in zip(report.N_list, report.sup_values):
        print(f"{report.condition_id}  N={n:<6d} sup={s:.6e}")
    print("growth per doubling:", " ".join(f"{g:.3f}" for g in report.growth_factors()))
    if args.out:
        report.write_csv(args.out)
    return EXIT_OK


_HANDLERS = {
    "check-order": _check_order,
    "convergence": _convergence,
    "nls-convergence": _convergence,
    "regularity": _regularity,
    "commutator-sweep": _commutator_sweep,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        return _HANDLERS[args.command](args)
    except ReferenceNotConverged as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_REFERENCE
    except (ConfigError, ParseError, InvariantError, UnknownTableau, LimitExceeded,
            DegenerateInput, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
