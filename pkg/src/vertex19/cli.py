"""argparse front end; every subcommand maps onto one reporting.Command."""

import argparse
import sys

from . import reporting
from .errors import ConfigError, IoError


def _add_common(sp, with_l=True):
    sp.add_argument("--model", default="ik", choices=["ik", "fz"])
    sp.add_argument(
        "--p",
        default="2",
        help="rational realizing the square root of the anisotropy q (e.g. 3/2)",
    )
    sp.add_argument(
        "--mu",
        nargs="*",
        default=[],
        help="multiplicative column inhomogeneities, one rational per column",
    )
    if with_l:
        sp.add_argument("--L", type=int, default=1, help="number of lattice columns")
    sp.add_argument("--samples", type=int, default=None)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output", default="-", help="report path, '-' for stdout")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="v19",
        description="Exact checks and solvers for nineteen-vertex lattice models.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    _add_common(sub.add_parser("verify-ybe", help="sample the Yang-Baxter cube"), with_l=False)
    _add_common(sub.add_parser("verify-algebra", help="operator exchange relations"))
    _add_common(sub.add_parser("verify-structure", help="degree, symmetry and zero patterns"))

    sp = sub.add_parser("compute", help="evaluate a boundary partition function both ways")
    sp.add_argument("target", choices=["z", "f", "fbar"])
    sp.add_argument("--x", nargs="*", default=[], help="spectral values (v-pair first for f/fbar)")
    _add_common(sp)

    sp = sub.add_parser("solve", help="determine H and Hbar from the functional equations")
    sp.add_argument("--backend", choices=["rational", "modular"], default=None)
    _add_common(sp)

    sp = sub.add_parser("tables", help="compare L=2 homogeneous solutions against stored grids")
    sp.add_argument("--q-samples", type=int, default=None, dest="q_samples")
    _add_common(sp, with_l=False)
    return ap


def _config_from_args(args):
    try:
        mu = tuple(args.mu)
        points = tuple(getattr(args, "x", []))
        return reporting.RunConfig(
            command=reporting.Command.parse(args.command),
            model=args.model,
            p=args.p,
            mu=mu,
            L=getattr(args, "L", 1),
            samples=args.samples,
            seed=args.seed,
            backend=getattr(args, "backend", None),
            output=args.output,
            target=getattr(args, "target", None),
            points=points,
            q_samples=getattr(args, "q_samples", None),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        report = reporting.run(config)
        reporting.emit(report, config.output)
    except (ConfigError, IoError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    print("elapsed %.2fs" % report.timing_s, file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
