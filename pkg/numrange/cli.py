"""Command line interface.

Exit codes: 0 success or pass, 1 report failure, 2 usage error, 3 inconclusive
(insufficient sampling), 4 matrix parse error, 5 matrix length or dimension
error, 6 non-finite matrix entry.
"""

import argparse
import logging
import sys

import numpy as np

from .config import RunConfig
from .errors import InsufficientSamplingError, InvalidInputError, MatrixFileError, NumrangeError
from .serialization import load_matrix, parse_complex_vector, write_matrix
from .workbench import OUT_DIR, Workbench

__all__ = ["build_parser", "load_matrix", "main", "make_config", "write_matrix"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3

COMMANDS = ("sample", "support", "corners", "verify", "suite", "plot")
CONFIG_FLAGS = ("n", "seed", "samples", "restarts", "epsilon", "delta_min", "directions", "workers")

logger = logging.getLogger(__name__)


def _common_parser():
    parser = argparse.ArgumentParser(add_help=False)
    parser.add_argument("--matrix", action="append", default=[], metavar="PATH", help="matrix file (repeatable)")
    parser.add_argument("--n", type=int, help="range dimension")
    parser.add_argument("--samples", type=int, help="Haar samples per cloud")
    parser.add_argument("--seed", type=int, help="master seed (NUMRANGE_SEED overrides)")
    parser.add_argument("--restarts", type=int, help="ascent restarts per direction")
    parser.add_argument("--epsilon", type=float, help="cone radius (adaptive when omitted)")
    parser.add_argument("--delta-min", dest="delta_min", type=float, help="cone constant threshold")
    parser.add_argument("--directions", type=int, help="boundary directions")
    parser.add_argument("--workers", type=int, help="worker threads")
    parser.add_argument("--no-refine", dest="refine", action="store_false", default=None, help="skip cloud sharpening")
    parser.add_argument("--config", metavar="PATH", help="JSON or YAML run configuration")
    parser.add_argument("--out", default=OUT_DIR, metavar="DIR", help="artifact directory")
    parser.add_argument("--format", choices=("json", "csv", "svg"), default="json", help="extra artifact format")
    parser.add_argument("--log-level", dest="log_level", default="INFO", help="logging level")
    return parser


def build_parser():
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="numrange", description="n-dimensional numerical ranges of matrices")
    subparsers = parser.add_subparsers(dest="command", required=True)
    subparsers.add_parser("sample", parents=[common], help="sample W_n(T)")
    support = subparsers.add_parser("support", parents=[common], help="support values")
    support.add_argument("--direction", action="append", metavar="RE,IM;...", help="direction in C^n (repeatable)")
    subparsers.add_parser("corners", parents=[common], help="detect and certify corners")
    verify = subparsers.add_parser("verify", parents=[common], help="check a corner theorem")
    verify.add_argument("--theorem", choices=("1.1", "1.2"), required=True)
    verify.add_argument("--target", metavar="RE,IM;...", help="corner lambda for theorem 1.2")
    verify.add_argument("--family-sizes", dest="family_sizes", metavar="M1,M2,...", help="leading compressions")
    subparsers.add_parser("suite", parents=[common], help="property checks")
    plot = subparsers.add_parser("plot", parents=[common], help="render the stored cloud as SVG")
    plot.add_argument("--axes", metavar="AX1,AX2", help="coordinates to plot, e.g. re1,im1")
    return parser


def make_config(args, environ=None):
    overrides = {name: getattr(args, name) for name in CONFIG_FLAGS if getattr(args, name) is not None}
    if args.refine is not None:
        overrides["refine"] = args.refine
    config = RunConfig.from_file(args.config, **overrides) if args.config else RunConfig(overrides)
    return config.apply_env(environ).check()


def _matrices(args, count=None):
    if not args.matrix:
        raise InvalidInputError("--matrix is required")
    if count is not None and len(args.matrix) != count:
        raise InvalidInputError(f"expected {count} --matrix argument(s), got {len(args.matrix)}")
    return [load_matrix(path) for path in args.matrix]


def _unit_directions(texts, n):
    directions = []
    for text in texts:
        w = parse_complex_vector(text)
        if w.shape[0] != n:
            raise InvalidInputError(f"direction {text!r} has {w.shape[0]} components, expected {n}")
        norm = float(np.linalg.norm(w))
        if norm == 0.0:
            raise InvalidInputError("the zero vector is not a direction")
        directions.append(w / norm)
    return directions


def run(args, environ=None):
    """Execute a parsed command and return its exit code."""
    config = make_config(args, environ)
    bench = Workbench(storage={"backend": "FileSystem", "root_dir": args.out}, log_level=args.log_level, config=config)
    if args.command == "sample":
        bench.sample(_matrices(args, 1)[0], csv=args.format == "csv")
        if args.format == "svg":
            bench.plot()
        return EXIT_OK
    if args.command == "support":
        T = _matrices(args, 1)[0]
        directions = _unit_directions(args.direction, config.n) if args.direction else None
        bench.support(T, directions)
        return EXIT_OK
    if args.command == "corners":
        certificates = bench.corners(_matrices(args, 1)[0])
        logger.info("%d certified corners", len(certificates))
        if args.format == "svg":
            bench.plot()
        return EXIT_OK
    if args.command == "verify":
        target = parse_complex_vector(args.target) if args.target else None
        sizes = [int(s) for s in args.family_sizes.split(",") if s.strip()] if args.family_sizes else None
        report = bench.verify(args.theorem, _matrices(args), target=target, family_sizes=sizes)
        return {"pass": EXIT_OK, "fail": EXIT_FAILED}.get(report.status, EXIT_INCONCLUSIVE)
    if args.command == "suite":
        report = bench.suite(_matrices(args, 1)[0])
        return EXIT_OK if report.passed else EXIT_FAILED
    bench.plot(args.axes)
    return EXIT_OK


def main(argv=None, environ=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return run(args, environ)
    except MatrixFileError as e:
        logger.error("%s", e)
        return e.exit_code
    except InsufficientSamplingError as e:
        logger.error("inconclusive: %s", e)
        return EXIT_INCONCLUSIVE
    except (NumrangeError, FileNotFoundError, KeyError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
