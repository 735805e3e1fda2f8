"""Command-line interface. Every command prints one JSON document (``simulate`` prints CSV).

Exit status: 0 on success, 1 on domain or infeasibility errors, 2 on I/O,
parse or usage errors. Any flag ``--some-flag`` can also be supplied through
the environment variable ``HURSTCI_SOME_FLAG``.
"""

import argparse
import json
import os
import sys

from . import kernels, quadvar
from .errors import DomainError, HurstCIError, PathFormatError
from .fbm_sim import sample_fbm
from .harness import CoverageConfig, dump_path_csv, load_path_csv, run_coverage, verify_constants
from .interval import confidence_interval, plan_fixed_n, plan_unbounded

ENV_PREFIX = "HURSTCI_"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _env_name(flag):
    return ENV_PREFIX + flag.lstrip("-").replace("-", "_").upper()


def _add(parser, flag, type=str, required=False, **kwargs):
    env = os.environ.get(_env_name(flag))
    if env is not None:
        kwargs["default"] = type(env)
        required = False
    parser.add_argument(flag, type=type, required=required, **kwargs)


def _seed(text):
    return int(text, 0)


def _build_parser():
    parser = _Parser(prog="hurstci", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="draw an fBm path and write it as CSV")
    _add(p, "--hurst", float, required=True)
    _add(p, "--n", int, required=True)
    _add(p, "--seed", _seed, required=True)
    _add(p, "--out", str, help="output file (default: standard output)")

    p = sub.add_parser("ci", help="confidence interval for H from an observed path")
    _add(p, "--input", str, required=True, help="CSV path file, '-' for standard input")
    _add(p, "--hstar", float, required=True)
    _add(p, "--a", float)
    _add(p, "--epsilon", float)

    p = sub.add_parser("plan", help="choose a (and n) for a target error probability")
    _add(p, "--epsilon", float, required=True)
    _add(p, "--hstar", float, required=True)
    _add(p, "--n", int)
    _add(p, "--length", float)

    p = sub.add_parser("coverage", help="Monte Carlo coverage study")
    _add(p, "--hurst", float, required=True)
    _add(p, "--hstar", float, required=True)
    _add(p, "--n", int, required=True)
    _add(p, "--a", float)
    _add(p, "--epsilon", float)
    _add(p, "--trials", int, required=True)
    _add(p, "--seed", _seed, required=True)
    _add(p, "--workers", int, default=1)

    p = sub.add_parser("verify-constants", help="check the summability constants on an H grid")
    _add(p, "--grid-step", float, default=0.01)
    _add(p, "--r-max", int, default=10_000)
    return parser


def _one_of_a_epsilon(args):
    if (args.a is None) == (args.epsilon is None):
        raise UsageError("exactly one of --a and --epsilon is required")


def _emit(obj, stream):
    json.dump(obj, stream, indent=2, allow_nan=False)
    stream.write("\n")


def _cmd_simulate(args, out):
    path = sample_fbm(args.hurst, args.n, args.seed)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            dump_path_csv(path, fh)
    else:
        dump_path_csv(path, out)
    return 0


def _cmd_ci(args, out):
    _one_of_a_epsilon(args)
    if args.input == "-":
        path = load_path_csv(sys.stdin.buffer)
    else:
        path = load_path_csv(args.input)
    a = args.a
    if a is None:
        plan = plan_fixed_n(args.epsilon, args.hstar, path.n)
        if not plan.feasible:
            _emit({"error": "infeasible", "message": plan.reason}, out)
            return 1
        a = plan.a
    result = confidence_interval(path.n, a, args.hstar, quadvar.s_n(path)).as_dict()
    result["epsilon"] = args.epsilon
    result["notes"] = list(path.notes)
    _emit(result, out)
    return 0


def _cmd_plan(args, out):
    if args.n is None:
        plan = plan_unbounded(args.epsilon, args.hstar, args.length)
        _emit(plan.as_dict(), out)
        return 0
    plan = plan_fixed_n(args.epsilon, args.hstar, args.n)
    doc = plan.as_dict()
    doc["n_fixed"] = args.n
    if not plan.feasible:
        _emit({"error": "infeasible", "message": plan.reason, "plan": doc}, out)
        return 1
    if args.length is not None:
        doc["meets_length"] = plan.length_bound <= args.length
    _emit(doc, out)
    return 0


def _cmd_coverage(args, out):
    _one_of_a_epsilon(args)
    config = CoverageConfig(
        H_true=args.hurst,
        H_star=args.hstar,
        n=args.n,
        trials=args.trials,
        seed=args.seed,
        a=args.a,
        epsilon=args.epsilon,
    )
    report = run_coverage(config, workers=args.workers)
    doc = report.as_dict()
    doc["backend"] = kernels.BACKEND
    doc["coverage_ok"] = report.coverage_h >= report.coverage_floor
    _emit(doc, out)
    return 0


def _cmd_verify_constants(args, out):
    result = verify_constants(grid_step=args.grid_step, r_max=args.r_max)
    _emit(result, out)
    return 0 if result["passed"] else 1


_COMMANDS = {
    "simulate": _cmd_simulate,
    "ci": _cmd_ci,
    "plan": _cmd_plan,
    "coverage": _cmd_coverage,
    "verify-constants": _cmd_verify_constants,
}


def main(argv=None, out=None):
    out = sys.stdout if out is None else out
    try:
        args = _build_parser().parse_args(argv)
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        _emit({"error": "usage", "message": str(exc)}, out)
        return 2
    except PathFormatError as exc:
        _emit({"error": f"{exc.code}.{exc.kind}", "message": str(exc)}, out)
        return 2
    except OSError as exc:
        _emit({"error": "io", "message": str(exc)}, out)
        return 2
    except (DomainError, HurstCIError) as exc:
        _emit({"error": exc.code, "message": str(exc)}, out)
        return 1
    except ValueError as exc:
        # type conversion of environment defaults
        _emit({"error": "usage", "message": str(exc)}, out)
        return 2


if __name__ == "__main__":
    sys.exit(main())
