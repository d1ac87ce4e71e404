"""``framelab`` command line.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on invalid
input or configuration.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .algebra import parse_descriptor
from .errors import FramelabError, NotAFrameError
from .frames import frame_bounds, is_frame, reconstruct, verify_bounds
from .instances import SuiteConfig
from .module import basis_vector, vector_norm
from .quotient import project
from .serialization import decode_frame, decode_vector, dumps, encode_verdict, jsonable
from .suite import report_text, run_suite
from .tensor import tensor_check_report
from .two_inner import TwoInnerSpace, check_axioms

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _load_frame(path):
    return decode_frame(_load_json(path))


def _emit(payload, fmt="json"):
    if fmt == "text":
        print(payload if isinstance(payload, str) else _flat_text(payload))
    else:
        print(dumps(payload, indent=2))


def _flat_text(obj, prefix=""):
    lines = []
    for k, v in jsonable(obj).items():
        if isinstance(v, dict) and v and "coords" not in v:
            lines.append(_flat_text(v, prefix + k + "."))
        else:
            lines.append(f"{prefix}{k}: {json.dumps(v)}")
    return "\n".join(lines)


# -- subcommands -------------------------------------------------------------

def cmd_axioms(args):
    space = TwoInnerSpace(parse_descriptor(args.algebra), args.rank)
    if args.trials < 0 or not args.tol > 0:
        raise UsageError("trials must be >= 0 and tol > 0")
    records = check_axioms(space, args.trials, args.seed, args.tol)
    ok = all(r["pass"] for r in records)
    if args.format == "text":
        lines = [f"{'PASS' if r['pass'] else 'FAIL'}  {r['axiom']}  "
                 f"{'-' if r['worst_residual'] is None else format(r['worst_residual'], '.3e')}"
                 for r in records]
        _emit("\n".join(lines + ["OVERALL " + ("PASS" if ok else "FAIL")]), "text")
    else:
        _emit({"algebra": str(space.algebra), "rank": space.rank, "axioms": records, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def _parse_claim(text):
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise UsageError(f"--claim expects A,B; got {text!r}") from None
    return a, b


def cmd_frame_check(args):
    f = _load_frame(args.instance)
    claim = _parse_claim(args.claim) if args.claim else f.claimed_bounds
    if claim is None:
        a, b = frame_bounds(f)
        ok = is_frame(f)
        _emit({"pass": ok, "optimal": [a, b], "claimed": None}, args.format)
        return EXIT_OK if ok else EXIT_FAIL
    try:
        v = verify_bounds(f, *claim, tol=args.tol)
    except NotAFrameError as exc:
        _emit({"pass": False, "error": str(exc), "optimal": [exc.lower, exc.upper],
               "claimed": list(claim)}, args.format)
        return EXIT_FAIL
    _emit(encode_verdict(v), args.format)
    return EXIT_OK if v.passed else EXIT_FAIL


def cmd_frame_bounds(args):
    f = _load_frame(args.instance)
    a, b = frame_bounds(f)
    ok = is_frame(f)
    out = {"lower": a, "upper": b, "is_frame": ok, "tight": ok and abs(a - b) <= args.tol * max(1.0, b)}
    _emit(out, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def _parse_vector(text, f):
    try:
        idx = int(text)
    except ValueError:
        try:
            return decode_vector(json.loads(text))
        except json.JSONDecodeError as exc:
            raise UsageError(f"--vector is neither an index nor JSON: {exc}") from None
    if not 0 <= idx < f.rank:
        raise UsageError(f"--vector index {idx} outside 0..{f.rank - 1}")
    return basis_vector(f.algebra, f.rank, idx)


def cmd_frame_reconstruct(args):
    f = _load_frame(args.instance)
    x = _parse_vector(args.vector, f)
    f.associate._check(x)
    target = project(x, f.quotient)
    try:
        r = reconstruct(f, x)
    except NotAFrameError as exc:
        _emit({"pass": False, "error": str(exc)}, args.format)
        return EXIT_FAIL
    residual = vector_norm(r - target)
    ok = residual <= args.tol * max(1.0, vector_norm(x))
    _emit({"input": x, "projected": target, "reconstructed": r, "residual": residual, "pass": ok}, args.format)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_tensor_check(args):
    left, right = _load_frame(args.left), _load_frame(args.right)
    try:
        report = tensor_check_report(left, right, args.tol)
    except NotAFrameError as exc:
        _emit({"pass": False, "error": str(exc)}, args.format)
        return EXIT_FAIL
    _emit(report, args.format)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_suite(args):
    data = _load_json(args.config)
    if not isinstance(data, dict):
        raise UsageError("config must be a JSON object")
    seed = os.environ.get("FRAMELAB_SEED")
    if seed is not None and seed.strip():
        try:
            data["seed"] = int(seed)
        except ValueError:
            raise UsageError(f"FRAMELAB_SEED must be an integer, got {seed!r}") from None
    config = SuiteConfig.from_dict(data)
    report = run_suite(config, timestamp=not args.no_timestamp)
    text = report_text(report) if config.format == "text" else dumps(report, indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK if report["pass"] else EXIT_FAIL


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="framelab", description="Checks for A-2-inner products and A-2-frames.")
    p.add_argument("--version", action="version", version=f"framelab {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ax = sub.add_parser("axioms", help="sample-test the 2-inner product axioms")
    ax.add_argument("--algebra", default="diagonal:4")
    ax.add_argument("--rank", type=int, default=3)
    ax.add_argument("--trials", type=int, default=500)
    ax.add_argument("--seed", type=int, default=1)
    ax.add_argument("--tol", type=float, default=1e-9)
    ax.add_argument("--format", choices=("json", "text"), default="json")
    ax.set_defaults(func=cmd_axioms)

    fr = sub.add_parser("frame", help="inspect a frame instance").add_subparsers(
        dest="frame_command", required=True, parser_class=_Parser)
    for name, func, help_ in (("check", cmd_frame_check, "verify claimed bounds"),
                              ("bounds", cmd_frame_bounds, "optimal frame bounds"),
                              ("reconstruct", cmd_frame_reconstruct, "reconstruct a vector")):
        sp = fr.add_parser(name, help=help_)
        sp.add_argument("instance")
        sp.add_argument("--tol", type=float, default=1e-9)
        sp.add_argument("--format", choices=("json", "text"), default="json")
        sp.set_defaults(func=func)
        if name == "check":
            sp.add_argument("--claim")
        if name == "reconstruct":
            sp.add_argument("--vector", required=True)

    tn = sub.add_parser("tensor", help="tensor products of frames").add_subparsers(
        dest="tensor_command", required=True, parser_class=_Parser)
    tc = tn.add_parser("check", help="bounds and frame operator of a product frame")
    tc.add_argument("left")
    tc.add_argument("right")
    tc.add_argument("--tol", type=float, default=1e-9)
    tc.add_argument("--format", choices=("json", "text"), default="json")
    tc.set_defaults(func=cmd_tensor_check)

    su = sub.add_parser("suite", help="run every check on a seeded random instance")
    su.add_argument("--config", required=True)
    su.add_argument("--output")
    su.add_argument("--no-timestamp", action="store_true")
    su.set_defaults(func=cmd_suite)
    return p


def main(argv=None) -> int:
    np.seterr(all="ignore")
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"framelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (FramelabError, ValueError, KeyError, TypeError) as exc:
        print(f"framelab: invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
