"""Command line: ``qsu11 verify <suite>`` and ``qsu11 normalize <expr>``."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from .action import ActionConfig
from .algebra import AlgebraError, Base, Element, Layer
from .kernels import PAIRS, TensorElement
from .parser import Context, ParseError, evaluate, render
from .scalars import Scalar
from .suites import SUITES, SuiteConfig, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

SPACES = {"x": Base.X, "xi": Base.XI}
LAYERS = {layer.value.lower(): layer for layer in Layer}
CONFIG_KEYS = ("a_plus", "a_minus", "e0_action", "c_plus", "c_minus")


class UsageError(Exception):
    pass


def read_config(path: str) -> ActionConfig:
    """Parse a ``key = value`` file into an action configuration."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as err:
        raise UsageError(f"cannot read config {path}: {err}") from err
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r} (known: {', '.join(CONFIG_KEYS)})")
        try:
            if key in ("a_plus", "a_minus"):
                values[key] = Fraction(value)
            elif key == "e0_action":
                values[key] = value
            else:
                scalar = evaluate(value)
                if not isinstance(scalar, Scalar):
                    raise UsageError(f"{path}:{lineno}: {key} must be a scalar in q")
                values[key] = scalar
        except (ValueError, ParseError) as err:
            raise UsageError(f"{path}:{lineno}: bad value for {key}: {err}") from err
    try:
        return ActionConfig(**values)
    except ValueError as err:
        raise UsageError(f"{path}: {err}") from err


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsu11", description="Exact computations on quantum SU(1,1) spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a named verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--space", choices=sorted(SPACES))
    v.add_argument("--pair", choices=["xx", "xxi", "xix"])
    v.add_argument("--trunc", type=int)
    v.add_argument("--max-l", type=int, default=3)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--samples", type=int)
    v.add_argument("--json", action="store_true", help="machine-readable report")
    v.add_argument("--timing", action="store_true", help="include wall time in the JSON report")
    v.add_argument("--config", help="key = value file overriding a_plus, a_minus, c_plus, c_minus, e0_action")
    v.add_argument("-v", "--verbose", action="store_true")

    n = sub.add_parser("normalize", help="print the canonical form of an expression")
    n.add_argument("expr")
    n.add_argument("--space", choices=sorted(SPACES), default="x")
    n.add_argument("--layer", choices=sorted(LAYERS))
    n.add_argument("--pair", choices=sorted(PAIRS), default="xx")
    n.add_argument("--json", action="store_true")
    return parser


def _verify(args) -> int:
    action = read_config(args.config) if args.config else ActionConfig()
    if args.trunc is not None and args.trunc < 0:
        raise UsageError("--trunc must be nonnegative")
    if args.max_l < 0:
        raise UsageError("--max-l must be nonnegative")
    cfg = SuiteConfig(
        space=SPACES[args.space] if args.space else None,
        pair=PAIRS[args.pair] if args.pair else None,
        trunc=args.trunc,
        max_l=args.max_l,
        seed=args.seed,
        samples=args.samples,
        action=action,
    )
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = [run_suite(name, cfg) for name in names]
    if args.json:
        objs = [r.to_json_obj(args.timing) for r in reports]
        payload = objs[0] if len(objs) == 1 else {"suites": objs, "passed": all(r.passed for r in reports)}
        print(json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        for r in reports:
            print(r.to_text(verbose=args.verbose))
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def _normalize(args) -> int:
    ctx = Context(
        base=SPACES[args.space],
        layer=LAYERS[args.layer] if args.layer else None,
        pair=PAIRS[args.pair],
    )
    value = evaluate(args.expr, ctx)
    if args.json:
        if isinstance(value, (Element, TensorElement)):
            print(value.to_json())
        else:
            print(json.dumps({"scalar": render(value)}))
    else:
        print(render(value))
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "verify":
            return _verify(args)
        return _normalize(args)
    except (UsageError, ParseError, AlgebraError) as err:
        print(f"qsu11: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
