"""``hochcalc verify <suite>``: run verification suites and write reports.

Exit status is 0 when every selected suite passes, 1 when a check fails and
2 for usage or input errors.  Reports are written as ``<suite>.json`` (or
``.csv``) into ``--out``, falling back to ``$HOCHCALC_OUT`` and then to
``./hochcalc-reports``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, signs
from .errors import BoundError, InputError
from .suites import SUITES, SuiteResult, require_positive

OUT_ENV = "HOCHCALC_OUT"
DEFAULT_OUT = "hochcalc-reports"
BOUND_KEYS = ("deg", "arity", "chain", "order", "size", "marked", "slots", "vars", "weight", "k", "samples", "n")


class UsageError(Exception):
    pass


def parse_bounds(text: str | None) -> dict[str, int]:
    """``"deg=3,arity=2"`` -> ``{"deg": 3, "arity": 2}``."""
    out: dict[str, int] = {}
    if not text:
        return out
    for part in text.split(","):
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in BOUND_KEYS:
            raise UsageError(f"bad bound {part!r}; expected key=value with key in {', '.join(BOUND_KEYS)}")
        try:
            out[key] = int(value)
        except ValueError:
            raise UsageError(f"bound {key} needs an integer, got {value!r}") from None
        if out[key] < 0:
            raise UsageError(f"bound {key} must be nonnegative")
    return out


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", help="builtin name such as matrix(2), or a path to an algebra file")
    common.add_argument("--bounds", help="comma-separated key=value bounds, e.g. deg=3,arity=2")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help=f"report directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--signs", help="sign manifest to use instead of the packaged one")
    common.add_argument("--max-chain", type=int, dest="chain")
    common.add_argument("--arity", type=int)
    common.add_argument("--deg", type=int)
    common.add_argument("--order", type=int)
    common.add_argument("--vars", type=int)
    common.add_argument("--slots", type=int)
    common.add_argument("--size", type=int)
    common.add_argument("--marked", type=int)
    common.add_argument("--weight", type=int)
    common.add_argument("--samples", type=int)

    parser = argparse.ArgumentParser(prog="hochcalc", description="Exact verification of Hochschild calculus identities.")
    parser.add_argument("--version", action="version", version=f"hochcalc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    suites = verify.add_subparsers(dest="suite", required=True)
    for name in (*SUITES, "all"):
        suites.add_parser(name, parents=[common])
    return parser


def _config(args: argparse.Namespace, suite: str) -> dict:
    bounds = parse_bounds(args.bounds)
    for key in BOUND_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            if value < 0:
                raise UsageError(f"--{key} must be nonnegative")
            bounds[key] = value
    get = bounds.get
    if suite == "identities":
        params = {"max_arity": get("arity", 5), "max_chain": get("chain", 5), "samples": get("samples", 2)}
    elif suite == "cohomology":
        params = {"max_arity": get("arity", 3), "max_chain": get("chain", 3)}
    elif suite == "calculus":
        params = {"max_degree": get("deg"), "samples": get("samples", 2)}
    elif suite == "hkr":
        params = {"n": get("vars", 1), "max_degree": get("deg", 3), "max_arity": get("arity", 3), "max_order": get("order")}
    elif suite == "envelope":
        params = {"n": get("vars", 2), "max_k": get("k", 2), "max_weight": get("weight", 4), "form_degree": get("deg", 2)}
    elif suite == "ks":
        params = {"slots": get("slots", 2), "max_edges": get("size", 8), "max_marked": get("marked", 6)}
    else:
        params = {"n_max": get("n", 8), "weight": get("weight", 3)}
    if suite in ("identities", "cohomology", "calculus", "ks"):
        params["algebra"] = args.algebra
    elif args.algebra is not None:
        raise UsageError(f"suite {suite} does not take --algebra")
    if suite in ("identities", "calculus", "ks"):
        params["seed"] = args.seed
    require_positive(**{k: v for k, v in params.items() if isinstance(v, int) and k != "seed"})
    return params


def report_json(result: SuiteResult, config: dict) -> dict:
    return {
        "suite": result.suite,
        "version": __version__,
        "config": config,
        "signs_manifest_sha256": signs.manifest_sha256(),
        "checks": [c.to_json() for c in result.checks],
        "summary": result.summary(),
        "details": result.details,
    }


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["suite", "id", "status", "checked", "witness"])
    for c in report["checks"]:
        wit = json.dumps(c["witness"], sort_keys=True) if "witness" in c else ""
        w.writerow([report["suite"], c["id"], c["status"], c["checked"], wit])
    return buf.getvalue()


def _out_dir(args: argparse.Namespace) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def run(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    try:
        if args.signs:
            signs.use_manifest(args.signs)
            signs.manifest()
        configs = {name: _config(args, name) for name in names}
        out = _out_dir(args)
        status = 0
        for name in names:
            result = SUITES[name](**configs[name])
            echo = {"suite": name, "format": args.format, "seed": args.seed, **configs[name]}
            if args.signs:
                echo["signs"] = Path(args.signs).name
            report = report_json(result, echo)
            out.mkdir(parents=True, exist_ok=True)
            path = out / f"{name}.{args.format}"
            path.write_text(render(report, args.format), encoding="utf-8")
            s = report["summary"]
            print(f"{name}: {s['status']} ({s['passed']}/{s['checks']} checks) -> {path}")
            if not result.ok:
                status = 1
        return status
    except (UsageError, InputError, BoundError, OSError) as exc:
        print(f"hochcalc: error: {exc}", file=sys.stderr)
        return 2
    finally:
        if args.signs:
            signs.use_manifest(None)


def main() -> None:
    sys.exit(run())
