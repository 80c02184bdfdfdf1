"""Command-line entry point: ``mvaut <command> [flags]``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .pipeline import (Report, build_arrangement, group_payload, run_desk, run_fano,
                       verify_all, verify_coxeter)

DESK_CHECKS = ("simplex", "lin-image", "signflip-det", "voldet-scale")
DESK_DEFAULT_TRIALS = {"simplex": 5, "lin-image": 20, "signflip-det": 100, "voldet-scale": 50}


def _write(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=1) + "\n"


def _emit_report(report: Report, args) -> int:
    if args.emit == "dot":
        raise SystemExit(_usage_error(f"--emit dot is not available for {report.command}"))
    text = report.to_text() if args.emit == "text" else report.to_json(args.timings)
    _write(text, args.out)
    return 0 if report.passed else 1


def _usage_error(msg: str) -> int:
    print(f"mvaut: error: {msg}", file=sys.stderr)
    return 2


def cmd_verify_all(args) -> int:
    return _emit_report(verify_all(args.seed), args)


def cmd_arrangement(args) -> int:
    _, _, delta = build_arrangement()
    if args.emit == "dot":
        text = delta.to_dot()
    elif args.emit == "json":
        text = _dump(delta.to_json() | {"schema": 1, "version": __version__})
    else:
        rows = [f"F{i}\t{f.flat_type}\t{[list(n) for n in f.normals]}" for i, f in enumerate(delta.flats)]
        rows += [f"L{j}\t{L.line_type}\t{list(L.direction)}" for j, L in enumerate(delta.lines)]
        text = "\n".join(rows) + "\n"
    _write(text, args.out)
    return 0


def cmd_group(args) -> int:
    if args.emit == "dot":
        return _usage_error("--emit dot is not available for group")
    payload = group_payload(args.which)
    if args.emit == "json":
        text = _dump(payload)
    else:
        text = f"{args.which}: order {payload['order']}, {len(payload['generators'])} generators\n"
        for k, g in enumerate(payload["generators"]):
            text += f"g{k} = {g}\n"
    _write(text, args.out)
    return 0


def cmd_coxeter(args) -> int:
    _, lines, _ = build_arrangement()
    report = Report("coxeter", args.seed)
    data = verify_coxeter(report, lines)
    if args.emit == "dot":
        _write(data["diagram"].to_dot(), args.out)
        return 0 if report.passed else 1
    if args.emit == "json":
        payload = report.to_dict(args.timings)
        payload["roots"] = [list(r) for r in data["roots"].roots]
        _write(_dump(payload), args.out)
    else:
        _write(report.to_text(), args.out)
    return 0 if report.passed else 1


def cmd_desk(args) -> int:
    trials = args.trials if args.trials is not None else DESK_DEFAULT_TRIALS[args.check]
    if args.n < args.d + 2:
        return _usage_error("--n must be at least --d + 2")
    if args.r < 1:
        return _usage_error("--r must be positive")
    return _emit_report(run_desk(args.check, args.d, args.n, trials, args.seed, args.r), args)


def cmd_fano(args) -> int:
    samples = args.trials if args.trials is not None else 10
    return _emit_report(run_fano(args.seed, samples), args)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--emit", choices=("json", "dot", "text"), default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--trials", type=int, default=None)
    common.add_argument("--timings", action="store_true",
                        help="fill elapsed_ms (makes the report machine dependent)")

    p = argparse.ArgumentParser(prog="mvaut", description=__doc__)
    p.add_argument("--version", action="version", version=f"mvaut {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-all", parents=[common], help="run the full exact pipeline"
                   ).set_defaults(func=cmd_verify_all)
    sub.add_parser("arrangement", parents=[common], help="flats, lines and the incidence graph"
                   ).set_defaults(func=cmd_arrangement)
    g = sub.add_parser("group", parents=[common], help="emit exact group elements")
    g.add_argument("--which", choices=("paut", "ppos", "expected", "l13"), default="paut")
    g.set_defaults(func=cmd_group)
    sub.add_parser("coxeter", parents=[common], help="roots, simple roots, Dynkin diagram"
                   ).set_defaults(func=cmd_coxeter)
    d = sub.add_parser("desk", parents=[common], help="desk-scale probes")
    d.add_argument("--check", choices=DESK_CHECKS, required=True)
    d.add_argument("--d", type=int, default=2)
    d.add_argument("--n", type=int, default=5)
    d.add_argument("--r", type=int, default=3)
    d.set_defaults(func=cmd_desk)
    sub.add_parser("fano", parents=[common], help="containment checks for 3-flats"
                   ).set_defaults(func=cmd_fano)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RuntimeError as exc:  # closure safety bound and similar aborts
        print(f"mvaut: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
