"""``nestlab`` entry point: parse a workspace file, run one command, report."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ..errors import NestlabError, UsageError
from .commands import COMMANDS, run
from .parser import Workspace, parse
from .report import dumps, make_report

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nestlab", description="Exact invariants of nest algebra embeddings.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("file", nargs="?", help="workspace file (optional for 'examples')")
    p.add_argument("names", nargs="*")
    p.add_argument("--horizon", type=int, default=8)
    p.add_argument("--depth", type=int, default=2)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--mode", choices=["loc", "lop", "oc", "op"], help="flag for lift and compare")
    p.add_argument("--telescoping", action="store_true", help="let compare skip stages")
    p.add_argument("--json", metavar="PATH", help="write the JSON report here ('-' for stdout)")
    return p


def summarize(report: dict) -> str:
    lines = [f"{report['command']}: " + ", ".join(report["inputs"].get("names", []))]
    for key, value in report["result"].items():
        if isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"  {key}:")
            lines.extend(f"    {item}" for item in value)
        else:
            lines.append(f"  {key}: {value}")
    lines.extend(f"  note: {n}" for n in report["notes"])
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    opts = {"horizon": args.horizon, "depth": args.depth, "bound": args.bound,
            "mode": args.mode, "telescoping": args.telescoping}
    try:
        if args.file is None:
            if args.command != "examples":
                raise UsageError(f"{args.command} needs a workspace file")
            ws = Workspace()
        else:
            ws = parse(Path(args.file).read_text(encoding="utf-8"))
        result, witnesses, notes = run(args.command, ws, args.names, opts)
    except UsageError as exc:
        print(f"nestlab: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nestlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NestlabError as exc:
        print(f"nestlab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    inputs = {"file": Path(args.file).name if args.file else None, "names": args.names,
              "options": {k: v for k, v in opts.items() if v is not None}}
    report = make_report(args.command, inputs, result, witnesses, notes)
    if args.json == "-":
        sys.stdout.write(dumps(report))
    else:
        if args.json:
            Path(args.json).write_text(dumps(report), encoding="utf-8")
        sys.stdout.write(summarize(report))
    if args.command == "examples" and not result["passed"]:
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
