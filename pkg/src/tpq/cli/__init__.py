"""``tpq`` command line: structure files in, JSON reports out."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .commands import COMMANDS, exit_code, run_command
from .examples import EXAMPLES, build_example
from .structfile import (
    LieSection,
    StructureError,
    StructureFile,
    dumps_structure,
    load_structure,
    loads_structure,
    save_structure,
)

__all__ = [
    "main",
    "run_command",
    "build_example",
    "EXAMPLES",
    "LieSection",
    "StructureError",
    "StructureFile",
    "dumps_structure",
    "load_structure",
    "loads_structure",
    "save_structure",
]


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tpq", description="Exact checks for twisted Poisson structures and their quantization.")
    p.add_argument("command", help="one of: " + ", ".join(COMMANDS))
    p.add_argument("file", help="structure file (TOML), or an example name for run-example")
    p.add_argument("--n", type=int, default=None, help="model size for quant51, or trial count for random checks")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    p.add_argument("--json", type=Path, default=None, metavar="PATH", help="also write the report to PATH")
    p.add_argument("--max-dim", type=int, default=None, help="raise the chart dimension cap")
    p.add_argument("--timing", action="store_true", help="record wall time in millis (otherwise 0)")
    return p


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    opts = {"n": args.n, "seed": args.seed, "max_dim": args.max_dim}
    rep = run_command(args.command, args.file, opts)
    text = rep.to_json(timing=args.timing)
    print(text)
    if args.json is not None:
        try:
            args.json.write_text(text + "\n", encoding="utf-8")
        except OSError as e:
            print(f"tpq: cannot write {args.json}: {e.strerror}", file=sys.stderr)
            return 2
    return exit_code(rep)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
