"""Shared helper: run one CLI command into out/<name> and exit with its status."""

import sys
from pathlib import Path

from floquet_fsl.cli import main

OUT = Path(__file__).resolve().parents[1] / "out"


def run(name: str, argv: list) -> int:
    extra = sys.argv[1:]
    code = main([*argv, "--out-dir", str(OUT / name), *extra])
    print(f"{name}: exit {code}, files in {OUT / name}")
    return code
