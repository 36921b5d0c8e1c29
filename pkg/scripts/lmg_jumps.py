"""Magnetisation jumps under slow strong driving and where they fall in the period."""

import sys

from _common import run

sys.exit(run("lmg_jumps", ["lmg-jumps", "--check"]))
