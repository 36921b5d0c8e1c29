"""<Sz> and <E0> in the truncated drive lattice at points A and B."""

import sys

from _common import run

sys.exit(run("lmg_oscillations", ["fig7", "--check"]))
