"""Unfolded spacing statistics of the LMG Floquet spectrum, full and per parity sector."""

import sys

from _common import run

code = run("level_stats", ["level-stats"])
code |= run("level_stats_joint", ["level-stats", "--symmetry-resolved", "--sectors", "joint"])
code |= run("level_stats_poisson", ["level-stats", "--model", "synthetic-poisson", "--check"])
code |= run("level_stats_wigner", ["level-stats", "--model", "synthetic-wigner", "--check"])
sys.exit(code)
