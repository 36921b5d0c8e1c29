"""Quasi-momentum distribution P(k, t) of the drive lattice and its Bloch ridge."""

import sys

from _common import run

sys.exit(run("jc_momentum", ["jc-momentum", "--check"]))
