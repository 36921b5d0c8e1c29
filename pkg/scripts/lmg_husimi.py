"""Husimi Q and its Majorana zeros for S = 25 at t = 10 from |S,-S>."""

import sys

from _common import run

sys.exit(run("lmg_husimi", ["lmg-husimi", "--zeros", "--check"]))
