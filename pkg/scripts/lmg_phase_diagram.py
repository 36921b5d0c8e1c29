"""Time-averaged <Sz> and partition ratio over the (Delta, omega) plane.

The default 8x8 grid takes several minutes on one core; pass ``--grid 4x4``
for a quick look or ``--config`` with ``workers`` for more processes.
"""

import sys

from _common import run

sys.exit(run("lmg_phase_diagram", ["lmg-phase-diagram", "--check"]))
