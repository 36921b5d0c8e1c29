"""Atomic inversion over one drive period: closed form, integration, Floquet chains.

Extra CLI flags are passed through, e.g. ``--sites 701``.
"""

import sys

from _common import run

sys.exit(run("jc_inversion", ["jc-inversion", "--check"]))
