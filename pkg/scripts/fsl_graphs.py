"""Lattice graphs: static LMG, and the drive-extended LMG, Rabi and JC models."""

import sys

from _common import run

code = run("fsl_lmg_static", ["fsl", "--model", "lmg", "--check"])
for model in ("lmg", "rabi", "jc"):
    code |= run(f"fsl_{model}_floquet", ["fsl", "--model", model, "--floquet", "--check"])
sys.exit(code)
