"""Classically driven two-level system, H(t) = Omega sigma_z + g cos(omega t) sigma_x."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .floquet import FloquetSpec, build_floquet_from_blocks, build_floquet_harmonic
from .hilbert import Operator, qubit_ops
from .propagate import DriveProtocol


@dataclass(frozen=True)
class RabiParams:
    Omega: float = 1.0
    g: float = 0.5
    omega: float = 2.0

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")


def rabi_hamiltonian(p: RabiParams) -> DriveProtocol:
    sx, _, sz, _, _ = qubit_ops()
    w = p.omega
    return DriveProtocol([(sz * p.Omega, None), (sx * p.g, lambda t: math.cos(w * t))], period=2 * math.pi / w)


def rabi_blocks(p: RabiParams) -> dict:
    sx, _, sz, _, _ = qubit_ops()
    half = sx * (p.g / 2)
    return {0: sz * p.Omega, 1: half, -1: half}


def rabi_floquet(p: RabiParams, spec: FloquetSpec, route: str = "harmonic") -> Operator:
    """omega E0 + Omega sigma_z + (g/2)(E+ + E-) sigma_x on qubit (x) euclidean."""
    if route == "blocks":
        return build_floquet_from_blocks(rabi_blocks(p), spec)
    sx, _, sz, _, _ = qubit_ops()
    return build_floquet_harmonic(sz * p.Omega, sx * p.g, spec)
