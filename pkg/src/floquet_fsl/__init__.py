"""Floquet extended-space tools for driven Jaynes-Cummings and LMG models."""

from .floquet import FloquetSpec, build_floquet_harmonic, fold, quasienergies
from .hilbert import Basis, Operator, StateVector, spin_ops, tensor
from .jc import JCParams
from .lmg import LMGParams
from .propagate import DriveProtocol, evolve
from .rabi import RabiParams

__version__ = "0.1.0"
