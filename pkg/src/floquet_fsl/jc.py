"""Harmonically driven Jaynes-Cummings model.

H(t) = (Delta/2) sigma_z + g0 cos(omega t) (a^dag sigma_- + a sigma_+) on qubit (x) boson.

The N-excitation block is spanned by {|n,e>, |n+1,g>} with coupling
g0 cos(omega t) sqrt(n+1). At resonance the block is diagonal in the
x-basis (|n,e> +- |n+1,g>)/sqrt(2) and its Floquet Hamiltonian is a pair of
Wannier-Stark chains omega E0 +- (g0 sqrt(n+1)/2)(E+ + E-).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg as sla
from scipy.special import jv
from scipy.stats import poisson

from .floquet import FloquetSpec, momentum_grid
from .hilbert import (
    Operator,
    StateVector,
    basis_state,
    boson,
    boson_ops,
    euclidean,
    euclidean_ops,
    kron_states,
    qubit,
    qubit_ops,
    tensor,
)
from .propagate import DriveProtocol, coherent_state, evolve, expectation


def default_n_max(alpha: complex) -> int:
    a = abs(alpha)
    return max(1, math.ceil(a**2 + 6 * a))


@dataclass(frozen=True)
class JCParams:
    Delta: float = 0.0
    g0: float = 1.0
    omega: float = 0.025
    alpha: complex = 5.0
    n_max: int | None = None
    excited: bool = True

    def __post_init__(self):
        if self.g0 < 0:
            raise ValueError("g0 must be non-negative")
        if self.omega <= 0:
            raise ValueError("omega must be positive")
        need = default_n_max(self.alpha)
        if self.n_max is None:
            object.__setattr__(self, "n_max", need)
        elif self.n_max < need:
            raise ValueError(f"n_max={self.n_max} below ceil(|alpha|^2 + 6|alpha|) = {need}")

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


@dataclass(frozen=True)
class JCTimescales:
    t_tr: float  # effective time reversal, pi/(2 omega)
    t_r: float  # first JC revival, 2 pi |alpha| / g0
    t_R: float  # inverse Rabi frequency, pi / (g0 |alpha|)
    t_c: float  # collapse time, 1 / (2 g0)


def timescales(p: JCParams) -> JCTimescales:
    a = abs(p.alpha)
    return JCTimescales(np.pi / (2 * p.omega), 2 * np.pi * a / p.g0, np.pi / (p.g0 * a), 1 / (2 * p.g0))


def _ops(n_max: int):
    a, ad, n = boson_ops(n_max)
    sx, sy, sz, sp_, sm = qubit_ops()
    return a, ad, n, sz, sp_, sm


def coupling_operator(n_max: int) -> Operator:
    a, ad, _, _, sp_, sm = _ops(n_max)
    return tensor(sp_, a) + tensor(sm, ad)


def jc_hamiltonian(p: JCParams) -> DriveProtocol:
    _, _, _, sz, _, _ = _ops(p.n_max)
    static = tensor(sz, boson(p.n_max)) * (p.Delta / 2)
    drive = coupling_operator(p.n_max)
    g0, w = p.g0, p.omega
    return DriveProtocol([(static, None), (drive, lambda t: g0 * math.cos(w * t))], period=2 * np.pi / w)


def excitation_number(n_max: int) -> Operator:
    _, _, n, sz, _, _ = _ops(n_max)
    return tensor(qubit(), n) + tensor(sz, boson(n_max)) * 0.5


def inversion_operator(n_max: int) -> Operator:
    _, _, _, sz, _, _ = _ops(n_max)
    return tensor(sz, boson(n_max))


def initial_state(p: JCParams) -> StateVector:
    atom = basis_state(qubit(), 1 if p.excited else 0)
    return kron_states(atom, coherent_state(p.alpha, p.n_max))


def _poisson_weights(alpha, tail: float = 1e-12):
    mean = abs(alpha) ** 2
    n_top = int(poisson.isf(tail, mean)) + 2 if mean > 0 else 1
    n = np.arange(n_top + 1)
    return n, poisson.pmf(n, mean)


def analytic_inversion(p: JCParams, t):
    """Closed-form W(t) at resonance for a coherent field.

    Excited atom:  W = sum_n P_n cos(2 Omega_{n+1}(t));
    ground atom:   W = -sum_n P_n cos(2 Omega_n(t)),
    with Omega_n(t) = sqrt(n) g0 sin(omega t)/omega and P_n Poissonian.
    """
    if p.Delta != 0:
        raise ValueError("the closed form holds only at resonance (Delta = 0)")
    t = np.asarray(t, dtype=float)
    n, w = _poisson_weights(p.alpha)
    phase = p.g0 * np.sin(p.omega * t) / p.omega
    if p.excited:
        return np.cos(2 * np.multiply.outer(phase, np.sqrt(n + 1))) @ w
    return -(np.cos(2 * np.multiply.outer(phase, np.sqrt(n))) @ w)


def numerical_inversion(p: JCParams, times, tol: float = 1e-9):
    traj = evolve(jc_hamiltonian(p), initial_state(p), times, tol=tol)
    return expectation(traj, inversion_operator(p.n_max)), traj


def rwa_block(n: int, p: JCParams) -> Operator:
    """Second-RWA block in qubit ordering (|g>, |e>) = (|n+1,g>, |n,e>)."""
    if p.omega < p.g0:
        warnings.warn("second rotating-wave approximation is dubious for omega < g0", stacklevel=2)
    d = (p.Delta - p.omega) / 2
    c = p.g0 * math.sqrt(n) / 2
    return Operator(qubit(), np.array([[-d, c], [c, d]], dtype=complex))


def wannier_stark_hamiltonian(n: float, g0: float, omega: float, M: int, tau: int = 1, boundary: str = "open") -> Operator:
    """omega E0 + tau (g0 sqrt(n)/2)(E+ + E-) on a single chain."""
    e0, ep, em = euclidean_ops(M, boundary)
    return e0 * omega + (ep + em) * (tau * g0 * math.sqrt(n) / 2)


def wannier_stark_floquet(n: float, g0: float, omega: float, M: int, boundary: str = "open") -> Operator:
    """Both tau sectors: omega E0 + (g0 sqrt(n)/2)(E+ + E-) tau_z on qubit (x) euclidean.

    The qubit factor labels tau: index 1 is tau=+1, index 0 is tau=-1.
    """
    e0, ep, em = euclidean_ops(M, boundary)
    _, _, tau_z, _, _ = qubit_ops()
    return tensor(qubit(), e0 * omega) + tensor(tau_z, (ep + em) * (g0 * math.sqrt(n) / 2))


def wannier_stark_analytic(n: float, g0: float, omega: float, j: int, M: int, tau: int = 1):
    """eps_j = j omega and amplitudes J_{j-m}(tau g0 sqrt(n)/omega), m = -M..M."""
    radius = g0 * math.sqrt(n) / omega
    if radius > M:
        raise ValueError(f"localisation radius {radius:.3g} exceeds M={M}; state would be clipped")
    if abs(j) + radius > M:
        warnings.warn("ladder index too close to the truncation edge", stacklevel=2)
    m = np.arange(-M, M + 1)
    amp = jv(j - m, tau * radius)
    return j * omega, StateVector(euclidean(M), amp.astype(complex), normalize=False)


@lru_cache(maxsize=512)
def _chain_eigensystem(hop: float, omega: float, M: int):
    m = np.arange(-M, M + 1, dtype=float)
    if hop == 0:
        return omega * m, np.eye(2 * M + 1)
    w, v = sla.eigh_tridiagonal(omega * m, np.full(2 * M, hop))
    return w, np.ascontiguousarray(v)


def _real_matmul(v: np.ndarray, c: np.ndarray) -> np.ndarray:
    # strided .real/.imag views miss the BLAS fast path
    return v @ np.ascontiguousarray(c.real) + 1j * (v @ np.ascontiguousarray(c.imag))


def floquet_pipeline(p: JCParams, sites: int, times, momentum: bool = False, theta: float = 0.0):
    """Evolve |atom, alpha> (x) |theta> under the truncated JC Floquet Hamiltonian.

    The extended space splits into independent Wannier-Stark chains, one
    pair per excitation block. Returns W(t) and optionally P(k, t) of the
    Floquet factor (rows: times, columns: ascending k).
    """
    if p.Delta != 0:
        raise ValueError("chain decomposition requires resonance (Delta = 0)")
    spec = FloquetSpec.from_sites(p.omega, sites)
    M = spec.M
    times = np.asarray(times, dtype=float)
    m = np.arange(-M, M + 1)
    theta_vec = np.exp(-1j * theta * m) / math.sqrt(spec.sites)
    gauge = (-1.0) ** m
    amps = coherent_state(p.alpha, p.n_max).amplitudes
    weights = np.abs(amps) ** 2
    W = np.zeros(times.size)
    P = np.zeros((times.size, spec.sites)) if momentum else None

    # block k couples |k-1,e> and |k,g> with strength sqrt(k); k=0 is |0,g> alone
    if p.excited:
        photon_to_block = {n: n + 1 for n in range(p.n_max + 1)}
        sign = 1.0
    else:
        photon_to_block = {n: n for n in range(p.n_max + 1)}
        sign = -1.0
    for n, k in photon_to_block.items():
        wgt = weights[n]
        if wgt < 1e-18:
            continue
        if k == 0 or k > p.n_max:
            # decoupled state: inversion frozen, Floquet factor evolves under omega E0 only
            W += sign * wgt
            if momentum:
                phi = np.exp(-1j * p.omega * np.outer(m, times)) * theta_vec[:, None]
                P += wgt * (np.abs(np.fft.fft(phi, axis=0)) ** 2).T / spec.sites
            continue
        hop = p.g0 * math.sqrt(k) / 2
        w, v = _chain_eigensystem(hop, p.omega, M)
        phase = np.exp(-1j * np.outer(w, times))
        a = v.T @ theta_vec
        b = v.T @ (gauge * theta_vec)
        ca, cb = phase * a[:, None], phase * b[:, None]
        phi_p = _real_matmul(v, ca)
        phi_m = gauge[:, None] * _real_matmul(v, cb)
        W += sign * wgt * np.real(np.sum(phi_p.conj() * phi_m, axis=0))
        if momentum:
            fp = np.abs(np.fft.fft(phi_p, axis=0)) ** 2
            fm = np.abs(np.fft.fft(phi_m, axis=0)) ** 2
            P += wgt * 0.5 * (fp + fm).T / spec.sites
    out = {"t": times, "W": W}
    if momentum:
        out["k"] = momentum_grid(M)
        out["P"] = np.fft.fftshift(P, axes=1)
    return out


def full_floquet_operator(p: JCParams, spec: FloquetSpec) -> Operator:
    """The JC Floquet Hamiltonian on qubit (x) boson (x) euclidean (small sizes only)."""
    from .floquet import build_floquet_harmonic

    _, _, _, sz, _, _ = _ops(p.n_max)
    static = tensor(sz, boson(p.n_max)) * (p.Delta / 2)
    return build_floquet_harmonic(static, coupling_operator(p.n_max) * p.g0, spec)


def run_fig1(p: JCParams, floquet_sites: int = 1401, times=None, n_times: int = 2001, tol: float = 1e-9) -> dict:
    """Analytic, time-integrated and Floquet inversion curves on [0, 2 pi / omega]."""
    if times is None:
        times = np.linspace(0.0, p.period, n_times)
    times = np.asarray(times, dtype=float)
    W_num, traj = numerical_inversion(p, times, tol=tol)
    out = {
        "t": times,
        "W_analytic": analytic_inversion(p, times) if p.Delta == 0 else np.full(times.size, np.nan),
        "W_timeint": W_num,
        "W_floquet": floquet_pipeline(p, floquet_sites, times)["W"],
        "norm_drift": traj.norm_drift,
    }
    return out


def run_fig2(p: JCParams, floquet_sites: int = 1401, times=None, n_times: int = 201) -> dict:
    """Time-resolved quasi-momentum distribution P(k, t) of the Floquet factor."""
    if times is None:
        times = np.linspace(0.0, p.period, n_times)
    return floquet_pipeline(p, floquet_sites, times, momentum=True)


def ridge(k: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Unwrapped argmax momentum for each row of P."""
    return np.unwrap(k[np.argmax(P, axis=1)])


def ridge_slope(times, k, P) -> float:
    kr = ridge(k, P)
    return float(np.polyfit(np.asarray(times), kr, 1)[0])


def off_ridge(times, k, P, omega: float, width: float = np.pi / 4):
    """Per-time (largest single-bin mass, total mass) farther than ``width`` from k = -omega t."""
    times = np.asarray(times)
    pred = -omega * times
    d = np.abs(np.angle(np.exp(1j * (k[None, :] - pred[:, None]))))
    mask = d > width
    masked = np.where(mask, P, 0.0)
    return masked.max(axis=1), masked.sum(axis=1)
