"""Time evolution under explicitly time-dependent Hamiltonians.

The workhorse is a fourth-order commutator-free Magnus integrator: each step
is a product of two exponentials of Hermitian combinations of H sampled at
the Gauss-Legendre nodes, so every step is unitary. Local error is estimated
by step doubling. Small problems exponentiate through a dense Hermitian
eigendecomposition, large sparse ones through ``expm_multiply``.
"""

from __future__ import annotations

import csv
import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import expm_multiply

from .hilbert import Basis, Operator, StateVector, boson

log = logging.getLogger(__name__)

DENSE_THRESHOLD = 512

_SQ3 = math.sqrt(3.0)
_C1, _C2 = 0.5 - _SQ3 / 6, 0.5 + _SQ3 / 6
_A1, _A2 = (3 - 2 * _SQ3) / 12, (3 + 2 * _SQ3) / 12
_ROUNDOFF = 32 * np.finfo(float).eps


class IntegrationError(RuntimeError):
    pass


def _const(t):
    return 1.0


@dataclass
class DriveProtocol:
    """H(t) = sum_i f_i(t) O_i.

    ``terms`` holds (Operator, f) pairs; ``f=None`` means a constant term.
    ``period`` is set for periodic drives (2 pi / omega for a harmonic one).
    """

    terms: list
    period: float | None = None

    def __post_init__(self):
        if not self.terms:
            raise ValueError("a drive protocol needs at least one term")
        basis = self.terms[0][0].basis
        fixed = []
        for op, f in self.terms:
            if op.basis != basis:
                raise ValueError("all drive terms must share one basis")
            fixed.append((op, _const if f is None else f))
        self.terms = fixed
        self.basis: Basis = basis
        self._dense = basis.dim <= DENSE_THRESHOLD
        mats = [op.dense() if self._dense else op.mat for op, _ in fixed]
        # real symmetric terms with real coefficients keep the algebra real
        self._real = all(not (m.imag != 0).sum() for m in mats)
        self._mats = [m.real if self._real else m for m in mats]

    @property
    def dim(self) -> int:
        return self.basis.dim

    def coefficients(self, t: float) -> np.ndarray:
        c = np.array([f(t) for _, f in self.terms], dtype=complex)
        if self._real and not c.imag.any():
            return c.real
        return c

    def matrix(self, t: float):
        """H(t) as a dense array (small problems) or CSR matrix."""
        return self._combine(self.coefficients(t))

    def _combine(self, c):
        out = c[0] * self._mats[0]
        for ci, m in zip(c[1:], self._mats[1:]):
            if ci != 0:
                out = out + ci * m
        return out

    def operator(self, t: float) -> Operator:
        return Operator(self.basis, sp.csr_matrix(self.matrix(t)))

    def check_periodic(self, samples: int = 17, tol: float = 1e-12) -> bool:
        if self.period is None:
            return False
        ts = np.linspace(0.0, self.period, samples)
        return all(
            np.max(np.abs(self.coefficients(t + self.period) - self.coefficients(t))) < tol for t in ts
        )


@dataclass
class Trajectory:
    """States on a time grid. ``states[k]`` is a vector (or matrix of column states)."""

    basis: Basis
    times: np.ndarray
    states: np.ndarray
    norm_drift: float
    steps: int = 0
    meta: dict = field(default_factory=dict)

    def state(self, k: int) -> StateVector:
        return StateVector(self.basis, self.states[k], normalize=False)


def _expmv(mat, h: float, psi: np.ndarray, dense: bool) -> np.ndarray:
    """exp(-i h mat) @ psi for Hermitian ``mat``."""
    if dense:
        w, v = np.linalg.eigh(mat)
        phase = np.exp(-1j * h * w)
        coef = v.conj().T @ psi
        coef = phase * coef if psi.ndim == 1 else phase[:, None] * coef
        return v @ coef
    return expm_multiply(-1j * h * mat, psi)


def _cf4_step(protocol: DriveProtocol, t: float, h: float, psi: np.ndarray) -> np.ndarray:
    c1 = protocol.coefficients(t + _C1 * h)
    c2 = protocol.coefficients(t + _C2 * h)
    first = protocol._combine(_A2 * c1 + _A1 * c2)
    second = protocol._combine(_A1 * c1 + _A2 * c2)
    psi = _expmv(first, h, psi, protocol._dense)
    return _expmv(second, h, psi, protocol._dense)


def _column_norms(psi: np.ndarray) -> np.ndarray:
    return np.linalg.norm(psi, axis=0)


def evolve(
    protocol: DriveProtocol,
    psi0,
    t_grid: Sequence[float],
    tol: float = 1e-8,
    max_steps: int = 5_000_000,
    h_init: float | None = None,
    h_max: float | None = None,
) -> Trajectory:
    """Integrate i d/dt psi = H(t) psi and return the states on ``t_grid``.

    ``psi0`` may be a StateVector, a vector, or a (dim, k) array of column
    states (used for propagators). The accumulated error over the whole grid
    is kept of order ``tol``; ``norm_drift`` reports max | ||psi|| - 1 |.
    """
    times = np.asarray(t_grid, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("t_grid must be a non-empty 1D sequence")
    if np.any(np.diff(times) < 0):
        raise ValueError("t_grid must be monotone")
    if isinstance(psi0, StateVector):
        if psi0.basis != protocol.basis:
            raise ValueError("initial state basis does not match the Hamiltonian")
        psi = psi0.amplitudes.copy()
    else:
        psi = np.array(psi0, dtype=complex)
    if psi.shape[0] != protocol.dim:
        raise ValueError("initial state dimension does not match the Hamiltonian")
    n0 = _column_norms(psi.reshape(protocol.dim, -1))
    if np.any(np.abs(n0 - 1) > 1e-10):
        raise ValueError("initial state must be normalised")

    span = max(times[-1] - times[0], 1e-300)
    out = np.empty((times.size,) + psi.shape, dtype=complex)
    out[0] = psi
    t = float(times[0])
    h = h_init or min(span / 100, 0.1) or 1e-3
    h_max = h_max or span
    steps = 0
    for k in range(1, times.size):
        target = times[k]
        while t < target:
            if steps >= max_steps:
                raise IntegrationError(f"step budget of {max_steps} exhausted at t={t:.6g}")
            hh = min(h, target - t, h_max)
            last = hh == target - t
            full = _cf4_step(protocol, t, hh, psi)
            half = _cf4_step(protocol, t, hh / 2, psi)
            half = _cf4_step(protocol, t + hh / 2, hh / 2, half)
            err = np.linalg.norm(full - half) / 15.0
            # below ~roundoff the estimate is noise; never demand less than that
            allowed = max(tol * hh / span, _ROUNDOFF * np.linalg.norm(half))
            steps += 1
            if err <= allowed:
                t = target if last else t + hh
                psi = half
                fac = 4.0 if err == 0 else min(4.0, 0.9 * (allowed / err) ** 0.2)
                if not last or fac < 1:
                    h = hh * max(fac, 0.2)
            else:
                h = hh * max(0.2, 0.9 * (allowed / err) ** 0.2)
                if h < 1e-13 * max(1.0, abs(t)):
                    raise IntegrationError(f"step size underflow at t={t:.6g}")
        out[k] = psi
    norms = np.linalg.norm(out.reshape(times.size, protocol.dim, -1), axis=1)
    drift = float(np.max(np.abs(norms - 1)))
    return Trajectory(protocol.basis, times, out, drift, steps)


def period_propagators(
    protocol: DriveProtocol, samples_per_period: int = 64, tol: float = 1e-9
) -> tuple[np.ndarray, np.ndarray]:
    """U(t_k, 0) for t_k = k T / samples, k = 0..samples (the last one is the monodromy)."""
    if protocol.period is None:
        raise ValueError("protocol is not periodic")
    ts = np.linspace(0.0, protocol.period, samples_per_period + 1)
    eye = np.eye(protocol.dim, dtype=complex)
    traj = evolve(protocol, eye, ts, tol=tol)
    return ts, traj.states


def evolve_periodic(
    protocol: DriveProtocol,
    psi0,
    n_periods: int,
    samples_per_period: int = 64,
    tol: float = 1e-9,
    propagators: tuple[np.ndarray, np.ndarray] | None = None,
) -> Trajectory:
    """Long-time evolution of a periodic drive from one-period propagators.

    psi(nT + t_k) = U(t_k) U(T)^n psi0, so only one period is ever integrated.
    """
    ts, us = propagators if propagators is not None else period_propagators(protocol, samples_per_period, tol)
    psi = psi0.amplitudes if isinstance(psi0, StateVector) else np.asarray(psi0, dtype=complex)
    K = ts.size - 1
    T = ts[-1]
    times = np.concatenate([n * T + ts[:-1] for n in range(n_periods)] + [[n_periods * T]])
    out = np.empty((times.size, psi.shape[0]), dtype=complex)
    monodromy = us[-1]
    cur = psi.copy()
    for n in range(n_periods):
        out[n * K : (n + 1) * K] = np.einsum("kij,j->ki", us[:-1], cur)
        cur = monodromy @ cur
    out[-1] = cur
    drift = float(np.max(np.abs(np.linalg.norm(out, axis=1) - 1)))
    return Trajectory(protocol.basis, times, out, drift, meta={"samples_per_period": K})


def evolve_static(H: Operator, psi0, times: Sequence[float]) -> Trajectory:
    """Exact evolution under a time-independent Hermitian operator."""
    times = np.asarray(times, dtype=float)
    psi = psi0.amplitudes if isinstance(psi0, StateVector) else np.asarray(psi0, dtype=complex)
    if H.dim <= 6000:
        d = H.dense()
        real = not np.abs(d.imag).any()
        w, v = np.linalg.eigh(d.real if real else d)
        coef = v.conj().T @ psi
        ph = np.exp(-1j * np.outer(w, times - times[0])) * coef[:, None]
        if real:
            # two real GEMMs beat one complex GEMM against a real basis; strided
            # .real/.imag views would miss the BLAS path
            out = (v @ np.ascontiguousarray(ph.real) + 1j * (v @ np.ascontiguousarray(ph.imag))).T
        else:
            out = (v @ ph).T
    else:
        out = np.empty((times.size, H.dim), dtype=complex)
        out[0] = psi
        cur = psi
        for k in range(1, times.size):
            cur = expm_multiply(-1j * (times[k] - times[k - 1]) * H.mat, cur)
            out[k] = cur
    drift = float(np.max(np.abs(np.linalg.norm(out, axis=1) - 1)))
    return Trajectory(H.basis, times, out, drift)


def expectation(traj: Trajectory, O: Operator, allow_complex: bool = False) -> np.ndarray:
    """<psi(t)|O|psi(t)> along a trajectory of single states."""
    if O.basis != traj.basis:
        raise ValueError("operator basis does not match trajectory")
    hermitian = O.is_hermitian()
    if not hermitian and not allow_complex:
        raise ValueError("non-Hermitian observable; pass allow_complex=True")
    states = traj.states
    vals = np.einsum("ti,ti->t", states.conj(), (O.mat @ states.T).T)
    if hermitian:
        if np.max(np.abs(vals.imag), initial=0.0) > 1e-10:
            raise ValueError("Hermitian expectation acquired an imaginary part")
        return vals.real
    return vals


def time_average(times, series, window: tuple[float, float] | None = None) -> float:
    """Trapezoidal mean of ``series`` over ``window`` (default: the full support)."""
    times = np.asarray(times, dtype=float)
    series = np.asarray(series)
    if window is None:
        window = (times[0], times[-1])
    a, b = window
    if b <= a:
        raise ValueError("empty averaging window")
    if a < times[0] - 1e-12 or b > times[-1] + 1e-12:
        raise ValueError("averaging window outside the series support")
    sel = (times >= a - 1e-12) & (times <= b + 1e-12)
    if sel.sum() < 2:
        raise ValueError("empty averaging window")
    return float(np.trapezoid(series[sel], times[sel]) / (times[sel][-1] - times[sel][0]))


def average_drift(times, series) -> float:
    """|mean over [0, T/2] - mean over [0, T]|: the doubling convergence check."""
    times = np.asarray(times, dtype=float)
    mid = times[0] + (times[-1] - times[0]) / 2
    return abs(time_average(times, series, (times[0], mid)) - time_average(times, series))


def coherent_state(alpha: complex, n_max: int, warn_tail: float = 1e-8, max_tail: float = 1e-4) -> StateVector:
    """Truncated Glauber coherent state, renormalised on |0>..|n_max>."""
    c = np.empty(n_max + 1, dtype=complex)
    c[0] = math.exp(-abs(alpha) ** 2 / 2)
    for n in range(n_max):
        c[n + 1] = c[n] * alpha / math.sqrt(n + 1)
    tail = max(0.0, 1.0 - float(np.sum(np.abs(c) ** 2)))
    if tail > max_tail:
        raise ValueError(f"coherent state tail mass {tail:.3g} beyond n_max={n_max}")
    if tail > warn_tail:
        warnings.warn(f"coherent state tail mass {tail:.3g} beyond n_max={n_max}", stacklevel=2)
    return StateVector(boson(n_max), c)


def trajectory_to_csv(path, times, series: dict, traj: Trajectory | None = None) -> None:
    """Write t plus named series; optionally Re/Im amplitude columns."""
    cols = ["t"] + list(series)
    amps = traj is not None
    if amps:
        d = traj.states.shape[1]
        cols += [f"re{i}" for i in range(d)] + [f"im{i}" for i in range(d)]
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for k, t in enumerate(times):
            row = [repr(float(t))] + [repr(float(np.real(series[name][k]))) for name in series]
            if amps:
                row += [repr(float(x)) for x in traj.states[k].real]
                row += [repr(float(x)) for x in traj.states[k].imag]
            w.writerow(row)
