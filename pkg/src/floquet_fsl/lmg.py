"""Driven Lipkin-Meshkov-Glick model.

H(t) = Delta cos(omega t) Sz - (lambda/S) Sx^2 on the 2S+1 Dicke space.

Phase-space diagnostics use spin coherent states

    |theta, phi> = exp[i theta (Sx cos phi - Sy sin phi)] |S, S>,

whose Bloch vector points along (sin th sin phi, sin th cos phi, cos th).
The overlap <theta, phi|psi> is cos^{2S}(theta/2) P(z) with
z = -i tan(theta/2) e^{i phi} and the Majorana polynomial
P(z) = sum_k sqrt(C(2S, k)) psi_{S-k} z^k, so Husimi zeros are its roots.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache

import numba
import numpy as np
import scipy.sparse as sp
from scipy.integrate import quad
from scipy.special import gammaln

from .floquet import FloquetSpec, build_floquet_harmonic
from .hilbert import (
    Operator,
    StateVector,
    basis_state,
    euclidean,
    euclidean_ops,
    kron_states,
    phase_state,
    spin,
    spin_ops,
    tensor,
    _two_s,
)
from .propagate import DriveProtocol, evolve, evolve_periodic, evolve_static, expectation, time_average

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class LMGParams:
    Delta: float = 20.0
    omega: float = 0.05
    S: float = 10
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "S", Fraction(_two_s(self.S), 2))
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if not self.omega > 0:
            raise ValueError("omega must be positive")

    @property
    def two_s(self) -> int:
        return int(2 * self.S)

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega


# ---------------------------------------------------------------- Hamiltonians


def lmg_parts(S, lam: float = 1.0):
    """(Sz, -(lambda/S) Sx^2) on the Dicke space."""
    sx, _, sz, _, _ = spin_ops(S)
    return sz, (sx @ sx) * (-lam / float(Fraction(S)))


def lmg_static(S, Delta: float, lam: float = 1.0, h_x: float = 0.0) -> Operator:
    """Delta Sz - (lambda/S) Sx^2 (+ h_x Sx, which couples the two parity chains)."""
    sx, _, sz, _, _ = spin_ops(S)
    H = sz * Delta + (sx @ sx) * (-lam / float(Fraction(S)))
    return H + sx * h_x if h_x else H


def lmg_hamiltonian(p: LMGParams) -> DriveProtocol:
    sz, inter = lmg_parts(p.S, p.lam)
    w, d = p.omega, p.Delta
    return DriveProtocol([(inter, None), (sz * d, lambda t: math.cos(w * t))], period=p.period)


def lmg_floquet(p: LMGParams, spec: FloquetSpec) -> Operator:
    """omega E0 + (Delta/2)(E+ + E-) Sz - (lambda/S) Sx^2 on spin (x) euclidean."""
    sz, inter = lmg_parts(p.S, p.lam)
    return build_floquet_harmonic(inter, sz * p.Delta, spec)


def _flip(two_s: int, signs) -> sp.csr_matrix:
    n = two_s + 1
    return sp.csr_matrix((np.asarray(signs, dtype=complex), (np.arange(n)[::-1], np.arange(n))), shape=(n, n))


def parity_operators(S, M: int, boundary: str = "open"):
    """Two commuting-with-H_F involutions on spin (x) euclidean.

    P1: pi rotation about y on the spin, (-1)^m on the lattice
        (Sx, Sy, Sz, E+-) -> (-Sx, Sy, -Sz, -E+-).
    P2: pi rotation about x (up to phase), (-1)^m on the lattice
        (Sx, Sy, Sz, E+-) -> (Sx, -Sy, -Sz, -E+-).
    For half-integer S the y rotation squares to -1 and is multiplied by i.
    """
    if boundary == "periodic" and M % 2 == 0:
        raise ValueError("the lattice parity needs an even number of sites on a ring")
    two_s = _two_s(S)
    k = np.arange(two_s + 1)  # S - m runs 2S .. 0 in storage order
    fy = _flip(two_s, (-1.0) ** (two_s - k) * (1j if two_s % 2 else 1.0))
    fx = _flip(two_s, np.ones(two_s + 1))
    g = sp.diags((-1.0) ** np.arange(-M, M + 1), format="csr").astype(complex)
    b = spin(S)
    e = euclidean(M)
    p1 = tensor(Operator(b, fy), Operator(e, g))
    p2 = tensor(Operator(b, fx), Operator(e, g))
    return p1, p2


# ------------------------------------------------------------ coherent states


def _log_binom(n, k):
    return gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)


def coherent_amplitudes(theta, phi, S) -> np.ndarray:
    """Rows of Dicke amplitudes for arrays of (theta, phi); storage order m = -S..S."""
    two_s = _two_s(S)
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.broadcast_to(np.asarray(phi, dtype=float), theta.shape)
    k = np.arange(two_s, -1, -1)  # S - m
    lb = 0.5 * _log_binom(two_s, k)
    c, s = np.cos(theta / 2)[:, None], np.sin(theta / 2)[:, None]
    mag = np.exp(lb) * c ** (two_s - k) * s**k
    beta = np.pi / 2 - phi
    return mag * np.exp(1j * beta[:, None] * k)


def spin_coherent_state(theta: float, phi: float, S) -> StateVector:
    if not -1e-12 <= theta <= np.pi + 1e-12:
        raise ValueError("theta must lie in [0, pi]")
    return StateVector(spin(S), coherent_amplitudes(theta, phi, S)[0])


def bloch_vector(theta: float, phi: float) -> np.ndarray:
    """Unit direction of <S>/S for |theta, phi> in this rotation convention."""
    return np.array([np.sin(theta) * np.sin(phi), np.sin(theta) * np.cos(phi), np.cos(theta)])


def dicke(S, m) -> StateVector:
    two_s = _two_s(S)
    return basis_state(spin(S), int(Fraction(m) + Fraction(two_s, 2)))


# ------------------------------------------------------------------ Husimi Q


MEASURES = ("plain", "spherical")


@dataclass
class HusimiField:
    """Q sampled on Gauss-Legendre nodes (in theta, or in cos theta for the
    spherical measure) x uniform phi nodes.

    ``values`` are normalised so that sum(values * weights) = 1 over ``measure``;
    ``raw`` holds the bare overlaps <theta,phi|rho|theta,phi>.
    """

    theta: np.ndarray
    phi: np.ndarray
    values: np.ndarray
    raw: np.ndarray
    weights: np.ndarray
    measure: str
    S: Fraction
    meta: dict = field(default_factory=dict)

    def integral(self, power: int = 1) -> float:
        return float(np.sum(self.values**power * self.weights))

    def argmax(self) -> tuple[float, float]:
        i, j = np.unravel_index(np.argmax(self.values), self.values.shape)
        return float(self.theta[i]), float(self.phi[j])


def default_grid(S) -> tuple[int, int]:
    n = 4 * (_two_s(S) + 1)
    return n, n


def quadrature_grid(n_theta: int, n_phi: int, measure: str = "plain"):
    if measure not in MEASURES:
        raise ValueError(f"unknown measure {measure!r}")
    x, w = np.polynomial.legendre.leggauss(n_theta)
    if measure == "spherical":
        # Q is a polynomial in cos(theta): Gauss-Legendre in cos(theta) is exact
        theta, wt = np.arccos(-x), w
    else:
        theta, wt = (x + 1) * np.pi / 2, w * np.pi / 2
    phi = np.arange(n_phi) * 2 * np.pi / n_phi
    return theta, phi, np.outer(wt, np.full(n_phi, 2 * np.pi / n_phi))


def husimi(rho, grid: tuple[int, int] | None = None, measure: str = "plain", S=None) -> HusimiField:
    """Husimi Q of a StateVector, amplitude vector or density matrix."""
    if isinstance(rho, StateVector):
        S = rho.basis.factors[0].param / 2
        rho = rho.amplitudes
    rho = np.asarray(rho, dtype=complex)
    if S is None:
        S = Fraction(rho.shape[0] - 1, 2)
    two_s = _two_s(S)
    if rho.shape[0] != two_s + 1:
        raise ValueError("state dimension does not match 2S+1")
    n_theta, n_phi = grid if grid is not None else default_grid(S)
    if min(n_theta, n_phi) < 2 * (two_s + 1):
        raise ValueError("grid coarser than 2(2S+1) points per axis")
    theta, phi, weights = quadrature_grid(n_theta, n_phi, measure)
    tt, pp = np.meshgrid(theta, phi, indexing="ij")
    C = coherent_amplitudes(tt.ravel(), pp.ravel(), S)
    if rho.ndim == 1:
        raw = np.abs(C.conj() @ rho) ** 2
    else:
        raw = np.einsum("gi,ij,gj->g", C.conj(), rho, C).real
    raw = raw.reshape(n_theta, n_phi)
    total = float(np.sum(raw * weights))
    meta = {"measure": measure, "normalisation": total, "grid": [n_theta, n_phi], "theta_nodes": "gauss-legendre-cos" if measure == "spherical" else "gauss-legendre"}
    return HusimiField(theta, phi, raw / total, raw, weights, measure, Fraction(two_s, 2), meta)


@lru_cache(maxsize=None)
def pr_calibration(two_s: int, measure: str = "plain") -> float:
    """Raw PR of the reference coherent state.

    Spherical measure: rotation invariant, (2S+1)^2 / (4 pi (4S+1)) for any
    coherent state. Plain measure: not rotation invariant; the reference is
    the south-pole state |S,-S>, where Q = sin^{4S}(theta/2).
    """
    S = two_s / 2
    if measure == "spherical":
        return (2 * S + 1) ** 2 / (4 * np.pi * (4 * S + 1))
    if measure != "plain":
        raise ValueError(f"unknown measure {measure!r}")
    q1 = quad(lambda t: np.sin(t / 2) ** (4 * S), 0, np.pi, epsabs=0, epsrel=1e-13)[0]
    q2 = quad(lambda t: np.sin(t / 2) ** (8 * S), 0, np.pi, epsabs=0, epsrel=1e-13)[0]
    return (2 * np.pi * q2) / (2 * np.pi * q1) ** 2


def partition_ratio(f: HusimiField, calibrate: bool = True) -> float:
    """Quadrature of Q^2 over the field's measure, in units of the coherent reference."""
    if abs(f.integral() - 1) > 1e-8:
        raise ValueError("Husimi field is not normalised")
    raw = f.integral(2)
    return raw / pr_calibration(int(2 * f.S), f.measure) if calibrate else raw


# ----------------------------------------------------------- Majorana stars


@dataclass
class StellarZeros:
    """Roots of the Majorana polynomial mapped onto the sphere.

    ``points`` lists distinct (theta, phi, multiplicity); ``Z`` counts finite
    roots with multiplicity, ``at_infinity`` the degree deficit (theta = pi).
    """

    roots: np.ndarray
    points: list
    Z: int
    at_infinity: int
    two_s: int

    @property
    def total(self) -> int:
        return self.Z + self.at_infinity

    def to_json(self) -> list:
        return [{"theta": t, "phi": p, "multiplicity": k} for t, p, k in self.points]


def majorana_coefficients(psi) -> np.ndarray:
    """Coefficients a_k of z^k, k = 0..2S."""
    v = psi.amplitudes if isinstance(psi, StateVector) else np.asarray(psi, dtype=complex)
    two_s = v.size - 1
    k = np.arange(two_s + 1)
    return np.exp(0.5 * _log_binom(two_s, k)) * v[::-1]


def root_to_sphere(z) -> tuple[np.ndarray, np.ndarray]:
    z = np.asarray(z, dtype=complex)
    theta = 2 * np.arctan(np.abs(z))
    phi = np.mod(np.angle(1j * z), 2 * np.pi)
    return theta, phi


def sphere_to_root(theta, phi):
    return -1j * np.tan(np.asarray(theta) / 2) * np.exp(1j * np.asarray(phi))


def _cluster(roots: np.ndarray, tol: float) -> list:
    """Group roots closer than ``tol`` (chordal distance on the sphere)."""
    th, ph = root_to_sphere(roots)
    xyz = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=1)
    left = list(range(len(roots)))
    out = []
    while left:
        i = left.pop(0)
        group = [i] + [j for j in left if np.linalg.norm(xyz[i] - xyz[j]) < tol]
        left = [j for j in left if j not in group]
        c = xyz[group].mean(axis=0)
        c /= np.linalg.norm(c)
        out.append((float(np.arccos(np.clip(c[2], -1, 1))), float(np.mod(np.arctan2(c[1], c[0]), 2 * np.pi)), len(group)))
    return out


def husimi_zeros(psi, cluster_tol: float = 1e-6, inf_tol: float = 1e-13) -> StellarZeros:
    """Companion-matrix roots of the Majorana polynomial."""
    a = majorana_coefficients(psi)
    scale = np.max(np.abs(a))
    if scale == 0:
        raise ValueError("zero state has no stellar representation")
    two_s = a.size - 1
    deg = two_s
    while deg > 0 and abs(a[deg]) <= inf_tol * scale:
        deg -= 1
    roots = np.roots(a[: deg + 1][::-1]) if deg > 0 else np.zeros(0, dtype=complex)
    points = _cluster(roots, cluster_tol)
    if deg < two_s:
        points.append((float(np.pi), 0.0, two_s - deg))
    return StellarZeros(roots, points, int(roots.size), two_s - deg, two_s)


def state_from_zeros(z: StellarZeros) -> StateVector:
    """Rebuild the state (up to a global phase) from its stars."""
    coef = np.zeros(z.two_s + 1, dtype=complex)
    poly = np.poly(z.roots)[::-1] if z.roots.size else np.ones(1, dtype=complex)
    coef[: poly.size] = poly
    k = np.arange(z.two_s + 1)
    amps = coef / np.exp(0.5 * _log_binom(z.two_s, k))
    return StateVector(spin(Fraction(z.two_s, 2)), amps[::-1])


# ----------------------------------------------------------------- jumps


def _window_means(t, y, w):
    """Mean of y over [t - w, t) and (t, t + w] for every sample via a cumulative trapezoid."""
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))])
    lo = np.interp(t - w, t, cum)
    hi = np.interp(t + w, t, cum)
    return (cum - lo) / w, (hi - cum) / w


def detect_jumps(times, sz, omega: float, threshold: float | None = None):
    """Locate sudden shifts of the running mean of a fast-oscillating series.

    Backward and forward means over one drive quarter-period are compared at
    every sample. Plateaus are samples where the two agree within
    ``threshold``, which defaults to 3x the fast-oscillation amplitude
    (sqrt 2 times the median of the smaller one-sided window std). Each
    excursion between plateaus is one jump, placed at the peak of
    |forward - backward|. Returns (t_jump, sz_before, sz_after) tuples.
    """
    t = np.asarray(times, dtype=float)
    y = np.asarray(sz, dtype=float)
    w = np.pi / (2 * omega)
    if t[-1] - t[0] < 2 * w:
        raise ValueError("series shorter than two drive quarter-periods")
    back, fwd = _window_means(t, y, w)
    inside = (t >= t[0] + w) & (t <= t[-1] - w)
    if threshold is None:
        # a step spoils at most one of the two one-sided windows
        b2, f2 = _window_means(t, y * y, w)
        sd = np.sqrt(np.maximum(np.minimum(b2 - back**2, f2 - fwd**2), 0.0))
        amp = np.sqrt(2) * np.median(sd[inside])
        threshold = max(3 * amp, 1e-9 * max(1.0, np.max(np.abs(y))))
    diff = np.where(inside, fwd - back, 0.0)
    plateau = inside & (np.abs(diff) <= threshold)
    if not plateau.any():
        raise ValueError("no plateaus found; drive is not in the slow regime")
    events = []
    idx = np.flatnonzero(inside & ~plateau)
    if idx.size == 0:
        return events
    runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
    for run in runs:
        k = run[np.argmax(np.abs(diff[run]))]
        events.append((float(t[k]), float(back[k]), float(fwd[k])))
    return events


def jump_lattice_distance(t_jump: float, omega: float) -> float:
    """Distance from t_jump to the nearest odd multiple of pi/(2 omega)."""
    q = np.pi / (2 * omega)
    k = np.round((t_jump / q - 1) / 2)
    return float(abs(t_jump - (2 * k + 1) * q))


def run_jumps(p: LMGParams, n_periods: int = 6, samples_per_period: int = 4608, tol: float = 1e-7):
    """<Sz>(t) from |S,-S> over whole drive periods, plus detected jumps."""
    if p.period / samples_per_period >= 2 * np.pi / (abs(p.Delta) * float(p.S)):
        raise ValueError("sampling does not resolve the fast Sz oscillation")
    prot = lmg_hamiltonian(p)
    psi0 = dicke(p.S, -p.S)
    traj = evolve_periodic(prot, psi0, n_periods, samples_per_period, tol)
    sz = expectation(traj, lmg_parts(p.S)[0])
    return {"t": traj.times, "Sz": sz, "jumps": detect_jumps(traj.times, sz, p.omega), "norm_drift": traj.norm_drift}


# ------------------------------------------------------------ semiclassics

_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1


@numba.njit(cache=True)
def _rot_z(n, a):
    c, s = math.cos(a), math.sin(a)
    x, y = n[0], n[1]
    n[0] = c * x - s * y
    n[1] = s * x + c * y


@numba.njit(cache=True)
def _rot_x(n, a):
    c, s = math.cos(a), math.sin(a)
    y, z = n[1], n[2]
    n[1] = c * y - s * z
    n[2] = s * y + c * z


@numba.njit(cache=True)
def _strang(n, t, h, delta, omega, lam):
    tm = t + 0.5 * h
    _rot_z(n, delta * (math.sin(omega * tm) - math.sin(omega * t)) / omega)
    _rot_x(n, -2.0 * lam * n[0] * h)
    _rot_z(n, delta * (math.sin(omega * (t + h)) - math.sin(omega * tm)) / omega)


@numba.njit(cache=True)
def _step(n, t, h, delta, omega, lam):
    _strang(n, t, _W1 * h, delta, omega, lam)
    _strang(n, t + _W1 * h, _W0 * h, delta, omega, lam)
    _strang(n, t + (_W1 + _W0) * h, _W1 * h, delta, omega, lam)


@numba.njit(cache=True)
def _integrate(n0, t_out, h_max, delta, omega, lam):
    out = np.empty((t_out.size, 3))
    n = n0.copy()
    t = t_out[0]
    out[0] = n
    for k in range(1, t_out.size):
        span = t_out[k] - t
        m = max(1, int(math.ceil(span / h_max)))
        h = span / m
        for _ in range(m):
            _step(n, t, h, delta, omega, lam)
            t += h
        t = t_out[k]
        out[k] = n
    return out


@numba.njit(cache=True)
def _plateaus(n0, count, steps_per_period, delta, omega, lam):
    """Mean n_z over the middle half of the half-period windows centred at j T/2, j = 1..count."""
    T = 2.0 * math.pi / omega
    h = T / steps_per_period
    quarter = steps_per_period // 4
    eighth = steps_per_period // 8
    out = np.empty(count)
    n = n0.copy()
    total = (count * 2 + 1) * quarter + eighth + 1
    acc = 0.0
    cnt = 0
    j = 1
    for k in range(total):
        # sample index k sits at time k h; window j covers [j T/2 - T/8, j T/2 + T/8]
        centre = j * 2 * quarter
        if k >= centre - eighth and k <= centre + eighth:
            acc += n[2]
            cnt += 1
            if k == centre + eighth:
                out[j - 1] = acc / cnt
                acc = 0.0
                cnt = 0
                j += 1
                if j > count:
                    break
        _step(n, k * h, h, delta, omega, lam)
    return out


def _unit(theta0, phi0):
    # same orientation as the coherent state |theta0, phi0>
    return np.ascontiguousarray(bloch_vector(theta0, phi0), dtype=float)


def semiclassical_evolve(theta0: float, phi0: float, p: LMGParams, t_grid, h_max: float | None = None) -> np.ndarray:
    """Unit spin vector n(t) on ``t_grid`` for dn/dt = B x n, B = (-2 lambda n_x, 0, Delta cos omega t).

    Fourth-order (Yoshida) composition of exact z and x rotations, so |n| = 1
    up to rounding.
    """
    t = np.asarray(t_grid, dtype=float)
    if h_max is None:
        h_max = min(p.period / 8000, 0.05 / max(abs(p.Delta), p.lam, 1e-12))
    return _integrate(_unit(theta0, phi0), t, h_max, float(p.Delta), float(p.omega), float(p.lam))


def semiclassical_plateaus(
    theta0: float, phi0: float, p: LMGParams, count: int = 500, steps_per_period: int = 8000
) -> np.ndarray:
    steps_per_period = 8 * max(1, steps_per_period // 8)
    return _plateaus(_unit(theta0, phi0), count, steps_per_period, float(p.Delta), float(p.omega), float(p.lam))


# ------------------------------------------------------------ phase diagram


@dataclass(frozen=True)
class SweepSettings:
    t_max: float = 200.0
    n_times: int = 401
    n_snapshots: int = 21
    tol: float = 1e-6
    measure: str = "plain"


def phase_point(p: LMGParams, st: SweepSettings = SweepSettings()) -> tuple[float, float]:
    """(time-averaged <Sz>, time-averaged PR) from |S,-S> over [0, t_max]."""
    prot = lmg_hamiltonian(p)
    ts = np.linspace(0.0, st.t_max, st.n_times)
    traj = evolve(prot, dicke(p.S, -p.S), ts, tol=st.tol)
    sz_bar = time_average(ts, expectation(traj, lmg_parts(p.S)[0]))
    idx = np.linspace(0, st.n_times - 1, st.n_snapshots).round().astype(int)
    prs = np.array([partition_ratio(husimi(traj.states[k], measure=st.measure, S=p.S)) for k in idx])
    pr_bar = time_average(ts[idx], prs)
    return sz_bar, pr_bar


def _phase_task(args):
    p, st = args
    try:
        return phase_point(p, st) + (None,)
    except Exception as exc:  # recorded, sweep continues
        return (np.nan, np.nan, f"{type(exc).__name__}: {exc}")


def phase_diagram(delta_grid, omega_grid, base: LMGParams = LMGParams(), settings: SweepSettings = SweepSettings(), workers: int = 1):
    """Fields Sz_bar[i, j], PR[i, j] over Delta_i x omega_j; failures collected, not raised."""
    deltas = np.asarray(delta_grid, dtype=float)
    omegas = np.asarray(omega_grid, dtype=float)
    tasks = [(replace(base, Delta=float(d), omega=float(w)), settings) for d in deltas for w in omegas]
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            res = list(ex.map(_phase_task, tasks))
    else:
        res = [_phase_task(t) for t in tasks]
    shape = (deltas.size, omegas.size)
    sz = np.array([r[0] for r in res]).reshape(shape)
    pr = np.array([r[1] for r in res]).reshape(shape)
    failures = [
        {"Delta": float(t[0].Delta), "omega": float(t[0].omega), "error": r[2]} for t, r in zip(tasks, res) if r[2]
    ]
    return {"Delta": deltas, "omega": omegas, "Sz": sz, "PR": pr, "failures": failures}


# ------------------------------------------ truncated-lattice runs at A and B

# Placeholders: A sits in a delocalised pocket where <Sz> swings through zero,
# B in the strongly driven, magnetised corner.
POINT_A = LMGParams(Delta=2.5, omega=1.5)
POINT_B = LMGParams(Delta=20.0, omega=4.0)


def floquet_initial_state(p: LMGParams, M: int, theta: float = 0.0) -> StateVector:
    return kron_states(dicke(p.S, -p.S), phase_state(M, theta))


def run_fig7(points: dict, sites: int = 101, t_max: float = 50.0, n_times: int = 1001) -> dict:
    """<Sz>(t) and <E0>(t) in the extended space for each labelled parameter set.

    The start is |S,-S> (x) the theta = 0 phase state; H_F is time independent
    so the evolution is a single eigendecomposition.
    """
    ts = np.linspace(0.0, t_max, n_times)
    out = {}
    for name, p in points.items():
        spec = FloquetSpec.from_sites(p.omega, sites)
        traj = evolve_static(lmg_floquet(p, spec), floquet_initial_state(p, spec.M), ts)
        e0 = euclidean_ops(spec.M)[0]
        sz = tensor(lmg_parts(p.S)[0], euclidean(spec.M))
        out[name] = {
            "t": ts,
            "Sz": expectation(traj, sz),
            "E0": expectation(traj, tensor(spin(p.S), e0)),
            "params": p,
            "norm_drift": traj.norm_drift,
        }
    return out


def period_mean(t, y, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Moving average over one drive period on a uniform grid; returns (t_left, mean)."""
    t = np.asarray(t, dtype=float)
    n = int(round(period / (t[1] - t[0])))
    if n < 2 or n > t.size:
        raise ValueError("grid does not resolve one drive period inside the window")
    k = np.ones(n) / n
    return t[: t.size - n + 1], np.convolve(np.asarray(y, dtype=float), k, mode="valid")


def period_envelope(t, y, period: float) -> tuple[np.ndarray, np.ndarray]:
    """Running standard deviation over one drive period: the amplitude of the fast oscillation."""
    tt, m1 = period_mean(t, y, period)
    _, m2 = period_mean(t, np.asarray(y, dtype=float) ** 2, period)
    return tt, np.sqrt(np.maximum(m2 - m1**2, 0.0))


def oscillation_count(y, band: float = 0.5) -> float:
    """Full oscillations about the mean, counted with hysteresis of ``band`` standard deviations.

    A half oscillation is a passage from above +band to below -band or back.
    """
    y = np.asarray(y, dtype=float)
    y = y - y.mean()
    b = band * y.std()
    state, n = 0, 0
    for v in y:
        if v > b and state <= 0:
            n += state < 0
            state = 1
        elif v < -b and state >= 0:
            n += state > 0
            state = -1
    return n / 2


def fig7_counts(res: dict, t_window: float | None = None) -> dict:
    """Slow oscillation counts of one run_fig7 entry.

    <Sz> is averaged over a drive period; for <E0> the slow signal is the
    envelope of its fast Bloch oscillation, whose amplitude tracks
    Delta |<Sz>| / omega.
    """
    t, p = res["t"], res["params"]
    sel = t <= (t_window if t_window is not None else t[-1]) + 1e-12
    _, sz = period_mean(t[sel], res["Sz"][sel], p.period)
    _, env = period_envelope(t[sel], res["E0"][sel], p.period)
    n_sz, n_e0 = oscillation_count(sz), oscillation_count(env)
    return {"Sz": n_sz, "E0": n_e0, "ratio": n_e0 / n_sz if n_sz else float("inf")}
