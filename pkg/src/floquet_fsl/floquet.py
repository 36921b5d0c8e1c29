"""Floquet Hamiltonians in the extended space H (x) T and their spectra.

Convention: H(t) = sum_k e^{i k omega t} H^(k), a Floquet state is
e^{-i eps t} sum_m e^{i m omega t} |phi_m>, and the extended operator is

    H_F = sum_k H^(k) (x) (E+)^k + 1 (x) omega E0,        (E+)^{-k} = (E-)^k

so the Fourier-block route and the harmonic substitution
cos(omega t) -> (E+ + E-)/2, -i d/dt -> omega E0 produce identical matrices.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .hilbert import Basis, Operator, StateVector, euclidean, euclidean_ops, tensor
from .propagate import DriveProtocol, evolve

DENSE_EIG_THRESHOLD = 8000


@dataclass(frozen=True)
class FloquetSpec:
    omega: float
    M: int
    boundary: str = "open"

    def __post_init__(self):
        if not self.omega > 0:
            raise ValueError("omega must be positive")
        if int(self.M) < 1:
            raise ValueError("M must be at least 1")
        if self.boundary not in ("open", "periodic"):
            raise ValueError(f"unknown boundary {self.boundary!r}")

    @property
    def sites(self) -> int:
        return 2 * self.M + 1

    @property
    def period(self) -> float:
        return 2 * np.pi / self.omega

    @classmethod
    def from_sites(cls, omega: float, sites: int, boundary: str = "open") -> "FloquetSpec":
        if sites % 2 != 1:
            raise ValueError("the Floquet lattice needs an odd number of sites")
        return cls(omega, (sites - 1) // 2, boundary)


def suggest_M(radius: float, margin: float = 0.25, minimum: int = 10) -> int:
    """Half-width that fits a Bessel localisation radius with the given margin."""
    return max(minimum, int(np.ceil(radius * (1 + margin))))


def check_truncation(radius: float, spec: FloquetSpec, margin: float = 0.25) -> bool:
    ok = radius * (1 + margin) <= spec.M
    if not ok:
        warnings.warn(
            f"localisation radius {radius:.3g} does not fit M={spec.M} with {margin:.0%} margin",
            stacklevel=2,
        )
    return ok


def _shift_power(e_plus: sp.csr_matrix, k: int) -> sp.csr_matrix:
    base = e_plus if k > 0 else e_plus.T.tocsr()
    out = sp.identity(e_plus.shape[0], format="csr", dtype=complex)
    for _ in range(abs(k)):
        out = out @ base
    return out


def build_floquet_from_blocks(blocks: dict, spec: FloquetSpec) -> Operator:
    """Assemble H_F from Fourier blocks {k: H^(k)}; requires H^(-k) = H^(k)^dagger."""
    if 0 not in blocks:
        raise ValueError("the time-averaged block H^(0) is required")
    basis0 = blocks[0].basis
    for k, blk in blocks.items():
        if blk.basis != basis0:
            raise ValueError("all Fourier blocks must share one basis")
        partner = blocks.get(-k)
        if partner is None:
            raise ValueError(f"block H^({k}) has no Hermitian partner H^({-k})")
        diff = partner.mat - blk.mat.conj().T
        if diff.nnz and abs(diff).max() > 1e-12:
            raise ValueError(f"H^({-k}) is not the adjoint of H^({k})")
    e0, ep, _ = euclidean_ops(spec.M, spec.boundary)
    f = euclidean(spec.M)
    mat = sp.kron(sp.identity(basis0.dim, format="csr"), spec.omega * e0.mat, format="csr")
    for k in sorted(blocks):
        mat = mat + sp.kron(blocks[k].mat, _shift_power(ep.mat, k), format="csr")
    return Operator(basis0 + Basis((f,)), mat)


def build_floquet_harmonic(H_static: Operator, H_drive: Operator, spec: FloquetSpec) -> Operator:
    """H_F for H(t) = H_static + cos(omega t) H_drive."""
    if H_static.basis != H_drive.basis:
        raise ValueError("static and drive parts live on different bases")
    e0, ep, em = euclidean_ops(spec.M, spec.boundary)
    f = euclidean(spec.M)
    return (
        tensor(H_static, f)
        + tensor(H_drive, (ep + em) * 0.5)
        + tensor(*H_static.basis.factors, e0 * spec.omega)
    )


def fold(eps, omega: float):
    """Map quasi-energies into the zone [-omega/2, omega/2)."""
    eps = np.asarray(eps, dtype=float)
    out = np.mod(eps + omega / 2, omega) - omega / 2
    out = np.where(out >= omega / 2, out - omega, out)
    return out if out.ndim else float(out)


@dataclass
class QuasiSpectrum:
    raw: np.ndarray
    folded: np.ndarray
    vectors: np.ndarray | None
    basis: Basis
    spec: FloquetSpec
    meta: dict = field(default_factory=dict)

    def interior(self, fraction: float = 0.6) -> slice:
        n = self.raw.size
        lo = int(round((1 - fraction) / 2 * n))
        return slice(lo, n - lo)

    def edge_weight(self, edge_fraction: float = 0.1) -> np.ndarray:
        """Weight of each eigenvector on the outermost Euclidean sites."""
        if self.vectors is None:
            raise ValueError("eigenvectors were not computed")
        n_t = self.spec.sites
        w = np.abs(self.vectors.reshape(-1, n_t, self.vectors.shape[1])) ** 2
        w = w.sum(axis=0)
        n_edge = max(1, int(np.ceil(edge_fraction * n_t / 2)))
        return w[:n_edge].sum(axis=0) + w[-n_edge:].sum(axis=0)

    def clean(self, edge_fraction: float = 0.1, max_weight: float = 0.01) -> np.ndarray:
        return self.edge_weight(edge_fraction) < max_weight


def quasienergies(
    HF: Operator,
    spec: FloquetSpec,
    vectors: bool = True,
    k: int | None = None,
    sigma: float = 0.0,
) -> QuasiSpectrum:
    """Eigen-decompose H_F; dense below ``DENSE_EIG_THRESHOLD`` unless ``k`` asks for a window."""
    if not HF.is_hermitian():
        raise ValueError("Floquet Hamiltonian is not Hermitian")
    dense = k is None and HF.dim <= DENSE_EIG_THRESHOLD
    if dense:
        mat = HF.dense()
        if np.abs(mat.imag).max(initial=0.0) == 0:
            mat = mat.real
        if vectors:
            w, v = sla.eigh(mat)
        else:
            w, v = sla.eigvalsh(mat), None
        solver = "dense"
    else:
        kk = k or min(HF.dim - 2, 200)
        try:
            w, v = eigsh(HF.mat, k=kk, sigma=sigma, which="LM", return_eigenvectors=True)
        except Exception as exc:  # ARPACK reports several exception types
            raise RuntimeError(f"iterative eigensolver failed: {exc}") from exc
        order = np.argsort(w)
        w, v = w[order], v[:, order]
        if not vectors:
            v = None
        solver = "shift-invert"
    return QuasiSpectrum(np.asarray(w), fold(w, spec.omega), v, HF.basis, spec, {"solver": solver})


def floquet_state_from_vector(vec, eps: float, basis: Basis, spec: FloquetSpec, t: float) -> StateVector:
    """Collapse an extended-space eigenvector to the physical state at time t."""
    phys = Basis(basis.factors[:-1])
    comps = np.asarray(vec).reshape(phys.dim, spec.sites)
    m = np.arange(-spec.M, spec.M + 1)
    amp = np.exp(-1j * eps * t) * (comps @ np.exp(1j * m * spec.omega * t))
    return StateVector(phys, amp, normalize=False)


def floquet_state(qs: QuasiSpectrum, n: int, t: float, edge_fraction: float = 0.1) -> StateVector:
    """|psi_n(t)> = e^{-i eps_n t} sum_m e^{i m omega t} |phi_n, m>."""
    if qs.vectors is None:
        raise ValueError("eigenvectors were not computed")
    if not 0 <= n < qs.raw.size:
        raise IndexError(n)
    if qs.edge_weight(edge_fraction)[n] > 0.01:
        warnings.warn(f"Floquet state {n} carries >1% weight on the truncation edge", stacklevel=2)
    return floquet_state_from_vector(qs.vectors[:, n], qs.raw[n], qs.basis, qs.spec, t)


def monodromy(protocol: DriveProtocol, T: float | None = None, tol: float = 1e-10) -> Operator:
    """One-period propagator U(T, 0), built column by column."""
    T = T if T is not None else protocol.period
    if T is None:
        raise ValueError("period required")
    eye = np.eye(protocol.dim, dtype=complex)
    traj = evolve(protocol, eye, [0.0, T], tol=tol)
    U = traj.states[-1]
    defect = np.abs(U.conj().T @ U - eye).max()
    if defect > 1e-8:
        raise RuntimeError(f"monodromy unitarity defect {defect:.3g}")
    return Operator(protocol.basis, sp.csr_matrix(U))


def monodromy_quasienergies(U: Operator, T: float) -> np.ndarray:
    lam = np.linalg.eigvals(U.dense())
    return np.sort(fold(-np.angle(lam) / T, 2 * np.pi / T))


def circular_distance(a, b, omega: float):
    d = np.abs(np.subtract.outer(np.atleast_1d(a), np.atleast_1d(b))) % omega
    return np.minimum(d, omega - d)


def compare_monodromy(U: Operator, qs: QuasiSpectrum, edge_fraction: float = 0.1) -> float:
    """Largest mismatch between monodromy eigenphases and folded boundary-clean quasi-energies."""
    omega = qs.spec.omega
    eps_u = monodromy_quasienergies(U, qs.spec.period)
    eps_f = qs.folded[qs.clean(edge_fraction)]
    if eps_f.size == 0:
        raise ValueError("no boundary-clean Floquet states")
    d = circular_distance(eps_f, eps_u, omega)
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def momentum_grid(M: int) -> np.ndarray:
    n = 2 * M + 1
    return 2 * np.pi * np.fft.fftshift(np.fft.fftfreq(n))


def momentum_distribution(psi_full, spec: FloquetSpec, basis: Basis | None = None):
    """P(k) = <k|rho_T|k> with |k> = sum_m e^{ikm}|m>/sqrt(2M+1), k ascending in [-pi, pi).

    ``psi_full`` is a StateVector on H (x) T, a raw extended vector, or a density matrix.
    """
    n_t = spec.sites
    if isinstance(psi_full, StateVector):
        if psi_full.basis.factors[-1] != euclidean(spec.M):
            raise ValueError("state does not end in the declared Euclidean factor")
        psi_full = psi_full.amplitudes
    arr = np.asarray(psi_full)
    if arr.ndim == 2:
        if arr.shape[0] != arr.shape[1] or arr.shape[0] % n_t:
            raise ValueError("density matrix does not match the Floquet lattice size")
        d_h = arr.shape[0] // n_t
        rho = arr.reshape(d_h, n_t, d_h, n_t)
        rho_t = np.einsum("aman->mn", rho)
        f = np.fft.fft(np.eye(n_t), axis=0) / np.sqrt(n_t)
        p = np.real(np.einsum("km,mn,kn->k", f, rho_t, f.conj()))
    else:
        if arr.size % n_t:
            raise ValueError("state dimension is not a multiple of the Floquet lattice size")
        comps = arr.reshape(-1, n_t)
        p = np.sum(np.abs(np.fft.fft(comps, axis=1)) ** 2, axis=0) / n_t
    return momentum_grid(spec.M), np.fft.fftshift(p)


def ridge_momentum(k: np.ndarray, P: np.ndarray) -> float:
    return float(k[int(np.argmax(P))])


def spectrum_to_json(qs: QuasiSpectrum) -> str:
    return json.dumps(
        {
            "omega": qs.spec.omega,
            "M": qs.spec.M,
            "raw": [float(x) for x in qs.raw],
            "folded": [float(x) for x in qs.folded],
        }
    )


def eigenvector_to_text(vec) -> str:
    return "\n".join(f"{float(z.real)!r} {float(z.imag)!r}" for z in np.asarray(vec, dtype=complex)) + "\n"


def eigenvector_from_text(text: str) -> np.ndarray:
    rows = [line.split() for line in text.strip().splitlines()]
    return np.array([float(a) + 1j * float(b) for a, b in rows])
