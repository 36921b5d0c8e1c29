"""Level-spacing statistics with polynomial unfolding.

The staircase N(E_n) = n is fit by a least-squares polynomial R on
min-max-normalised energies; unfolded levels are R(E_n) and spacings are
taken inside a central window. Reference laws are the Poisson density and
the Wigner surmise a s^beta exp(-b s^2) with a, b fixed by unit norm and
unit mean.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.special import gamma

from .hilbert import Operator

S0 = 0.25
BETAS = (1, 2, 4)


class UnfoldingError(ValueError):
    pass


@dataclass
class SpectralEnsemble:
    eigenvalues: np.ndarray
    window: tuple[int, int]
    spacings: np.ndarray
    degree: int
    coeffs: np.ndarray = field(repr=False)
    meta: dict = field(default_factory=dict)

    def histogram(self, bins: int = 40, rng: tuple[float, float] = (0.0, 4.0)):
        return histogram(self.spacings, bins, rng)


def _window(n: int, fraction: float) -> tuple[int, int]:
    if not 0 < fraction <= 1:
        raise ValueError("window fraction must lie in (0, 1]")
    cut = int(round(n * (1 - fraction) / 2))
    return cut, n - cut


def unfold(eigenvalues, poly_degree: int = 7, window_fraction: float = 0.7, min_levels: int = 50) -> SpectralEnsemble:
    """Unfold a sorted spectrum; degenerate levels give zero spacings that are kept."""
    E = np.asarray(eigenvalues, dtype=float)
    if E.ndim != 1:
        raise ValueError("eigenvalues must be a 1D array")
    if np.any(np.diff(E) < 0):
        raise ValueError("eigenvalues must be sorted ascending")
    lo, hi = _window(E.size, window_fraction)
    if hi - lo < min_levels:
        raise ValueError(f"only {hi - lo} levels in the window, need {min_levels}")
    span = E[-1] - E[0]
    if span <= 0:
        raise ValueError("spectrum has zero width")
    x = (E - E[0]) / span
    # levels sharing an energy all sit at the top of their step
    staircase = np.searchsorted(E, E, side="right").astype(float) - 0.5
    poly = np.polynomial.Polynomial.fit(x, staircase, poly_degree, domain=[0, 1])
    deriv = poly.deriv()(x[lo:hi])
    if np.any(deriv <= 0):
        raise UnfoldingError(
            f"fitted staircase of degree {poly_degree} is not monotone in the window; lower the degree"
        )
    e = poly(x[lo:hi])
    return SpectralEnsemble(E, (lo, hi), np.diff(e), poly_degree, poly.coef, {"window_fraction": window_fraction})


def wigner_constants(beta: int) -> tuple[float, float]:
    """(a, b) with int a s^beta e^{-b s^2} ds = 1 and unit mean."""
    if beta not in BETAS:
        raise ValueError(f"unsupported beta {beta}; use one of {BETAS}")
    b = (gamma((beta + 2) / 2) / gamma((beta + 1) / 2)) ** 2
    a = 2 * b ** ((beta + 1) / 2) / gamma((beta + 1) / 2)
    return float(a), float(b)


def reference_law(kind: str, s, beta: int = 1):
    s = np.asarray(s, dtype=float)
    if kind == "poisson":
        return np.exp(-s)
    if kind == "wigner":
        a, b = wigner_constants(beta)
        return a * s**beta * np.exp(-b * s**2)
    raise ValueError(f"unknown reference law {kind!r}")


def reference_cdf(kind: str, s, beta: int = 1):
    s = np.asarray(s, dtype=float)
    if kind == "poisson":
        return 1 - np.exp(-s)
    if kind == "wigner" and beta == 1:
        return 1 - np.exp(-np.pi * s**2 / 4)
    if kind == "wigner":
        from scipy.special import gammainc

        _, b = wigner_constants(beta)
        return gammainc((beta + 1) / 2, b * s**2)
    raise ValueError(f"unknown reference law {kind!r}")


def sample_spacings(kind: str, n: int, rng: np.random.Generator) -> np.ndarray:
    """Inverse-CDF samples of the Poisson or Wigner (beta = 1) spacing law."""
    u = rng.random(n)
    if kind == "poisson":
        return -np.log1p(-u)
    if kind == "wigner":
        return np.sqrt(-4 * np.log1p(-u) / np.pi)
    raise ValueError(f"unknown reference law {kind!r}")


def synthetic_spectrum(kind: str, n: int, seed: int = 0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.concatenate([[0.0], np.cumsum(sample_spacings(kind, n - 1, rng))])


def dkw_epsilon(n: int, alpha: float = 0.05) -> float:
    return math.sqrt(math.log(2 / alpha) / (2 * n))


def ecdf_distance(s, kind: str, beta: int = 1) -> float:
    """Kolmogorov sup distance between the empirical CDF of ``s`` and a reference law."""
    x = np.sort(np.asarray(s, dtype=float))
    n = x.size
    F = reference_cdf(kind, x, beta)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def repulsion_metric(spacings, s0: float = S0, min_spacings: int = 100) -> dict:
    s = np.asarray(spacings, dtype=float)
    if s.size < min_spacings:
        raise ValueError(f"{s.size} spacings, need at least {min_spacings}")
    frac = float(np.mean(s < s0))
    p = 1 - math.exp(-s0)
    w = 1 - math.exp(-math.pi * s0**2 / 4)
    return {
        "s0": s0,
        "frac_below": frac,
        "poisson_expectation": p,
        "wigner_expectation": w,
        "verdict": frac < 0.5 * (p + w),
        "below_half_poisson": frac < 0.5 * p,
        "n_spacings": int(s.size),
        "n_zero": int(np.count_nonzero(s == 0)),
    }


def histogram(s, bins: int = 40, rng: tuple[float, float] = (0.0, 4.0)):
    s = np.asarray(s, dtype=float)
    inside = (s >= rng[0]) & (s <= rng[1])
    dens, edges = np.histogram(s[inside], bins=bins, range=rng, density=True)
    return edges, dens, int(s.size - inside.sum())


def histogram_csv(edges, dens) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["left", "right", "density"])
    for a, b, d in zip(edges[:-1], edges[1:], dens):
        w.writerow([repr(float(a)), repr(float(b)), repr(float(d))])
    return buf.getvalue()


def report(ens: SpectralEnsemble, s0: float = S0) -> dict:
    m = repulsion_metric(ens.spacings, s0)
    return {
        "n_levels": int(ens.eigenvalues.size),
        "window": list(ens.window),
        "degree": ens.degree,
        "mean_spacing": float(np.mean(ens.spacings)),
        "frac_below": m["frac_below"],
        "references": {"poisson": m["poisson_expectation"], "wigner_beta1": m["wigner_expectation"]},
        "verdict": bool(m["verdict"]),
        "below_half_poisson": bool(m["below_half_poisson"]),
        "n_zero_spacings": m["n_zero"],
    }


def report_json(rep: dict) -> str:
    return json.dumps(rep, indent=2, sort_keys=True)


# ---------------------------------------------------------- symmetry sectors


def involution_sectors(P: Operator, tol: float = 1e-12):
    """Sparse isometries (V_plus, V_minus) onto the +-1 eigenspaces of a monomial involution.

    P must have one nonzero per column: P e_j = c_j e_pi(j).
    """
    m = P.mat.tocsc()
    n = m.shape[0]
    if np.any(np.diff(m.indptr) != 1):
        raise ValueError("involution is not a signed permutation")
    perm = m.indices
    c = m.data
    cols = {1: [], -1: []}
    for j in range(n):
        k = perm[j]
        if k == j:
            lam = int(np.round(c[j].real))
            if lam not in (1, -1) or abs(c[j] - lam) > tol:
                raise ValueError("diagonal entry of the involution is not +-1")
            cols[lam].append(([j], [1.0]))
        elif j < k:
            if abs(c[j] * c[k] - 1) > tol:
                raise ValueError("operator does not square to the identity")
            r = 1 / math.sqrt(2)
            for lam in (1, -1):
                cols[lam].append(([j, k], [r, lam * c[j] * r]))
    out = []
    for lam in (1, -1):
        rows, cs, vals = [], [], []
        for col, (idx, v) in enumerate(cols[lam]):
            rows += idx
            cs += [col] * len(idx)
            vals += v
        out.append(sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cs)), shape=(n, len(cols[lam]))))
    return out[0], out[1]


def sector_spectra(H: Operator, P: Operator) -> dict:
    """Eigenvalues of H inside each eigenspace of P (P must commute with H)."""
    res = {}
    for name, V in zip(("plus", "minus"), involution_sectors(P)):
        block = (V.conj().T @ H.mat @ V).toarray()
        if not np.abs(block.imag).any():
            block = block.real
        res[name] = np.linalg.eigvalsh(block)
    return res


def dense_spectrum(H: Operator) -> np.ndarray:
    d = H.dense()
    if not np.abs(d.imag).any():
        d = d.real
    return np.linalg.eigvalsh(d)


def joint_sector_spectra(H: Operator, P1: Operator, P2: Operator) -> dict:
    """Eigenvalues of H in the four joint eigenspaces of two commuting involutions.

    The LMG parities commute only for integer S; for half-integer S they
    anticommute and a ValueError is raised.

    P1 is split exactly via its signed-permutation structure; inside each
    P1 sector the restriction of P2 is diagonalised densely.
    """
    if np.abs((P1.mat @ P2.mat - P2.mat @ P1.mat)).max() > 1e-12:
        raise ValueError("the two involutions do not commute")
    res = {}
    for n1, V in zip(("plus", "minus"), involution_sectors(P1)):
        h = (V.conj().T @ H.mat @ V).toarray()
        w, u = np.linalg.eigh((V.conj().T @ P2.mat @ V).toarray())
        if np.abs(np.abs(w) - 1).max() > 1e-9:
            raise ValueError("second operator is not an involution on the sector")
        for n2, sign in (("plus", 1), ("minus", -1)):
            U = u[:, np.sign(w) == sign]
            res[f"{n1}_{n2}"] = np.linalg.eigvalsh(U.conj().T @ h @ U)
    return res
