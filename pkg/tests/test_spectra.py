import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from floquet_fsl.floquet import FloquetSpec
from floquet_fsl.lmg import LMGParams, lmg_floquet, parity_operators
from floquet_fsl.spectra import (
    UnfoldingError,
    dense_spectrum,
    dkw_epsilon,
    ecdf_distance,
    histogram,
    histogram_csv,
    involution_sectors,
    joint_sector_spectra,
    reference_cdf,
    reference_law,
    repulsion_metric,
    report,
    report_json,
    sector_spectra,
    synthetic_spectrum,
    unfold,
    wigner_constants,
)


@pytest.mark.parametrize("beta", [1, 2, 4])
def test_wigner_constants_by_quadrature(beta):
    norm = quad(lambda s: reference_law("wigner", s, beta), 0, np.inf)[0]
    mean = quad(lambda s: s * reference_law("wigner", s, beta), 0, np.inf)[0]
    assert abs(norm - 1) < 1e-10 and abs(mean - 1) < 1e-10
    cdf = quad(lambda s: reference_law("wigner", s, beta), 0, 0.8)[0]
    assert abs(cdf - reference_cdf("wigner", 0.8, beta)) < 1e-10


def test_wigner_beta1_closed_form():
    a, b = wigner_constants(1)
    assert math.isclose(a, math.pi / 2) and math.isclose(b, math.pi / 4)
    with pytest.raises(ValueError):
        wigner_constants(3)
    with pytest.raises(ValueError):
        reference_law("goe", 1.0)


def test_uniform_ladder_unfolds_to_unit_spacing():
    ens = unfold(np.arange(400) * 0.37 + 5.0)
    assert np.allclose(ens.spacings, 1.0, atol=1e-8)
    assert ens.window == (60, 340)
    assert ens.spacings.size == 279


@pytest.mark.invariant
@given(st.floats(1e-3, 1e3), st.floats(-1e3, 1e3), st.integers(0, 2**32 - 1))
def test_unfolding_is_affine_invariant(a, b, seed):
    E = np.sort(np.random.default_rng(seed).normal(size=300))
    s1 = unfold(E).spacings
    s2 = unfold(a * E + b).spacings
    assert np.allclose(s1, s2, atol=1e-7)


def test_degenerate_levels_give_zero_spacings():
    E = np.sort(np.concatenate([np.arange(200.0), np.arange(50.0, 150.0)]))
    ens = unfold(E, poly_degree=3)
    assert np.count_nonzero(ens.spacings == 0) > 50
    rep = report(ens)
    assert rep["n_zero_spacings"] == np.count_nonzero(ens.spacings == 0)


def test_unfolding_errors():
    with pytest.raises(ValueError):
        unfold(np.arange(20.0))
    with pytest.raises(ValueError):
        unfold(np.arange(200.0)[::-1])
    with pytest.raises(ValueError):
        unfold(np.zeros(200))
    with pytest.raises(ValueError):
        unfold(np.arange(200.0), window_fraction=0)
    # two dense clusters joined by a sparse bridge: the fit overshoots and turns back
    E = np.concatenate([np.linspace(0, 1, 200), np.linspace(1, 100, 5), np.linspace(100, 101, 200)])
    with pytest.raises(UnfoldingError):
        unfold(E)


def test_repulsion_metric_references():
    m = repulsion_metric(np.ones(200))
    assert m["frac_below"] == 0 and m["verdict"] and m["below_half_poisson"]
    assert math.isclose(m["poisson_expectation"], 1 - math.exp(-0.25))
    assert math.isclose(m["wigner_expectation"], 1 - math.exp(-math.pi / 64))
    with pytest.raises(ValueError):
        repulsion_metric(np.ones(10))


@pytest.mark.parametrize("kind,expect", [("poisson", False), ("wigner", True)])
def test_synthetic_ensembles(kind, expect):
    ens = unfold(synthetic_spectrum(kind, 4000, seed=3))
    m = repulsion_metric(ens.spacings)
    assert m["verdict"] is expect
    assert ecdf_distance(ens.spacings, kind) < 2 * dkw_epsilon(ens.spacings.size)


def test_dkw_band():
    assert math.isclose(dkw_epsilon(1000), math.sqrt(math.log(40) / 2000))
    rng = np.random.default_rng(0)
    s = -np.log1p(-rng.random(5000))
    assert ecdf_distance(s, "poisson") < dkw_epsilon(5000)
    assert ecdf_distance(s, "wigner") > dkw_epsilon(5000)


def test_histogram_normalised():
    s = synthetic_spectrum("wigner", 3000, seed=1)
    edges, dens, out = histogram(np.diff(s))
    inside = np.count_nonzero(np.diff(s) <= 4)
    assert math.isclose(np.sum(dens * np.diff(edges)), 1.0)
    assert out == s.size - 1 - inside
    lines = histogram_csv(edges, dens).splitlines()
    assert lines[0] == "left,right,density" and len(lines) == 41


def test_report_json_roundtrip():
    rep = report(unfold(synthetic_spectrum("poisson", 500)))
    assert json.loads(report_json(rep)) == rep


def test_involution_sectors_partition_spectrum():
    p = LMGParams(Delta=2.0, omega=1.3, S=3)
    M = 5
    HF = lmg_floquet(p, FloquetSpec(p.omega, M))
    full = dense_spectrum(HF)
    for P in parity_operators(p.S, M):
        Vp, Vm = involution_sectors(P)
        assert Vp.shape[1] + Vm.shape[1] == HF.dim
        V = np.hstack([Vp.toarray(), Vm.toarray()])
        assert np.allclose(V.conj().T @ V, np.eye(HF.dim))
        assert np.allclose(P.dense() @ Vp.toarray(), Vp.toarray())
        assert np.allclose(P.dense() @ Vm.toarray(), -Vm.toarray())
        sec = sector_spectra(HF, P)
        assert np.allclose(np.sort(np.concatenate([sec["plus"], sec["minus"]])), full)


def test_involution_validation():
    from floquet_fsl.hilbert import Operator, spin

    with pytest.raises(ValueError):
        involution_sectors(Operator(spin(1), np.ones((3, 3))))
    with pytest.raises(ValueError):
        involution_sectors(Operator(spin(1), np.diag([1.0, 2.0, 1.0])))


def test_half_integer_spin_parities_anticommute():
    # pi rotations about x and y anticommute on a spinor: no joint sectors, and
    # P2 maps one P1 sector onto the other, so their spectra coincide
    p = LMGParams(Delta=2.0, omega=1.3, S=Fraction(5, 2))
    HF = lmg_floquet(p, FloquetSpec(p.omega, 4))
    P1, P2 = parity_operators(p.S, 4)
    with pytest.raises(ValueError):
        joint_sector_spectra(HF, P1, P2)
    sec = sector_spectra(HF, P1)
    assert np.allclose(sec["plus"], sec["minus"])


@pytest.mark.parametrize("S", [1, 2, 3])
def test_joint_sectors_partition_spectrum(S):
    p = LMGParams(Delta=2.0, omega=1.3, S=S)
    M = 4
    HF = lmg_floquet(p, FloquetSpec(p.omega, M))
    P1, P2 = parity_operators(p.S, M)
    sec = joint_sector_spectra(HF, P1, P2)
    assert len(sec) == 4 and all(v.size for v in sec.values())
    assert np.allclose(np.sort(np.concatenate(list(sec.values()))), dense_spectrum(HF))


def test_joint_sectors_need_commuting_pair():
    from floquet_fsl.hilbert import qubit_ops

    sx, _, sz, _, _ = qubit_ops()
    with pytest.raises(ValueError):
        joint_sector_spectra(sz, sx, sz)
