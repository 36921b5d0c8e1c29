import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, strategies as st

from floquet_fsl.floquet import FloquetSpec
from floquet_fsl.hilbert import spin, spin_ops
from floquet_fsl.lmg import (
    LMGParams,
    bloch_vector,
    detect_jumps,
    dicke,
    floquet_initial_state,
    husimi,
    husimi_zeros,
    jump_lattice_distance,
    lmg_floquet,
    lmg_hamiltonian,
    lmg_parts,
    lmg_static,
    oscillation_count,
    parity_operators,
    partition_ratio,
    period_envelope,
    period_mean,
    pr_calibration,
    root_to_sphere,
    semiclassical_evolve,
    semiclassical_plateaus,
    sphere_to_root,
    spin_coherent_state,
    state_from_zeros,
)
from floquet_fsl.propagate import evolve, evolve_static, expectation

spins = st.integers(1, 12).map(lambda n: Fraction(n, 2))
angles = st.tuples(st.floats(0.0, math.pi), st.floats(0.0, 2 * math.pi))


def test_params():
    p = LMGParams(S=3.5)
    assert p.S == Fraction(7, 2) and p.two_s == 7
    with pytest.raises(ValueError):
        LMGParams(lam=0)
    with pytest.raises(ValueError):
        LMGParams(omega=-1)
    with pytest.raises(ValueError):
        LMGParams(S=0.3)


def test_hamiltonian_pieces():
    p = LMGParams(Delta=1.3, omega=0.7, S=2)
    sx, _, sz, _, _ = spin_ops(2)
    H = lmg_hamiltonian(p)
    for t in (0.0, 0.4, 2.0):
        expect = sz.dense() * 1.3 * math.cos(0.7 * t) - (sx @ sx).dense() / 2
        assert np.allclose(H.operator(t).dense(), expect)
    assert np.allclose(lmg_static(2, 1.3).dense(), sz.dense() * 1.3 - (sx @ sx).dense() / 2)
    HF = lmg_floquet(p, FloquetSpec(p.omega, 3))
    assert HF.dim == 5 * 7 and HF.hermiticity_defect() < 1e-15


@given(spins, angles)
def test_coherent_state_matches_rotation(S, ang):
    theta, phi = ang
    sx, sy, sz, _, _ = spin_ops(S)
    G = sx.dense() * math.cos(phi) - sy.dense() * math.sin(phi)
    top = dicke(S, S).amplitudes
    ref = sla.expm(1j * theta * G) @ top
    psi = spin_coherent_state(theta, phi, S)
    assert np.abs(psi.amplitudes - ref).max() < 1e-10
    n = np.array([op.expect(psi).real for op in (sx, sy, sz)]) / float(S)
    assert np.allclose(n, bloch_vector(theta, phi), atol=1e-10)


def test_coherent_state_rejects_theta():
    with pytest.raises(ValueError):
        spin_coherent_state(4.0, 0.0, 1)


@given(spins, angles)
def test_husimi_normalised_and_positive(S, ang):
    psi = spin_coherent_state(*ang, S)
    for measure in ("plain", "spherical"):
        f = husimi(psi, measure=measure)
        assert abs(f.integral() - 1) < 1e-12
        assert f.values.min() >= 0
        assert f.raw.max() <= 1 + 1e-12


def test_husimi_of_density_matrix_agrees():
    psi = spin_coherent_state(1.0, 2.0, 3)
    rho = np.outer(psi.amplitudes, psi.amplitudes.conj())
    a = husimi(psi)
    b = husimi(rho)
    assert np.allclose(a.values, b.values)
    with pytest.raises(ValueError):
        husimi(psi, grid=(4, 4))
    with pytest.raises(ValueError):
        husimi(psi, measure="flat")


def test_husimi_peak_at_bloch_direction():
    f = husimi(spin_coherent_state(math.pi / 2, 0.0, 5), grid=(80, 80), measure="spherical")
    th, ph = f.argmax()
    assert abs(th - math.pi / 2) < 0.05 and min(ph, 2 * math.pi - ph) < 0.1


@pytest.mark.invariant
@given(spins, angles)
def test_spherical_pr_is_one_for_every_coherent_state(S, ang):
    f = husimi(spin_coherent_state(*ang, S), measure="spherical")
    assert abs(partition_ratio(f) - 1) < 1e-10


def test_plain_pr_calibrated_on_south_pole():
    for S in (1, 5, 10):
        assert abs(partition_ratio(husimi(dicke(S, -S))) - 1) < 1e-10
    S = 4
    assert math.isclose(pr_calibration(8, "spherical"), 81 / (4 * math.pi * 17))
    # a delocalised state spreads Q, lowering PR
    v = np.ones(2 * S + 1) / math.sqrt(2 * S + 1)
    assert partition_ratio(husimi(v, measure="spherical")) < 1


def test_zeros_of_dicke_states():
    for S in (1, 3, 10):
        z = husimi_zeros(dicke(S, -S))
        assert z.Z == 2 * S and z.at_infinity == 0
        assert len(z.points) == 1 and z.points[0][2] == 2 * S and z.points[0][0] < 1e-12
        top = husimi_zeros(dicke(S, S))
        assert top.Z == 0 and top.at_infinity == 2 * S
        assert top.points[0][0] == math.pi


def test_zeros_of_coherent_state_at_antipode():
    theta, phi = 1.1, 0.4
    # a 6-fold root splits by about eps^(1/6) under rounding
    z = husimi_zeros(spin_coherent_state(theta, phi, 3), cluster_tol=0.05)
    assert len(z.points) == 1
    t, p, k = z.points[0]
    assert k == 6
    n = bloch_vector(theta, phi)
    # stars sit where Q vanishes: the antipode of the coherent peak
    assert np.allclose(bloch_vector(t, p), -n, atol=1e-2)


def test_equal_superposition_ring():
    S = 3
    a = np.zeros(7, dtype=complex)
    a[0] = a[-1] = 1
    z = husimi_zeros(a)
    th, _ = root_to_sphere(z.roots)
    assert z.Z == 6 and np.allclose(th, math.pi / 2)


def test_root_sphere_roundtrip():
    th, ph = root_to_sphere(sphere_to_root(0.7, 5.1))
    assert math.isclose(th, 0.7) and math.isclose(ph, 5.1)


@pytest.mark.invariant
@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_state_rebuilt_from_zeros(two_s, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=two_s + 1) + 1j * rng.normal(size=two_s + 1)
    v /= np.linalg.norm(v)
    z = husimi_zeros(v)
    assert z.total == two_s
    w = state_from_zeros(z).amplitudes
    assert abs(abs(np.vdot(w, v)) - 1) < 1e-8


def test_zeros_reject_null_state():
    with pytest.raises(ValueError):
        husimi_zeros(np.zeros(3))


@pytest.mark.parametrize("S", [Fraction(1), Fraction(3, 2), Fraction(2)])
def test_parity_operators(S):
    p = LMGParams(Delta=1.7, omega=0.9, S=S)
    M = 4
    HF = lmg_floquet(p, FloquetSpec(p.omega, M)).dense()
    for P in parity_operators(S, M):
        Pd = P.dense()
        assert np.allclose(Pd @ Pd, np.eye(Pd.shape[0]))
        assert np.allclose(Pd, Pd.conj().T)
        assert np.abs(Pd @ HF - HF @ Pd).max() < 1e-12
        ev = np.linalg.eigvalsh(Pd)
        assert np.allclose(np.abs(ev), 1)
        assert (ev < 0).any() and (ev > 0).any()
    with pytest.raises(ValueError):
        parity_operators(S, 4, "periodic")


@pytest.mark.invariant
@given(st.floats(0.1, 5), st.floats(0.2, 3), st.integers(1, 4))
def test_parity_conserved_along_floquet_evolution(delta, w, two_s):
    p = LMGParams(Delta=delta, omega=w, S=Fraction(two_s, 2))
    M = 6
    HF = lmg_floquet(p, FloquetSpec(w, M))
    rng = np.random.default_rng(two_s)
    v = rng.normal(size=HF.dim) + 1j * rng.normal(size=HF.dim)
    traj = evolve_static(HF, v / np.linalg.norm(v), np.linspace(0, 5, 6))
    for P in parity_operators(p.S, M):
        e = expectation(traj, P)
        assert np.ptp(e) < 1e-8


@pytest.mark.invariant
@given(st.floats(0.1, 20), st.floats(0.2, 4), st.integers(1, 8))
def test_total_spin_conserved(delta, w, two_s):
    p = LMGParams(Delta=delta, omega=w, S=Fraction(two_s, 2))
    sx, sy, sz, _, _ = spin_ops(p.S)
    S2 = sx @ sx + sy @ sy + sz @ sz
    traj = evolve(lmg_hamiltonian(p), dicke(p.S, -p.S), [0.0, 1.0, 3.0], tol=1e-8)
    s = float(p.S)
    assert np.allclose(expectation(traj, S2), s * (s + 1), atol=1e-8)
    assert traj.norm_drift < 1e-7


def test_detect_jumps_on_synthetic_steps():
    w = 0.05
    q = math.pi / (2 * w)
    t = np.linspace(0, 8 * q, 20001)
    level = np.where(t < q, -5.0, np.where(t < 3 * q, 2.0, np.where(t < 5 * q, -3.0, 1.0)))
    y = level + 0.4 * np.sin(37 * t)
    ev = detect_jumps(t, y, w)
    assert len(ev) == 3
    for (tj, before, after), t0 in zip(ev, (q, 3 * q, 5 * q)):
        assert abs(tj - t0) < 0.05 * q
    assert ev[0][1] < -4 and ev[0][2] > 1
    assert detect_jumps(t, 0.4 * np.sin(37 * t), w) == []
    with pytest.raises(ValueError):
        detect_jumps(t[:10], y[:10], w)


def test_jump_lattice_distance():
    w = 0.05
    q = math.pi / (2 * w)
    assert jump_lattice_distance(q, w) == 0
    assert math.isclose(jump_lattice_distance(3 * q + 1.0, w), 1.0)
    assert math.isclose(jump_lattice_distance(2 * q, w), q)
    assert math.isclose(jump_lattice_distance(-q + 0.5, w), 0.5)


@pytest.mark.invariant
@given(angles, st.floats(0, 20), st.floats(0.05, 4), st.floats(0.1, 3))
def test_semiclassical_norm_preserved(ang, delta, w, lam):
    p = LMGParams(Delta=delta, omega=w, lam=lam)
    n = semiclassical_evolve(*ang, p, np.linspace(0, 5, 11), h_max=0.01)
    assert n.shape == (11, 3)
    assert np.allclose(np.linalg.norm(n, axis=1), 1, atol=1e-12)
    assert np.allclose(n[0], bloch_vector(*ang))


def test_semiclassical_south_pole_fixed():
    p = LMGParams(Delta=3.0, omega=0.5)
    n = semiclassical_evolve(math.pi, 0.0, p, np.linspace(0, 20, 5))
    assert np.allclose(n, [0, 0, -1], atol=1e-12)
    pl = semiclassical_plateaus(math.pi, 0.0, p, count=10, steps_per_period=400)
    assert np.allclose(pl, -1)


def test_semiclassical_matches_small_angle_linearisation():
    # with lambda -> 0 the motion is a pure precession about z: n_z is constant
    p = LMGParams(Delta=2.0, omega=0.7, lam=1e-9)
    n = semiclassical_evolve(1.0, 0.3, p, np.linspace(0, 10, 21))
    assert np.ptp(n[:, 2]) < 1e-7
    # precession angle is the integral of Delta cos(omega t)
    ang = np.unwrap(np.arctan2(n[:, 0], n[:, 1]))
    t = np.linspace(0, 10, 21)
    drive = 2.0 * np.sin(0.7 * t) / 0.7
    assert np.allclose(np.abs(ang - ang[0]), np.abs(drive), atol=1e-6)


def test_quantum_sz_tracks_semiclassics_at_large_spin_short_time():
    p = LMGParams(Delta=2.0, omega=1.0, S=40)
    t = np.linspace(0, 1.5, 7)
    theta0, phi0 = 2.0, 0.5
    traj = evolve(lmg_hamiltonian(p), spin_coherent_state(theta0, phi0, p.S), t, tol=1e-9)
    q = expectation(traj, lmg_parts(p.S)[0]) / 40
    c = semiclassical_evolve(theta0, phi0, p, t)[:, 2]
    assert np.abs(q - c).max() < 0.05


def test_floquet_initial_state():
    p = LMGParams(S=2)
    psi = floquet_initial_state(p, 3)
    assert psi.basis.dims == (5, 7)
    a = psi.amplitudes.reshape(5, 7)
    assert np.allclose(np.abs(a[0]) ** 2, 1 / 7) and np.allclose(a[1:], 0)


def test_oscillation_counting():
    t = np.linspace(0, 100, 20001)
    assert oscillation_count(np.cos(2 * np.pi * 3 * t / 100)) == 3
    # starting mid-swing loses the first half cycle
    assert oscillation_count(np.sin(2 * np.pi * 3 * t / 100)) == 2.5
    assert oscillation_count(np.abs(np.cos(2 * np.pi * 3 * t / 100))) == 6
    # fast ripple is removed by the period average
    y = np.sin(2 * np.pi * t / 50) + 0.8 * np.sin(2 * np.pi * t / 2)
    tt, m = period_mean(t, y, 2.0)
    assert oscillation_count(m) == 1.5 or oscillation_count(m) == 2
    _, env = period_envelope(t, np.sin(2 * np.pi * t / 2) * (1 + 0.5 * np.sin(2 * np.pi * t / 25)), 2.0)
    assert abs(env.mean() - 1 / math.sqrt(2)) < 0.05
    with pytest.raises(ValueError):
        period_mean(t, y, 1e-4)
