from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floquet_fsl.hilbert import (
    Basis,
    Factor,
    Operator,
    StateVector,
    basis_state,
    boson,
    boson_ops,
    euclidean,
    euclidean_ops,
    identity,
    kron_states,
    phase_state,
    qubit,
    qubit_ops,
    spin,
    spin_ops,
    tensor,
)

spins = st.integers(1, 24).map(lambda n: Fraction(n, 2))


def test_factor_dims_and_labels():
    assert boson(4).dim == 5
    assert spin(Fraction(3, 2)).dim == 4
    assert qubit().dim == 2
    assert euclidean(3).dim == 7
    assert spin(1).quantum_numbers() == [-1, 0, 1]
    assert euclidean(1).quantum_numbers() == [-1, 0, 1]
    with pytest.raises(ValueError):
        Factor("fermion", 1)
    with pytest.raises(ValueError):
        spin(Fraction(1, 3))


def test_basis_kron_order():
    b = Basis((qubit(), spin(1)))
    assert b.dims == (2, 3)
    labs = b.labels()
    assert labs[0] == (("qubit", -1), ("spin", Fraction(-1)))
    assert labs[3] == (("qubit", 1), ("spin", Fraction(-1)))


@pytest.mark.invariant
@given(spins)
def test_spin_algebra_closure(S):
    sx, sy, sz, spl, smi = spin_ops(S)
    s = float(S)
    assert np.abs((sx.comm(sy) - sz * 1j).dense()).max() < 1e-12
    assert np.abs((sy.comm(sz) - sx * 1j).dense()).max() < 1e-12
    assert np.abs((sz.comm(spl) - spl).dense()).max() < 1e-12
    casimir = (sx @ sx + sy @ sy + sz @ sz).dense()
    assert np.abs(casimir - s * (s + 1) * np.eye(sz.dim)).max() < 1e-10
    for op in (sx, sy, sz):
        assert op.is_hermitian()


def test_spin_half_matches_pauli():
    sx, sy, sz, _, _ = spin_ops(Fraction(1, 2))
    px, py, pz, _, _ = qubit_ops()
    assert np.allclose(2 * sx.dense(), px.dense())
    assert np.allclose(2 * sy.dense(), py.dense())
    assert np.allclose(2 * sz.dense(), pz.dense())


@pytest.mark.invariant
@given(st.integers(1, 40))
def test_boson_commutator_below_cutoff(n_max):
    a, ad, n = boson_ops(n_max)
    c = a.comm(ad).dense()
    # [a, a^dag] = 1 except in the truncated top state
    assert np.allclose(np.diag(c)[:-1], 1.0)
    assert np.isclose(c[-1, -1], -n_max)
    assert np.allclose((ad @ a).dense(), n.dense())


@pytest.mark.invariant
@given(st.integers(1, 30))
def test_euclidean_algebra(M):
    e0, ep, em = euclidean_ops(M)
    assert np.abs(e0.comm(ep).dense() - ep.dense()).max() == 0
    assert np.abs(e0.comm(em).dense() + em.dense()).max() == 0
    _, pp, pm = euclidean_ops(M, "periodic")
    assert np.abs(pp.comm(pm).dense()).max() == 0
    assert np.allclose((pp @ pm).dense(), np.eye(2 * M + 1))


@given(st.integers(1, 20), st.integers(-40, 40))
def test_phase_state_is_eigenstate_of_ring_shift(M, j):
    theta = 2 * np.pi * j / (2 * M + 1)
    _, ep, _ = euclidean_ops(M, "periodic")
    psi = phase_state(M, theta)
    assert np.allclose(ep.mat @ psi.amplitudes, np.exp(1j * theta) * psi.amplitudes)


def test_tensor_and_identity():
    sx = spin_ops(1)[0]
    op = tensor(sx, euclidean(2))
    assert op.basis.dims == (3, 5)
    assert np.allclose(op.dense(), np.kron(sx.dense(), np.eye(5)))
    assert np.allclose(identity(op.basis).dense(), np.eye(15))
    with pytest.raises(TypeError):
        tensor(sx, 3)


def test_operator_basis_checks():
    a = spin_ops(1)[0]
    b = spin_ops(2)[0]
    with pytest.raises(ValueError):
        _ = a + b
    with pytest.raises(ValueError):
        Operator(spin(1), np.eye(4))


def test_state_vector_normalisation():
    psi = StateVector(spin(1), [1, 1, 0])
    assert np.isclose(psi.norm, 1)
    with pytest.raises(ValueError):
        StateVector(spin(1), [0, 0, 0])
    with pytest.raises(ValueError):
        StateVector(spin(1), [1, 0])
    a = basis_state(qubit(), 1)
    b = basis_state(boson(2), 0)
    ab = kron_states(a, b)
    assert ab.basis.dims == (2, 3)
    assert ab.amplitudes[3] == 1


def test_expectation_values():
    sz = spin_ops(2)[2]
    assert sz.expect(basis_state(spin(2), 0)).real == -2
    assert sz.expect(basis_state(spin(2), 4)).real == 2
