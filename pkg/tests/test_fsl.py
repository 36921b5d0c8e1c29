from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from floquet_fsl.floquet import FloquetSpec
from floquet_fsl.fsl import (
    classify_floquet,
    export_graph,
    floquet_fsl,
    from_json,
    graphs_equal,
    lattice_from_operator,
    lmg_fsl,
    lmg_square_lattice_defect,
    operator_from_graph,
    to_dot,
    to_json,
)
from floquet_fsl.hilbert import Operator, spin, spin_ops
from floquet_fsl.jc import JCParams, full_floquet_operator
from floquet_fsl.lmg import LMGParams, lmg_floquet, lmg_static
from floquet_fsl.rabi import RabiParams, rabi_floquet


def test_diagonal_operator_has_no_edges():
    sz = spin_ops(2)[2]
    g = lattice_from_operator(sz)
    assert g.edges == [] and g.n_components == 5
    assert np.allclose(g.onsite, [-2, -1, 0, 1, 2])
    with pytest.raises(ValueError):
        lattice_from_operator(spin_ops(1)[3])


@pytest.mark.parametrize("two_s", range(2, 13))
def test_lmg_graph_splits_into_two_parity_chains(two_s):
    S = Fraction(two_s, 2)
    g = lmg_fsl(S, 1.3)
    assert g.n_components == 2
    assert g.meta["max_rate_error"] < 1e-14
    assert g.meta["max_onsite_error"] < 1e-13
    assert g.meta["extra_edges"] == []
    for comp in g.components:
        ms = {g.labels[i][0][1] for i in comp}
        assert len({(m - min(ms)) % 2 for m in ms}) == 1


def test_transverse_field_joins_the_chains():
    g = lattice_from_operator(lmg_static(3, 1.0, h_x=0.2))
    assert g.n_components == 1


@pytest.mark.invariant
@given(st.integers(2, 12), st.integers(0, 2**32 - 1))
def test_graph_reconstructs_hermitian_operator(n, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    a[rng.random((n, n)) < 0.4] = 0
    h = a + a.conj().T
    op = Operator(spin(Fraction(n - 1, 2)), h)
    g = lattice_from_operator(op)
    assert np.array_equal(operator_from_graph(g).dense(), h)
    w = g._lookup()
    for i, j, x in g.edges:
        assert w[(j, i)] == np.conj(x)
    assert sum(len(c) for c in g.components) == n


def test_json_roundtrip_and_dot():
    g = lmg_fsl(Fraction(3, 2), 0.7)
    h = from_json(to_json(g))
    assert graphs_equal(g, h)
    assert to_json(h) == to_json(g)
    dot = to_dot(g)
    assert dot.startswith("graph fsl {") and dot.count("--") == len(g.undirected())
    assert export_graph(g, "dot") == dot
    with pytest.raises(ValueError):
        export_graph(g, "gml")


def test_jc_extended_space_is_decoupled_chains():
    p = JCParams(g0=0.3, omega=0.5, alpha=1.0, n_max=8)
    g = floquet_fsl(full_floquet_operator(p, FloquetSpec(p.omega, 4)))
    c = g.meta["classification"]
    assert c["kind"] == "decoupled_chains"
    # the ground state with no photons never couples
    assert c["components"] > 1


def test_rabi_extended_space_is_spin_flip_chain():
    p = RabiParams()
    g = floquet_fsl(rabi_floquet(p, FloquetSpec(p.omega, 5)))
    assert g.meta["classification"]["kind"] == "spin_flip_chain"
    assert g.n_components == 2


@pytest.mark.parametrize("S", [1, Fraction(3, 2), 3])
def test_lmg_extended_space_is_square_lattice(S):
    p = LMGParams(Delta=1.7, omega=0.8, S=S)
    g = floquet_fsl(lmg_floquet(p, FloquetSpec(p.omega, 4)))
    assert g.meta["classification"]["kind"] == "square_lattice"
    assert lmg_square_lattice_defect(g, p.Delta) < 1e-15


def test_square_lattice_defect_detects_foreign_edges():
    p = LMGParams(Delta=1.0, omega=1.0, S=1)
    spec = FloquetSpec(p.omega, 2)
    HF = lmg_floquet(p, spec)
    assert lmg_square_lattice_defect(lattice_from_operator(HF), 1.0) < 1e-15
    assert lmg_square_lattice_defect(lattice_from_operator(HF), 2.0) == pytest.approx(0.5)
    sx = spin_ops(1)[0]
    from floquet_fsl.hilbert import euclidean, tensor

    bad = HF + tensor(sx, euclidean(2)) * 0.1
    assert lmg_square_lattice_defect(lattice_from_operator(bad), 1.0) == float("inf")


def test_drive_edges_vanish_on_zero_magnetisation_row():
    p = LMGParams(Delta=1.5, omega=1.0, S=2)
    g = floquet_fsl(lmg_floquet(p, FloquetSpec(p.omega, 3)))
    s, e = g.basis.index("spin"), g.basis.index("euclidean")
    for i, j, w in g.edges:
        a, b = g.labels[i], g.labels[j]
        if a[e][1] != b[e][1]:
            assert a[s][1] != 0
            assert w == pytest.approx(0.75 * float(a[s][1]))
