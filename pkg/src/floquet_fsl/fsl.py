"""Fock-state-lattice graphs read off Hamiltonian matrices.

Each basis state is a site; diagonal entries are onsite energies and every
off-diagonal entry above a threshold is a directed tunnelling edge, so the
pair (i, j), (j, i) carries conjugate weights for a Hermitian input.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .hilbert import Basis, Factor, Operator, spin_ops

EDGE_THRESHOLD = 1e-12


@dataclass
class LatticeGraph:
    basis: Basis
    labels: list
    onsite: np.ndarray
    edges: list  # (i, j, complex weight), both directions
    components: list
    meta: dict = field(default_factory=dict)

    @property
    def nodes(self) -> list:
        return list(zip(self.labels, self.onsite.tolist()))

    @property
    def n_components(self) -> int:
        return len(self.components)

    def weight(self, i: int, j: int) -> complex:
        return self._lookup().get((i, j), 0j)

    def _lookup(self) -> dict:
        if "_w" not in self.__dict__:
            self.__dict__["_w"] = {(i, j): w for i, j, w in self.edges}
        return self.__dict__["_w"]

    def undirected(self) -> list:
        return [(i, j, w) for i, j, w in self.edges if i < j]

    def degree(self) -> np.ndarray:
        d = np.zeros(len(self.labels), dtype=int)
        for i, _, _ in self.edges:
            d[i] += 1
        return d


def _components(n: int, edges) -> list:
    if not edges:
        return [[i] for i in range(n)]
    i, j = np.array([(a, b) for a, b, _ in edges]).T
    adj = sp.csr_matrix((np.ones(i.size), (i, j)), shape=(n, n))
    k, lab = connected_components(adj, directed=False)
    groups = [[] for _ in range(k)]
    for node, c in enumerate(lab):
        groups[c].append(node)
    return sorted(groups, key=lambda g: g[0])


def lattice_from_operator(H: Operator, threshold: float = EDGE_THRESHOLD) -> LatticeGraph:
    if not H.is_hermitian():
        raise ValueError("the lattice picture needs a Hermitian operator")
    m = H.mat.tocoo()
    onsite = np.real(H.mat.diagonal()).astype(float)
    keep = (m.row != m.col) & (np.abs(m.data) > threshold)
    order = np.lexsort((m.col[keep], m.row[keep]))
    rows, cols, data = m.row[keep][order], m.col[keep][order], m.data[keep][order]
    edges = [(int(a), int(b), complex(w)) for a, b, w in zip(rows, cols, data)]
    return LatticeGraph(H.basis, H.basis.labels(), onsite, edges, _components(H.dim, edges), {"threshold": threshold})


def operator_from_graph(g: LatticeGraph) -> Operator:
    n = len(g.labels)
    rows = list(range(n)) + [i for i, _, _ in g.edges]
    cols = list(range(n)) + [j for _, j, _ in g.edges]
    vals = list(g.onsite.astype(complex)) + [w for _, _, w in g.edges]
    return Operator(g.basis, sp.csr_matrix((vals, (rows, cols)), shape=(n, n)))


# ----------------------------------------------------------------- LMG rates


def alpha_plus(S, m):
    S = float(Fraction(S))
    return np.sqrt(S * (S + 1) - m * (m + 1))


def alpha_minus(S, m):
    S = float(Fraction(S))
    return np.sqrt(S * (S + 1) - m * (m - 1))


def lmg_fsl(S, Delta: float, lam: float = 1.0, threshold: float = EDGE_THRESHOLD) -> LatticeGraph:
    """Graph of Delta Sz - (lambda/S) Sx^2 with predicted rates attached.

    With Sx = (S+ + S-)/2 the m -> m+2 rate is -(lambda/S)(1/4) a_{m+} a_{m+1,+}
    and the interaction onsite term is -(lambda/S)(1/4)(a_{m+}^2 + a_{m-}^2),
    i.e. -(lambda/S)(S(S+1) - m^2)/2. ``meta['max_rate_error']`` and
    ``meta['max_onsite_error']`` compare these with the built matrix.
    """
    sx, _, sz, _, _ = spin_ops(S)
    Sf = float(Fraction(S))
    H = sz * Delta + (sx @ sx) * (-lam / Sf)
    g = lattice_from_operator(H, threshold)
    m = np.arange(-Sf, Sf + 1)
    rates = {}
    for i, mi in enumerate(m[:-2]):
        rates[(i, i + 2)] = -(lam / Sf) * 0.25 * alpha_plus(S, mi) * alpha_plus(S, mi + 1)
    onsite = Delta * m - (lam / Sf) * 0.25 * (alpha_plus(S, m) ** 2 + alpha_minus(S, m) ** 2)
    g.meta.update(
        predicted_rates={f"{i}->{j}": float(w) for (i, j), w in rates.items()},
        predicted_onsite=onsite.tolist(),
        max_rate_error=max((abs(g.weight(i, j) - w) for (i, j), w in rates.items()), default=0.0),
        max_onsite_error=float(np.max(np.abs(g.onsite - onsite))),
        extra_edges=sorted({(i, j) for i, j, _ in g.undirected()} - set(rates)),
    )
    return g


# -------------------------------------------------------------- Floquet FSL


def _label_index(basis: Basis, kind: str):
    try:
        return basis.index(kind)
    except KeyError:
        return None


def _shift(g: LatticeGraph, i: int, j: int) -> tuple:
    return tuple(b[1] - a[1] for a, b in zip(g.labels[i], g.labels[j]))


def _is_path(g: LatticeGraph, comp: list) -> bool:
    deg = g.degree()[comp]
    n_edges = int(deg.sum()) // 2
    return n_edges == len(comp) - 1 and (deg.max(initial=0) <= 2)


def classify_floquet(g: LatticeGraph) -> dict:
    """Connectivity class of an extended-space graph.

    decoupled_chains  every component a path and a boson factor present (JC)
    spin_flip_chain   every component a path and every lattice hop flips the qubit (Rabi)
    chain             a single path, e.g. one Wannier-Stark ladder
    square_lattice    hops move either the lattice index by 1 or the spin by 2, never both (LMG)
    """
    b = g.basis
    e = _label_index(b, "euclidean")
    if e is None:
        raise ValueError("graph has no euclidean factor")
    hops = Counter(_shift(g, i, j) for i, j, _ in g.undirected())
    paths = all(_is_path(g, c) for c in g.components)
    q = _label_index(b, "qubit")
    s = _label_index(b, "spin")
    kind = "generic"
    if paths and _label_index(b, "boson") is not None:
        kind = "decoupled_chains"
    elif paths and q is not None and all(h[q] != 0 for h in hops if h[e] != 0):
        kind = "spin_flip_chain"
    elif paths:
        kind = "chain" if g.n_components == 1 else "decoupled_chains"
    elif s is not None and all(
        (abs(h[e]) == 1 and h[s] == 0) or (h[e] == 0 and abs(h[s]) == 2) for h in hops
    ):
        kind = "square_lattice"
    return {
        "kind": kind,
        "components": g.n_components,
        "hop_types": {"(" + ",".join(str(x) for x in k) + ")": v for k, v in sorted(hops.items())},
    }


def floquet_fsl(HF: Operator, threshold: float = EDGE_THRESHOLD) -> LatticeGraph:
    g = lattice_from_operator(HF, threshold)
    g.meta["classification"] = classify_floquet(g)
    return g


def lmg_square_lattice_defect(g: LatticeGraph, Delta: float, lam: float = 1.0) -> float:
    """Max deviation of a LMG Floquet graph from the tilted square-lattice pattern.

    Lattice hops (m_s, m) -> (m_s, m+-1) must carry (Delta/2) m_s, spin hops
    (m_s, m) -> (m_s+-2, m) the Sx^2 element; any other edge counts as inf.
    """
    b = g.basis
    s, e = b.index("spin"), b.index("euclidean")
    S = Fraction(b.factors[s].param, 2)
    sx = spin_ops(S)[0]
    sx2 = (sx @ sx).dense() * (-lam / float(S))
    worst = 0.0
    for i, j, w in g.edges:
        a, c = g.labels[i], g.labels[j]
        ms, m = a[s][1], a[e][1]
        ms2, m2 = c[s][1], c[e][1]
        if ms == ms2 and abs(m2 - m) == 1:
            expect = 0.5 * Delta * float(ms)
        elif m == m2 and abs(ms2 - ms) == 2:
            expect = sx2[int(ms2 + S), int(ms + S)]
        else:
            return float("inf")
        worst = max(worst, abs(w - expect))
    # every predicted nonzero hop must be present
    n_expected = 0
    nt = b.factors[e].dim
    n_s = b.factors[s].dim
    for k in range(n_s):
        ms = Fraction(2 * k - b.factors[s].param, 2)
        if abs(0.5 * Delta * float(ms)) > g.meta.get("threshold", EDGE_THRESHOLD):
            n_expected += 2 * (nt - 1)
    n_expected += 2 * nt * int(np.count_nonzero(np.abs(np.triu(sx2, 1)) > g.meta.get("threshold", EDGE_THRESHOLD)))
    if n_expected != len(g.edges):
        return float("inf")
    return float(worst)


# ------------------------------------------------------------------- export


def _qn_text(q) -> str:
    return str(q)


def _qn_parse(text: str):
    f = Fraction(text)
    return int(f) if f.denominator == 1 else f


def to_json(g: LatticeGraph) -> str:
    doc = {
        "basis": [[f.kind, f.param] for f in g.basis.factors],
        "nodes": [
            {"label": [[k, _qn_text(q)] for k, q in lab], "onsite": float(e)} for lab, e in zip(g.labels, g.onsite)
        ],
        "edges": [[i, j, w.real, w.imag] for i, j, w in g.edges],
        "components": g.components,
    }
    return json.dumps(doc, sort_keys=True)


def from_json(text: str) -> LatticeGraph:
    doc = json.loads(text)
    basis = Basis(tuple(Factor(k, p) for k, p in doc["basis"]))
    labels = [tuple((k, _qn_parse(q)) for k, q in node["label"]) for node in doc["nodes"]]
    onsite = np.array([node["onsite"] for node in doc["nodes"]], dtype=float)
    edges = [(int(i), int(j), complex(re, im)) for i, j, re, im in doc["edges"]]
    return LatticeGraph(basis, labels, onsite, edges, [list(c) for c in doc["components"]])


def to_dot(g: LatticeGraph) -> str:
    lines = ["graph fsl {"]
    for n, (lab, e) in enumerate(zip(g.labels, g.onsite)):
        text = ",".join(f"{k}={q}" for k, q in lab)
        lines.append(f'  n{n} [label="{text}", onsite={float(e)!r}];')
    for i, j, w in g.undirected():
        sign = "+" if w.imag >= 0 else "-"
        lines.append(f'  n{i} -- n{j} [weight="{w.real!r}{sign}{abs(w.imag)!r}j"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph(g: LatticeGraph, fmt: str = "json") -> str:
    if fmt == "json":
        return to_json(g)
    if fmt == "dot":
        return to_dot(g)
    raise ValueError(f"unknown graph format {fmt!r}")


def graphs_equal(a: LatticeGraph, b: LatticeGraph) -> bool:
    return (
        a.basis == b.basis
        and a.labels == b.labels
        and np.array_equal(a.onsite, b.onsite)
        and a.edges == b.edges
        and a.components == b.components
    )
