import random

import numpy as np
import pytest
import scipy.linalg
import scipy.sparse.linalg as spla

from kitaev_kms import (
    GroupSpec,
    LatticePatch,
    OperatorAlgebra,
    connection_face_syndrome,
    face,
    face_holonomy,
    pairing,
    random_operator,
)
from kitaev_kms import dense
from kitaev_kms.errors import SizeGuardError
from kitaev_kms.lattice import Edge

Z2 = GroupSpec((2,))
Z3 = GroupSpec((3,))


class _SingleEdge:
    """Minimal one-edge patch, enough for the textbook 2x2 matrices."""

    def __init__(self):
        self.edges = (Edge("h", 0, 0),)

    def edge_faces(self, e):
        return []

    def edge_vertices(self, e):
        return []

    def interior_sites(self):
        return []

    def interior_vertices(self):
        return []

    def interior_faces(self):
        return []

    def is_interior(self, s):
        return False

    def incident_edges(self, s):
        return []


def test_single_edge_matrices():
    alg = OperatorAlgebra(Z2, _SingleEdge())
    e = alg.edges[0]
    t = dense.to_matrix(alg.edge_translation(e, Z2.element([1]))).toarray()
    m = dense.to_matrix(alg.edge_character(e, Z2.character([1]))).toarray()
    assert np.max(np.abs(t - np.array([[0, 1], [1, 0]]))) < 1e-15
    assert np.max(np.abs(m - np.diag([1.0, -1.0]))) < 1e-15
    ident = dense.to_matrix(alg.identity()).toarray()
    assert np.array_equal(ident, np.eye(2, dtype=complex))


def test_symbolic_dense_products_and_traces():
    rng = random.Random(0)
    for spec, w, h in [(Z2, 2, 1), (Z3, 1, 1), (GroupSpec((2, 2)), 1, 1)]:
        alg = OperatorAlgebra(spec, LatticePatch(w, h))
        for _ in range(10):
            x = random_operator(alg, rng, n_edges=2, n_terms=3, exact=False)
            y = random_operator(alg, rng, n_edges=2, n_terms=3, exact=False)
            mx, my = dense.to_matrix(x), dense.to_matrix(y)
            prod = dense.to_matrix(x * y).toarray()
            assert np.max(np.abs(prod - (mx @ my).toarray())) < 1e-12
            assert abs(complex(x.trace()) - dense.matrix_trace(mx)) < 1e-12
            madj = dense.to_matrix(x.adjoint()).toarray()
            assert np.max(np.abs(madj - mx.toarray().conj().T)) < 1e-12


def test_operator_norm():
    alg = OperatorAlgebra(Z2, LatticePatch(1, 1))
    u = alg.edge_translation(alg.edges[0], Z2.element([1]))
    assert dense.operator_norm(u) == pytest.approx(1.0, abs=1e-12)
    assert dense.operator_norm(alg.zero()) == 0.0
    assert dense.operator_norm(alg.identity().scale(3.5)) == pytest.approx(3.5, abs=1e-12)


def test_dimension_guard():
    alg = OperatorAlgebra(Z2, LatticePatch(4, 4))  # 2^40
    with pytest.raises(SizeGuardError):
        dense.to_matrix(alg.identity())


def test_hamiltonian_spectrum_1x1():
    alg = OperatorAlgebra(Z2, LatticePatch(1, 1))
    evals = dense.eigenvalues_hermitian(alg.hamiltonian())
    vals, counts = np.unique(np.round(evals, 10), return_counts=True)
    assert dict(zip(vals.tolist(), counts.tolist())) == {0.0: 8, 1.0: 8}


def test_gibbs_matches_matrix_exponential():
    # (1,1): direct expm; (2,2): Krylov expm on random vectors
    alg = OperatorAlgebra(Z2, LatticePatch(1, 1))
    beta = 0.8
    h = dense.to_matrix(alg.hamiltonian()).toarray()
    want = scipy.linalg.expm(-beta * h)
    got = dense.to_matrix(alg.gibbs_operator(beta)).toarray()
    assert np.max(np.abs(got - want)) < 1e-10

    alg2 = OperatorAlgebra(Z2, LatticePatch(2, 2))
    h2 = dense.to_matrix(alg2.hamiltonian(), )
    g2 = dense.to_matrix(alg2.gibbs_operator(beta))
    rng = np.random.default_rng(1)
    for _ in range(5):
        v = rng.standard_normal(alg2.dimension) + 1j * rng.standard_normal(alg2.dimension)
        want_v = spla.expm_multiply(-beta * h2.tocsc(), v)
        assert np.max(np.abs(g2 @ v - want_v)) < 1e-10


def test_face_operator_eigenvalue_is_holonomy_pairing():
    # B_f^chi acts on |c> with eigenvalue <chi, holonomy(c, f)>
    alg = OperatorAlgebra(Z2, LatticePatch(1, 1))
    chi = Z2.character([1])
    b = dense.to_matrix(alg.face_operator(face(0, 0), chi)).toarray()
    assert np.max(np.abs(b - np.diag(np.diag(b)))) == 0.0
    for idx in range(alg.dimension):
        c = dense.basis_assignment(alg, idx)
        hol = face_holonomy(c, face(0, 0), alg.patch)
        want = pairing(chi, hol).to_complex()
        assert abs(b[idx, idx] - want) < 1e-14


def test_face_syndrome_is_projector_label():
    # the face projector that fires on |c> carries the inverse holonomy
    alg = OperatorAlgebra(Z3, LatticePatch(1, 1))
    f0 = face(0, 0)
    mats = {g: dense.to_matrix(alg.face_projector(f0, g)).toarray() for g in Z3.elements()}
    for idx in range(alg.dimension):
        c = dense.basis_assignment(alg, idx)
        syn = connection_face_syndrome(c, alg.patch, Z3).value(f0)
        for g, mat in mats.items():
            assert mat[idx, idx] == pytest.approx(1.0 if g == syn else 0.0, abs=1e-14)


def test_sector_projectors_resolve_identity():
    alg = OperatorAlgebra(Z2, LatticePatch(2, 1))
    from kitaev_kms.configs import _window_assignments

    sites = tuple(alg.patch.interior_sites())
    total = np.zeros((alg.dimension, alg.dimension), dtype=complex)
    ranks = set()
    for omega in _window_assignments(sites, Z2):
        p = dense.sector_projector_matrix(alg, omega).toarray()
        ranks.add(int(round(np.trace(p).real)))
        total += p
    assert np.max(np.abs(total - np.eye(alg.dimension))) < 1e-12
    assert ranks == {alg.dimension // 2 ** len(sites)}


def test_ltqo_dense_agrees_with_symbolic():
    alg = OperatorAlgebra(Z2, LatticePatch(2, 2))
    cases = [
        alg.edge_character(Edge("h", 0, 1), Z2.character([1])),
        alg.edge_translation(Edge("v", 1, 1), Z2.element([1])),
        alg.face_operator(face(0, 0), Z2.character([1])),
        alg.edge_character(Edge("h", 0, 0), Z2.character([1])),  # boundary, nonzero
    ]
    for x in cases:
        sym = alg.ltqo_residual(x, norm=dense.operator_norm)
        den = dense.ltqo_residual_dense(alg, x)
        assert abs(sym - den) < 1e-10
