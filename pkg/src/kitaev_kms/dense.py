"""Matrix backend: renders operators on the explicit connection basis.

Serves as the independent oracle for the symbolic engine (products,
traces, spectra) and supplies operator norms, which are not cheaply
available from the monomial form.  Matrices are built sparse (terms are
generalized permutations); dense arrays appear only for small spectra.

Basis order: connection c <-> integer sum_i index(c(e_i)) n^i over the
patch edge list, i.e. edge i is the i-th little-endian digit.
"""

from __future__ import annotations

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .configs import SiteConfig
from .errors import SizeGuardError
from .groups import GroupElement
from .lattice import Edge
from .operators import OperatorAlgebra, OperatorSum

DENSE_GUARD = 2**14


def _tables(alg: OperatorAlgebra):
    mul = np.array(alg.mul, dtype=np.int64)
    pair = np.array(alg.pair_exp, dtype=np.int64)
    croots = np.exp(2j * np.pi * np.arange(alg.L) / alg.L)
    return mul, pair, croots


def _digits(alg: OperatorAlgebra) -> np.ndarray:
    dim = alg.dimension
    if dim > DENSE_GUARD:
        raise SizeGuardError(f"dimension {dim} exceeds dense guard {DENSE_GUARD}")
    idx = np.arange(dim)
    out = np.empty((dim, len(alg.edges)), dtype=np.int64)
    for i in range(len(alg.edges)):
        out[:, i] = idx % alg.n
        idx = idx // alg.n
    return out


def basis_assignment(alg: OperatorAlgebra, index: int) -> dict[Edge, GroupElement]:
    """The connection labelling basis vector `index`."""
    out = {}
    for e in alg.edges:
        out[e] = alg.elements[index % alg.n]
        index //= alg.n
    return out


def to_matrix(x: OperatorSum) -> sp.csr_matrix:
    """Sparse matrix of an operator on the connection basis."""
    alg = x.alg
    dim = alg.dimension
    if dim > DENSE_GUARD:
        raise SizeGuardError(f"dimension {dim} exceeds dense guard {DENSE_GUARD}")
    mul, pair, croots = _tables(alg)
    digits = _digits(alg)
    weights = alg.n ** np.arange(len(alg.edges), dtype=np.int64)
    cols = np.arange(dim)
    rows_all, cols_all, data_all = [], [], []
    for sig, coeff in x.terms():
        c = coeff.to_complex() if x.exact else coeff
        target = np.zeros(dim, dtype=np.int64)
        expo = np.zeros(dim, dtype=np.int64)
        for i in range(len(alg.edges)):
            gi, xi = sig[2 * i], sig[2 * i + 1]
            col_digit = digits[:, i]
            target += mul[gi, col_digit] * weights[i]
            if xi:
                expo += pair[xi, col_digit]
        rows_all.append(target)
        cols_all.append(cols)
        data_all.append(c * croots[expo % alg.L])
    if not rows_all:
        return sp.csr_matrix((dim, dim), dtype=complex)
    m = sp.coo_matrix(
        (np.concatenate(data_all), (np.concatenate(rows_all), np.concatenate(cols_all))),
        shape=(dim, dim),
    )
    return m.tocsr()


def matrix_trace(m: sp.spmatrix) -> complex:
    return complex(m.diagonal().sum())


def operator_norm(m) -> float:
    """Spectral norm; dense SVD for small sizes, Lanczos above."""
    if isinstance(m, OperatorSum):
        m = to_matrix(m)
    if m.shape[0] <= 2048:
        return float(np.linalg.norm(m.toarray(), 2))
    if m.nnz == 0:
        return 0.0
    try:
        return float(spla.svds(m, k=1, return_singular_vectors=False)[0])
    except Exception:
        # power iteration on m* m as a fallback for hard spectra
        v = np.random.default_rng(0).normal(size=m.shape[0]) + 0j
        v /= np.linalg.norm(v)
        est = 0.0
        for _ in range(200):
            v = m.conj().T @ (m @ v)
            nv = np.linalg.norm(v)
            if nv == 0:
                return 0.0
            v /= nv
            est = nv
        return float(np.sqrt(est))


def eigenvalues_hermitian(x: OperatorSum) -> np.ndarray:
    """Sorted spectrum of a self-adjoint operator (dense path)."""
    m = to_matrix(x).toarray()
    return np.linalg.eigvalsh(m)


def sector_projector_matrix(alg: OperatorAlgebra, omega: SiteConfig | None = None) -> sp.csr_matrix:
    """Joint projector onto the syndrome sector labelled by omega, as the
    product of the interior site projectors."""
    omega = omega if omega is not None else SiteConfig.neutral(alg.spec)
    out = sp.identity(alg.dimension, format="csr", dtype=complex)
    for w in alg.patch.interior_sites():
        out = out @ to_matrix(alg.site_projector(w, omega.value(w)))
    return out


def ltqo_residual_dense(alg: OperatorAlgebra, x: OperatorSum, omega: SiteConfig | None = None) -> float:
    """|| P x P - s(x) P || computed head-on; cross-check for the exact
    symbolic route on guard-sized patches."""
    p = sector_projector_matrix(alg, omega)
    xm = to_matrix(x)
    pxp = p @ xm @ p
    tr_p = matrix_trace(p)
    s = matrix_trace(pxp) / tr_p
    return operator_norm(pxp - s * p)
