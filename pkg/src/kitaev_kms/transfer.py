"""Transfer-matrix machinery for the equilibrium-measure uniqueness
argument: the positive matrix relating cylinder masses at consecutive
filtration levels, its closed-form determinant, its Perron-Frobenius
eigenpair, the level recursion, and the zero-temperature limit of the
single-site expectation values.

Rows and columns are indexed by (character, group element) pairs in
enumeration order (neutral first), character index major.  With the dual
identified with the group, the two Kronecker blocks coincide entrywise,
so the factorization is insensitive to the factor order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .configs import (
    SiteConfig,
    cocycle_energy,
    corner_cylinder_config,
    cylinder_measure,
    standard_window,
    _window_assignments,
)
from .errors import SizeGuardError
from .groups import Character, GroupElement, GroupSpec
from .lattice import face, vertex

TRANSFER_GUARD = 10**4


@dataclass
class MeasureParams:
    """Single-site equilibrium weights nu_beta over the dual (vertices)
    and over the group (faces); identical tables under the canonical
    identification."""

    beta: float
    q: float
    group_order: int
    neutral_weight: float
    excited_weight: float

    def weight(self, label) -> float:
        return self.neutral_weight if label.is_neutral else self.excited_weight

    def table(self, spec: GroupSpec) -> np.ndarray:
        out = np.full(spec.order, self.excited_weight)
        out[0] = self.neutral_weight
        return out


def build_measure_params(beta: float, spec: GroupSpec) -> MeasureParams:
    if beta < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {beta}")
    n = spec.order
    z = math.exp(beta) + n - 1
    return MeasureParams(
        beta=beta,
        q=math.exp(-beta),
        group_order=n,
        neutral_weight=math.exp(beta) / z,
        excited_weight=1.0 / z,
    )


@dataclass
class TransferMatrix:
    spec: GroupSpec
    beta: float
    matrix: np.ndarray
    b_block: np.ndarray
    d_block: np.ndarray
    index: list[tuple[Character, GroupElement]]

    @property
    def q(self) -> float:
        return math.exp(-self.beta)


def _block(beta: float, labels) -> np.ndarray:
    """exp(-beta (1 + d(col) - d(row) - d(row^{-1} col))) over the labels,
    d the neutral-element indicator."""
    n = len(labels)
    out = np.empty((n, n))
    for i, a in enumerate(labels):
        for j, b in enumerate(labels):
            expo = 1 + b.is_neutral - a.is_neutral - (a.inverse() * b).is_neutral
            out[i, j] = math.exp(-beta * expo)
    return out


def build_transfer(beta: float, spec: GroupSpec) -> TransferMatrix:
    if beta < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {beta}")
    if spec.order**2 > TRANSFER_GUARD:
        raise SizeGuardError(f"|G|^2 = {spec.order ** 2} exceeds guard {TRANSFER_GUARD}")
    b = _block(beta, spec.elements())
    d = _block(beta, spec.characters())
    matrix = np.kron(d, b)  # rows (chi, g), chi major
    index = [(chi, g) for chi in spec.characters() for g in spec.elements()]
    return TransferMatrix(spec=spec, beta=beta, matrix=matrix, b_block=b, d_block=d, index=index)


def transfer_entry_from_cocycle(beta: float, spec: GroupSpec, chi, g, zeta, h) -> float:
    """Independent oracle for a transfer-matrix entry: the uniqueness
    argument equates it with e^{-beta c(omega, gamma)} for the level
    configuration omega carrying (zeta, h) at the corner and the
    translation gamma that moves the level-2 excess onto the corner."""
    chi_p = chi.inverse() * zeta
    g_p = g.inverse() * h
    omega = corner_cylinder_config(spec, zeta, h)
    gamma = SiteConfig.from_mapping(
        spec,
        {
            vertex(0, 0): chi_p,
            vertex(1, 0): chi_p.inverse(),
            face(0, 0): g_p,
            face(1, 0): g_p.inverse(),
        },
    )
    return math.exp(-beta * cocycle_energy(omega, gamma))


@dataclass
class DetCheck:
    beta: float
    det_b: float
    closed_form: float
    residual: float
    det_a: float
    det_a_from_blocks: float

    @property
    def ok(self) -> bool:
        return self.residual <= 1e-10


def det_closed_form_check(beta: float, spec: GroupSpec) -> DetCheck:
    """LU determinant of the group block against the closed form
    (1-q)^{|G|-1} (1 + (|G|-1) q), and the full matrix determinant
    against the block power law."""
    tm = build_transfer(beta, spec)
    n = spec.order
    q = tm.q
    det_b = float(np.linalg.det(tm.b_block))
    det_d = float(np.linalg.det(tm.d_block))
    closed = (1 - q) ** (n - 1) * (1 + (n - 1) * q)
    det_a = float(np.linalg.det(tm.matrix))
    return DetCheck(
        beta=beta,
        det_b=det_b,
        closed_form=closed,
        residual=abs(det_b - closed),
        det_a=det_a,
        det_a_from_blocks=det_b**n * det_d**n,
    )


@dataclass
class PFResult:
    value: float
    vector: np.ndarray
    gap_ratio: float
    iterations: int


def _power_iteration(matrix: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, int]:
    v = np.full(matrix.shape[0], 1.0 / matrix.shape[0])
    lam = 0.0
    for k in range(1, max_iter + 1):
        w = matrix @ v
        s = w.sum()
        if s == 0:
            return 0.0, v, k
        w /= s
        if np.max(np.abs(w - v)) <= tol * np.max(np.abs(w)):
            return s, w, k
        v, lam = w, s
    raise RuntimeError(f"power iteration did not converge in {max_iter} steps")


def pf_eigen(tm: TransferMatrix | np.ndarray, tol: float = 1e-12, max_iter: int = 10**5) -> PFResult:
    """Perron-Frobenius eigenpair by power iteration (the eigenvector is
    normalized to total mass 1), plus a deflation estimate of the
    subleading ratio |lambda_2| / lambda_1."""
    matrix = tm.matrix if isinstance(tm, TransferMatrix) else np.asarray(tm)
    if np.any(matrix <= 0):
        raise ValueError("Perron-Frobenius eigenpair requires a strictly positive matrix")
    lam, vec, iters = _power_iteration(matrix, tol, max_iter)
    # left eigenvector for the deflation
    lam_l, left, _ = _power_iteration(matrix.T, tol, max_iter)
    deflated = matrix - lam * np.outer(vec, left) / float(left @ vec)
    rng = np.random.default_rng(0)
    u = rng.standard_normal(matrix.shape[0])
    sub = 0.0
    for _ in range(2000):
        w = deflated @ u
        nw = float(np.linalg.norm(w))
        if nw == 0:
            sub = 0.0
            break
        sub = nw / float(np.linalg.norm(u))
        u = w / nw
    return PFResult(value=float(lam), vector=vec, gap_ratio=float(sub / lam) if lam else 0.0, iterations=iters)


@dataclass
class RecursionCheck:
    beta: float
    n_max: int
    residual: float
    level_one_mass: float
    enumeration_residual: float


def closed_form_level_vector(beta: float, spec: GroupSpec, n: int) -> np.ndarray:
    """u_n(chi, g): the product-measure mass of the cylinder with (chi, g)
    at the corner pair and neutral values on the next n-1 pairs."""
    par = build_measure_params(beta, spec)
    single = np.kron(par.table(spec), par.table(spec))  # (chi, g), chi major
    return single * (par.neutral_weight**2) ** (n - 1)


def recursion_check(beta: float, spec: GroupSpec, n_max: int = 6) -> RecursionCheck:
    """max_n || u_n - A u_{n+1} ||_inf from the closed-form cylinder
    masses, the level-1 partition-of-unity mass, and an independent
    brute-force marginalization of u_1 and u_2 over window enumerations."""
    tm = build_transfer(beta, spec)
    residual = 0.0
    for n in range(1, n_max + 1):
        u_n = closed_form_level_vector(beta, spec, n)
        u_next = closed_form_level_vector(beta, spec, n + 1)
        residual = max(residual, float(np.max(np.abs(u_n - tm.matrix @ u_next))))
    level_one = float(closed_form_level_vector(beta, spec, 1).sum())

    enum_res = 0.0
    for n in (1, 2):
        window = standard_window(n + 1)
        inner = standard_window(n)
        for k, (chi, g) in enumerate(tm.index):
            target = corner_cylinder_config(spec, chi, g)
            want = {s: target.value(s).residues for s in inner}
            mass = sum(
                cylinder_measure(beta, window, xi, spec)
                for xi in _window_assignments(window, spec)
                if all(xi.value(s).residues == want[s] for s in inner)
            )
            enum_res = max(
                enum_res, abs(mass - float(closed_form_level_vector(beta, spec, n)[k]))
            )
    return RecursionCheck(
        beta=beta,
        n_max=n_max,
        residual=residual,
        level_one_mass=level_one,
        enumeration_residual=enum_res,
    )


@dataclass
class ExpectationRow:
    site_kind: str
    label_class: str
    value: float


def expectation_table(beta: float, spec: GroupSpec) -> list[ExpectationRow]:
    """Equilibrium expectations of the site projectors: the neutral label
    carries e^beta/(e^beta + |G| - 1), every excited label the rest."""
    par = build_measure_params(beta, spec)
    out = []
    for kind in ("vertex", "face"):
        out.append(ExpectationRow(kind, "neutral", par.neutral_weight))
        out.append(ExpectationRow(kind, "excited", par.excited_weight))
    return out


@dataclass
class ZeroTRow:
    beta: float
    neutral_expectation: float
    defect: float
    bound: float


@dataclass
class ZeroTScan:
    rows: list[ZeroTRow] = field(default_factory=list)

    @property
    def monotone(self) -> bool:
        d = [r.defect for r in self.rows]
        return all(b < a for a, b in zip(d, d[1:]))

    @property
    def bounded(self) -> bool:
        return all(r.defect <= r.bound + 1e-15 for r in self.rows)


def zero_t_scan(spec: GroupSpec, betas) -> ZeroTScan:
    """Convergence of the neutral-projector expectation to 1: the defect
    1 - s_beta is bounded by (|G|-1) e^{-beta} and strictly decreasing
    along an increasing beta grid."""
    betas = list(betas)
    if any(b2 <= b1 for b1, b2 in zip(betas, betas[1:])):
        raise ValueError("beta grid must be strictly increasing")
    scan = ZeroTScan()
    n = spec.order
    for beta in betas:
        par = build_measure_params(beta, spec)
        # (n-1)/Z form avoids the cancellation in 1 - s at large beta
        scan.rows.append(
            ZeroTRow(
                beta=beta,
                neutral_expectation=par.neutral_weight,
                defect=(n - 1) * par.excited_weight,
                bound=(n - 1) * math.exp(-beta),
            )
        )
    return scan
