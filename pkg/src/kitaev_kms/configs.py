"""Classical side of the model: finite-window syndrome configurations,
finite-support translations with trivial total charge (the gauge group),
the energy cocycle, and the product equilibrium measure on cylinders.

A configuration assigns a character to each vertex and a group element to
each face, with the implicit neutral value outside its support.  Labels
follow the projector convention: the value at a site is the label of the
commuting projector family member that fires there, so the face value of
a basis connection is the inverse of its boundary holonomy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Mapping

from .errors import NotInGaugeGroupError, SizeGuardError, SpecMismatchError
from .groups import Character, GroupElement, GroupSpec
from .lattice import (
    FACE,
    VERTEX,
    Edge,
    LatticePatch,
    Ribbon,
    Site,
    face,
    find_ribbon,
    incidence_face,
    vertex,
)

MEASURE_GUARD = 10**6


@dataclass(frozen=True)
class SiteConfig:
    """Finite-support map Site -> (Character at vertices, GroupElement at
    faces), stored as sorted residue vectors with neutral values dropped."""

    spec: GroupSpec
    items: tuple[tuple[Site, tuple[int, ...]], ...]

    def __post_init__(self):
        norm = []
        for site, residues in self.items:
            residues = tuple(int(a) % n for a, n in zip(residues, self.spec.orders))
            if len(residues) != len(self.spec.orders):
                raise SpecMismatchError(f"value of wrong rank at {site}")
            if any(residues):
                norm.append((site, residues))
        object.__setattr__(self, "items", tuple(sorted(norm)))
        object.__setattr__(self, "_map", dict(self.items))

    @staticmethod
    def from_mapping(spec: GroupSpec, values: Mapping[Site, object]) -> "SiteConfig":
        items = []
        for site, val in values.items():
            if isinstance(val, (GroupElement, Character)):
                expected = GroupElement if site.kind == FACE else Character
                if not isinstance(val, expected):
                    raise SpecMismatchError(f"{type(val).__name__} used at a {site.kind}")
                items.append((site, val.residues))
            else:
                items.append((site, tuple(val)))
        return SiteConfig(spec, tuple(items))

    @staticmethod
    def neutral(spec: GroupSpec) -> "SiteConfig":
        return SiteConfig(spec, ())

    @property
    def support(self) -> tuple[Site, ...]:
        return tuple(site for site, _ in self.items)

    def value(self, site: Site):
        """Character for vertices, GroupElement for faces; neutral off support."""
        res = self._map.get(site)
        if site.kind == VERTEX:
            return Character(self.spec, res) if res else self.spec.neutral_character()
        return GroupElement(self.spec, res) if res else self.spec.neutral_element()

    def residues_at(self, site: Site) -> tuple[int, ...]:
        res = self._map.get(site)
        return res if res is not None else (0,) * len(self.spec.orders)

    @property
    def is_neutral(self) -> bool:
        return not self.items

    def __mul__(self, other: "SiteConfig") -> "SiteConfig":
        if other.spec != self.spec:
            raise SpecMismatchError("configs over different groups")
        combined = dict(self.items)
        for site, res in other.items:
            cur = combined.get(site)
            if cur is None:
                combined[site] = res
            else:
                combined[site] = tuple(
                    (a + b) % n for a, b, n in zip(cur, res, self.spec.orders)
                )
        return SiteConfig(self.spec, tuple(combined.items()))

    def inverse(self) -> "SiteConfig":
        return SiteConfig(
            self.spec,
            tuple(
                (site, tuple((-a) % n for a, n in zip(res, self.spec.orders)))
                for site, res in self.items
            ),
        )

    def restricted(self, sites) -> "SiteConfig":
        keep = set(sites)
        return SiteConfig(self.spec, tuple(it for it in self.items if it[0] in keep))

    def to_json(self) -> dict:
        return {
            "sites": [
                {"kind": site.kind, "x": site.x, "y": site.y, "value": list(res)}
                for site, res in self.items
            ]
        }

    @staticmethod
    def from_json(spec: GroupSpec, data: dict) -> "SiteConfig":
        return SiteConfig(
            spec,
            tuple(
                (Site(d["kind"], d["x"], d["y"]), tuple(d["value"]))
                for d in data["sites"]
            ),
        )


# the two roles a SiteConfig plays
SyndromeConfig = SiteConfig
GammaElement = SiteConfig


def act(gamma: SiteConfig, omega: SiteConfig) -> SiteConfig:
    """Translation action eta_gamma(omega) = gamma * omega (pointwise)."""
    return gamma * omega


def pi_hat(sigma: SiteConfig) -> tuple[Character, GroupElement]:
    """Total charge (product over vertices, product over faces)."""
    chi = sigma.spec.neutral_character()
    g = sigma.spec.neutral_element()
    for site, res in sigma.items:
        if site.kind == VERTEX:
            chi = chi * Character(sigma.spec, res)
        else:
            g = g * GroupElement(sigma.spec, res)
    return chi, g


def is_gauge(sigma: SiteConfig) -> bool:
    chi, g = pi_hat(sigma)
    return chi.is_neutral and g.is_neutral


def elementary_delta(edge: Edge, label, patch: LatticePatch) -> SiteConfig:
    """The elementary kernel generator attached to an edge.

    A group-element label produces the face-type generator supported on
    the two adjacent faces with exponents zeta(e, f); a character label
    produces the vertex-type generator on the two endpoints with
    exponents -zeta(e, v) (the edge-points-toward-the-vertex convention:
    the unique sign choice under which conjugating any diagonal-algebra
    element by the edge unitary of either kind pre-composes with the
    translation by the same delta).  Both kinds carry opposite exponents
    at their two sites, hence have trivial total charge."""
    spec = label.spec
    if isinstance(label, GroupElement):
        pairs = patch.edge_faces(edge)
        if len(pairs) != 2:
            raise ValueError(f"{edge} lacks a neighbouring face inside the patch")
    elif isinstance(label, Character):
        pairs = [(site, -z) for site, z in patch.edge_vertices(edge)]
    else:
        raise TypeError(f"label must be GroupElement or Character, got {type(label)}")
    return SiteConfig(spec, tuple((site, (label**z).residues) for site, z in pairs))


def cocycle_energy(omega: SiteConfig, gamma: SiteConfig) -> int:
    """Energy transferred when gamma translates omega: for each support
    site, (excitation there before) - (excitation there after the shift
    by gamma^{-1}); integer-valued and additive under composition."""
    total = 0
    for site, res in gamma.items:
        w = omega.value(site)
        shifted = w * GroupElement(gamma.spec, res).inverse() if site.kind == FACE else (
            w * Character(gamma.spec, res).inverse()
        )
        total += int(w.is_neutral) - int(shifted.is_neutral)
    return total


# -- the product measure on cylinders ---------------------------------


def measure_weight(beta: float, group_order: int, neutral: bool) -> float:
    """Single-site weight: e^beta/(e^beta + |G| - 1) for the neutral label,
    1/(e^beta + |G| - 1) otherwise."""
    if beta < 0:
        raise ValueError(f"inverse temperature must be >= 0, got {beta}")
    z = math.exp(beta) + group_order - 1
    return (math.exp(beta) if neutral else 1.0) / z


def cylinder_measure(beta: float, window, omega: SiteConfig, spec: GroupSpec) -> float:
    """Measure of the cylinder {omega' : omega'|_window = omega|_window}."""
    p = 1.0
    for site in window:
        p *= measure_weight(beta, spec.order, omega.value(site).is_neutral)
    return p


def _window_assignments(window, spec: GroupSpec):
    """All configurations on the window, as SiteConfigs."""
    window = tuple(window)
    count = spec.order ** len(window)
    if count > MEASURE_GUARD:
        raise SizeGuardError(f"{count} window configurations exceed guard {MEASURE_GUARD}")
    residue_choices = list(product(*(range(n) for n in spec.orders)))
    for combo in product(residue_choices, repeat=len(window)):
        yield SiteConfig(spec, tuple(zip(window, combo)))


def kms_measure_check(beta: float, window, gamma: SiteConfig, spec: GroupSpec) -> float:
    """Brute-force Radon-Nikodym check of the product measure against the
    cocycle weight: for every sub-cylinder C(K, omega') of the window,
    compare mu(eta_gamma^{-1} C) with the sum of e^{-beta c(omega, gamma)}
    over C.  Returns the largest absolute discrepancy."""
    window = tuple(window)
    if not set(gamma.support) <= set(window):
        raise ValueError("gamma support must lie inside the window")
    full = [
        (xi, cylinder_measure(beta, window, xi, spec), cocycle_energy(xi, gamma))
        for xi in _window_assignments(window, spec)
    ]
    gamma_inv = gamma.inverse()
    worst = 0.0
    n = len(window)
    for mask in range(2**n):
        sub = tuple(window[i] for i in range(n) if mask >> i & 1)
        rhs_by_key: dict[tuple, float] = {}
        rep_by_key: dict[tuple, SiteConfig] = {}
        for xi, m, c in full:
            key = tuple(xi.residues_at(s) for s in sub)
            rhs_by_key[key] = rhs_by_key.get(key, 0.0) + math.exp(-beta * c) * m
            rep_by_key.setdefault(key, xi)
        for key, rhs in rhs_by_key.items():
            lhs = cylinder_measure(beta, sub, act(gamma_inv, rep_by_key[key]), spec)
            worst = max(worst, abs(lhs - rhs))
    return worst


# -- gauge-group decomposition into elementary generators --------------


def _ribbon_factors(ribbon: Ribbon, label) -> list[tuple[Edge, object]]:
    """Elementary factors along a ribbon: their composition has value
    `label` at the ribbon start, label^{-1} at the end, and is neutral at
    every intermediate site (the passing deltas cancel pairwise)."""
    return [(e, label ** (-b)) for e, b in ribbon.steps]


def decompose_gamma(
    gamma: SiteConfig,
    patch: LatticePatch,
    base_vertex: Site | None = None,
    base_face: Site | None = None,
) -> list[tuple[Edge, object]]:
    """Write a gauge element as an ordered product of elementary edge
    generators, routing each support site to a base site along L-shaped
    ribbons.  Every factor is itself in the kernel of the total charge."""
    chi_tot, g_tot = pi_hat(gamma)
    if not (chi_tot.is_neutral and g_tot.is_neutral):
        raise NotInGaugeGroupError(f"total charge ({chi_tot}, {g_tot}) is not neutral")
    factors: list[tuple[Edge, object]] = []
    vs = [s for s in gamma.support if s.kind == VERTEX]
    fs = [s for s in gamma.support if s.kind == FACE]
    if vs:
        v_star = base_vertex if base_vertex is not None else vs[0]
        for v in vs:
            if v == v_star:
                continue
            factors.extend(_ribbon_factors(find_ribbon(v, v_star, patch), gamma.value(v)))
    if fs:
        f_star = base_face if base_face is not None else fs[0]
        for f in fs:
            if f == f_star:
                continue
            factors.extend(_ribbon_factors(find_ribbon(f, f_star, patch), gamma.value(f)))
    return factors


def compose_factors(
    factors, patch: LatticePatch, spec: GroupSpec
) -> SiteConfig:
    """Multiply out a list of (edge, label) elementary generators."""
    out = SiteConfig.neutral(spec)
    for edge, label in factors:
        out = out * elementary_delta(edge, label, patch)
    return out


# -- bridge to the connection basis ------------------------------------


def face_holonomy(assignment: Mapping[Edge, GroupElement], f: Site, patch: LatticePatch) -> GroupElement:
    """Oriented boundary product prod c(e)^{zeta(e,f)} of a connection."""
    edges = patch.incident_edges(f)
    if len(edges) != 4:
        raise ValueError(f"{f} is not an interior face")
    hol = None
    for e in edges:
        g = assignment[e]
        if hol is None:
            hol = g.spec.neutral_element()
        hol = hol * g ** incidence_face(e, f)
    return hol


def connection_face_syndrome(
    assignment: Mapping[Edge, GroupElement], patch: LatticePatch, spec: GroupSpec
) -> SiteConfig:
    """Face labels of a basis connection: the face projector that fires at
    f carries the inverse of the boundary holonomy."""
    return SiteConfig.from_mapping(
        spec,
        {
            f: face_holonomy(assignment, f, patch).inverse()
            for f in patch.interior_faces()
        },
    )


# -- measure-theory windows --------------------------------------------


def standard_window(n: int) -> tuple[Site, ...]:
    """First n vertex/face pairs of the abstract site filtration, row-major
    vertices interleaved with row-major faces."""
    out: list[Site] = []
    for i in range(n):
        out.append(vertex(i, 0))
        out.append(face(i, 0))
    return tuple(out)


def corner_cylinder_config(spec: GroupSpec, chi: Character, g: GroupElement) -> SiteConfig:
    """Configuration with values (chi, g) at the first vertex/face pair of
    the standard window and neutral values elsewhere."""
    return SiteConfig.from_mapping(spec, {vertex(0, 0): chi, face(0, 0): g})
