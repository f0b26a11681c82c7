"""Exact operator algebra on the edge Hilbert space of a patch.

Operators are stored as sums of monomials: each term assigns to every
edge a translation and a character (the single-edge unitaries compose as
(g1,x1)(g2,x2) = <x1,g2> (g1g2, x1x2), left factor acting last), with a
scalar coefficient.  Products, adjoints and traces are exact; scalars
live in a cyclotomic field by default ("exact" mode) and drop to complex
floats only for Gibbs weights ("numeric" mode).  A term's action on a
basis connection c is |c> -> coeff * prod_e <x_e, c(e)> |e -> g_e c(e)>.

Term signatures are flat tuples (g index, chi index per edge, neutral =
0), so canonical form is a dict keyed by signature with no zero
coefficients, and equality of canonical forms is operator equality.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .configs import SiteConfig, decompose_gamma
from .cyclotomic import Cyclo
from .errors import SizeGuardError
from .groups import Character, GroupElement, GroupSpec, pairing_exponent
from .lattice import (
    DIRECT,
    VERTEX,
    Edge,
    LatticePatch,
    Ribbon,
    Site,
    face,
    find_ribbon,
    incidence,
    ribbon_site_signs,
    vertex,
)

EXPANSION_GUARD = 2**20


class OperatorAlgebra:
    """Shared context: a patch, a group, and the lookup tables that make
    monomial products table-driven."""

    def __init__(self, spec: GroupSpec, patch: LatticePatch):
        self.spec = spec
        self.patch = patch
        self.edges = patch.edges
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        self.n = spec.order
        self.L = spec.scalar_order
        self.elements = spec.elements()
        self.characters = spec.characters()
        self._el_index = {g.residues: i for i, g in enumerate(self.elements)}
        self.mul = [[self._el_index[(a * b).residues] for b in self.elements] for a in self.elements]
        self.inv = [self._el_index[a.inverse().residues] for a in self.elements]
        self.pair_exp = [
            [pairing_exponent(chi, g) for g in self.elements] for chi in self.characters
        ]
        self._croots = [cmath.exp(2j * cmath.pi * j / self.L) for j in range(self.L)]
        self._identity_sig = (0,) * (2 * len(self.edges))

    # -- indices -------------------------------------------------------

    @property
    def dimension(self) -> int:
        return self.n ** len(self.edges)

    def element_index(self, g: GroupElement) -> int:
        return self._el_index[g.residues]

    def character_index(self, chi: Character) -> int:
        return self._el_index[chi.residues]

    # -- constructors ----------------------------------------------------

    def zero(self, exact: bool = True) -> "OperatorSum":
        return OperatorSum(self, {}, exact)

    def identity(self, exact: bool = True) -> "OperatorSum":
        one = Cyclo.one(self.L) if exact else 1.0 + 0j
        return OperatorSum(self, {self._identity_sig: one}, exact)

    def monomial(self, edge_labels, coeff=None, exact: bool = True) -> "OperatorSum":
        """Single term; edge_labels maps Edge -> (GroupElement, Character)."""
        sig = list(self._identity_sig)
        for e, (g, chi) in edge_labels.items():
            i = self.edge_index[e]
            sig[2 * i] = self.element_index(g)
            sig[2 * i + 1] = self.character_index(chi)
        if coeff is None:
            coeff = Cyclo.one(self.L) if exact else 1.0 + 0j
        if isinstance(coeff, (int, Fraction)):
            coeff = Cyclo.rational(self.L, coeff) if exact else complex(coeff)
        return OperatorSum(self, {tuple(sig): coeff}, exact)

    def edge_translation(self, e: Edge, g: GroupElement) -> "OperatorSum":
        return self.monomial({e: (g, self.spec.neutral_character())})

    def edge_character(self, e: Edge, chi: Character) -> "OperatorSum":
        return self.monomial({e: (self.spec.neutral_element(), chi)})

    def vertex_operator(self, v: Site, g: GroupElement) -> "OperatorSum":
        """Star of translations g^{zeta(e,v)} around an interior vertex."""
        self._require_interior(v)
        neutral = self.spec.neutral_character()
        return self.monomial(
            {e: (g ** incidence(e, v), neutral) for e in self.patch.incident_edges(v)}
        )

    def face_operator(self, f: Site, chi: Character) -> "OperatorSum":
        """Boundary product of character factors chi^{zeta(e,f)}."""
        self._require_interior(f)
        neutral = self.spec.neutral_element()
        return self.monomial(
            {e: (neutral, chi ** incidence(e, f)) for e in self.patch.incident_edges(f)}
        )

    def vertex_projector(self, v: Site, chi: Character) -> "OperatorSum":
        """P_v^chi = |G|^{-1} sum_g chi(g) A_v^g."""
        out = self.zero()
        w = Fraction(1, self.n)
        for g in self.elements:
            coeff = Cyclo.root(self.L, pairing_exponent(chi, g)) * w
            out = out + self.vertex_operator(v, g).scale(coeff)
        return out

    def face_projector(self, f: Site, g: GroupElement) -> "OperatorSum":
        """P_f^g = |G|^{-1} sum_chi chi(g) B_f^chi."""
        out = self.zero()
        w = Fraction(1, self.n)
        for chi in self.characters:
            coeff = Cyclo.root(self.L, pairing_exponent(chi, g)) * w
            out = out + self.face_operator(f, chi).scale(coeff)
        return out

    def site_projector(self, w: Site, label) -> "OperatorSum":
        if w.kind == VERTEX:
            return self.vertex_projector(w, label)
        return self.face_projector(w, label)

    def ribbon_operator(self, ribbon: Ribbon, label) -> "OperatorSum":
        """Unitary string: characters chi^{beta} along a direct ribbon,
        translations g^{beta} along a dual one."""
        if ribbon.lattice == DIRECT:
            if not isinstance(label, Character):
                raise TypeError("direct ribbons carry character labels")
            neutral = self.spec.neutral_element()
            labels = {e: (neutral, label**b) for e, b in ribbon.steps}
        else:
            if not isinstance(label, GroupElement):
                raise TypeError("dual ribbons carry group-element labels")
            neutral = self.spec.neutral_character()
            labels = {e: (label**b, neutral) for e, b in ribbon.steps}
        return self.monomial(labels)

    def hamiltonian(self, omega: SiteConfig | None = None) -> "OperatorSum":
        """Sum of (1 - P_w^{omega(w)}) over the interior sites."""
        omega = omega if omega is not None else SiteConfig.neutral(self.spec)
        out = self.zero()
        for w in self.patch.interior_sites():
            out = out + self.identity() - self.site_projector(w, omega.value(w))
        return out

    def ground_projector(self, omega: SiteConfig | None = None) -> "OperatorSum":
        """Product of all interior site projectors, fully expanded."""
        omega = omega if omega is not None else SiteConfig.neutral(self.spec)
        sites = self.patch.interior_sites()
        if self.n ** len(sites) > EXPANSION_GUARD:
            raise SizeGuardError(
                f"{self.n}^{len(sites)} projector terms exceed guard {EXPANSION_GUARD}"
            )
        out = self.identity()
        for w in sites:
            out = out * self.site_projector(w, omega.value(w))
        return out

    def gibbs_operator(self, beta: float, omega: SiteConfig | None = None) -> "OperatorSum":
        """exp(-beta H) through the commuting-projector product
        prod_w (P_w + e^{-beta}(1 - P_w)); exact in the monomial basis up
        to the float weight e^{-beta}."""
        if beta < 0:
            raise ValueError(f"inverse temperature must be >= 0, got {beta}")
        omega = omega if omega is not None else SiteConfig.neutral(self.spec)
        q = math.exp(-beta)
        out = self.identity(exact=False)
        for w in self.patch.interior_sites():
            p = self.site_projector(w, omega.value(w)).as_numeric()
            factor = self.identity(exact=False).scale(q) + p.scale(1.0 - q)
            out = out * factor
        return out

    def gibbs_expectation(self, x: "OperatorSum", beta: float, omega: SiteConfig | None = None) -> complex:
        """Tr(e^{-beta H} x) / Tr(e^{-beta H})."""
        rho = self.gibbs_operator(beta, omega)
        z = rho.trace()
        assert abs(z) > 0.0, "partition function vanished"
        return complex((rho * x).trace()) / complex(z)

    def gamma_unitary(self, gamma: SiteConfig, base_vertex=None, base_face=None) -> "OperatorSum":
        """Unitary implementing a gauge element: the ordered product of
        elementary edge unitaries from its ribbon decomposition."""
        out = self.identity()
        for edge, label in decompose_gamma(gamma, self.patch, base_vertex, base_face):
            if isinstance(label, GroupElement):
                out = out * self.edge_translation(edge, label)
            else:
                out = out * self.edge_character(edge, label)
        return out

    def _require_interior(self, s: Site) -> None:
        if not self.patch.is_interior(s):
            raise ValueError(f"{s} is not interior to {self.patch!r}")

    # -- syndrome bookkeeping -------------------------------------------

    def term_translation(self, sig: tuple[int, ...]) -> SiteConfig:
        """Net syndrome translation induced by conjugation with a term:
        the product of the elementary deltas of all its edge labels."""
        acc: dict[Site, list[int]] = {}
        orders = self.spec.orders
        rank = len(orders)

        def bump(site, residues, power):
            cur = acc.setdefault(site, [0] * rank)
            for j in range(rank):
                cur[j] = (cur[j] + power * residues[j]) % orders[j]

        for i, e in enumerate(self.edges):
            gi, ci = sig[2 * i], sig[2 * i + 1]
            if gi:
                res = self.elements[gi].residues
                for f, z in self.patch.edge_faces(e):
                    bump(f, res, z)
            if ci:
                # vertex deltas carry the -zeta convention, see elementary_delta
                res = self.characters[ci].residues
                for v, z in self.patch.edge_vertices(e):
                    bump(v, res, -z)
        return SiteConfig(self.spec, tuple((s, tuple(r)) for s, r in acc.items()))

    def sector_preserving_part(self, x: "OperatorSum") -> "OperatorSum":
        """Terms whose net translation is neutral on every interior site;
        only these survive compression by the ground-space projector."""
        interior = set(self.patch.interior_sites())
        kept = {
            sig: c
            for sig, c in x._terms.items()
            if self.term_translation(sig).restricted(interior).is_neutral
        }
        return OperatorSum(self, kept, x.exact)

    def ltqo_residual(self, x: "OperatorSum", omega: SiteConfig | None = None, norm=None) -> float:
        """|| P x P - s(x) P || with P the full ground projector of the
        patch and s(x) = Tr(P x P)/Tr(P).

        Terms that move any interior syndrome are annihilated by the
        compression exactly; the rest commute with P, so the norm equals
        ||(y0 - s)P|| and vanishes iff Tr((y0-s)*(y0-s)P) = 0, which is
        decided exactly even far beyond matrix-backend sizes.  When the
        residual is nonzero it is reported through `norm` (a callable
        OperatorSum -> float, e.g. the matrix backend's spectral norm) or,
        absent one, the trace bound sqrt(Tr(r* r P)) >= ||r P||."""
        y0 = self.sector_preserving_part(x)
        if y0.is_zero():
            return 0.0
        if set(y0._terms) <= {self._identity_sig}:
            return 0.0  # scalar on every sector
        p = self.ground_projector(omega)
        if not y0.exact:
            p = p.as_numeric()
        tr_p = p.trace()
        s = (y0 * p).trace() / tr_p
        r = y0 - self.identity(exact=y0.exact).scale(s)
        val = (r.adjoint() * r * p).trace()
        if y0.exact:
            if val.is_zero():
                return 0.0
            val = val.to_complex()
        assert abs(val.imag) < 1e-12
        if norm is not None:
            return float(norm(r * p))
        return math.sqrt(max(val.real, 0.0))

    # -- serialization ----------------------------------------------------

    def from_json_terms(self, data: list[dict], exact: bool = False) -> "OperatorSum":
        out = self.zero(exact)
        for rec in data:
            labels = {}
            for item in rec["edges"]:
                e = Edge(item["edge"][0], item["edge"][1], item["edge"][2])
                labels[e] = (self.spec.element(item["g"]), self.spec.character(item["chi"]))
            coeff = complex(rec["coeff_re"], rec["coeff_im"])
            if exact:
                coeff = Cyclo.gauss(self.L, Fraction(rec["coeff_re"]), Fraction(rec["coeff_im"]))
            out = out + self.monomial(labels, coeff, exact)
        return out


class OperatorSum:
    """Canonical-form operator: signature -> coefficient, immutable."""

    __slots__ = ("alg", "_terms", "exact")

    def __init__(self, alg: OperatorAlgebra, terms: dict, exact: bool):
        self.alg = alg
        self.exact = exact
        self._terms = {
            sig: c for sig, c in terms.items() if (not c.is_zero() if exact else c != 0)
        }

    # -- bookkeeping ----------------------------------------------------

    @property
    def n_terms(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self):
        """Canonically ordered (signature, coefficient) pairs."""
        return sorted(self._terms.items())

    def coefficient(self, sig):
        if sig in self._terms:
            return self._terms[sig]
        return Cyclo.zero(self.alg.L) if self.exact else 0j

    def as_numeric(self) -> "OperatorSum":
        if not self.exact:
            return self
        return OperatorSum(
            self.alg, {sig: c.to_complex() for sig, c in self._terms.items()}, False
        )

    def _pair(self, other: "OperatorSum"):
        if other.alg is not self.alg:
            raise ValueError("operators belong to different algebras")
        if self.exact == other.exact:
            return self, other
        return self.as_numeric(), other.as_numeric()

    # -- linear structure -------------------------------------------------

    def __add__(self, other: "OperatorSum") -> "OperatorSum":
        a, b = self._pair(other)
        out = dict(a._terms)
        for sig, c in b._terms.items():
            cur = out.get(sig)
            out[sig] = c if cur is None else cur + c
        return OperatorSum(self.alg, out, a.exact)

    def __neg__(self) -> "OperatorSum":
        return OperatorSum(self.alg, {s: -c for s, c in self._terms.items()}, self.exact)

    def __sub__(self, other: "OperatorSum") -> "OperatorSum":
        return self + (-other)

    def scale(self, c) -> "OperatorSum":
        if self.exact and isinstance(c, (int, Fraction, Cyclo)):
            if isinstance(c, (int, Fraction)):
                c = Cyclo.rational(self.alg.L, c)
            return OperatorSum(self.alg, {s: v * c for s, v in self._terms.items()}, True)
        c = complex(c.to_complex() if isinstance(c, Cyclo) else c)
        return OperatorSum(
            self.alg, {s: v * c for s, v in self.as_numeric()._terms.items()}, False
        )

    # -- multiplicative structure -----------------------------------------

    def __mul__(self, other: "OperatorSum") -> "OperatorSum":
        a, b = self._pair(other)
        alg = self.alg
        mul, pair_exp, L = alg.mul, alg.pair_exp, alg.L
        ne = len(alg.edges)
        out: dict = {}
        exact = a.exact
        for sig1, c1 in a._terms.items():
            for sig2, c2 in b._terms.items():
                sig = [0] * (2 * ne)
                expo = 0
                for i in range(ne):
                    g1, x1 = sig1[2 * i], sig1[2 * i + 1]
                    g2, x2 = sig2[2 * i], sig2[2 * i + 1]
                    sig[2 * i] = mul[g1][g2]
                    sig[2 * i + 1] = mul[x1][x2]
                    if x1 and g2:
                        expo += pair_exp[x1][g2]
                coeff = c1 * c2
                if expo % L:
                    coeff = coeff * (
                        Cyclo.root(L, expo) if exact else alg._croots[expo % L]
                    )
                key = tuple(sig)
                cur = out.get(key)
                out[key] = coeff if cur is None else cur + coeff
        return OperatorSum(alg, out, exact)

    def adjoint(self) -> "OperatorSum":
        """Per edge, (g,x)* = <x,g> (g^{-1}, x^{-1}); coefficient conjugated."""
        alg = self.alg
        inv, pair_exp, L = alg.inv, alg.pair_exp, alg.L
        ne = len(alg.edges)
        out: dict = {}
        for sig1, c in self._terms.items():
            sig = [0] * (2 * ne)
            expo = 0
            for i in range(ne):
                g, x = sig1[2 * i], sig1[2 * i + 1]
                sig[2 * i] = inv[g]
                sig[2 * i + 1] = inv[x]
                if x and g:
                    expo += pair_exp[x][g]
            coeff = c.conjugate()
            if expo % L:
                coeff = coeff * (
                    Cyclo.root(L, expo) if self.exact else alg._croots[expo % L]
                )
            key = tuple(sig)
            cur = out.get(key)
            out[key] = coeff if cur is None else cur + coeff
        return OperatorSum(alg, out, self.exact)

    def commutator(self, other: "OperatorSum") -> "OperatorSum":
        return self * other - other * self

    def trace(self):
        """Exact trace: |G|^{#edges} times the identity coefficient."""
        c = self._terms.get(self.alg._identity_sig)
        dim = self.alg.dimension
        if c is None:
            return Cyclo.zero(self.alg.L) if self.exact else 0j
        return c * dim

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, OperatorSum):
            return NotImplemented
        a, b = self._pair(other)
        return a._terms == b._terms

    def residual_vs(self, other: "OperatorSum") -> float:
        """Largest coefficient deviation, as a float."""
        a, b = self.as_numeric(), other.as_numeric()
        keys = set(a._terms) | set(b._terms)
        return max(
            (abs(a.coefficient(k) - b.coefficient(k)) for k in keys), default=0.0
        )

    def norm_bound(self) -> float:
        """Triangle-inequality bound: every monomial has operator norm 1."""
        return sum(
            abs(c.to_complex() if self.exact else c) for c in self._terms.values()
        )

    # -- serialization -------------------------------------------------------

    def to_json_terms(self) -> list[dict]:
        out = []
        for sig, c in self.terms():
            cval = c.to_complex() if self.exact else c
            edges = []
            for i, e in enumerate(self.alg.edges):
                gi, ci = sig[2 * i], sig[2 * i + 1]
                if gi or ci:
                    edges.append(
                        {
                            "edge": [e.direction, e.x, e.y],
                            "g": list(self.alg.elements[gi].residues),
                            "chi": list(self.alg.characters[ci].residues),
                        }
                    )
            out.append({"coeff_re": cval.real, "coeff_im": cval.imag, "edges": edges})
        return out

    def __repr__(self) -> str:
        mode = "exact" if self.exact else "numeric"
        return f"OperatorSum({self.n_terms} terms, {mode})"


# -- model identities ------------------------------------------------------


def hamiltonian_twist(alg: OperatorAlgebra, gamma: SiteConfig, omega: SiteConfig | None = None) -> OperatorSum:
    """F* H F - H for the unitary F implementing gamma."""
    f = alg.gamma_unitary(gamma)
    h = alg.hamiltonian(omega)
    return f.adjoint() * h * f - h


def expected_twist(alg: OperatorAlgebra, gamma: SiteConfig, omega: SiteConfig | None = None) -> OperatorSum:
    """The cocycle form of the twist: sum over interior support sites of
    P_w^{omega(w)} - P_w^{omega(w) gamma(w)}."""
    omega = omega if omega is not None else SiteConfig.neutral(alg.spec)
    out = alg.zero()
    for w in gamma.support:
        if not alg.patch.is_interior(w):
            continue
        before = omega.value(w)
        after = before * gamma.value(w)
        out = out + alg.site_projector(w, before) - alg.site_projector(w, after)
    return out


@dataclass
class RelationCheck:
    name: str
    ok: bool
    detail: str = ""


def verify_relation_suite(alg: OperatorAlgebra, max_pairs: int | None = None) -> list[RelationCheck]:
    """Exhaustive exact checks of the generator relations on a patch:
    single-edge exchange, operator orders, commutativity of all interior
    vertex/face operators, projector algebra, and the ribbon exchange
    relations for a generated family of ribbons."""
    checks: list[RelationCheck] = []
    spec = alg.spec
    n = alg.n
    ident = alg.identity()

    def record(name, ok, detail=""):
        checks.append(RelationCheck(name, bool(ok), detail))

    # single-edge exchange and orders
    e0 = alg.edges[0]
    for g in alg.elements:
        for chi in alg.characters:
            t, m = alg.edge_translation(e0, g), alg.edge_character(e0, chi)
            phase = Cyclo.root(alg.L, pairing_exponent(chi, g.inverse()))
            record(
                f"exchange[{g},{chi}]",
                t * m == (m * t).scale(phase),
            )
    t_pow = alg.identity()
    m_pow = alg.identity()
    g1, x1 = alg.elements[-1], alg.characters[-1]
    for _ in range(n):
        t_pow = t_pow * alg.edge_translation(e0, g1)
        m_pow = m_pow * alg.edge_character(e0, x1)
    record("edge order T^n = 1", t_pow == ident)
    record("edge order M^n = 1", m_pow == ident)

    # interior vertex/face operators
    ops = []
    for v in alg.patch.interior_vertices():
        for g in alg.elements:
            if not g.is_neutral:
                ops.append((f"A[{v},{g}]", alg.vertex_operator(v, g)))
    for f in alg.patch.interior_faces():
        for chi in alg.characters:
            if not chi.is_neutral:
                ops.append((f"B[{f},{chi}]", alg.face_operator(f, chi)))

    for v in alg.patch.interior_vertices():
        op = alg.identity()
        for _ in range(n):
            op = op * alg.vertex_operator(v, g1)
        record(f"(A[{v}])^n = 1", op == ident)
    for f in alg.patch.interior_faces():
        op = alg.identity()
        for _ in range(n):
            op = op * alg.face_operator(f, x1)
        record(f"(B[{f}])^n = 1", op == ident)

    pairs = [
        (i, j) for i in range(len(ops)) for j in range(i + 1, len(ops))
    ]
    if max_pairs is not None:
        pairs = pairs[:max_pairs]
    bad = 0
    for i, j in pairs:
        if not (ops[i][1].commutator(ops[j][1])).is_zero():
            bad += 1
            record(f"[{ops[i][0]},{ops[j][0]}] = 0", False)
    record(f"all {len(pairs)} interior commutators vanish", bad == 0)

    # projector family at one interior site of each kind
    for w in (alg.patch.interior_vertices() or [None])[:1] + alg.patch.interior_faces()[:1]:
        if w is None:
            continue
        labels = alg.characters if w.kind == VERTEX else alg.elements
        projs = [alg.site_projector(w, lab) for lab in labels]
        total = alg.zero()
        ok_idem = ok_orth = ok_adj = True
        for a, pa in enumerate(projs):
            total = total + pa
            ok_idem &= pa * pa == pa
            ok_adj &= pa.adjoint() == pa
            for b in range(a + 1, len(projs)):
                ok_orth &= (pa * projs[b]).is_zero()
        record(f"projectors at {w} idempotent", ok_idem)
        record(f"projectors at {w} self-adjoint", ok_adj)
        record(f"projectors at {w} orthogonal", ok_orth)
        record(f"projectors at {w} resolve identity", total == ident)

    # ribbon exchange relations on a small generated family
    ribbons = _sample_ribbons(alg.patch)
    for rho in ribbons:
        if rho.lattice == DIRECT:
            sites = alg.patch.interior_vertices()
            labels = [c for c in alg.characters if not c.is_neutral]
        else:
            sites = alg.patch.interior_faces()
            labels = [g for g in alg.elements if not g.is_neutral]
        for w in sites:
            signs = ribbon_site_signs(rho, w)
            for lab in labels[:2]:
                frho = alg.ribbon_operator(rho, lab)
                if rho.lattice == DIRECT:
                    other = alg.vertex_operator(w, g1)
                    expo = pairing_exponent(lab, g1) * sum(signs)
                else:
                    other = alg.face_operator(w, x1)
                    expo = pairing_exponent(x1, lab) * sum(signs)
                phase = Cyclo.root(alg.L, expo)
                lhs = other * frho if rho.lattice == DIRECT else frho * other
                rhs = (frho * other if rho.lattice == DIRECT else other * frho).scale(phase)
                record(
                    f"ribbon exchange {rho.lattice} {rho.start}->{rho.end} at {w}",
                    lhs == rhs,
                )
    return checks


def _sample_ribbons(patch: LatticePatch) -> list[Ribbon]:
    w, h = patch.width, patch.height
    out = [
        find_ribbon(vertex(0, 0), vertex(w, 0), patch),
        find_ribbon(vertex(w, h), vertex(0, 0), patch),
        find_ribbon(vertex(0, h), vertex(w, 0), patch),
    ]
    if w >= 2 and h >= 2:
        out.append(find_ribbon(vertex(1, 1), vertex(w - 1, h - 1), patch))
    out.append(find_ribbon(face(0, 0), face(w - 1, h - 1), patch))
    if h >= 2:
        out.append(find_ribbon(face(0, h - 1), face(w - 1, 0), patch))
    return out


def random_operator(alg, rng, n_edges=2, n_terms=3, edges=None, exact=True, span=3):
    """Seeded random operator for verification suites: a few monomials on
    a small set of edges, with Gaussian-integer coefficients in exact mode
    or complex floats otherwise."""
    pool = list(edges if edges is not None else alg.edges)
    chosen = [pool[rng.randrange(len(pool))] for _ in range(n_edges)]
    out = alg.zero(exact)
    for _ in range(n_terms):
        labels = {}
        for e in chosen:
            g = alg.elements[rng.randrange(alg.n)]
            chi = alg.characters[rng.randrange(alg.n)]
            labels[e] = (g, chi)
        if exact:
            coeff = Cyclo.gauss(
                alg.L,
                Fraction(rng.randrange(-span, span + 1)),
                Fraction(rng.randrange(-span, span + 1)),
            )
        else:
            coeff = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        out = out + alg.monomial(labels, coeff, exact)
    return out
