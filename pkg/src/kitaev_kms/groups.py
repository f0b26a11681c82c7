"""Finite abelian groups G = prod Z_{n_i}, their duals, and the pairing.

The dual group is identified with G through the same residue vectors
(canonical for products of cyclic groups), so both group elements and
characters are residue vectors; they are kept as distinct types because
they play different roles (translations vs phases).  Index 0 of every
enumeration is the neutral element; block conventions downstream rely
on that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product

from .cyclotomic import Cyclo
from .errors import SizeGuardError, SpecMismatchError

ENUMERATION_GUARD = 10**6


@dataclass(frozen=True)
class GroupSpec:
    """Product of cyclic groups with orders n_1..n_k, each >= 2."""

    orders: tuple[int, ...]

    def __post_init__(self):
        if not self.orders:
            raise ValueError("group must have at least one cyclic factor")
        if any(n < 2 for n in self.orders):
            raise ValueError(f"cyclic orders must be >= 2, got {self.orders}")
        object.__setattr__(self, "orders", tuple(int(n) for n in self.orders))

    @property
    def order(self) -> int:
        return math.prod(self.orders)

    @property
    def scalar_order(self) -> int:
        """Cyclotomic order for exact phases; padded so that i is available."""
        return math.lcm(4, *self.orders)

    def neutral_element(self) -> "GroupElement":
        return GroupElement(self, (0,) * len(self.orders))

    def neutral_character(self) -> "Character":
        return Character(self, (0,) * len(self.orders))

    def element(self, residues) -> "GroupElement":
        return GroupElement(self, tuple(residues))

    def character(self, residues) -> "Character":
        return Character(self, tuple(residues))

    def elements(self) -> list["GroupElement"]:
        """All group elements, lexicographic, neutral first."""
        self._guard()
        return [GroupElement(self, r) for r in product(*(range(n) for n in self.orders))]

    def characters(self) -> list["Character"]:
        self._guard()
        return [Character(self, r) for r in product(*(range(n) for n in self.orders))]

    def _guard(self) -> None:
        if self.order > ENUMERATION_GUARD:
            raise SizeGuardError(f"|G| = {self.order} exceeds enumeration guard {ENUMERATION_GUARD}")

    def __repr__(self) -> str:
        return "Z" + "xZ".join(str(n) for n in self.orders)


class _ResidueVector:
    """Componentwise arithmetic mod the cyclic orders."""

    __slots__ = ()

    spec: GroupSpec
    residues: tuple[int, ...]

    def _like(self, residues):
        return type(self)(self.spec, tuple(residues))

    def __mul__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if other.spec != self.spec:
            raise SpecMismatchError(f"cannot compose {self.spec} with {other.spec}")
        return self._like(
            (a + b) % n for a, b, n in zip(self.residues, other.residues, self.spec.orders)
        )

    def inverse(self):
        return self._like((-a) % n for a, n in zip(self.residues, self.spec.orders))

    def __pow__(self, k: int):
        return self._like((a * k) % n for a, n in zip(self.residues, self.spec.orders))

    @property
    def is_neutral(self) -> bool:
        return not any(self.residues)


@dataclass(frozen=True)
class GroupElement(_ResidueVector):
    spec: GroupSpec
    residues: tuple[int, ...]

    def __post_init__(self):
        _normalize(self)

    def __repr__(self) -> str:
        return "g" + str(list(self.residues))


@dataclass(frozen=True)
class Character(_ResidueVector):
    spec: GroupSpec
    residues: tuple[int, ...]

    def __post_init__(self):
        _normalize(self)

    def __call__(self, g: GroupElement) -> Cyclo:
        return pairing(self, g)

    def __repr__(self) -> str:
        return "chi" + str(list(self.residues))


def _normalize(rv) -> None:
    if len(rv.residues) != len(rv.spec.orders):
        raise SpecMismatchError(
            f"residue vector of length {len(rv.residues)} for {rv.spec}"
        )
    object.__setattr__(
        rv, "residues", tuple(int(a) % n for a, n in zip(rv.residues, rv.spec.orders))
    )


def pairing_exponent(chi: Character, g: GroupElement) -> int:
    """Exponent k such that <chi, g> = zeta_L^k with L = spec.scalar_order."""
    if chi.spec != g.spec:
        raise SpecMismatchError(f"pairing across {chi.spec} and {g.spec}")
    L = chi.spec.scalar_order
    return sum(c * a * (L // n) for c, a, n in zip(chi.residues, g.residues, chi.spec.orders)) % L


def pairing(chi: Character, g: GroupElement) -> Cyclo:
    """The natural pairing <chi, g> = exp(2 pi i sum_j chi_j g_j / n_j), exact."""
    return Cyclo.root(chi.spec.scalar_order, pairing_exponent(chi, g))
