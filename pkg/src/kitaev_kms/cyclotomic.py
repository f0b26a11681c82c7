"""Exact scalars in the cyclotomic field Q(zeta_L).

All operator phases produced by the edge algebra are L-th roots of unity
(L = lcm of the cyclic orders, padded to a multiple of 4 so that i is in
the field), and coefficients are rational combinations of them.  Working
in Q(zeta_L) keeps every generator relation an exact identity; numbers
only become floats at the reporting boundary.

Elements are stored in the power basis 1, zeta, ..., zeta^(phi(L)-1),
reduced modulo the L-th cyclotomic polynomial, so the representation is
canonical and equality is coefficient equality.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree, computed by exact division
    of x^n - 1 by the Phi_d with d a proper divisor of n."""
    if n < 1:
        raise ValueError(f"cyclotomic order must be >= 1, got {n}")
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    # long division of integer polynomials with monic divisor; remainder must vanish
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for k in range(len(num) - 1 - dd, -1, -1):
        c = num[k + dd]
        out[k] = c
        if c:
            for j, dj in enumerate(den):
                num[k + j] -= c * dj
    if any(num[: dd]):
        raise ArithmeticError("non-exact polynomial division")
    return out


@lru_cache(maxsize=None)
def _power_table(order: int) -> tuple[tuple[Fraction, ...], ...]:
    """zeta_order^k reduced mod Phi_order, for k in [0, 2*order)."""
    phi_poly = cyclotomic_polynomial(order)
    deg = len(phi_poly) - 1
    # zeta^deg = -(phi_0 + phi_1 zeta + ... ) since Phi is monic
    top = tuple(Fraction(-c) for c in phi_poly[:deg])
    rows: list[tuple[Fraction, ...]] = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(2 * order):
        rows.append(tuple(cur))
        carry = cur[deg - 1]
        cur = [Fraction(0)] + cur[: deg - 1]
        if carry:
            cur = [c + carry * t for c, t in zip(cur, top)]
    return tuple(rows)


class Cyclo:
    """An element of Q(zeta_order), canonical in the reduced power basis."""

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: tuple[Fraction, ...]):
        self.order = order
        self.coeffs = coeffs

    # -- constructors ------------------------------------------------

    @staticmethod
    def zero(order: int) -> "Cyclo":
        deg = len(cyclotomic_polynomial(order)) - 1
        return Cyclo(order, (Fraction(0),) * deg)

    @staticmethod
    def rational(order: int, value) -> "Cyclo":
        z = Cyclo.zero(order)
        c = list(z.coeffs)
        c[0] = Fraction(value)
        return Cyclo(order, tuple(c))

    @staticmethod
    def one(order: int) -> "Cyclo":
        return Cyclo.rational(order, 1)

    @staticmethod
    def root(order: int, k: int) -> "Cyclo":
        """zeta_order^k."""
        return Cyclo(order, _power_table(order)[k % order])

    @staticmethod
    def gauss(order: int, re, im=0) -> "Cyclo":
        """re + im*i; requires 4 | order."""
        if order % 4:
            raise ValueError("need 4 | order for a Gaussian rational")
        out = Cyclo.rational(order, re)
        if im:
            out = out + Fraction(im) * Cyclo.root(order, order // 4)
        return out

    # -- ring operations ---------------------------------------------

    def _check(self, other: "Cyclo") -> None:
        if self.order != other.order:
            raise ValueError(f"cyclotomic order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.rational(self.order, other)
        self._check(other)
        return Cyclo(self.order, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclo(self.order, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclo.rational(self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            return Cyclo(self.order, tuple(q * a for a in self.coeffs))
        self._check(other)
        deg = len(self.coeffs)
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        conv[i + j] += a * b
        table = _power_table(self.order)
        out = list(conv[:deg]) + [Fraction(0)] * (deg - len(conv[:deg]))
        for k in range(deg, len(conv)):
            ck = conv[k]
            if ck:
                row = table[k]
                out = [o + ck * r for o, r in zip(out, row)]
        return Cyclo(self.order, tuple(out))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        if isinstance(other, Cyclo) and other.is_rational():
            return self * (Fraction(1) / other.as_fraction())
        raise TypeError("division only by rationals")

    def conjugate(self) -> "Cyclo":
        table = _power_table(self.order)
        out = [Fraction(0)] * len(self.coeffs)
        for j, a in enumerate(self.coeffs):
            if a:
                row = table[(-j) % self.order]
                out = [o + a * r for o, r in zip(out, row)]
        return Cyclo(self.order, tuple(out))

    # -- queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self) -> bool:
        return not self.is_zero()

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        return sum(
            float(a) * cmath.exp(2j * cmath.pi * k / self.order)
            for k, a in enumerate(self.coeffs)
            if a
        ) + 0j

    __complex__ = to_complex

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Cyclo.rational(self.order, other)
        if not isinstance(other, Cyclo):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.order, self.coeffs))

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for k, a in enumerate(self.coeffs):
            if not a:
                continue
            parts.append(str(a) if k == 0 else f"{a}*z{self.order}^{k}")
        return " + ".join(parts)
