"""Exact evaluation engine for identity checking at fixed rational parameters.

A polynomial P in q with integer coefficients is represented by its value
P(2^W) together with a degree bound and an L1 bound on its coefficients.
Ring operations on these values are ordinary big-integer arithmetic and agree
exactly with the polynomial operations; the L1 bound is submultiplicative,
so it follows along at integer cost.  Two polynomials whose coefficient
bounds stay below 2^(W-2) are equal iff their values agree, because balanced
base-2^W digit expansions are unique; an equality decided this way is an
exact statement about elements of Q[q], not a sampled or modular one.

Rational scalar content is carried separately as an integer denominator.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd


class NeedWidth(Exception):
    """Internal: the current width cannot certify the pending decision."""

    def __init__(self, bits: int):
        super().__init__(f"packed width too small for {bits} coefficient bits")
        self.bits = bits


class PoleHit(Exception):
    """Internal: a denominator vanished at this grid point.

    `variable` optionally names the grid variable to blame, so a pole baked
    into an outer tuple is skipped at that level instead of burning through
    every inner candidate first.
    """

    def __init__(self, variable: str | None = None):
        super().__init__(variable or "denominator vanished")
        self.variable = variable


class PackedVal:
    __slots__ = ("val", "den", "deg", "l1")

    def __init__(self, val: int, den: int, deg: int, l1: int):
        self.val = val
        self.den = den
        self.deg = deg
        self.l1 = l1


class PackedCtx:
    """All values created through one context share the same width."""

    __slots__ = ("width",)

    def __init__(self, width: int):
        if width < 8:
            raise ValueError("width must be at least 8")
        self.width = width

    # -- constructors -------------------------------------------------------

    def const(self, c) -> PackedVal:
        if type(c) is not Fraction:
            c = Fraction(c)
        n, d = c.numerator, c.denominator
        return PackedVal(n, d, 0, abs(n))

    def one(self) -> PackedVal:
        return PackedVal(1, 1, 0, 1)

    def monomial(self, c, e: int) -> PackedVal:
        """c * q^e with e >= 0 and rational c."""
        if e < 0:
            raise ValueError("monomial exponent must be nonnegative")
        if type(c) is not Fraction:
            c = Fraction(c)
        n, d = c.numerator, c.denominator
        return PackedVal(n << (self.width * e), d, e, abs(n))

    def linear(self, c0, c1, e: int) -> PackedVal:
        """c0 + c1 * q^e, rational coefficients, e > 0."""
        if e <= 0:
            raise ValueError("linear factor exponent must be positive")
        if type(c0) is not Fraction:
            c0 = Fraction(c0)
        if type(c1) is not Fraction:
            c1 = Fraction(c1)
        d = (c0.denominator * c1.denominator) // _igcd(c0.denominator,
                                                       c1.denominator)
        n0 = c0.numerator * (d // c0.denominator)
        n1 = c1.numerator * (d // c1.denominator)
        return PackedVal(n0 + (n1 << (self.width * e)), d, e,
                         abs(n0) + abs(n1))

    # -- ring operations ----------------------------------------------------

    def mul(self, a: PackedVal, b: PackedVal) -> PackedVal:
        if a.val == 0 or b.val == 0:
            return PackedVal(0, 1, 0, 0)
        if a.deg == 0 and a.val == 1 and a.den == 1:
            return b
        if b.deg == 0 and b.val == 1 and b.den == 1:
            return a
        return PackedVal(a.val * b.val, a.den * b.den, a.deg + b.deg,
                         a.l1 * b.l1)

    def add(self, a: PackedVal, b: PackedVal) -> PackedVal:
        if a.val == 0:
            return b
        if b.val == 0:
            return a
        if a.den == b.den:
            return PackedVal(a.val + b.val, a.den, max(a.deg, b.deg),
                             a.l1 + b.l1)
        return PackedVal(a.val * b.den + b.val * a.den, a.den * b.den,
                         max(a.deg, b.deg), a.l1 * b.den + b.l1 * a.den)

    def sub(self, a: PackedVal, b: PackedVal) -> PackedVal:
        return self.add(a, self.neg(b))

    def neg(self, a: PackedVal) -> PackedVal:
        return PackedVal(-a.val, a.den, a.deg, a.l1)

    def scale(self, a: PackedVal, c) -> PackedVal:
        if type(c) is not Fraction:
            c = Fraction(c)
        if c == 0 or a.val == 0:
            return PackedVal(0, 1, 0, 0)
        return PackedVal(a.val * c.numerator, a.den * c.denominator, a.deg,
                         a.l1 * abs(c.numerator))

    def pow(self, a: PackedVal, n: int) -> PackedVal:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, a)
        return out

    # -- decisions ----------------------------------------------------------

    def is_zero(self, a: PackedVal) -> bool:
        if a.val != 0:
            return False
        if a.l1.bit_length() <= self.width - 2:
            return True
        raise NeedWidth(a.l1.bit_length() + 2)

    def equal_fractions(self, n1: PackedVal, d1: PackedVal,
                        n2: PackedVal, d2: PackedVal) -> bool:
        """Exact equality of n1/d1 and n2/d2 as rational functions of q."""
        if self.is_zero(d1) or self.is_zero(d2):
            raise PoleHit
        a = self.mul(n1, d2)
        b = self.mul(n2, d1)
        safety = (a.l1 * b.den + b.l1 * a.den).bit_length()
        if safety > self.width - 2:
            raise NeedWidth(safety + 2)
        return a.val * b.den == b.val * a.den

    # -- rational pairs -----------------------------------------------------

    def pair_one(self) -> "PackedPair":
        return PackedPair(self, self.one(), self.one(), 0)

    def pair_const(self, c) -> "PackedPair":
        return PackedPair(self, self.const(c), self.one(), 0)

    def pair_monomial(self, c, e: int) -> "PackedPair":
        """c * q^e with any integer e; negative powers go into the shift."""
        return PackedPair(self, self.const(c), self.one(), e)

    def pair_factor(self, c, e: int) -> "PackedPair":
        """1 - c * q^e with any integer e."""
        c = Fraction(c)
        if e > 0:
            return PackedPair(self, self.linear(1, -c, e), self.one(), 0)
        if e == 0:
            return PackedPair(self, self.const(1 - c), self.one(), 0)
        # q^e * (q^-e - c)
        return PackedPair(self, self.linear(-c, 1, -e), self.one(), e)


class PackedPair:
    """Quotient of two packed polynomials times a power of q.

    Denominators accumulate and are never cancelled; every component stays an
    honest polynomial evaluation, so comparisons remain exact.  The shift
    keeps negative q-powers out of the packed values themselves.
    """

    __slots__ = ("ctx", "num", "den", "shift")

    def __init__(self, ctx: PackedCtx, num: PackedVal, den: PackedVal,
                 shift: int = 0):
        self.ctx = ctx
        self.num = num
        self.den = den
        self.shift = shift

    @staticmethod
    def _is_unit(v: PackedVal) -> bool:
        # deg bound 0 plus value 1 proves the polynomial is the constant 1
        return v.deg == 0 and v.val == 1 and v.den == 1

    def mul(self, other: "PackedPair") -> "PackedPair":
        ctx = self.ctx
        if self._is_unit(other.den):
            den = self.den
        elif self._is_unit(self.den):
            den = other.den
        else:
            den = ctx.mul(self.den, other.den)
        return PackedPair(ctx, ctx.mul(self.num, other.num), den,
                          self.shift + other.shift)

    def div(self, other: "PackedPair") -> "PackedPair":
        ctx = self.ctx
        if ctx.is_zero(other.num):
            raise PoleHit
        return PackedPair(ctx, ctx.mul(self.num, other.den),
                          ctx.mul(self.den, other.num),
                          self.shift - other.shift)

    def neg(self) -> "PackedPair":
        return PackedPair(self.ctx, self.ctx.neg(self.num), self.den,
                          self.shift)

    def add(self, other: "PackedPair") -> "PackedPair":
        ctx = self.ctx
        s = min(self.shift, other.shift)
        n1, n2 = self.num, other.num
        if self.shift > s:
            n1 = ctx.mul(n1, ctx.monomial(1, self.shift - s))
        if other.shift > s:
            n2 = ctx.mul(n2, ctx.monomial(1, other.shift - s))
        if self.den is other.den:
            # identical object, hence identical polynomial: skip the cross
            # multiplication entirely
            return PackedPair(ctx, ctx.add(n1, n2), self.den, s)
        if self._is_unit(other.den):
            num = ctx.add(n1, ctx.mul(n2, self.den))
            return PackedPair(ctx, num, self.den, s)
        if self._is_unit(self.den):
            num = ctx.add(ctx.mul(n1, other.den), n2)
            return PackedPair(ctx, num, other.den, s)
        num = ctx.add(ctx.mul(n1, other.den), ctx.mul(n2, self.den))
        return PackedPair(ctx, num, ctx.mul(self.den, other.den), s)

    def sub(self, other: "PackedPair") -> "PackedPair":
        return self.add(other.neg())

    def is_zero(self) -> bool:
        ctx = self.ctx
        if ctx.is_zero(self.den):
            raise PoleHit
        return ctx.is_zero(self.num)

    def equal(self, other: "PackedPair") -> bool:
        return self.sub(other).is_zero()
