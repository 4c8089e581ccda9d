"""Canonical rational functions in q.

Representation: num/den with den a monic polynomial of min_exp 0 sharing no
factor with num; any q-power and rational content live in num.  Two equal
values therefore have identical representations, and __eq__ is a plain
structural comparison.
"""

from __future__ import annotations

from fractions import Fraction

from . import laurent
from .errors import DivisionByZeroPoly, DivisionByZeroRF, PoleAtPoint
from .laurent import LaurentPoly

_ONE_LP = LaurentPoly.one()


class RationalFunc:
    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly, _trusted: bool = False):
        if not _trusted:
            r = normalize(num, den)
            num, den = r.num, r.den
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunc is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def _make(cls, num: LaurentPoly, den: LaurentPoly) -> "RationalFunc":
        return cls(num, den, _trusted=True)

    @classmethod
    def zero(cls) -> "RationalFunc":
        return cls._make(LaurentPoly.zero(), _ONE_LP)

    @classmethod
    def one(cls) -> "RationalFunc":
        return cls._make(_ONE_LP, _ONE_LP)

    @classmethod
    def const(cls, c) -> "RationalFunc":
        c = Fraction(c)
        return cls._make(LaurentPoly.const(c), _ONE_LP) if c else cls.zero()

    @classmethod
    def q(cls, e: int = 1) -> "RationalFunc":
        return cls._make(LaurentPoly.q_power(e), _ONE_LP)

    @classmethod
    def of(cls, num, den=None) -> "RationalFunc":
        """Build from polynomials / scalars with full normalization."""
        if not isinstance(num, LaurentPoly):
            num = LaurentPoly.const(num)
        if den is None:
            den = _ONE_LP
        elif not isinstance(den, LaurentPoly):
            den = LaurentPoly.const(den)
        return normalize(num, den)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den == _ONE_LP

    def __bool__(self) -> bool:
        return not self.num.is_zero()

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, LaurentPoly)):
            return self.den == _ONE_LP and self.num == other
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RationalFunc(num={self.num!r}, den={self.den!r})"

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other) -> "RationalFunc":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d1 == d2:
            num = n1 + n2
            if num.is_zero():
                return RationalFunc.zero()
            return _cancel(num, d1)
        if d1 == _ONE_LP:
            return RationalFunc._make(n1 * d2 + n2, d2)
        if d2 == _ONE_LP:
            return RationalFunc._make(n1 + n2 * d1, d1)
        g, c1, c2 = laurent.gcd_cofactors(d1, d2)
        if g == _ONE_LP:
            return RationalFunc._make(n1 * d2 + n2 * d1, d1 * d2)
        # c1 = d1/g, c2 = d2/g; any common factor of the sum sits inside g
        num = n1 * c2 + n2 * c1
        if num.is_zero():
            return RationalFunc.zero()
        den = c1 * d2
        h, num_r, _ = laurent.gcd_cofactors(num, g)
        if h == _ONE_LP:
            return RationalFunc._make(num, den)
        den_r = laurent.exact_div(den.shift(-den.min_exp), h)
        return RationalFunc._make(num_r, den_r)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunc":
        return RationalFunc._make(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunc":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "RationalFunc":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return RationalFunc.zero()
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        # cross-cancel so the final pair is coprime without one giant gcd
        if d2 != _ONE_LP:
            _, n1, d2 = laurent.gcd_cofactors(n1, d2)
        if d1 != _ONE_LP:
            _, n2, d1 = laurent.gcd_cofactors(n2, d1)
        num = n1 * n2
        den = d1 * d2
        lead = den.leading_coeff() if not den.is_zero() else Fraction(1)
        if lead != 1:
            num = num * (1 / lead)
            den = den * (1 / lead)
        return RationalFunc._make(num, den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunc":
        if self.num.is_zero():
            raise DivisionByZeroRF("inverse of zero")
        num, den = self.den, self.num
        s = den.min_exp
        if s:
            den = den.shift(-s)
            num = num.shift(-s)
        lead = den.leading_coeff()
        if lead != 1:
            num = num * (1 / lead)
            den = den * (1 / lead)
        return RationalFunc._make(num, den)

    def __truediv__(self, other) -> "RationalFunc":
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.num.is_zero():
            raise DivisionByZeroRF("division by zero rational function")
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int) -> "RationalFunc":
        n = int(n)
        if n == 0:
            return RationalFunc.one()
        if n < 0:
            return self.inverse() ** (-n)
        # coprime num/den stay coprime under powers; no re-normalization
        return RationalFunc._make(self.num ** n, self.den ** n)

    # -- evaluation and substitution ----------------------------------------

    def eval(self, x) -> Fraction:
        x = Fraction(x)
        dv = self.den.eval(x)
        if dv == 0:
            raise PoleAtPoint(f"denominator vanishes at {x}")
        return self.num.eval(x) / dv

    def subst_power(self, s: int) -> "RationalFunc":
        """q -> q**s for nonzero integer s; coprimality survives, so only
        the shift/monic conventions need repair."""
        s = int(s)
        if s == 0:
            raise ValueError("substitution exponent must be nonzero")
        if s == 1:
            return self
        num = self.num.subst_power(s)
        den = self.den.subst_power(s)
        if num.is_zero():
            return RationalFunc.zero()
        sh = den.min_exp
        if sh:
            den = den.shift(-sh)
            num = num.shift(-sh)
        lead = den.leading_coeff()
        if lead != 1:
            num = num * (1 / lead)
            den = den * (1 / lead)
        return RationalFunc._make(num, den)

    # -- serialization ------------------------------------------------------

    def to_obj(self) -> dict:
        return {"num": self.num.to_pairs(), "den": self.den.to_pairs()}

    @classmethod
    def from_obj(cls, obj) -> "RationalFunc":
        return cls(LaurentPoly.from_pairs(obj["num"]),
                   LaurentPoly.from_pairs(obj["den"]))


def _coerce(x) -> RationalFunc | None:
    if isinstance(x, RationalFunc):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunc.const(x)
    if isinstance(x, LaurentPoly):
        return RationalFunc.of(x)
    return None


def _cancel(num: LaurentPoly, den: LaurentPoly) -> RationalFunc:
    """Canonicalize num/den when den is already monic with min_exp 0."""
    g, cn, cd = laurent.gcd_cofactors(num, den)
    if g == _ONE_LP:
        return RationalFunc._make(num, den)
    lead = cd.leading_coeff()
    if lead != 1:
        cn = cn * (1 / lead)
        cd = cd * (1 / lead)
    return RationalFunc._make(cn, cd)


def normalize(num, den) -> RationalFunc:
    """Canonical rational function num/den; the only full-gcd entry point."""
    if not isinstance(num, LaurentPoly):
        num = LaurentPoly.const(num)
    if not isinstance(den, LaurentPoly):
        den = LaurentPoly.const(den)
    if den.is_zero():
        raise DivisionByZeroPoly("zero denominator")
    if num.is_zero():
        return RationalFunc.zero()
    s = den.min_exp
    if s:
        den = den.shift(-s)
        num = num.shift(-s)
    g, cn, cd = laurent.gcd_cofactors(num, den)
    lead = cd.leading_coeff()
    if lead != 1:
        cn = cn * (1 / lead)
        cd = cd * (1 / lead)
    return RationalFunc._make(cn, cd)
