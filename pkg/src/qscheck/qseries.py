"""q-integers, q-shifted factorials, and truncated basic hypergeometric sums.

Everything returns exact canonical RationalFunc values.  Series are built by
term-ratio accumulation on unreduced numerator/denominator pairs, with one
normalization at the end; the k-th/(k-1)-th term ratio of the series
sum_k  prod(a_i; q^s)_k / [(q^s; q^s)_k prod(b_j; q^s)_k] * z^k
is a product of linear-in-q^s factors, so no factorial-sized intermediate
objects ever appear.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import IdenticallyZeroDenominator, ParameterDomain
from .laurent import LaurentPoly
from .ratfunc import RationalFunc, normalize


def q_integer(n: int) -> LaurentPoly:
    """1 + q + ... + q^(n-1)."""
    if n < 1:
        raise ParameterDomain("q_integer needs n >= 1")
    return LaurentPoly.from_coeffs([1] * n)


@dataclass(frozen=True)
class QPochSpec:
    x: RationalFunc
    step: int
    count: int

    def __post_init__(self):
        if self.step < 1:
            raise ParameterDomain("pochhammer step must be >= 1")
        if self.count < 0:
            raise ParameterDomain("pochhammer count must be >= 0")


def q_pochhammer(spec: QPochSpec) -> RationalFunc:
    """prod_{j=0}^{count-1} (1 - x * q^(step*j))."""
    xn, xd = spec.x.num, spec.x.den
    num = LaurentPoly.one()
    den = LaurentPoly.one()
    for j in range(spec.count):
        num = num * (xd - xn.shift(spec.step * j))
        den = den * xd
    return normalize(num, den)


@dataclass(frozen=True)
class SeriesSpec:
    upper_params: tuple
    lower_params: tuple
    step: int
    argument: RationalFunc
    truncation: int

    def __post_init__(self):
        object.__setattr__(self, "upper_params", tuple(self.upper_params))
        object.__setattr__(self, "lower_params", tuple(self.lower_params))
        if self.step < 1:
            raise ParameterDomain("series step must be >= 1")
        if self.truncation < 0:
            raise ParameterDomain("series truncation must be >= 0")


def _vanishing_offset(param: RationalFunc, step: int, limit: int):
    """j with param == q^(-step*j), 0 <= j < limit, or None."""
    if not param.is_poly():
        return None
    terms = param.num.terms
    if len(terms) != 1:
        return None
    (e, c), = terms.items()
    if c != 1 or e > 0 or e % step:
        return None
    j = (-e) // step
    return j if j < limit else None


def truncated_phi(spec: SeriesSpec) -> RationalFunc:
    """Exact value of the truncated series; denominators must stay nonzero."""
    for b in spec.lower_params:
        j = _vanishing_offset(b, spec.step, spec.truncation)
        if j is not None:
            raise IdenticallyZeroDenominator(
                f"lower parameter q^(-{spec.step}*{j}) kills the series")
    s = spec.step
    zn, zd = spec.argument.num, spec.argument.den
    ups = [(p.num, p.den) for p in spec.upper_params]
    los = [(p.num, p.den) for p in spec.lower_params]
    num = LaurentPoly.one()
    den = LaurentPoly.one()
    for k in range(spec.truncation, 0, -1):
        ratio_n = zn
        ratio_d = zd * (LaurentPoly.one() - LaurentPoly.q_power(s * k))
        for an, ad in ups:
            ratio_n = ratio_n * (ad - an.shift(s * (k - 1)))
            ratio_d = ratio_d * ad
        for bn, bd in los:
            ratio_d = ratio_d * (bd - bn.shift(s * (k - 1)))
            ratio_n = ratio_n * bd
        num, den = ratio_d * den + ratio_n * num, ratio_d * den
    return normalize(num, den)


def phi_series(upper: Sequence, lower: Sequence, step: int,
               argument, truncation: int) -> RationalFunc:
    """Convenience wrapper coercing scalars/polys into RationalFunc."""
    def rf(x):
        return x if isinstance(x, RationalFunc) else RationalFunc.of(x)
    return truncated_phi(SeriesSpec(
        tuple(rf(x) for x in upper), tuple(rf(x) for x in lower),
        step, rf(argument), truncation))
