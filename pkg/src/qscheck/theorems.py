"""Truncated cubic-weight series congruences and their parametric deformations.

The core pair of checks compares a truncated sum with cubed pochhammer
weights against a closed form, modulo a power of a cyclotomic polynomial.
The deformed variants reintroduce one or two free parameters; those are
verified as exact rational-function identities on certified grids, one grid
per freed parameter, with each specialization leg covering one factor of the
composite modulus.  The limit checks tie the deformed closed form back to
the undeformed one by a second-order vanishing argument at the degenerate
parameter value.

Series are assembled by a right-to-left numerator/denominator recurrence so
that only one canonicalization happens per side; the same sums are also
reachable through the generic series builder, and tests hold the two routes
against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .cyclotomic import Verdict, congruent_mod_cyclotomic
from .errors import ParameterDomain
from .laurent import LaurentPoly
from .packedeval import PackedCtx, PackedPair
from .pit import (BoundLedger, GridSpec, degree_bound, exclude_values,
                  generate_grid, nested_grid_check)
from .qseries import QPochSpec, SeriesSpec, q_integer, q_pochhammer, truncated_phi
from .ratfunc import RationalFunc

__all__ = [
    "ThmCase", "bracket_base", "thm_a_sides", "thm_b_sides", "thm_congruence",
    "sides_at_one", "degenerate_profile", "thm_c_bounds", "thm_c_check",
    "wei_bounds", "wei_chain_check", "lhopital_bounds", "lhopital_check",
]

_ONE = LaurentPoly.one()


# ---------------------------------------------------------------------------
# case descriptors


_CASE_KINDS = {
    "thm_a", "thm_b", "thm_c", "lemma21", "saalschutz", "rel4phi3", "eq21",
    "rel5phi4", "eq23", "eq24", "wei_dd", "wei_ee", "limit_a", "limit_b",
}

# residue class of n modulo the given base, where constrained
_N_CLASS = {
    "thm_a": (6, 1), "wei_dd": (6, 1), "eq23": (6, 1), "limit_a": (6, 1),
    "thm_b": (6, 5), "wei_ee": (6, 5), "eq24": (6, 5), "limit_b": (6, 5),
}


@dataclass(frozen=True)
class ThmCase:
    """One verification case: a family tag plus its parameters.

    subs carries explicit substitutions as (name, value) pairs, where value
    is either a Fraction or a q-power tag string like "q^-14".
    """

    which: str
    n: Optional[int] = None
    t: Optional[int] = None
    m: Optional[int] = None
    subs: tuple = ()

    def __post_init__(self):
        if self.which not in _CASE_KINDS:
            raise ParameterDomain(f"unknown case kind {self.which!r}")
        if self.which in _N_CLASS and self.n is not None:
            base, res = _N_CLASS[self.which]
            if self.n % base != res:
                raise ParameterDomain(
                    f"{self.which} needs n = {res} mod {base}, got {self.n}")
        if self.which == "thm_c":
            if self.t not in (1, 2):
                raise ParameterDomain("thm_c needs t in {1, 2}")
            if self.n is not None and self.n % 3 != (3 - self.t) % 3:
                raise ParameterDomain(
                    f"thm_c needs n = {(3 - self.t) % 3} mod 3, got {self.n}")
        elif self.t is not None:
            raise ParameterDomain(f"{self.which} takes no t parameter")
        if self.m is not None and self.m < 0:
            raise ParameterDomain("order parameter m must be nonnegative")
        norm = []
        for entry in self.subs:
            name, value = entry
            if not isinstance(value, str):
                value = Fraction(value)
            norm.append((str(name), value))
        object.__setattr__(self, "subs", tuple(norm))


# ---------------------------------------------------------------------------
# undeformed congruences: series, weight sum, closed forms


def _core_series(M: int) -> RationalFunc:
    """Truncated sum of ((q^-1;q^3)_k / (q^3;q^3)_k)^3 q^(9k), k = 0..M."""
    num = _ONE
    den = _ONE
    for k in range(M, 0, -1):
        step_num = ((_ONE - LaurentPoly.q_power(3 * k - 4)) ** 3).shift(9)
        step_den = (_ONE - LaurentPoly.q_power(3 * k)) ** 3
        den = step_den * den
        num = den + step_num * num
    return RationalFunc.of(num, den)


def _core_series_spec(M: int) -> SeriesSpec:
    # same sum through the generic builder; the dual construction route
    q = RationalFunc.q
    return SeriesSpec((q(-1), q(-1), q(-1)), (q(3), q(3)), 3, q(9), M)


def _weight_tail(M: int) -> tuple[LaurentPoly, LaurentPoly]:
    """Inverse-square weight sum minus its constant companion, as an
    uncancelled numerator/denominator pair.

    sum_{i=1}^{M} 3 q^(3i-2) / [3i-2]^2  -  (1+5q+3q^2)/(1+q)
    """
    num = LaurentPoly.zero()
    den = _ONE
    for i in range(M, 0, -1):
        d = q_integer(3 * i - 2) ** 2
        num = LaurentPoly.q_power(3 * i - 2, 3) * den + d * num
        den = d * den
    one_q = LaurentPoly.from_coeffs([1, 1])
    return num * one_q - LaurentPoly.from_coeffs([1, 5, 3]) * den, den * one_q


def _poch_laurent(e0: int, step: int, count: int) -> LaurentPoly:
    # prod_{j=0}^{count-1} (1 - q^(e0 + step j))
    out = _ONE
    for j in range(count):
        out = out * (_ONE - LaurentPoly.q_power(e0 + step * j))
    return out


def bracket_base(n: int) -> RationalFunc:
    """Leading bracket term of the n = 5 mod 6 closed form."""
    if n < 2:
        raise ParameterDomain(f"bracket base needs n >= 2, got {n}")
    qn = LaurentPoly.q_power(n)
    num = (LaurentPoly.from_coeffs([1, -1, -3]) * (_ONE - 2 * qn)
           + LaurentPoly.from_coeffs([4, -4, -6, 3]) * LaurentPoly.q_power(2 * n))
    den = LaurentPoly.from_coeffs([1, 1]) * (LaurentPoly.q_power(1) - qn) ** 2
    return RationalFunc.of(num, den)


def _prefactor_parts(shift: int, M: int) -> tuple[LaurentPoly, LaurentPoly]:
    num = (LaurentPoly.q_power(shift) * LaurentPoly.from_coeffs([1, 1])
           * _poch_laurent(1, 3, M) ** 2)
    return num, _poch_laurent(3, 3, M) ** 2


def thm_a_sides(n: int, include_degenerate: bool = False
                ) -> tuple[RationalFunc, RationalFunc]:
    """Both sides of the n = 1 mod 6 congruence, truncated at (2n+1)/3.

    At n = 1 the bracket degenerates and the two sides are plainly unequal;
    that case is rejected unless diagnostics are explicitly requested.
    """
    if n < 1 or n % 6 != 1:
        raise ParameterDomain(f"need n = 1 mod 6, got {n}")
    if (2 - 2 * n) % 3:
        # integrality of the prefactor exponent is the domain guard
        raise ParameterDomain(f"prefactor exponent not integral for n = {n}")
    if n == 1 and not include_degenerate:
        raise ParameterDomain("n = 1 is degenerate; the sides disagree")
    M = (2 * n + 1) // 3
    lhs = _core_series(M)
    tnum, tden = _weight_tail(M)
    bracket_num = 3 * tden - (q_integer(2 * n) ** 2) * tnum
    pnum, pden = _prefactor_parts((2 - 2 * n) // 3, M)
    return lhs, RationalFunc.of(pnum * bracket_num, pden * tden)


def thm_b_sides(n: int) -> tuple[RationalFunc, RationalFunc]:
    """Both sides of the n = 5 mod 6 congruence, truncated at (n+1)/3."""
    if n < 5 or n % 6 != 5:
        raise ParameterDomain(f"need n = 5 mod 6, got {n}")
    if (2 - n) % 3:
        raise ParameterDomain(f"prefactor exponent not integral for n = {n}")
    M = (n + 1) // 3
    lhs = _core_series(M)
    tnum, tden = _weight_tail(M)
    base = bracket_base(n)
    bracket_num = base.num * tden + (q_integer(n) ** 2) * tnum * base.den
    pnum, pden = _prefactor_parts((2 - n) // 3, M)
    return lhs, RationalFunc.of(pnum * bracket_num, pden * base.den * tden)


def thm_congruence(which: str, n: int, power: int = 3) -> Verdict:
    """Check one undeformed congruence modulo the n-th cyclotomic^power."""
    if which == "thm_a":
        lhs, rhs = thm_a_sides(n)
        M = (2 * n + 1) // 3
    elif which == "thm_b":
        lhs, rhs = thm_b_sides(n)
        M = (n + 1) // 3
    else:
        raise ParameterDomain(f"unknown congruence family {which!r}")
    v = congruent_mod_cyclotomic(lhs, rhs, n, power)
    return Verdict(v.status, v.detail,
                   {"n": n, "truncation": M, "modulus_power": power,
                    **v.witness})


def sides_at_one(which: str, n: int) -> tuple[Fraction, Fraction]:
    """Values of both sides at q = 1; feeds the p-adic cross-checks."""
    if which == "thm_a":
        lhs, rhs = thm_a_sides(n)
    elif which == "thm_b":
        lhs, rhs = thm_b_sides(n)
    else:
        raise ParameterDomain(f"unknown congruence family {which!r}")
    return lhs.eval(1), rhs.eval(1)


def degenerate_profile() -> dict:
    """Frozen record of the excluded n = 1 case: both sides at q = 1."""
    lhs, rhs = thm_a_sides(1, include_degenerate=True)
    return {"n": 1, "lhs_q1": str(lhs.eval(1)), "rhs_q1": str(rhs.eval(1))}


# ---------------------------------------------------------------------------
# two-parameter deformation, checked pointwise with packed values


def _pair_pow(x: PackedPair, m: int) -> PackedPair:
    out = x.ctx.pair_one()
    for _ in range(m):
        out = out.mul(x)
    return out


def _one_minus(ctx: PackedCtx, x: PackedPair, e: int) -> PackedPair:
    # 1 - x q^e for pair-valued x and any integer e
    return ctx.pair_one().sub(x.mul(ctx.pair_monomial(1, e)))


def _poch_pair(ctx: PackedCtx, x: PackedPair, offset: int, step: int,
               count: int) -> PackedPair:
    # prod_{j=0}^{count-1} (1 - x q^(offset + step j))
    out = ctx.pair_one()
    for j in range(count):
        out = out.mul(_one_minus(ctx, x, offset + step * j))
    return out


def _deformed_series(ctx: PackedCtx, a: PackedPair, b: PackedPair,
                     M: int) -> PackedPair:
    """Doubly deformed series: upper parameters a/q, 1/(aq), 1/(bq), lower
    parameter q^3/b on top of the cubed base, argument q^9, truncated at M."""
    one = ctx.pair_one()
    ia = one.div(a)
    ib = one.div(b)
    num = one
    den = one
    for k in range(M, 0, -1):
        e = 3 * k - 4
        step_num = (ctx.pair_monomial(1, 9)
                    .mul(_one_minus(ctx, a, e))
                    .mul(_one_minus(ctx, ia, e))
                    .mul(_one_minus(ctx, ib, e)))
        step_den = (ctx.pair_factor(1, 3 * k)
                    .mul(ctx.pair_factor(1, 3 * k))
                    .mul(_one_minus(ctx, ib, 3 * k)))
        den = step_den.mul(den)
        num = den.add(step_num.mul(num))
    return num.div(den)


def _thm_c_rhs(ctx: PackedCtx, n: int, t: int, a: PackedPair, b: PackedPair,
               M: int) -> PackedPair:
    """Closed form of the deformed congruence, transcribed term by term."""
    one = ctx.pair_one()
    pm = ctx.pair_monomial
    ia = one.div(a)
    ib = one.div(b)
    e = t * n
    qe = pm(1, e)
    ab = a.mul(b)
    split = a.sub(b).mul(one.sub(ab))
    coeff1 = (b.sub(qe)
              .mul(ab.sub(one).sub(a.mul(a)).add(a.mul(qe)))
              .div(split))
    coeff2 = one.sub(a.mul(qe)).mul(a.sub(qe)).div(split)

    pref1 = (_poch_pair(ctx, b, 1, 3, M)
             .mul(_poch_pair(ctx, one, 1, 3, M))
             .div(_pair_pow(b.mul(pm(1, 1)), M)
                  .mul(_poch_pair(ctx, ib, 0, 3, M))
                  .mul(_poch_pair(ctx, one, 3, 3, M))))
    pref2 = (_poch_pair(ctx, a, 1, 3, M)
             .mul(_poch_pair(ctx, ia, 1, 3, M))
             .div(_pair_pow(b, M)
                  .mul(_poch_pair(ctx, ib, 0, 3, M))
                  .mul(_poch_pair(ctx, ib, -1, 3, M))))

    # weight attached to the first closed-form piece
    inner = (ib.mul(pm(1, e + 2)).sub(pm(1, 1))
             .add(pm(1, e - 1).mul(one.add(pm(1, 3)).sub(pm(1, e + 2))
                                   .sub(ib.mul(pm(1, 2))))))
    w1 = (b.mul(ctx.pair_factor(1, e + 1)).mul(inner)
          .div(ctx.pair_factor(1, 1)
               .mul(_one_minus(ctx, b, e - 1))
               .mul(_one_minus(ctx, ib, e + 1)))
          .sub(one.sub(ib.mul(pm(1, e - 2)))
               .sub(pm(1, e + 1).mul(ctx.pair_const(2).sub(pm(1, e - 1))
                                     .sub(ib.mul(pm(1, -1)))))
               .div(ctx.pair_factor(1, e - 1)
                    .mul(_one_minus(ctx, ib, -1)))))

    # weight attached to the second closed-form piece
    w2_n1 = (one.sub(b.mul(pm(1, 1)))
             .mul(one.sub(pm(1, 1))
                  .sub(b.mul(pm(1, -2).add(pm(1, 1)).sub(a).sub(ia)))))
    w2_d1 = (pm(1, 1).mul(ctx.pair_factor(1, 1))
             .mul(_one_minus(ctx, ab, -1))
             .mul(_one_minus(ctx, b.mul(ia), -1)))
    w2_n2 = one.sub(pm(1, -2)).sub(b.mul(pm(2, 1).sub(a).sub(ia)))
    w2_d2 = (b.mul(pm(1, 1)).mul(_one_minus(ctx, a, -1))
             .mul(_one_minus(ctx, ia, -1)))
    w2 = w2_n1.div(w2_d1).sub(w2_n2.div(w2_d2))

    return coeff1.mul(pref1).mul(w1).add(coeff2.mul(pref2).mul(w2))


def _thm_c_domain(n: int, t: int) -> int:
    if t not in (1, 2):
        raise ParameterDomain(f"deformation index must be 1 or 2, got {t}")
    if not isinstance(n, int) or n < 2:
        raise ParameterDomain(f"deformed congruence needs integer n >= 2, got {n}")
    if n % 3 != (3 - t) % 3:
        raise ParameterDomain(
            f"index t = {t} needs n = {(3 - t) % 3} mod 3, got {n}")
    if (t * n + 1) % 3:
        raise ParameterDomain(f"truncation not integral for n = {n}, t = {t}")
    return (t * n + 1) // 3


def thm_c_bounds(n: int, t: int) -> BoundLedger:
    """Per-variable degree budget for the deformed congruence legs.

    Entries over-count on purpose: the bound must dominate the degree of the
    fully cleared difference, and every displayed factor contributes at most
    what is listed.
    """
    M = _thm_c_domain(n, t)
    led = BoundLedger()
    for desc, d in (
            ("series numerator deformed pochhammer", M),
            ("series denominator deformed pochhammer", M),
            ("coefficient numerators", 4),
            ("coefficient denominators", 4),
            ("first closed-form numerator pochhammer", M),
            ("first closed-form denominator pochhammer and power", 2 * M),
            ("second closed-form denominator pochhammers and power", 3 * M),
            ("weight numerators", 4),
            ("weight denominators", 6),
            ("slack", 2)):
        led.add("b", desc, d)
    for desc, d in (
            ("series numerator deformed pochhammers", 2 * M),
            ("coefficient numerators", 4),
            ("coefficient denominators", 4),
            ("second closed-form numerator pochhammers", 2 * M),
            ("weight numerators", 4),
            ("weight denominators", 4),
            ("slack", 2)):
        led.add("a", desc, d)
    return led


def thm_c_check(n: int, t: int, margin: int = 0,
                grid_points: Optional[dict] = None) -> Verdict:
    """Verify the deformed congruence by its three specialization legs.

    Pinning the first parameter at either distinguished q-power turns the
    congruence into an exact identity in the second parameter, and pinning
    the second does the same in the first; the three legs together cover
    every factor of the composite modulus.  Each leg is checked pointwise on
    a grid exceeding its degree bound unless grid_points overrides the size
    (then the verdict is no longer certified).
    """
    M = _thm_c_domain(n, t)
    led = thm_c_bounds(n, t)
    excl = (exclude_values(0, 1),)
    overrides = dict(grid_points or {})
    e = t * n
    legs = {}
    certified = True
    for pinned, pe in (("a", -e), ("a", e), ("b", e)):
        var = "b" if pinned == "a" else "a"
        bound = degree_bound(led, var)
        required = overrides.get(var, bound + 1 + margin)
        certified = certified and required > bound

        def evaluate(pt, ctx, pinned=pinned, pe=pe, var=var):
            val = ctx.pair_const(pt[var])
            pin = ctx.pair_monomial(1, pe)
            a, b = (pin, val) if pinned == "a" else (val, pin)
            lhs = _deformed_series(ctx, a, b, M)
            return lhs.equal(_thm_c_rhs(ctx, n, t, a, b, M))

        leg = f"{pinned}=q^{pe}"
        v = nested_grid_check([GridSpec(var, required, excl)], evaluate)
        if v.status != "pass":
            return Verdict("fail", f"leg {leg}: {v.detail}",
                           {"n": n, "t": t, "leg": leg, **v.witness})
        legs[leg] = v.witness.get("points_checked")
    return Verdict(
        "pass", "all three specialization legs hold",
        {"n": n, "t": t, "truncation": M, "legs": legs,
         "bounds": {v: led.contributions(v) for v in led.variables()},
         "certified": certified})


# ---------------------------------------------------------------------------
# single-parameter chain: the degenerate-second-parameter extension


def _wei_domain(which: str, n: int) -> tuple[int, int]:
    if which == "wei_dd":
        if n < 7 or n % 6 != 1:
            raise ParameterDomain(f"wei_dd needs n = 1 mod 6, n > 1, got {n}")
        s = 2
    elif which == "wei_ee":
        if n < 5 or n % 6 != 5:
            raise ParameterDomain(f"wei_ee needs n = 5 mod 6, got {n}")
        s = 1
    else:
        raise ParameterDomain(f"unknown chain family {which!r}")
    return s, (s * n + 1) // 3


def _wei_lhs(M: int, a: RationalFunc) -> RationalFunc:
    q = RationalFunc.q
    return truncated_phi(SeriesSpec(
        (a * q(-1), q(-1) / a, q(-1)), (q(3), q(3)), 3, q(9), M))


def _c_factor(e: int) -> RationalFunc:
    # degenerate-limit weight; transcribed as the displayed two-fraction sum
    q = LaurentPoly.q_power
    den = q(1) * (_ONE - q(1)) ** 2 * (_ONE - q(e - 1)) ** 2
    num1 = q(3) + q(e) * (_ONE + q(2 * e)) * LaurentPoly.from_coeffs([1, -3, 0, 1, -3])
    num2 = q(2 * e) * LaurentPoly.from_coeffs([1, -3, 6, 2, -3, 3]) + q(4 * e + 3)
    return RationalFunc.of(num1, den) + RationalFunc.of(num2, den)


def _d_factor(a: RationalFunc) -> RationalFunc:
    # deformation weight of the chain's bracket
    q = RationalFunc.q
    one = RationalFunc.one()
    num = ((one + a + a * a)
           * (a - 3 * a * q(1) + q(3) + a * a * q(3) - 3 * a * q(4))
           + 3 * a * a * q(2) * (RationalFunc.const(2) + q(3)))
    den = q(1) * (one - q(1)) ** 2 * (one - a * q(1)) ** 2 * (one - a * q(-1)) ** 2
    return num / den


def _wei_sides(which: str, n: int, a: RationalFunc
               ) -> tuple[RationalFunc, RationalFunc]:
    s, M = _wei_domain(which, n)
    q = RationalFunc.q
    lhs = _wei_lhs(M, a)
    pq = q_pochhammer(QPochSpec(q(1), 3, M))
    pq3 = q_pochhammer(QPochSpec(q(3), 3, M))
    pa = (q_pochhammer(QPochSpec(a * q(1), 3, M))
          * q_pochhammer(QPochSpec(q(1) / a, 3, M)))
    first = pq * pq / (q(M) * pq3 * pq3) * _c_factor(s * n)
    piece_a = pq * pq / (pq3 * pq3) * (3 * q(1) + 3 * q(2))
    piece_b = pa / (pq3 * pq3) * (1 - q(1)) ** 2 * _d_factor(a)
    brace = piece_b - piece_a if which == "wei_dd" else piece_a - piece_b
    mod_num = (1 - a * q(s * n)) * (a - q(s * n))
    rhs = first + mod_num / (q(M) * (1 - a) ** 2) * brace
    return lhs, rhs


def wei_bounds(which: str, n: int) -> BoundLedger:
    """Degree budget in the free parameter for the chain congruence."""
    _, M = _wei_domain(which, n)
    led = BoundLedger()
    for desc, d in (
            ("series numerator pochhammers", 2 * M),
            ("extension numerator pochhammers", 2 * M),
            ("modulus factors", 2),
            ("prefactor denominator", 2),
            ("weight numerator", 4),
            ("weight denominator", 4),
            ("slack", 2)):
        led.add("a", desc, d)
    return led


def wei_chain_check(which: str, n: int, margin: int = 0) -> Verdict:
    """Verify the single-parameter chain congruence for wei_dd or wei_ee.

    Decomposed exactly like the two-parameter case: at the two distinguished
    q-powers of the parameter the congruence collapses to an exact identity,
    and on a rational grid large enough for the parameter degree the residual
    congruence modulo the bare cyclotomic factor is checked point by point.
    """
    s, M = _wei_domain(which, n)
    equalities = []
    for sign in (1, -1):
        tag = f"a=q^{sign * s * n}"
        lhs, rhs = _wei_sides(which, n, RationalFunc.q(sign * s * n))
        if lhs != rhs:
            diff = lhs - rhs
            return Verdict("fail", f"exact identity fails at {tag}",
                           {"n": n, "leg": tag, "difference": diff.to_obj()})
        equalities.append(tag)
    led = wei_bounds(which, n)
    bound = degree_bound(led, "a")
    grid = generate_grid(GridSpec("a", bound + 1 + margin,
                                  (exclude_values(0, 1),)))
    for x in grid:
        lhs, rhs = _wei_sides(which, n, RationalFunc.const(x))
        v = congruent_mod_cyclotomic(lhs, rhs, n, 1)
        if v.status != "pass":
            return Verdict("fail", f"congruence fails at a = {x}: {v.detail}",
                           {"n": n, "point": str(x), **v.witness})
    return Verdict(
        "pass", "chain equalities and grid congruence hold",
        {"n": n, "truncation": M, "equalities": equalities,
         "points_checked": len(grid), "bounds": led.contributions("a"),
         "certified": True})


# ---------------------------------------------------------------------------
# degenerate-parameter limits, one rational base point at a time


def _limit_domain(variant: str, n: int) -> tuple[int, int, int]:
    # returns (s, M, sign of the displayed limit)
    if variant == "a":
        if n < 7 or n % 6 != 1:
            raise ParameterDomain(f"limit a needs n = 1 mod 6, n > 1, got {n}")
        return 2, (2 * n + 1) // 3, -1
    if variant == "b":
        if n < 5 or n % 6 != 5:
            raise ParameterDomain(f"limit b needs n = 5 mod 6, got {n}")
        return 1, (n + 1) // 3, 1
    raise ParameterDomain(f"unknown limit variant {variant!r}")


def lhopital_bounds(variant: str, n: int) -> BoundLedger:
    """Degree budget in q for the limit identity.

    The cleared difference multiplies the bracket quotient by the limit
    side's denominator and vice versa; the quotient's coefficients inherit
    the pochhammer pair growth, and the limit side carries the inverse-square
    weight denominators.  Entries dominate both cross products.
    """
    s, M, _ = _limit_domain(variant, n)
    dp = M * (3 * M - 1) // 2
    led = BoundLedger()
    for desc, d in (
            ("modulus numerator", 2 * s * n),
            ("bracket quotient coefficients", 2 * dp + 13),
            ("weight-sum denominators", 3 * M * (M - 1) + 3),
            ("limit prefactors", 8),
            ("slack", 4)):
        led.add("q", desc, d)
    return led


def _limit_bracket(variant: str, n: int, q0: Fraction
                   ) -> tuple[LaurentPoly, LaurentPoly]:
    """Bracket at base point q0 as polynomials in the deformation parameter.

    Returns (B1, B2) with bracket = B1/B2; B2 collects the displayed weight
    denominator, so it does not vanish at parameter value 1.
    """
    s, M, _ = _limit_domain(variant, n)
    lp = LaurentPoly
    p1 = Fraction(1)
    for j in range(M):
        p1 *= 1 - q0 ** (3 * j + 1)
    poch2 = _ONE
    for j in range(M):
        w = q0 ** (3 * j + 1)
        poch2 = poch2 * lp({0: 1, 1: -w}) * lp({0: 1, -1: -w})
    # (1+a+a^2)(a - 3aq + q^3 + a^2 q^3 - 3aq^4) + 3a^2 q^2 (2 + q^3)
    nd = (lp({0: 1, 1: 1, 2: 1})
          * lp({0: q0 ** 3, 1: 1 - 3 * q0 - 3 * q0 ** 4, 2: q0 ** 3})
          + lp({2: 3 * q0 ** 2 * (2 + q0 ** 3)}))
    b2 = (q0 * (1 - q0) ** 2) * (lp({0: 1, 1: -q0}) ** 2) * (lp({0: 1, 1: Fraction(-1, 1) / q0}) ** 2)
    c1 = p1 * p1 * (3 * q0 + 3 * q0 ** 2)
    second = poch2 * ((1 - q0) ** 2 * nd)
    if variant == "a":
        b1 = second - c1 * b2
    else:
        b1 = c1 * b2 - second
    return b1, b2


def _limit_value(variant: str, n: int, q0: Fraction) -> Fraction:
    """Displayed value of the limit at base point q0."""
    s, M, sign = _limit_domain(variant, n)
    p1 = Fraction(1)
    for j in range(M):
        p1 *= 1 - q0 ** (3 * j + 1)
    tail = Fraction(0)
    for i in range(1, M + 1):
        qi = (1 - q0 ** (3 * i - 2)) / (1 - q0)
        tail += 3 * q0 ** (3 * i - 2) / qi ** 2
    tail -= (1 + 5 * q0 + 3 * q0 ** 2) / (1 + q0)
    qsn = (1 - q0 ** (s * n)) / (1 - q0)
    return sign * q0 * (1 + q0) * qsn ** 2 * p1 * p1 * tail


def lhopital_check(variant: str, n: int, q_grid=None, margin: int = 0) -> Verdict:
    """Check the degenerate-parameter limit of the chain bracket.

    At each base point the bracket is a univariate rational function of the
    deformation parameter; the check divides out the double root at 1 and
    compares the resulting value, scaled by the modulus factors, with the
    displayed limit.  A grid larger than the q-degree bound certifies the
    identity; an explicit q_grid runs pointwise only.
    """
    s, M, _ = _limit_domain(variant, n)
    led = lhopital_bounds(variant, n)
    bound = degree_bound(led, "q")
    if q_grid is None:
        grid = generate_grid(GridSpec("q", bound + 1 + margin,
                                      (exclude_values(0, 1, -1),)))
        certified = True
    else:
        grid = [Fraction(x) for x in q_grid]
        if any(x in (0, 1, -1) for x in grid):
            raise ParameterDomain("base points 0, 1, -1 are excluded")
        if not grid:
            raise ParameterDomain("empty base point grid")
        certified = len(grid) > bound
    one_minus_a = LaurentPoly.from_coeffs([1, -1])
    for q0 in grid:
        b1, b2 = _limit_bracket(variant, n, q0)
        at_one = b1.eval(1)
        if at_one != 0:
            return Verdict("fail", f"bracket does not vanish at base point {q0}",
                           {"variant": variant, "n": n, "q": str(q0),
                            "bracket_at_one": str(at_one)})
        quot1 = RationalFunc.of(b1, one_minus_a)
        second = quot1.num.eval(1) / quot1.den.eval(1)
        if second != 0:
            return Verdict("fail",
                           f"vanishing order below 2 at base point {q0}",
                           {"variant": variant, "n": n, "q": str(q0),
                            "first_quotient_at_one": str(second)})
        quot2 = RationalFunc.of(quot1.num, quot1.den * one_minus_a)
        value = (quot2.num.eval(1) / quot2.den.eval(1)
                 * (1 - q0 ** (s * n)) ** 2 / b2.eval(1))
        shown = _limit_value(variant, n, q0)
        if value != shown:
            return Verdict("fail", f"limit value differs at base point {q0}",
                           {"variant": variant, "n": n, "q": str(q0),
                            "computed": str(value), "displayed": str(shown)})
    return Verdict(
        "pass", f"limit identity holds at all {len(grid)} base points",
        {"variant": variant, "n": n, "points_checked": len(grid),
         "order_at_one": 2, "bounds": led.contributions("q"),
         "certified": certified})
