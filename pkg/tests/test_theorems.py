"""Congruence family checks: frozen fixtures, oracles, and domain guards."""

from fractions import Fraction

import pytest

from qscheck import theorems as T
from qscheck.errors import ParameterDomain
from qscheck.laurent import LaurentPoly
from qscheck.qseries import QPochSpec, SeriesSpec, q_pochhammer, truncated_phi
from qscheck.ratfunc import RationalFunc

Q = RationalFunc.q
ONE = RationalFunc.one()


# ---------------------------------------------------------------------------
# undeformed congruences


def test_degenerate_profile_frozen():
    assert T.degenerate_profile() == {"n": 1, "lhs_q1": "26/27", "rhs_q1": "2"}


def test_degenerate_sides_closed_forms():
    # hand-reduced shapes of the n = 1 sides
    lhs, rhs = T.thm_a_sides(1, include_degenerate=True)
    cyc = LaurentPoly.from_coeffs([1, 1, 1])
    assert lhs == RationalFunc.of(cyc ** 3 - LaurentPoly.q_power(6), cyc ** 3)
    assert rhs == RationalFunc.of(
        LaurentPoly.from_coeffs([1, 1]) * LaurentPoly.from_coeffs([4, 3, 2]),
        cyc ** 2)


def test_thm_a_rejects_bad_n():
    with pytest.raises(ParameterDomain):
        T.thm_a_sides(1)
    with pytest.raises(ParameterDomain):
        T.thm_a_sides(3)
    with pytest.raises(ParameterDomain):
        T.thm_a_sides(-5)


def test_thm_b_rejects_bad_n():
    with pytest.raises(ParameterDomain):
        T.thm_b_sides(7)
    with pytest.raises(ParameterDomain):
        T.thm_b_sides(1)


def test_core_series_matches_generic_builder():
    for M in (0, 1, 3, 6):
        assert T._core_series(M) == truncated_phi(T._core_series_spec(M))


def test_thm_a_small_all_powers():
    for power in (1, 2, 3):
        assert T.thm_congruence("thm_a", 7, power).status == "pass"


def test_thm_b_small():
    assert T.thm_congruence("thm_b", 5).status == "pass"
    assert T.thm_congruence("thm_b", 11).status == "pass"


def test_thm_congruence_rejects_unknown_family():
    with pytest.raises(ParameterDomain):
        T.thm_congruence("thm_x", 7)


def test_perturbed_bracket_fails(monkeypatch):
    orig = T.bracket_base

    def bad(n):
        rf = orig(n)
        return RationalFunc.of(rf.num + LaurentPoly.q_power(1), rf.den)

    monkeypatch.setattr(T, "bracket_base", bad)
    v = T.thm_congruence("thm_b", 5)
    assert v.status == "fail"
    assert "num_valuation" in v.witness


def test_sides_at_one_valuation():
    # at q = 1 the gap between the sides is divisible by n^3 for prime n
    lhs1, rhs1 = T.sides_at_one("thm_a", 7)
    gap = lhs1 - rhs1
    assert gap != 0
    assert gap.denominator % 7 != 0
    assert gap.numerator % 7 ** 3 == 0
    lhs1, rhs1 = T.sides_at_one("thm_b", 5)
    gap = lhs1 - rhs1
    assert gap.denominator % 5 != 0
    assert gap.numerator % 5 ** 3 == 0


def test_series_value_at_one_is_rising_factorial_sum():
    # q -> 1 turns the truncated series into a sum of cubed rising-factorial
    # ratios; spot value for M = 2
    lhs = T._core_series(2)
    expect = (1 + Fraction(-1, 3) ** 3
              + (Fraction(-1, 3) * Fraction(2, 3) / 2) ** 3)
    assert lhs.eval(1) == expect


# ---------------------------------------------------------------------------
# two-parameter deformation


def _poch3(x, count):
    return q_pochhammer(QPochSpec(x, 3, count))


def _deformed_rhs_rf(n, t, a, b):
    # independent transcription of the closed form with plain rational
    # functions; the checked route uses packed evaluation instead
    e = t * n
    M = (e + 1) // 3
    qe = Q(e)
    split = (a - b) * (ONE - a * b)
    coeff1 = (b - qe) * (a * b - ONE - a * a + a * qe) / split
    coeff2 = (ONE - a * qe) * (a - qe) / split
    pref1 = (_poch3(b * Q(1), M) * _poch3(Q(1), M)
             / ((b * Q(1)) ** M * _poch3(ONE / b, M) * _poch3(Q(3), M)))
    pref2 = (_poch3(a * Q(1), M) * _poch3(Q(1) / a, M)
             / (b ** M * _poch3(ONE / b, M) * _poch3(ONE / (b * Q(1)), M)))
    w1 = (b * (ONE - Q(e + 1))
          * (Q(e + 2) / b - Q(1) + Q(e - 1) * (ONE + Q(3) - Q(e + 2) - Q(2) / b))
          / ((ONE - Q(1)) * (ONE - b * Q(e - 1)) * (ONE - Q(e + 1) / b))
          - (ONE - Q(e - 2) / b - Q(e + 1) * (2 * ONE - Q(e - 1) - Q(-1) / b))
          / ((ONE - Q(e - 1)) * (ONE - Q(-1) / b)))
    w2 = ((ONE - b * Q(1)) * (ONE - Q(1) - b * (Q(-2) + Q(1) - a - ONE / a))
          / (Q(1) * (ONE - Q(1)) * (ONE - a * b / Q(1)) * (ONE - b / (a * Q(1))))
          - (ONE - Q(-2) - b * (2 * Q(1) - a - ONE / a))
          / (b * Q(1) * (ONE - a * Q(-1)) * (ONE - Q(-1) / a)))
    return coeff1 * pref1 * w1 + coeff2 * pref2 * w2


def _deformed_lhs_rf(n, t, a, b):
    M = (t * n + 1) // 3
    return truncated_phi(SeriesSpec(
        (a * Q(-1), Q(-1) / a, Q(-1) / b), (Q(3), Q(3) / b), 3, Q(9), M))


def test_deformed_third_leg_oracle():
    # pinning the second parameter turns the congruence into an identity;
    # rational-function route at a = 2, n = 2, t = 1
    a, b = RationalFunc.const(2), Q(2)
    assert _deformed_lhs_rf(2, 1, a, b) == _deformed_rhs_rf(2, 1, a, b)


def test_deformed_first_leg_oracle():
    a, b = Q(-2), RationalFunc.const(3)
    assert _deformed_lhs_rf(2, 1, a, b) == _deformed_rhs_rf(2, 1, a, b)


def test_thm_c_small_cases():
    v = T.thm_c_check(2, 1)
    assert v.status == "pass" and v.witness["certified"]
    assert set(v.witness["legs"]) == {"a=q^-2", "a=q^2", "b=q^2"}
    assert T.thm_c_check(4, 2).status == "pass"


def test_thm_c_domain_guards():
    with pytest.raises(ParameterDomain):
        T.thm_c_check(2, 3)
    with pytest.raises(ParameterDomain):
        T.thm_c_check(3, 1)
    with pytest.raises(ParameterDomain):
        T.thm_c_check(1, 2)


def test_thm_c_single_point_grids():
    v = T.thm_c_check(2, 1, grid_points={"a": 1, "b": 1})
    assert v.status == "pass"
    assert v.witness["certified"] is False


def test_thm_c_perturbed_fails(monkeypatch):
    orig = T._thm_c_rhs

    def bad(ctx, n, t, a, b, M):
        return orig(ctx, n, t, a, b, M).add(ctx.pair_monomial(1, 1))

    monkeypatch.setattr(T, "_thm_c_rhs", bad)
    v = T.thm_c_check(2, 1)
    assert v.status == "fail"
    assert "point" in v.witness


def test_degenerate_second_parameter_series():
    # at n = 1, t = 2 the deformed series with second parameter 1 coincides
    # with the chain series at the distinguished first-parameter power
    for M in (1, 4):
        direct = truncated_phi(SeriesSpec(
            (Q(-3), Q(1), Q(-1)), (Q(3), Q(3)), 3, Q(9), M))
        assert direct == T._wei_lhs(M, Q(-2))


# ---------------------------------------------------------------------------
# chain congruence and limits


def test_wei_equality_leg_direct():
    lhs, rhs = T._wei_sides("wei_dd", 7, Q(14))
    assert lhs == rhs
    lhs, rhs = T._wei_sides("wei_ee", 5, Q(-5))
    assert lhs == rhs


def test_wei_chain_small():
    v = T.wei_chain_check("wei_ee", 5)
    assert v.status == "pass" and v.witness["certified"]
    assert v.witness["equalities"] == ["a=q^5", "a=q^-5"]
    assert T.wei_chain_check("wei_dd", 7).status == "pass"


def test_wei_domain_guards():
    with pytest.raises(ParameterDomain):
        T.wei_chain_check("wei_dd", 5)
    with pytest.raises(ParameterDomain):
        T.wei_chain_check("wei_ee", 7)
    with pytest.raises(ParameterDomain):
        T.wei_chain_check("wei_dd", 1)
    with pytest.raises(ParameterDomain):
        T.wei_chain_check("wei_xx", 7)


def test_wei_perturbed_fails(monkeypatch):
    orig = T._c_factor
    monkeypatch.setattr(T, "_c_factor", lambda e: orig(e) + ONE)
    v = T.wei_chain_check("wei_ee", 5)
    assert v.status == "fail"


def test_lhopital_small():
    v = T.lhopital_check("b", 5)
    assert v.status == "pass" and v.witness["certified"]
    assert v.witness["order_at_one"] == 2
    assert T.lhopital_check("a", 7).status == "pass"


def test_lhopital_explicit_grid():
    v = T.lhopital_check("b", 5, q_grid=[2, 3, Fraction(5, 2)])
    assert v.status == "pass"
    assert v.witness["certified"] is False
    with pytest.raises(ParameterDomain):
        T.lhopital_check("b", 5, q_grid=[1, 2])
    with pytest.raises(ParameterDomain):
        T.lhopital_check("b", 5, q_grid=[])


def test_lhopital_domain_guards():
    with pytest.raises(ParameterDomain):
        T.lhopital_check("a", 5)
    with pytest.raises(ParameterDomain):
        T.lhopital_check("c", 5)


def test_lhopital_perturbed_fails(monkeypatch):
    orig = T._limit_value
    monkeypatch.setattr(T, "_limit_value", lambda v, n, q0: orig(v, n, q0) + 1)
    v = T.lhopital_check("b", 5, q_grid=[2])
    assert v.status == "fail"
    assert v.witness["q"] == "2"


# ---------------------------------------------------------------------------
# case descriptors


def test_case_validation():
    T.ThmCase("thm_a", n=7)
    T.ThmCase("thm_c", n=2, t=1)
    T.ThmCase("lemma21", m=3)
    T.ThmCase("saalschutz", m=0, subs=(("a", 2), ("b", "q^2")))
    with pytest.raises(ParameterDomain):
        T.ThmCase("thm_a", n=5)
    with pytest.raises(ParameterDomain):
        T.ThmCase("thm_c", n=2, t=3)
    with pytest.raises(ParameterDomain):
        T.ThmCase("thm_c", n=3, t=1)
    with pytest.raises(ParameterDomain):
        T.ThmCase("lemma21", m=-1)
    with pytest.raises(ParameterDomain):
        T.ThmCase("nope")
    with pytest.raises(ParameterDomain):
        T.ThmCase("saalschutz", m=1, t=1)


def test_case_subs_normalized():
    case = T.ThmCase("saalschutz", m=1, subs=[("a", 2)])
    assert case.subs == (("a", Fraction(2)),)
