"""Residue arithmetic and Gamma-based congruence checks."""

import math
from fractions import Fraction

import pytest

from qscheck import padic, theorems
from qscheck.errors import NotPAdicUnit, ParameterDomain
from qscheck.padic import (
    PadicContext,
    PadicResidue,
    check_cor,
    check_gamma_factorial,
    check_gamma_functional,
    check_gamma_reflection,
    check_harmonic_cong,
    check_liu,
    check_long,
    check_prop,
    harmonic,
    morita_gamma,
    residue_of_rational,
    rising_rational,
)


def oracle_gamma(r: int, p: int, k: int) -> int:
    # independent signed product over 1 <= j < r with p-multiples removed
    prod = 1
    for j in range(1, r):
        if j % p != 0:
            prod *= j
    return (-1) ** r * prod % p ** k if r else 1


class TestResidues:
    def test_frozen_representative(self):
        ctx = PadicContext(5, 3)
        assert residue_of_rational(Fraction(2, 3), ctx).value == 84
        assert residue_of_rational(1, ctx).value == 1
        assert residue_of_rational(Fraction(-1, 3), ctx).value == \
            (-pow(3, -1, 125)) % 125

    def test_non_unit_denominator(self):
        with pytest.raises(NotPAdicUnit):
            residue_of_rational(Fraction(1, 5), PadicContext(5, 3))
        with pytest.raises(NotPAdicUnit):
            residue_of_rational(Fraction(3, 14), PadicContext(7, 2))

    def test_residue_equality_tracks_context(self):
        a = PadicResidue(3, PadicContext(5, 3))
        assert a == PadicResidue(128, PadicContext(5, 3))
        assert a != PadicResidue(3, PadicContext(5, 2))
        assert a != PadicResidue(3, PadicContext(7, 3))

    def test_context_domain(self):
        for bad in ((4, 3), (3, 3), (9, 2), (7, 0), (7, 5)):
            with pytest.raises(ParameterDomain):
                PadicContext(*bad)
        assert PadicContext(5, 4).modulus == 625
        assert PadicContext(11).modulus == 11 ** 3


class TestGamma:
    def test_against_oracle(self):
        for p, k in ((5, 3), (7, 2), (11, 3)):
            ctx = PadicContext(p, k)
            for r in range(0, 3 * p):
                assert morita_gamma(r, ctx).value == oracle_gamma(r, p, k)

    def test_small_values(self):
        ctx = PadicContext(5, 3)
        assert morita_gamma(0, ctx).value == 1
        assert morita_gamma(1, ctx).value == 124
        assert morita_gamma(2, ctx).value == 1

    def test_signed_factorial_below_p(self):
        for p in (5, 7, 11, 13):
            ctx = PadicContext(p, 3)
            for r in range(1, p):
                want = (-1) ** r * math.factorial(r - 1) % ctx.modulus
            assert morita_gamma(r, ctx).value == want
            assert check_gamma_factorial(p).status == "pass"

    def test_step_relation_sweep(self):
        for p in (5, 7, 11, 13):
            v = check_gamma_functional(p)
            assert v.status == "pass"
            assert v.witness["span"] == p * p

    def test_reflection_sweep(self):
        for p in (5, 7, 11, 13):
            v = check_gamma_reflection(p)
            assert v.status == "pass", v.detail

    def test_reflection_hand_case(self):
        # x = 1/3, p = 5: -1/3 is 3 mod 5, so the product must be (+1)^2 = 1
        ctx = PadicContext(5, 3)
        prod = morita_gamma(Fraction(1, 3), ctx).mul(
            morita_gamma(Fraction(2, 3), ctx))
        assert prod.value == 1

    def test_cache_reused(self):
        ctx = PadicContext(7, 3)
        morita_gamma(Fraction(1, 3), ctx)
        assert len(ctx._gamma) == 1
        morita_gamma(Fraction(1, 3), ctx)
        assert len(ctx._gamma) == 1


class TestRationalPieces:
    def test_rising(self):
        assert rising_rational(Fraction(1, 3), 2) == Fraction(4, 9)
        assert rising_rational(Fraction(-1, 3), 1) == Fraction(-1, 3)
        assert rising_rational(Fraction(1, 2), 0) == 1
        assert rising_rational(1, 4) == 24
        with pytest.raises(ParameterDomain):
            rising_rational(1, -1)

    def test_harmonic(self):
        assert harmonic(2) == Fraction(3, 2)
        assert harmonic(2, 2) == Fraction(5, 4)
        assert harmonic(0, 2) == 0
        with pytest.raises(ParameterDomain):
            harmonic(3, 3)

    def test_cubed_sum_closed(self):
        got = padic._cubed_sum(Fraction(-1, 3), 2)
        assert got == 1 + Fraction(-1, 3) ** 3 + \
            (Fraction(-1, 3) * Fraction(2, 3) / 2) ** 3
        assert got == Fraction(701, 729)


class TestFullSums:
    def test_small_primes(self):
        for p in (5, 7, 11, 13):
            assert check_long(p).status == "pass"
            assert check_liu(p).status == "pass"

    def test_class_recorded(self):
        assert check_long(7).witness["class"] == 1
        assert check_liu(5).witness["class"] == 5
        assert check_liu(5).witness["truncation"] == 4

    def test_domain(self):
        for p in (4, 3, 2, 9):
            with pytest.raises(ParameterDomain):
                check_long(p)
            with pytest.raises(ParameterDomain):
                check_liu(p)


class TestTruncatedSums:
    def test_frozen_branch_b_at_five(self):
        v = check_cor("b", 5)
        assert v.status == "pass"
        assert v.witness["lhs_residue"] == 44
        assert v.witness["rhs_residue"] == 44
        # the two sides as exact rationals, before reduction
        lhs, rhs, M = padic._cor_sides("b", 5)
        assert (lhs, rhs, M) == (Fraction(701, 729), Fraction(1001, 54), 2)

    def test_branches(self):
        for p in (7, 13, 19):
            assert check_cor("a", p).status == "pass"
            assert check_prop("a", p).status == "pass"
        for p in (5, 11, 17):
            assert check_cor("b", p).status == "pass"
            assert check_prop("b", p).status == "pass"

    def test_branch_domain(self):
        with pytest.raises(ParameterDomain):
            check_cor("a", 5)
        with pytest.raises(ParameterDomain):
            check_cor("b", 7)
        with pytest.raises(ParameterDomain):
            check_prop("b", 13)
        with pytest.raises(ParameterDomain):
            check_cor("c", 7)

    def test_transitivity_gives_full_sum_class_one(self):
        # truncated closed form times 6 agrees with the class-1 full-sum value
        p = 7
        ctx = PadicContext(p, 3)
        lhs, _, _ = padic._cor_sides("a", p)
        g6 = morita_gamma(Fraction(2, 3), ctx).pow(6)
        assert residue_of_rational(lhs, ctx) == \
            PadicResidue(-18 * p * p, ctx).mul(g6)


class TestHarmonicCongruence:
    def test_frozen_at_five(self):
        v = check_harmonic_cong(5)
        assert v.status == "pass"
        assert v.witness == {"p": 5, "precision": 1, "lhs_residue": 2,
                             "rhs_residue": 2, "class": 5, "upper": 2}
        # raw rationals behind the residues
        assert sum(Fraction(1, (3 * i - 2) ** 2) for i in (1, 2)) == \
            Fraction(17, 16)
        assert Fraction(2, 9) * harmonic(3, 2) == Fraction(49, 162)

    def test_more_primes(self):
        for p in (11, 17, 23, 29):
            assert check_harmonic_cong(p).status == "pass"

    def test_domain(self):
        with pytest.raises(ParameterDomain):
            check_harmonic_cong(7)
        with pytest.raises(ParameterDomain):
            check_harmonic_cong(9)


class TestCrossLimit:
    def test_truncated_sum_matches_basic_side_at_one(self):
        # the q = 1 value of the truncated basic series is the cubed sum
        for which, p in (("a", 7), ("a", 13), ("b", 5), ("b", 11)):
            M = (2 * p + 1) // 3 if which == "a" else (p + 1) // 3
            lhs_q1, rhs_q1 = theorems.sides_at_one("thm_" + which, p)
            assert lhs_q1 == padic._cubed_sum(Fraction(-1, 3), M)
            gap = lhs_q1 - rhs_q1
            assert gap.denominator % p != 0
            assert gap.numerator % p ** 3 == 0


class TestFaultDetection:
    def test_perturbed_gamma_breaks_checks(self, monkeypatch):
        real = morita_gamma

        # a sign flip would vanish under the even powers, so shift instead
        def crooked(x, ctx):
            v = real(x, ctx)
            return PadicResidue(v.value + 1, ctx)

        monkeypatch.setattr(padic, "morita_gamma", crooked)
        assert padic.check_liu(5).status == "fail"
        # branch b is the sensitive one: its value has no p^2 prefactor
        assert padic.check_prop("b", 5).status == "fail"
        v = padic.check_gamma_functional(5)
        assert v.status == "fail"
        assert "r" in v.witness

    def test_fail_witness_carries_residues(self, monkeypatch):
        monkeypatch.setattr(padic, "_cubed_sum",
                            lambda x, m: Fraction(0))
        v = padic.check_long(7)
        assert v.status == "fail"
        assert v.witness["lhs_residue"] == 0
        assert v.witness["rhs_residue"] != 0
