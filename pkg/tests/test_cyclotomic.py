"""Cyclotomic table and congruence machinery.

Phi_12 is pinned against an independent in-test construction (divide q^12 - 1
by the five lower cyclotomics obtained from explicit coefficient lists), not
against the package's own recursion.
"""

from __future__ import annotations

import time
from fractions import Fraction

import pytest

from qscheck import cyclotomic as cyc
from qscheck.errors import DenominatorNotCoprime
from qscheck.laurent import LaurentPoly
from qscheck.ratfunc import RationalFunc


def lp(*coeffs):
    return LaurentPoly.from_coeffs(list(coeffs))


def test_phi_1_2_3_6():
    assert cyc.cyclotomic(1) == lp(-1, 1)
    assert cyc.cyclotomic(2) == lp(1, 1)
    assert cyc.cyclotomic(3) == lp(1, 1, 1)
    assert cyc.cyclotomic(6) == lp(1, -1, 1)


def test_phi_12_against_independent_division():
    # oracle: naive Fraction-coefficient division by the known factor product
    known = {1: [-1, 1], 2: [1, 1], 3: [1, 1, 1], 4: [1, 0, 1], 6: [1, -1, 1]}
    prod = [Fraction(1)]
    for c in known.values():
        nxt = [Fraction(0)] * (len(prod) + len(c) - 1)
        for i, x in enumerate(prod):
            for j, y in enumerate(c):
                nxt[i + j] += x * y
        prod = nxt
    target = [Fraction(-1)] + [Fraction(0)] * 11 + [Fraction(1)]
    quot = [Fraction(0)] * (len(target) - len(prod) + 1)
    rem = list(target)
    for i in range(len(rem) - 1, len(prod) - 2, -1):
        f = rem[i] / prod[-1]
        quot[i - len(prod) + 1] = f
        for j in range(len(prod)):
            rem[i - len(prod) + 1 + j] -= f * prod[j]
    assert not any(rem[:len(prod) - 1])
    assert quot == [Fraction(1), Fraction(0), Fraction(-1), Fraction(0), Fraction(1)]
    assert cyc.cyclotomic(12) == lp(1, 0, -1, 0, 1)


def test_product_of_divisors_up_to_300_under_10s():
    t0 = time.monotonic()
    for n in range(1, 301):
        prod = LaurentPoly.one()
        for d in range(1, n + 1):
            if n % d == 0:
                prod = prod * cyc.cyclotomic(d)
        assert prod == LaurentPoly({n: Fraction(1), 0: Fraction(-1)})
    assert time.monotonic() - t0 < 10.0


def test_totient_degrees():
    def totient(n):
        c = 0
        for k in range(1, n + 1):
            a, b = k, n
            while b:
                a, b = b, a % b
            if a == 1:
                c += 1
        return c
    for n in (1, 2, 9, 30, 97, 128, 210):
        assert cyc.cyclotomic(n).degree() == totient(n)


def test_value_at_one_prime_power_vs_composite():
    for n in range(2, 101):
        facs = set()
        m = n
        for p in range(2, m + 1):
            while m % p == 0:
                facs.add(p)
                m //= p
        v = cyc.cyclotomic(n).eval(1)
        if len(facs) == 1:
            assert v == next(iter(facs))
        else:
            assert v == 1


def test_divides_power_examples():
    q7 = LaurentPoly({7: Fraction(1), 0: Fraction(-1)})
    assert cyc.divides_power(q7, 7, 1)
    assert not cyc.divides_power(lp(-1, 1), 7, 1)
    f = (cyc.cyclotomic(6) ** 3) * lp(2, 1)
    assert cyc.divides_power(f, 6, 3)
    assert not cyc.divides_power(f, 6, 4)


def test_congruence_examples():
    q7 = RationalFunc.q(7)
    one = RationalFunc.one()
    assert cyc.congruent_mod_cyclotomic(q7, one, 7, 1).ok()
    bad = cyc.congruent_mod_cyclotomic(RationalFunc.q(), one, 7, 1)
    assert bad.status == "fail"
    assert bad.witness["remainder"]


def test_congruence_denominator_guard():
    # 1/Phi_7 against 0 mod Phi_7 is ill-posed
    r = RationalFunc.of(LaurentPoly.one(), cyc.cyclotomic(7))
    with pytest.raises(DenominatorNotCoprime):
        cyc.congruent_mod_cyclotomic(r, RationalFunc.zero(), 7, 1)


def test_congruence_power_cap():
    with pytest.raises(ValueError):
        cyc.congruent_mod_cyclotomic(RationalFunc.one(), RationalFunc.one(), 5, 9)


def test_congruence_relation_properties():
    # reflexive, symmetric, transitive on shared well-posed denominators
    phi5 = cyc.cyclotomic(5)
    a = RationalFunc.of(lp(3, 1), lp(1, 1))
    b = a + RationalFunc.of(phi5 * lp(2), lp(1, 1))
    c = b + RationalFunc.of(phi5 * lp(0, 0, 5), lp(1, 1))
    assert cyc.congruent_mod_cyclotomic(a, a, 5, 1).ok()
    assert cyc.congruent_mod_cyclotomic(a, b, 5, 1).ok()
    assert cyc.congruent_mod_cyclotomic(b, a, 5, 1).ok()
    assert cyc.congruent_mod_cyclotomic(b, c, 5, 1).ok()
    assert cyc.congruent_mod_cyclotomic(a, c, 5, 1).ok()
    d = a + RationalFunc.of(lp(1, 1), lp(1, 1))
    assert not cyc.congruent_mod_cyclotomic(a, d, 5, 1).ok()


def test_pass_witness_demonstrates_division():
    q7 = RationalFunc.q(7)
    v = cyc.congruent_mod_cyclotomic(q7, RationalFunc.one(), 7, 2)
    # q^7 - 1 carries exactly one Phi_7
    assert v.status == "fail"
    assert v.witness["num_valuation"] == 1
    v1 = cyc.congruent_mod_cyclotomic(q7, RationalFunc.one(), 7, 1)
    assert v1.ok()
    assert v1.witness["cofactor_degree"] == 7 - cyc.cyclotomic(7).degree()
