"""Cyclotomic polynomials and congruence of rational functions mod Phi_n^e.

Congruence semantics: r == s (mod Phi_n^e) iff Phi_n^e divides the numerator
of the normalized difference while the denominator stays coprime to Phi_n.
The decision procedure never normalizes the difference: with r = n1/d1 and
s = n2/d2 canonical, it compares Phi-adic valuations of the cross-difference
n1*d2 - n2*d1 and of d1*d2, which is equivalent because Phi_n is irreducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from . import laurent
from .errors import DenominatorNotCoprime
from .laurent import LaurentPoly
from .ratfunc import RationalFunc

MAX_POWER = 8  # public congruence interface cap; the checks here need e <= 3


@dataclass
class Verdict:
    status: str  # pass | fail | error
    detail: str = ""
    witness: Optional[dict] = None

    def ok(self) -> bool:
        return self.status == "pass"


class CyclotomicTable:
    """Memoized Phi_n built by dividing q^n - 1 by all proper-divisor Phi_d."""

    def __init__(self):
        self._cache: dict[int, LaurentPoly] = {}
        self._int_cache: dict[int, list[int]] = {}

    def get_int(self, n: int) -> list[int]:
        got = self._int_cache.get(n)
        if got is not None:
            return got
        if n < 1:
            raise ValueError("cyclotomic index must be positive")
        poly = [-1] + [0] * (n - 1) + [1]  # q^n - 1
        for d in range(1, n):
            if n % d == 0:
                quot = laurent._int_divides(poly, self.get_int(d))
                if quot is None:  # construction invariant
                    raise AssertionError("cyclotomic division not exact")
                poly = quot
        self._int_cache[n] = poly
        return poly

    def get(self, n: int) -> LaurentPoly:
        got = self._cache.get(n)
        if got is None:
            got = LaurentPoly.from_int_dense(self.get_int(n))
            self._cache[n] = got
        return got


_TABLE = CyclotomicTable()


def cyclotomic(n: int) -> LaurentPoly:
    return _TABLE.get(n)


def cyclotomic_int(n: int) -> list[int]:
    return list(_TABLE.get_int(n))


# ---------------------------------------------------------------------------
# divisibility / valuation


def _quick_nondivisible(coeffs: list[int], n: int) -> bool:
    """True means definitely not divisible by Phi_n.

    Divisibility in Z[q] survives evaluation at any integer, so a nonzero
    residue of f(2^64) mod Phi_n(2^64) is a proof of non-divisibility; a zero
    residue decides nothing and the caller falls through to exact division.
    """
    width = 64
    fe = laurent._int_eval_pow2(coeffs, width)
    pe = laurent._int_eval_pow2(_TABLE.get_int(n), width)
    return (fe % pe) != 0


def phi_valuation_int(coeffs: list[int], n: int, cap: Optional[int] = None):
    """(v, cofactor) where Phi_n^v || the integer polynomial, v capped."""
    coeffs = laurent._strip(coeffs)
    if not coeffs:
        raise ValueError("valuation of the zero polynomial")
    phi = _TABLE.get_int(n)
    v = 0
    while cap is None or v < cap:
        if len(coeffs) < len(phi) or _quick_nondivisible(coeffs, n):
            break
        quot = laurent._int_divides(coeffs, phi)
        if quot is None:
            break
        coeffs = quot
        v += 1
    return v, coeffs


def phi_valuation(f: LaurentPoly, n: int, cap: Optional[int] = None) -> int:
    """Exponent of Phi_n in the min-shifted polynomial part of f."""
    if f.is_zero():
        raise ValueError("valuation of the zero polynomial")
    _, coeffs, _ = f._content_int_dense()
    return phi_valuation_int(coeffs, n, cap)[0]


def divides_power(f: LaurentPoly, n: int, e: int) -> bool:
    """Does Phi_n^e divide the polynomial part of f exactly?"""
    if e < 1:
        raise ValueError("power must be positive")
    if f.is_zero():
        return True
    return phi_valuation(f, n, cap=e) >= e


# ---------------------------------------------------------------------------
# congruence of rational functions


def congruent_mod_cyclotomic(lhs: RationalFunc, rhs: RationalFunc,
                             n: int, e: int) -> Verdict:
    """Decide lhs == rhs (mod Phi_n(q)^e) for canonical rational functions.

    Raises DenominatorNotCoprime when the claim is ill-posed, i.e. the reduced
    difference keeps a Phi_n in its denominator.
    """
    if n < 1:
        raise ValueError("modulus index must be positive")
    if not 1 <= e <= MAX_POWER:
        raise ValueError(f"modulus power must be in 1..{MAX_POWER}")
    phi_deg = len(_TABLE.get_int(n)) - 1

    vd = 0
    for den in (lhs.den, rhs.den):
        if den == LaurentPoly.one():
            continue
        _, dc, _ = den._content_int_dense()
        v, _ = phi_valuation_int(dc, n)
        vd += v

    num = lhs.num * rhs.den - rhs.num * lhs.den
    if num.is_zero():
        return Verdict("pass", f"sides identical; trivially 0 mod Phi_{n}^{e}",
                       {"num_valuation": "inf", "den_valuation": vd,
                        "modulus_degree": e * phi_deg})

    _, nc, _ = num._content_int_dense()
    vn, cof = phi_valuation_int(nc, n, cap=vd + e)

    if vn < vd:
        raise DenominatorNotCoprime(
            f"difference denominator carries Phi_{n}^{vd - vn}")

    witness = {
        "num_valuation": vn,
        "den_valuation": vd,
        "modulus_degree": e * phi_deg,
        "cross_numerator_degree": len(nc) - 1,
    }
    if vn - vd >= e:
        witness["cofactor_degree"] = len(cof) - 1
        return Verdict("pass", f"Phi_{n}^{e} divides the difference", witness)

    # remainder after the last successful division step: nonzero mod Phi_n
    rem_poly = LaurentPoly.from_int_dense(
        _rem_mod_phi(cof, n))
    witness["remainder"] = rem_poly.to_pairs()
    return Verdict(
        "fail",
        f"difference valuation {vn} < required {vd + e} at Phi_{n}", witness)


def _rem_mod_phi(coeffs: list[int], n: int) -> list[int]:
    phi = _TABLE.get_int(n)
    if len(coeffs) < len(phi):
        return list(coeffs)
    rem = list(coeffs)
    lead = phi[-1]  # monic
    dg = len(phi) - 1
    assert lead == 1
    for i in range(len(rem) - 1, dg - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        for j in range(dg + 1):
            rem[i - dg + j] -= c * phi[j]
    return laurent._strip(rem[:dg])


def _totient(n: int) -> int:
    out = n
    d = 2
    while d * d <= n:
        if n % d == 0:
            out -= out // d
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out -= out // n
    return out


def product_soundness(n_max: int = 300) -> Verdict:
    """Sweep n <= n_max checking prod over d | n of Phi_d against q^n - 1,
    and each degree against the totient."""
    if n_max < 1:
        raise ValueError("sweep bound must be positive")
    for n in range(1, n_max + 1):
        phi_n = _TABLE.get_int(n)
        if len(phi_n) - 1 != _totient(n):
            return Verdict("fail", f"degree mismatch at n = {n}",
                           {"n": n, "degree": len(phi_n) - 1,
                            "totient": _totient(n)})
        prod = [1]
        for d in range(1, n + 1):
            if n % d == 0:
                prod = laurent._int_mul(prod, _TABLE.get_int(d))
        want = [-1] + [0] * (n - 1) + [1]
        if prod != want:
            return Verdict("fail", f"divisor product differs at n = {n}",
                           {"n": n})
    return Verdict("pass", f"divisor products match for all n <= {n_max}",
                   {"n_max": n_max})
