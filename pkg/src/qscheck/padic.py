"""Exact residue arithmetic mod p^k and checks built on the p-adic Gamma.

Left sides are always accumulated as single exact rationals and reduced once
at the end; reducing term by term is forbidden here, because individual terms
can carry p in their denominators that cancel only across the whole sum.
Gamma values at rational arguments are taken at the mod-p^k integer
representative, which the function's 1-Lipschitz continuity justifies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cyclotomic import Verdict
from .errors import NotPAdicUnit, ParameterDomain

__all__ = [
    "PadicContext", "PadicResidue", "residue_of_rational", "morita_gamma",
    "rising_rational", "check_long", "check_liu", "check_cor", "check_prop",
    "harmonic", "check_harmonic_cong", "check_gamma_functional",
    "check_gamma_reflection", "check_gamma_factorial",
]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PadicContext:
    """Residue ring Z/p^k with a cache of Gamma values.

    3 must be invertible, so p >= 5; precision defaults to 3 and is capped
    at 4 to keep the brute-force Gamma products affordable.
    """

    __slots__ = ("p", "k", "modulus", "_gamma")

    def __init__(self, p: int, k: int = 3):
        if not _is_prime(p) or p < 5:
            raise ParameterDomain(f"context needs a prime p >= 5, got {p}")
        if not 1 <= k <= 4:
            raise ParameterDomain(f"precision exponent must be 1..4, got {k}")
        self.p = p
        self.k = k
        self.modulus = p ** k
        self._gamma: dict[int, int] = {}

    def __repr__(self):
        return f"PadicContext(p={self.p}, k={self.k})"


@dataclass(frozen=True)
class PadicResidue:
    value: int
    ctx: PadicContext

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.ctx.modulus)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PadicResidue):
            return NotImplemented
        return (self.value == other.value and self.ctx.p == other.ctx.p
                and self.ctx.k == other.ctx.k)

    def __hash__(self):
        return hash((self.value, self.ctx.p, self.ctx.k))

    def mul(self, other: "PadicResidue") -> "PadicResidue":
        return PadicResidue(self.value * other.value, self.ctx)

    def pow(self, e: int) -> "PadicResidue":
        return PadicResidue(pow(self.value, e, self.ctx.modulus), self.ctx)


def residue_of_rational(x, ctx: PadicContext) -> PadicResidue:
    """u / v as an element of Z/p^k; v must be a p-adic unit."""
    x = Fraction(x)
    if x.denominator % ctx.p == 0:
        raise NotPAdicUnit(
            f"denominator {x.denominator} not invertible mod {ctx.p}^{ctx.k}")
    inv = pow(x.denominator, -1, ctx.modulus)
    return PadicResidue(x.numerator * inv, ctx)


def morita_gamma(x, ctx: PadicContext) -> PadicResidue:
    """Gamma at the mod-p^k representative of x.

    For the representative r: value 1 at r = 0, otherwise
    (-1)^r prod_{1 <= j < r, p not dividing j} j, all mod p^k.
    """
    r = residue_of_rational(x, ctx).value
    cached = ctx._gamma.get(r)
    if cached is None:
        prod = 1
        for j in range(1, r):
            if j % ctx.p:
                prod = prod * j % ctx.modulus
        if r % 2:
            prod = -prod % ctx.modulus
        if r == 0:
            prod = 1
        cached = prod
        ctx._gamma[r] = cached
    return PadicResidue(cached, ctx)


def rising_rational(x, m: int) -> Fraction:
    """Shifted factorial x (x+1) ... (x+m-1), with the empty product 1."""
    if m < 0:
        raise ParameterDomain("shifted factorial needs m >= 0")
    x = Fraction(x)
    out = Fraction(1)
    for j in range(m):
        out *= x + j
    return out


def harmonic(m: int, order: int = 1) -> Fraction:
    """Harmonic number of the given order (1 or 2)."""
    if order not in (1, 2):
        raise ParameterDomain(f"harmonic order must be 1 or 2, got {order}")
    if m < 0:
        raise ParameterDomain("harmonic index must be nonnegative")
    return sum((Fraction(1, j ** order) for j in range(1, m + 1)), Fraction(0))


# ---------------------------------------------------------------------------
# truncated central sums and their closed companions


def _cubed_sum(x: Fraction, upper: int) -> Fraction:
    # sum_{k=0}^{upper} (x)_k^3 / k!^3 as one exact rational
    term = Fraction(1)
    total = Fraction(1)
    for k in range(1, upper + 1):
        term *= ((x + k - 1) / k) ** 3
        total += term
    return total


def _compare(tag: str, p: int, lhs: Fraction, rhs, ctx: PadicContext,
             extra: dict | None = None) -> Verdict:
    lres = residue_of_rational(lhs, ctx)
    rres = rhs if isinstance(rhs, PadicResidue) else residue_of_rational(rhs, ctx)
    wit = {"p": p, "precision": ctx.k, "lhs_residue": lres.value,
           "rhs_residue": rres.value, **(extra or {})}
    if lres == rres:
        return Verdict("pass", f"{tag}: residues agree mod {p}^{ctx.k}", wit)
    return Verdict("fail", f"{tag}: residues differ mod {p}^{ctx.k}", wit)


def _full_prime_domain(p: int):
    if not _is_prime(p) or p < 5:
        raise ParameterDomain(f"need a prime p >= 5, got {p}")


def check_long(p: int, k: int = 3) -> Verdict:
    """Full sum of (1/3)_k^3/k!^3 over k < p against its Gamma value."""
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    lhs = _cubed_sum(Fraction(1, 3), p - 1)
    g6 = morita_gamma(Fraction(1, 3), ctx).pow(6)
    if p % 6 == 1:
        rhs = g6
    else:
        rhs = residue_of_rational(Fraction(-p * p, 3), ctx).mul(g6)
    return _compare("full cubed sum", p, lhs, rhs, ctx,
                    {"class": p % 6, "truncation": p - 1})


def check_liu(p: int, k: int = 3) -> Verdict:
    """Full sum of (-1/3)_k^3/k!^3 over k < p against its Gamma value."""
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    lhs = _cubed_sum(Fraction(-1, 3), p - 1)
    g6 = morita_gamma(Fraction(2, 3), ctx).pow(6)
    if p % 6 == 1:
        rhs = PadicResidue(-18 * p * p, ctx).mul(g6)
    else:
        rhs = PadicResidue(54, ctx).mul(g6)
    return _compare("full cubed sum", p, lhs, rhs, ctx,
                    {"class": p % 6, "truncation": p - 1})


def _cor_sides(which: str, p: int) -> tuple[Fraction, Fraction, int]:
    if which == "a":
        if p % 6 != 1:
            raise ParameterDomain(f"branch a needs p = 1 mod 6, got {p}")
        M = (2 * p + 1) // 3
        lhs = _cubed_sum(Fraction(-1, 3), M)
        bracket = (1 + 6 * Fraction(p) ** 2
                   - sum(Fraction(4 * p * p, (3 * i - 2) ** 2)
                         for i in range(1, M + 1)))
        rhs = (6 * rising_rational(Fraction(1, 3), M) ** 2
               / rising_rational(1, M) ** 2 * bracket)
        return lhs, rhs, M
    if which == "b":
        if p % 6 != 5:
            raise ParameterDomain(f"branch b needs p = 5 mod 6, got {p}")
        M = (p + 1) // 3
        lhs = _cubed_sum(Fraction(-1, 3), M)
        bracket = 1 + (Fraction(p * p, (p + 1) ** 2)
                       * sum(Fraction(1, (3 * i - 2) ** 2)
                             for i in range(1, M + 1)))
        rhs = (54 * rising_rational(Fraction(1, 3), M) ** 2
               / rising_rational(1, (p - 2) // 3) ** 2 * bracket)
        return lhs, rhs, M
    raise ParameterDomain(f"branch must be 'a' or 'b', got {which!r}")


def check_cor(which: str, p: int, k: int = 3) -> Verdict:
    """Truncated cubed sum against its explicit rational closed form."""
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    lhs, rhs, M = _cor_sides(which, p)
    return _compare(f"truncated sum, branch {which}", p, lhs, rhs, ctx,
                    {"class": p % 6, "truncation": M})


def check_prop(which: str, p: int, k: int = 3) -> Verdict:
    """Closed-form bracket against its Gamma evaluation.

    The branch-a left side carries p^2 inside the shifted factorials, so the
    whole expression is reduced as one rational before residue extraction.
    """
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    _, closed, M = _cor_sides(which, p)
    g6 = morita_gamma(Fraction(2, 3), ctx).pow(6)
    if which == "a":
        lhs = closed / 6
        rhs = PadicResidue(-3 * p * p, ctx).mul(g6)
    else:
        lhs = closed / 54
        rhs = g6
    return _compare(f"bracket evaluation, branch {which}", p, lhs, rhs, ctx,
                    {"class": p % 6, "truncation": M})


def check_harmonic_cong(p: int) -> Verdict:
    """Inverse-square partial sum against the scaled harmonic number, mod p."""
    _full_prime_domain(p)
    if p % 6 != 5:
        raise ParameterDomain(f"harmonic congruence needs p = 5 mod 6, got {p}")
    ctx = PadicContext(p, 1)
    lhs = sum(Fraction(1, (3 * i - 2) ** 2)
              for i in range(1, (p + 1) // 3 + 1))
    rhs = Fraction(2, 9) * harmonic((2 * p - 1) // 3, 2)
    return _compare("harmonic congruence", p, lhs, rhs, ctx,
                    {"class": p % 6, "upper": (p + 1) // 3})


# ---------------------------------------------------------------------------
# structural properties of the Gamma function


def check_gamma_functional(p: int, k: int = 3, span: int | None = None) -> Verdict:
    """Step relation over integer representatives r < span (default p^2):
    the ratio at r+1 over r is -r off multiples of p and -1 on them."""
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    if span is None:
        span = p * p
    for r in range(span):
        lhs = morita_gamma(r + 1, ctx).value
        g = morita_gamma(r, ctx).value
        want = (-g if r % p == 0 else -r * g) % ctx.modulus
        if lhs != want:
            return Verdict("fail", f"step relation breaks at r = {r}",
                           {"p": p, "r": r, "got": lhs, "want": want})
    return Verdict("pass", f"step relation holds for all r < {span}",
                   {"p": p, "precision": k, "span": span})


def check_gamma_reflection(p: int, k: int = 3) -> Verdict:
    """Reflection product at x and 1-x, with the displayed sign convention.

    Checked for thirds and small integers; a failing pair is reported as-is
    rather than having its sign convention normalized away.
    """
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    points = [Fraction(1, 3), Fraction(2, 3)] + [Fraction(j) for j in range(1, 6)]
    for x in points:
        left = morita_gamma(x, ctx).mul(morita_gamma(1 - x, ctx)).value
        anchor = residue_of_rational(-x, PadicContext(p, 1)).value % p
        want = pow(-1, anchor - 1, ctx.modulus) % ctx.modulus
        if left != want:
            return Verdict("fail", f"reflection sign differs at x = {x}",
                           {"p": p, "x": str(x), "got": left, "want": want})
    return Verdict("pass", "reflection holds at all sampled points",
                   {"p": p, "precision": k, "points": len(points)})


def check_gamma_factorial(p: int, k: int = 3) -> Verdict:
    """Below p the Gamma value is the signed factorial; direct cross-check."""
    _full_prime_domain(p)
    ctx = PadicContext(p, k)
    fact = 1
    for r in range(1, p):
        # fact = (r-1)! built without the Gamma code path
        if r > 1:
            fact = fact * (r - 1) % ctx.modulus
        want = (fact if r % 2 == 0 else -fact) % ctx.modulus
        if morita_gamma(r, ctx).value != want:
            return Verdict("fail", f"factorial form breaks at r = {r}",
                           {"p": p, "r": r})
    return Verdict("pass", "signed factorial form holds below p",
                   {"p": p, "precision": k})
