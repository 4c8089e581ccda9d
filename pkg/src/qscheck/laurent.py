"""Sparse Laurent polynomials over exact rationals.

Coefficients are `fractions.Fraction`, exponents arbitrary integers, storage a
dict keyed by exponent.  Anything size-critical (multiplication, gcd,
divisibility) clears denominators and runs on dense integer arrays packed into
single big integers, so the bulk of the work happens inside libgmp.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as _igcd, lcm as _ilcm

import gmpy2
from gmpy2 import mpz

from .errors import DivisionByZeroPoly, PoleAtPoint

_ZERO = Fraction(0)
_ONE = Fraction(1)

# Below this many pairwise term products, plain dict arithmetic beats packing.
_SPARSE_MUL_CUTOFF = 400
# Never densify across an exponent span wider than this.
_DENSE_SPAN_LIMIT = 1 << 21


# ---------------------------------------------------------------------------
# packed integer-coefficient kernels
#
# A coefficient list [c0..c(n-1)] is identified with the integer
# sum(c_i * 2**(W*i)).  With every |c_i| < 2**(W-1) the digits are balanced
# and the encoding is invertible, so one libgmp multiply of the packed forms
# is a full polynomial multiply.

def _offset_block(count: int, width: int) -> mpz:
    half = mpz(1) << (width - 1)
    return half * (((mpz(1) << (width * count)) - 1) // ((mpz(1) << width) - 1))


def _pack_signed(coeffs: list[int], width: int) -> mpz:
    half = 1 << (width - 1)
    return gmpy2.pack([c + half for c in coeffs], width) - _offset_block(len(coeffs), width)


def _unpack_signed(value, width: int, count: int) -> list[int]:
    if count <= 0:
        return []
    total = mpz(value) + _offset_block(count, width)
    digits = gmpy2.unpack(total, width)
    if len(digits) != count:  # cannot happen while digits stay balanced
        raise AssertionError("packed digit overflow")
    half = 1 << (width - 1)
    return [int(d) - half for d in digits]


def _int_mul(a: list[int], b: list[int]) -> list[int]:
    """Dense integer polynomial product via one big-integer multiply."""
    if not a or not b:
        return []
    ma = max(abs(c) for c in a)
    mb = max(abs(c) for c in b)
    if ma == 0 or mb == 0:
        return [0] * (len(a) + len(b) - 1)
    bound = ma * mb * min(len(a), len(b))
    width = bound.bit_length() + 2
    prod = _pack_signed(a, width) * _pack_signed(b, width)
    return _unpack_signed(prod, width, len(a) + len(b) - 1)


def _int_eval_pow2(coeffs: list[int], width: int) -> mpz:
    """Evaluate an integer polynomial at 2**width.

    Coefficients may exceed the digit range: each level packs the balanced
    low digit and carries the rest into the next level.
    """
    half = 1 << (width - 1)
    mask = (1 << width) - 1
    total = mpz(0)
    shift = 0
    cur = coeffs
    while True:
        if all(-half <= c < half for c in cur):
            return total + (_pack_signed(cur, width) << shift)
        lows = []
        highs = []
        for c in cur:
            lo = ((c + half) & mask) - half
            lows.append(lo)
            highs.append((c - lo) >> width)
        total += _pack_signed(lows, width) << shift
        shift += width
        cur = highs


def _int_divides(f: list[int], g: list[int]):
    """Exact quotient f/g over the integers, or None.

    Classical descending division; aborts as soon as a leading coefficient
    fails to divide.  For primitive f, g this decides divisibility over the
    rationals as well.
    """
    while f and f[-1] == 0:
        f = f[:-1]
    while g and g[-1] == 0:
        g = g[:-1]
    if not g:
        raise DivisionByZeroPoly("division by zero polynomial")
    if not f:
        return []
    if len(f) < len(g):
        return None
    rem = list(f)
    lead = g[-1]
    dg = len(g) - 1
    quot = [0] * (len(f) - dg)
    for i in range(len(f) - 1, dg - 1, -1):
        c = rem[i]
        if c == 0:
            continue
        q, r = divmod(c, lead)
        if r:
            return None
        quot[i - dg] = q
        for j in range(dg + 1):
            rem[i - dg + j] -= q * g[j]
    if any(rem[:dg]):
        return None
    return quot


def _int_content(coeffs: list[int]) -> int:
    g = 0
    for c in coeffs:
        if c:
            g = _igcd(g, c)
            if g == 1:
                return 1
    return g


def _int_primitive(coeffs: list[int]) -> list[int]:
    g = _int_content(coeffs)
    if g in (0, 1):
        return list(coeffs)
    return [c // g for c in coeffs]


def _strip(coeffs: list[int]) -> list[int]:
    n = len(coeffs)
    while n and coeffs[n - 1] == 0:
        n -= 1
    return coeffs[:n]


def _int_gcd_heuristic(a: list[int], b: list[int]):
    """Integer-evaluation gcd: gcd at a power-of-two point, balanced-digit
    reconstruction, then exact-division check of the candidate.  Returns the
    primitive gcd or None when every attempt failed."""
    norm = min(max(abs(c) for c in a), max(abs(c) for c in b))
    width = max(norm.bit_length() + 2, 8)
    for _ in range(6):
        ga = _int_eval_pow2(a, width)
        gb = _int_eval_pow2(b, width)
        if ga == 0 or gb == 0:
            # 2**width is a common root; (q - 2**width) divides both, but the
            # heuristic digit image degenerates.  Grow and retry.
            width = width * 2 + 8
            continue
        g = gmpy2.gcd(ga, gb)
        count = int(g).bit_length() // width + 2
        cand = _int_primitive(_strip(_unpack_signed(g, width, count)))
        if cand:
            if cand[-1] < 0:
                cand = [-c for c in cand]
            qa = _int_divides(a, cand)
            if qa is not None:
                qb = _int_divides(b, cand)
                if qb is not None:
                    return cand, qa, qb
        width = width * 2 + 8
    return None


def _int_pseudo_rem(f: list[int], g: list[int]) -> list[int]:
    dg = len(g) - 1
    lead = g[-1]
    rem = list(f)
    while len(rem) - 1 >= dg and any(rem):
        rem = _strip(rem)
        if len(rem) - 1 < dg:
            break
        c = rem[-1]
        shift = len(rem) - 1 - dg
        rem = [lead * r for r in rem]
        for j in range(dg + 1):
            rem[shift + j] -= c * g[j]
        rem = _strip(rem)
        if not rem:
            break
    return rem


def _int_gcd_prs(a: list[int], b: list[int]) -> list[int]:
    """Primitive pseudo-remainder sequence; the slow safe fallback."""
    f, g = (a, b) if len(a) >= len(b) else (b, a)
    f = _int_primitive(_strip(f))
    g = _int_primitive(_strip(g))
    while g:
        r = _int_pseudo_rem(f, g)
        f, g = g, _int_primitive(_strip(r))
    return f


def _int_gcd_cof(a: list[int], b: list[int]):
    """(gcd, a/gcd, b/gcd) for primitive inputs; gcd has positive lead."""
    a = _strip(a)
    b = _strip(b)
    if len(a) == 1 or len(b) == 1:
        return [1], a, b
    got = _int_gcd_heuristic(a, b)
    if got is not None:
        return got
    core = _int_gcd_prs(a, b)
    if core[-1] < 0:
        core = [-c for c in core]
    if len(core) == 1 and core[0] == 1:
        return core, a, b
    qa = _int_divides(a, core)
    qb = _int_divides(b, core)
    if qa is None or qb is None:  # a true gcd divides both
        raise AssertionError("gcd cofactor division failed")
    return core, qa, qb


def _int_gcd(a: list[int], b: list[int]) -> list[int]:
    a = _strip(a)
    b = _strip(b)
    if not a:
        return _int_primitive(b)
    if not b:
        return _int_primitive(a)
    return _int_gcd_cof(_int_primitive(a), _int_primitive(b))[0]


# ---------------------------------------------------------------------------


class LaurentPoly:
    """Immutable sparse Laurent polynomial in one variable q."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[int, Fraction] | None = None):
        clean: dict[int, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    clean[int(e)] = c if isinstance(c, Fraction) else Fraction(c)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls) -> "LaurentPoly":
        return cls()

    @classmethod
    def one(cls) -> "LaurentPoly":
        return cls({0: _ONE})

    @classmethod
    def const(cls, c) -> "LaurentPoly":
        return cls({0: Fraction(c)})

    @classmethod
    def q_power(cls, e: int, coeff=1) -> "LaurentPoly":
        return cls({e: Fraction(coeff)})

    @classmethod
    def from_coeffs(cls, coeffs, min_exp: int = 0) -> "LaurentPoly":
        return cls({min_exp + i: Fraction(c) for i, c in enumerate(coeffs) if c})

    @classmethod
    def from_int_dense(cls, coeffs: list[int], min_exp: int = 0,
                       content: Fraction = _ONE) -> "LaurentPoly":
        if content == 1:
            return cls({min_exp + i: Fraction(c) for i, c in enumerate(coeffs) if c})
        return cls({min_exp + i: content * c for i, c in enumerate(coeffs) if c})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return min(self.terms)

    @property
    def max_exp(self) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no exponents")
        return max(self.terms)

    def degree(self) -> int:
        """Degree of the min-shifted polynomial part (max_exp - min_exp)."""
        return self.max_exp - self.min_exp

    def leading_coeff(self) -> Fraction:
        return self.terms[self.max_exp]

    def coeff(self, e: int) -> Fraction:
        return self.terms.get(e, _ZERO)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == ({} if other == 0 else {0: Fraction(other)})
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"LaurentPoly.from_pairs({self.to_pairs()!r})"

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        for e, c in b.items():
            s = out.get(e, _ZERO) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return LaurentPoly(out) if out else LaurentPoly()

    __radd__ = __add__

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return LaurentPoly()
            f = Fraction(other)
            return LaurentPoly({e: c * f for e, c in self.terms.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        if not self.terms or not other.terms:
            return LaurentPoly()
        if len(self.terms) * len(other.terms) <= _SPARSE_MUL_CUTOFF:
            out: dict[int, Fraction] = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = e1 + e2
                    s = out.get(e)
                    s = c1 * c2 if s is None else s + c1 * c2
                    if s:
                        out[e] = s
                    else:
                        del out[e]
            return LaurentPoly(out)
        span = (self.max_exp - self.min_exp) + (other.max_exp - other.min_exp)
        if span > _DENSE_SPAN_LIMIT:
            raise ValueError("polynomial product span too large to densify")
        ca, da, ma = self._content_int_dense()
        cb, db, mb = other._content_int_dense()
        prod = _int_mul(da, db)
        return LaurentPoly.from_int_dense(prod, ma + mb, ca * cb)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative power of a polynomial; use RationalFunc")
        result = LaurentPoly.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def shift(self, k: int) -> "LaurentPoly":
        """Multiply by q**k."""
        if k == 0:
            return self
        return LaurentPoly({e + k: c for e, c in self.terms.items()})

    def subst_power(self, s: int) -> "LaurentPoly":
        """Substitute q -> q**s for nonzero integer s."""
        s = int(s)
        if s == 0:
            raise ValueError("substitution exponent must be nonzero")
        if s == 1:
            return self
        return LaurentPoly({e * s: c for e, c in self.terms.items()})

    def monic(self) -> "LaurentPoly":
        if not self.terms:
            raise ValueError("zero polynomial cannot be made monic")
        lead = self.terms[self.max_exp]
        return self if lead == 1 else self * (1 / lead)

    # -- evaluation ---------------------------------------------------------

    def eval(self, x) -> Fraction:
        if not self.terms:
            return _ZERO
        x = Fraction(x)
        exps = sorted(self.terms, reverse=True)
        lo = exps[-1]
        if lo < 0 and x == 0:
            raise PoleAtPoint("evaluation at 0 with negative exponents")
        acc = _ZERO
        prev = None
        for e in exps:
            if prev is not None:
                acc *= x ** (prev - e)
            acc += self.terms[e]
            prev = e
        if lo:
            acc *= x ** lo
        return acc

    # -- dense/packed bridges -----------------------------------------------

    def _content_int_dense(self) -> tuple[Fraction, list[int], int]:
        """(content, integer coefficient list, min_exp); poly == content * sum."""
        if not self.terms:
            return _ZERO, [], 0
        den = 1
        for c in self.terms.values():
            den = _ilcm(den, c.denominator)
        num = 0
        for c in self.terms.values():
            num = _igcd(num, c.numerator * (den // c.denominator))
            if num == 1 and den == 1:
                break
        content = Fraction(num, den)
        lo = self.min_exp
        out = [0] * (self.max_exp - lo + 1)
        for e, c in self.terms.items():
            v = c / content
            out[e - lo] = v.numerator  # exact by construction
        return content, out, lo

    def int_dense(self) -> tuple[list[int], int]:
        """Dense integer coefficients and min_exp; requires integer content."""
        content, coeffs, lo = self._content_int_dense()
        if content.denominator != 1:
            raise ValueError("polynomial has non-integer coefficients")
        c = content.numerator
        if c not in (0, 1):
            coeffs = [x * c for x in coeffs]
        return coeffs, lo

    # -- serialization ------------------------------------------------------

    def to_pairs(self) -> list[list]:
        return [[e, f"{self.terms[e].numerator}/{self.terms[e].denominator}"]
                for e in sorted(self.terms)]

    @classmethod
    def from_pairs(cls, pairs) -> "LaurentPoly":
        terms: dict[int, Fraction] = {}
        for e, s in pairs:
            c = Fraction(s)
            if c:
                terms[int(e)] = c
        return cls(terms)


# ---------------------------------------------------------------------------
# division and gcd (module-level; these are the shift-aware entry points)


def divrem(f: LaurentPoly, g: LaurentPoly) -> tuple[LaurentPoly, LaurentPoly]:
    """Quotient and remainder with f = quot*g + rem, deg(rem) < deg(g).

    Both arguments are shifted by a common power of q so that negative
    exponents disappear, divided as plain polynomials, and the shift is
    restored on the remainder.
    """
    if g.is_zero():
        raise DivisionByZeroPoly("divrem by zero polynomial")
    if f.is_zero():
        return LaurentPoly(), LaurentPoly()
    m = min(f.min_exp, g.min_exp, 0)
    fs = f.shift(-m)
    gs = g.shift(-m)

    # integer fast path: unit leading coefficient keeps everything integral
    try:
        fc, flo = fs.int_dense()
        gc, glo = gs.int_dense()
        int_ok = abs(gc[-1]) == 1 if gc else False
    except ValueError:
        int_ok = False
    if int_ok:
        fd = [0] * flo + fc
        gd = [0] * glo + gc
        dg = len(gd) - 1
        if len(fd) - 1 < dg:
            return LaurentPoly(), f
        lead = gd[-1]
        rem = list(fd)
        quot = [0] * (len(fd) - dg)
        for i in range(len(fd) - 1, dg - 1, -1):
            c = rem[i]
            if c == 0:
                continue
            qc = c * lead  # lead is +-1
            quot[i - dg] = qc
            for j in range(dg + 1):
                rem[i - dg + j] -= qc * gd[j]
        return (LaurentPoly.from_int_dense(quot),
                LaurentPoly.from_int_dense(rem[:dg], m))

    fd2 = [fs.coeff(e) for e in range(0, fs.max_exp + 1)]
    gd2 = [gs.coeff(e) for e in range(0, gs.max_exp + 1)]
    dg = len(gd2) - 1
    if len(fd2) - 1 < dg:
        return LaurentPoly(), f
    lead = gd2[-1]
    rem = list(fd2)
    quot = [_ZERO] * (len(fd2) - dg)
    for i in range(len(fd2) - 1, dg - 1, -1):
        c = rem[i]
        if not c:
            continue
        qc = c / lead
        quot[i - dg] = qc
        for j in range(dg + 1):
            rem[i - dg + j] = rem[i - dg + j] - qc * gd2[j]
    return (LaurentPoly.from_coeffs(quot),
            LaurentPoly.from_coeffs(rem[:dg], m))


def gcd(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """Monic gcd of the min-shifted polynomial parts."""
    if f.is_zero() and g.is_zero():
        raise ValueError("gcd(0, 0) is undefined")
    if f.is_zero():
        return g.shift(-g.min_exp).monic()
    if g.is_zero():
        return f.shift(-f.min_exp).monic()
    _, fa, _ = f._content_int_dense()
    _, ga, _ = g._content_int_dense()
    core = _int_gcd(fa, ga)
    lead = core[-1]
    if lead < 0:
        core = [-c for c in core]
        lead = -lead
    if lead == 1:
        return LaurentPoly.from_int_dense(core)
    return LaurentPoly.from_int_dense(core, 0, Fraction(1, lead))


def gcd_cofactors(f: LaurentPoly, g: LaurentPoly):
    """(G, cf, cg) with G the monic min-shifted gcd, f == G*cf, g == G*cg."""
    if f.is_zero() or g.is_zero():
        raise ValueError("gcd_cofactors needs nonzero inputs")
    cont_f, fa, sf = f._content_int_dense()
    cont_g, ga, sg = g._content_int_dense()
    core, qa, qb = _int_gcd_cof(fa, ga)
    lead = core[-1]
    big = LaurentPoly.from_int_dense(core, 0, Fraction(1, lead))
    cf = LaurentPoly.from_int_dense(qa, sf, cont_f * lead)
    cg = LaurentPoly.from_int_dense(qb, sg, cont_g * lead)
    return big, cf, cg


def exact_div(f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
    """f / g when the division is exact; raises ValueError otherwise."""
    q, r = divrem(f, g)
    if not r.is_zero():
        raise ValueError("exact_div with nonzero remainder")
    return q
