"""Grid-certified checks for the summation and transformation identities.

Every check here compares two closed expressions at all points of a
deterministic product grid whose per-variable size exceeds an itemized
degree bound for the identity with denominators cleared.  A full pass is
therefore a proof of the identity, not a sample.  The lemma check keeps
the rational-function route because its closed form is cheap; the deeper
transformations run on the packed point engine.
"""

from __future__ import annotations

from fractions import Fraction

from .cyclotomic import Verdict
from .errors import ParameterDomain
from .packedeval import PackedCtx, PackedPair, PoleHit
from .pit import (BoundLedger, GridSpec, degree_bound, exclude_values,
                  generate_grid, nested_grid_check)
from .qseries import QPochSpec, phi_series, q_pochhammer
from .ratfunc import RationalFunc

_ZERO = Fraction(0)
_ONE = Fraction(1)


# -- packed series helpers --------------------------------------------------


def _poch_value(ctx: PackedCtx, coeff, exp: int, step: int,
                count: int) -> PackedPair:
    """prod_{j<count} (1 - coeff * q^(exp + step*j)) as a packed pair."""
    out = ctx.pair_one()
    for j in range(count):
        out = out.mul(ctx.pair_factor(coeff, exp + step * j))
    return out


def _phi_family(ctx: PackedCtx, uppers, lowers, step: int, argument,
                truncation: int, weights=(0,)) -> list[PackedPair]:
    """sum_k t_k q^(j*k) for each j in weights, over one shared denominator.

    uppers/lowers are (coeff, exp) pairs standing for coeff * q^exp; the
    customary (q^step; q^step)_k factor is supplied here, not by callers.
    Term numerators come from prefix/suffix products of the step ratios, so
    every weight reuses the same polynomial work and the returned pairs
    share their denominator object, which keeps later combinations cheap.
    """
    zc, ze = argument
    ratio_num, ratio_den = [], []
    for k in range(1, truncation + 1):
        shift = step * (k - 1)
        num = ctx.pair_monomial(zc, ze)
        for c, e in uppers:
            num = num.mul(ctx.pair_factor(c, e + shift))
        den = ctx.pair_factor(_ONE, step * k)
        for c, e in lowers:
            den = den.mul(ctx.pair_factor(c, e + shift))
        ratio_num.append(num)
        ratio_den.append(den)
    suffix = [ctx.pair_one()]
    for den in reversed(ratio_den):
        suffix.append(suffix[-1].mul(den))
    suffix.reverse()
    # terms[k] / suffix[0] is the k-th series term
    terms = []
    prefix = ctx.pair_one()
    for k in range(truncation + 1):
        terms.append(prefix.mul(suffix[k]))
        if k < truncation:
            prefix = prefix.mul(ratio_num[k])
    full = suffix[0]
    base = min(t.shift for t in terms)
    out = []
    for j in weights:
        total = None
        for k, t in enumerate(terms):
            lift = (t.shift - base) + j * k
            v = t.num if lift == 0 else ctx.mul(t.num, ctx.monomial(1, lift))
            total = v if total is None else ctx.add(total, v)
        out.append(PackedPair(ctx, total, full.num, base - full.shift))
    return out


def _phi_value(ctx: PackedCtx, uppers, lowers, step: int, argument,
               truncation: int) -> PackedPair:
    return _phi_family(ctx, uppers, lowers, step, argument, truncation)[0]


# -- the quadratic-argument lemma -------------------------------------------


def lemma21_bounds(m: int) -> BoundLedger:
    led = BoundLedger()
    for var in ("a", "b"):
        led.add(var, "series numerator", m)
        led.add(var, "series denominator cleared", m)
        led.add(var, "closed-form denominator", m + 3)
        led.add(var, "slack", 2)
    return led


def lemma21_grids(m: int, margin: int = 0):
    led = lemma21_bounds(m)
    excl = (exclude_values(0, 1),)
    a_grid = generate_grid(
        GridSpec("a", degree_bound(led, "a") + 1 + margin, excl))
    b_grid = generate_grid(
        GridSpec("b", degree_bound(led, "b") + 1 + margin, excl))
    return a_grid, b_grid


def lemma21_sides(m: int, a, b):
    """Both sides of the terminating quadratic-argument summation."""
    a, b = Fraction(a), Fraction(b)
    q = RationalFunc.q
    c = RationalFunc.const

    def poch(x, count):
        x = x if isinstance(x, RationalFunc) else RationalFunc.const(x)
        return q_pochhammer(QPochSpec(x, 1, count))

    lhs = phi_series(upper=[c(a), c(b), q(-m)],
                     lower=[q(1), c(a * b) * q(2 - m)],
                     step=1, argument=q(3), truncation=m)
    qm = q(m)
    pref = (poch(1 / a, m) * poch(1 / b, m)
            / (poch(q(1), m) * poch(1 / (a * b), m)))
    t1 = (qm * (1 - qm) * (q(1) - c(a * b) * q(2) - (1 + q(1) - c(a) * q(1)
                                                    - c(b) * q(1)) * qm)
          / ((1 - c(a * b) * q(1)) * (c(a) * q(1) - qm)
             * (c(b) * q(1) - qm)))
    t2 = c((1 - a * b) / ((1 - a) * (1 - b))) \
        - c((2 - a - b) / ((1 - a) * (1 - b))) * qm
    rhs = pref * (t1 - t2)
    return lhs, rhs


def lemma21_check(m: int, a_grid, b_grid) -> Verdict:
    if m < 0:
        raise ParameterDomain("lemma order must be >= 0")
    a_grid = [Fraction(a) for a in a_grid]
    b_grid = [Fraction(b) for b in b_grid]
    for g, name in ((a_grid, "a"), (b_grid, "b")):
        if any(v in (0, 1) for v in g):
            raise ParameterDomain(f"{name} grid touches a forbidden value")
    if any(a * b == 1 for a in a_grid for b in b_grid):
        raise ParameterDomain("grid pair with ab = 1")
    led = lemma21_bounds(m)
    bounds = {v: degree_bound(led, v) for v in ("a", "b")}
    for a in a_grid:
        for b in b_grid:
            lhs, rhs = lemma21_sides(m, a, b)
            if lhs != rhs:
                return Verdict("fail", "sides differ", {
                    "point": {"a": str(a), "b": str(b)},
                    "lhs": lhs.to_obj(), "rhs": rhs.to_obj()})
    certified = (len(a_grid) > bounds["a"] and len(b_grid) > bounds["b"])
    return Verdict("pass", witness={
        "points_checked": len(a_grid) * len(b_grid),
        "bounds": {v: dict(led.contributions(v)) for v in ("a", "b")},
        "grid": {"a": len(a_grid), "b": len(b_grid)},
        "certified": certified,
    })


# -- grid-certified transformation checks -----------------------------------
#
# Each evaluator compares the two sides after multiplying through by every
# denominator in sight: the shared series denominator, the closed-form
# pochhammer denominators, the combination denominator, and the cleared
# telescoping factors (1-x), (1-y).  All of those are checked nonzero
# once per outer parameter tuple (a vanishing one is a genuine pole of the
# display and skips the point), so at surviving points the cleared
# difference vanishes iff the identity holds there, and the itemized
# per-variable degree bounds certify a full sweep.  The payoff is that the
# innermost loops touch only ready-made packed values: a couple of
# big-by-small multiplications per point and no cross-multiplied equality.


def _lin(ctx: PackedCtx, c0, c1, e: int):
    """c0 + c1 * q^e as a packed value, tolerating e == 0."""
    if e == 0:
        return ctx.const(Fraction(c0) + Fraction(c1))
    return ctx.linear(c0, c1, e)


def _aligned(ctx: PackedCtx, parts):
    """Lift (value, shift) pairs to a common power of q."""
    base = min(s for _, s in parts)
    return [v if s == base else ctx.mul(v, ctx.monomial(1, s - base))
            for v, s in parts]


def _saalschutz_eval(m: int):
    state: dict = {}

    def evaluate(pt: dict, ctx: PackedCtx) -> bool:
        a, b, c = pt["a"], pt["b"], pt["c"]
        key = (ctx.width, a, b)
        if state.get("key") != key:
            # the term-ratio numerators do not involve c; build them once
            # per innermost grid sweep
            nums = []
            for k in range(1, m + 1):
                shift = k - 1
                n = ctx.pair_monomial(_ONE, 1)
                for cc, e in ((a, 0), (b, 0), (_ONE, -m)):
                    n = n.mul(ctx.pair_factor(cc, e + shift))
                nums.append(n)
            state.update(key=key, nums=nums)
        nums = state["nums"]
        dens = []
        for k in range(1, m + 1):
            d = ctx.pair_factor(_ONE, k).mul(ctx.pair_factor(c, k - 1))
            dens.append(d.mul(ctx.pair_factor(a * b / c, k - m)))
        # series = U/S by a right-to-left recurrence over the term ratios:
        # S_k = prod_{i>k} D_i, U_k = sum_{j>=k} prod_{i<=j} N_i prod_{i>j} D_i
        S = ctx.pair_one()
        U = ctx.pair_one()
        for k in range(m, 0, -1):
            S = dens[k - 1].mul(S)
            U = S.add(nums[k - 1].mul(U))
        if S.num.val == 0:
            raise PoleHit("c")
        pn = (_poch_value(ctx, c / a, 0, 1, m)
              .mul(_poch_value(ctx, c / b, 0, 1, m)))
        pd = (_poch_value(ctx, c, 0, 1, m)
              .mul(_poch_value(ctx, c / (a * b), 0, 1, m)))
        if pd.num.val == 0:
            raise PoleHit("c")
        lhsv, rhsv = _aligned(ctx, [
            (ctx.mul(U.num, pd.num), U.shift + pd.shift),
            (ctx.mul(S.num, pn.num), S.shift + pn.shift)])
        return ctx.is_zero(ctx.sub(lhsv, rhsv))
    return evaluate


def _eq21_eval(m: int):
    state: dict = {}

    def evaluate(pt: dict, ctx: PackedCtx) -> bool:
        a, b, c = pt["a"], pt["b"], pt["c"]
        key = (ctx.width, a, b, c)
        if state.get("key") != key:
            uppers = [(a, 0), (b, 0), (_ONE, -m)]
            lowers = [(c, 1), (a * b / c, 1 - m)]
            try:
                s0, s1 = _phi_family(ctx, uppers, lowers, 1, (_ONE, 1), m,
                                     (0, 1))
                R = (a - c) * (b - c)
                abc2 = _lin(ctx, a * b, -c * c, m)
                if s0.den.val == 0 or R == 0 or abc2.val == 0:
                    raise PoleHit
                pn = (_poch_value(ctx, c / a, 0, 1, m)
                      .mul(_poch_value(ctx, c / b, 0, 1, m)))
                pd = (_poch_value(ctx, c, 1, 1, m)
                      .mul(_poch_value(ctx, c / (a * b), 0, 1, m)))
                if pd.num.val == 0:
                    raise PoleHit
            except PoleHit:
                raise PoleHit("c")
            G = ctx.mul(s0.den, pn.num)
            MA = ctx.scale(ctx.mul(pd.num, abc2), R)
            A0, A1, B1, B2 = _aligned(ctx, [
                (ctx.mul(s0.num, MA), s0.shift + pd.shift),
                (ctx.mul(s1.num, MA), s1.shift + pd.shift),
                (ctx.scale(ctx.mul(G, _lin(ctx, 1, -c, m)), R), pn.shift),
                (ctx.scale(ctx.mul(G, ctx.mul(_lin(ctx, a, -c, m),
                                              _lin(ctx, b, -c, m))),
                           a * b - c), pn.shift)])
            state.update(key=key, A0=A0, A1=A1, B1=B1, B2=B2)
        x = pt["x"]
        lhs = ctx.sub(state["A0"], ctx.scale(state["A1"], x))
        rhs = ctx.add(ctx.mul(state["B1"], _lin(ctx, a * b, -c * x, m)),
                      ctx.scale(state["B2"], c - x))
        return ctx.is_zero(ctx.sub(lhs, rhs))
    return evaluate


def _rel4phi3_eval(m: int):
    state: dict = {}

    def evaluate(pt: dict, ctx: PackedCtx) -> bool:
        a, b, c = pt["a"], pt["b"], pt["c"]
        key = (ctx.width, a, b, c)
        if state.get("key") != key:
            uppers = [(a, 0), (b, 0), (_ONE, -m)]
            lowers = [(c, 1), (a * b / c, 1 - m)]
            try:
                s0, s1 = _phi_family(ctx, uppers, lowers, 1, (_ONE, 1), m,
                                     (0, 1))
                phi1 = _phi_value(ctx, uppers, [(c, 0), (a * b / c, 1 - m)],
                                  1, (_ONE, 1), m)
                phi2 = _phi_value(ctx, uppers, [(c, 1), (a * b / c, -m)],
                                  1, (_ONE, 1), m)
                abc2 = _lin(ctx, a * b, -c * c, m)
                if s0.den.val == 0 or phi1.den.val == 0 \
                        or phi2.den.val == 0 or abc2.val == 0:
                    raise PoleHit
            except PoleHit:
                raise PoleHit("c")
            MA = ctx.mul(ctx.mul(phi1.den, phi2.den), abc2)
            A0, A1, B1, B2 = _aligned(ctx, [
                (ctx.mul(s0.num, MA), s0.shift),
                (ctx.mul(s1.num, MA), s1.shift),
                (ctx.scale(ctx.mul(ctx.mul(s0.den, phi1.num), phi2.den),
                           1 - c), phi1.shift),
                (ctx.mul(ctx.mul(s0.den, phi2.num),
                         ctx.mul(phi1.den, _lin(ctx, a * b, -c, m))),
                 phi2.shift)])
            state.update(key=key, A0=A0, A1=A1, B1=B1, B2=B2)
        x = pt["x"]
        lhs = ctx.sub(state["A0"], ctx.scale(state["A1"], x))
        rhs = ctx.add(ctx.mul(state["B1"], _lin(ctx, a * b, -c * x, m)),
                      ctx.scale(state["B2"], c - x))
        return ctx.is_zero(ctx.sub(lhs, rhs))
    return evaluate


def _rel5phi4_eval(m: int):
    state: dict = {}

    def evaluate(pt: dict, ctx: PackedCtx) -> bool:
        a, b, c = pt["a"], pt["b"], pt["c"]
        key = (ctx.width, a, b, c)
        if state.get("key") != key:
            uppers = [(a, 0), (b, 0), (_ONE, -m)]
            arg = (_ONE, 1)
            try:
                w0, w1, w2 = _phi_family(
                    ctx, uppers, [(c, 2), (a * b / c, 1 - m)], 1, arg, m,
                    (0, 1, 2))
                u10, u11 = _phi_family(
                    ctx, uppers, [(c, 1), (a * b / c, 1 - m)], 1, arg, m,
                    (0, 1))
                u20, u21 = _phi_family(
                    ctx, uppers, [(c, 2), (a * b / c, -m)], 1, arg, m,
                    (0, 1))
                if w0.den.val == 0 or u10.den.val == 0 \
                        or u20.den.val == 0:
                    raise PoleHit
            except PoleHit:
                raise PoleHit("c")
            # ab - c^2 q^(m+1) cannot vanish at rational grid values since
            # its q-power is positive, so it needs no explicit pole check
            abc2q = _lin(ctx, a * b, -c * c, m + 1)
            MW = ctx.mul(abc2q, ctx.mul(u10.den, u20.den))
            M1 = ctx.mul(_lin(ctx, 1, -c, 1), ctx.mul(w0.den, u20.den))
            M2 = ctx.mul(_lin(ctx, a * b, -c, m), ctx.mul(w0.den, u10.den))
            WA0, WA1, WA2, C10, C11, C20, C21 = _aligned(ctx, [
                (ctx.mul(w0.num, MW), w0.shift),
                (ctx.mul(w1.num, MW), w1.shift),
                (ctx.mul(w2.num, MW), w2.shift),
                (ctx.mul(u10.num, M1), u10.shift),
                (ctx.mul(u11.num, M1), u11.shift),
                (ctx.mul(u20.num, M2), u20.shift),
                (ctx.mul(u21.num, M2), u21.shift)])
            state.update(key=key, WA0=WA0, WA1=WA1, WA2=WA2, C10=C10,
                         C11=C11, C20=C20, C21=C21, xkey=None)
        x = pt["x"]
        xkey = (state["key"], x)
        if state.get("xkey") != xkey:
            state.update(
                xkey=xkey,
                sx0=ctx.sub(state["WA0"], ctx.scale(state["WA1"], x)),
                sx1=ctx.sub(state["WA1"], ctx.scale(state["WA2"], x)),
                p1=ctx.sub(state["C10"], ctx.scale(state["C11"], x)),
                p2=ctx.sub(state["C20"], ctx.scale(state["C21"], x)))
        y = pt["y"]
        lhs = ctx.sub(state["sx0"], ctx.scale(state["sx1"], y))
        rhs = ctx.add(ctx.mul(state["p1"], _lin(ctx, a * b, -c * y, m)),
                      ctx.mul(state["p2"], _lin(ctx, -y, c, 1)))
        return ctx.is_zero(ctx.sub(lhs, rhs))
    return evaluate


def _bounds_saalschutz(m):
    # the cleared-denominator lcm absorbs the closed-form denominator: its
    # linear factors are unit multiples of the series denominator's
    led = BoundLedger()
    for var in ("a", "b"):
        led.add(var, "series factors", m)
        led.add(var, "closed-form numerator", m)
        led.add(var, "slack", 2)
    led.add("c", "series denominator cleared", 3 * m)
    led.add("c", "slack", 2)
    return led


def _bounds_eq21(m):
    # denominators on the two sides share whole factor families, so the
    # cleared difference is bounded by their lcm, not their product
    led = BoundLedger()
    for var in ("a", "b"):
        led.add(var, "series factors", m)
        led.add(var, "closed-form numerator", m)
        led.add(var, "brace factors", 3)
        led.add(var, "slack", 2)
    led.add("c", "series denominator cleared", 3 * m)
    led.add("c", "closed-form factors", 4)
    led.add("c", "slack", 2)
    led.add("x", "telescoped numerator", 1)
    led.add("x", "brace numerator", 1)
    led.add("x", "slack", 1)
    return led


def _bounds_rel4phi3(m):
    led = BoundLedger()
    for var in ("a", "b"):
        led.add(var, "series factors", m)
        led.add(var, "denominator lcm extension", 1)
        led.add(var, "coefficient denominator", 1)
        led.add(var, "slack", 2)
    led.add("c", "series denominator cleared", 3 * m)
    led.add("c", "denominator lcm extension", 3)
    led.add("c", "coefficient denominator", 2)
    led.add("c", "slack", 2)
    led.add("x", "telescoped numerator", 1)
    led.add("x", "coefficient numerator", 1)
    led.add("x", "slack", 1)
    return led


def _bounds_rel5phi4(m):
    led = BoundLedger()
    for var in ("a", "b"):
        led.add(var, "series factors", m)
        led.add(var, "denominator lcm extension", 1)
        led.add(var, "coefficient denominator", 1)
        led.add(var, "slack", 2)
    led.add("c", "series denominator cleared", 3 * m)
    led.add("c", "denominator lcm extension", 3)
    led.add("c", "coefficient denominator", 2)
    led.add("c", "slack", 2)
    for var in ("x", "y"):
        led.add(var, "telescoped numerator", 1)
        led.add(var, "coefficient numerator", 1)
        led.add(var, "slack", 1)
    return led


_IDENTITIES = {
    "saalschutz": (("a", "b", "c"), _bounds_saalschutz, _saalschutz_eval),
    "eq21": (("a", "b", "c", "x"), _bounds_eq21, _eq21_eval),
    "rel4phi3": (("a", "b", "c", "x"), _bounds_rel4phi3, _rel4phi3_eval),
    "rel5phi4": (("a", "b", "c", "x", "y"), _bounds_rel5phi4,
                 _rel5phi4_eval),
}


def identity_bounds(which: str, m: int) -> BoundLedger:
    if which not in _IDENTITIES:
        raise ParameterDomain(f"unknown identity {which!r}")
    return _IDENTITIES[which][1](m)


def identity_check(which: str, m: int, params: dict | None = None,
                   margin: int = 0) -> Verdict:
    """Certify one transformation identity at series order m.

    params may pin a different grid start per variable; margin widens every
    grid past its degree bound.  Points where a displayed denominator
    vanishes are skipped and replaced, so they never count toward the bound.
    """
    if which not in _IDENTITIES:
        raise ParameterDomain(f"unknown identity {which!r}")
    if m < 0:
        raise ParameterDomain("series order must be >= 0")
    if margin < 0:
        raise ParameterDomain("margin must be >= 0")
    variables, bounds_fn, eval_factory = _IDENTITIES[which]
    led = bounds_fn(m)
    starts = dict(params or {})
    specs = []
    for var in variables:
        start = Fraction(starts.pop(var, 2))
        specs.append(GridSpec(var, degree_bound(led, var) + 1 + margin,
                              (exclude_values(0, 1),), start))
    if starts:
        raise ParameterDomain(f"unknown grid variables {sorted(starts)}")
    verdict = nested_grid_check(specs, eval_factory(m))
    witness = dict(verdict.witness or {})
    witness.update(
        bounds={v: dict(led.contributions(v)) for v in variables},
        grid={s.variable: s.required_points for s in specs},
        certified=verdict.ok(),
    )
    return Verdict(verdict.status, verdict.detail, witness)
