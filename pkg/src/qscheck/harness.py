"""Case enumeration, suite execution, and report emission.

A suite is a named family of checks with parameter ranges; running one
produces a report whose case order is the enumeration order, no matter how
execution was scheduled.  All defaults live here so that a bare invocation
is reproducible; environment variables are never consulted.
"""

from __future__ import annotations

import csv
import io
import json
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import cyclotomic, identities, padic, theorems
from .errors import ConfigError
from .laurent import LaurentPoly
from .ratfunc import RationalFunc

VERSION = "0.1.0"

SUITES = (
    "thm-a", "thm-b", "thm-c", "lemma", "saalschutz", "relations",
    "wei-chain", "limits", "long", "liu", "cor-a", "cor-b", "prop-a",
    "prop-b", "harmonic", "invariants",
)

_GAMMA_PRIMES = (5, 7, 11, 13)  # fixed property-suite primes
_RING_SEED = 911100
_RING_TRIALS = 1100


@dataclass
class SuiteSpec:
    suite: str
    n_min: int | None = None
    n_max: int | None = None
    p_max: int | None = None
    t: int | None = None
    m_max: int | None = None
    grid_margin: int = 0
    jobs: int = 1
    include_degenerate: bool = False
    report_path: str | None = None
    report_format: str | None = None


@dataclass
class CaseResult:
    id: str
    params: dict
    status: str  # pass | fail | error | skipped
    witness: dict | None
    certified: bool
    ms: int


@dataclass
class Report:
    version: str
    config: dict
    cases: list[CaseResult]
    summary: dict = field(default_factory=dict)

    def to_obj(self) -> dict:
        return {
            "version": self.version,
            "config": self.config,
            "cases": [{"id": c.id, "params": c.params, "status": c.status,
                       "certified": c.certified, "witness": c.witness,
                       "ms": c.ms} for c in self.cases],
            "summary": self.summary,
        }


@dataclass
class _Case:
    id: str
    params: dict
    thunk: object  # () -> (status, witness, certified)


def _from_verdict(fn):
    # exact symbolic checks prove the congruence outright; grid checks carry
    # their own certified flag in the witness
    def thunk():
        v = fn()
        witness = dict(v.witness or {})
        if v.detail:
            witness.setdefault("detail", v.detail)
        certified = bool(witness.get("certified", v.status == "pass"))
        return v.status, witness, certified
    return thunk


# ---------------------------------------------------------------------------
# range helpers


def _class_range(low: int, high: int, modulus: int, residue: int,
                 n_min: int | None, n_max: int | None) -> list[int]:
    lo = max(low, n_min) if n_min is not None else low
    hi = min(high, n_max) if n_max is not None else high
    return [n for n in range(lo, hi + 1) if n % modulus == residue]


def _primes_upto(limit: int) -> list[int]:
    out = []
    for p in range(5, limit + 1):
        if all(p % d for d in range(2, int(p ** 0.5) + 1)):
            out.append(p)
    return out


def _prime_range(spec: SuiteSpec, residue: int | None = None) -> list[int]:
    ps = _primes_upto(spec.p_max if spec.p_max is not None else 97)
    if residue is not None:
        ps = [p for p in ps if p % 6 == residue]
    return ps


# ---------------------------------------------------------------------------
# per-suite case enumeration


def _degenerate_thunk(include: bool):
    def thunk():
        witness = {"reason": "degenerate at n = 1; both sides lose the "
                             "congruence there", **theorems.degenerate_profile()}
        if include:
            lhs, rhs = theorems.thm_a_sides(1, include_degenerate=True)
            l1, r1 = lhs.eval(1), rhs.eval(1)
            witness["diagnostics"] = {
                "lhs_q1_recomputed": str(l1), "rhs_q1_recomputed": str(r1),
                "gap_q1": str(l1 - r1),
            }
        return "skipped", witness, False
    return thunk


def _cases_thm(which: str, spec: SuiteSpec) -> list[_Case]:
    suite = "thm-" + which
    if which == "a":
        ns = _class_range(1, 43, 6, 1, spec.n_min, spec.n_max)
    else:
        ns = _class_range(5, 47, 6, 5, spec.n_min, spec.n_max)
    out = []
    for n in ns:
        if which == "a" and n == 1:
            out.append(_Case(f"{suite}:n=1", {"n": 1},
                             _degenerate_thunk(spec.include_degenerate)))
            continue
        out.append(_Case(
            f"{suite}:n={n}", {"n": n},
            _from_verdict(lambda w=which, m=n:
                          theorems.thm_congruence("thm_" + w, m))))
    return out


def _cases_thm_c(spec: SuiteSpec) -> list[_Case]:
    ts = (spec.t,) if spec.t is not None else (1, 2)
    out = []
    for t in ts:
        low, high = (2, 11) if t == 1 else (4, 13)
        for n in _class_range(low, high, 3, (3 - t) % 3, spec.n_min,
                              spec.n_max):
            out.append(_Case(
                f"thm-c:t={t}:n={n}", {"n": n, "t": t},
                _from_verdict(lambda m=n, s=t:
                              theorems.thm_c_check(m, s,
                                                   margin=spec.grid_margin))))
    return out


def _cases_lemma(spec: SuiteSpec) -> list[_Case]:
    top = spec.m_max if spec.m_max is not None else 10
    out = []
    for m in range(0, top + 1):
        def thunk(mm=m):
            a_grid, b_grid = identities.lemma21_grids(mm, spec.grid_margin)
            return identities.lemma21_check(mm, a_grid, b_grid)
        out.append(_Case(f"lemma:m={m}", {"m": m}, _from_verdict(thunk)))
    return out


def _cases_identity(suite: str, kinds: tuple[str, ...],
                    spec: SuiteSpec) -> list[_Case]:
    top = spec.m_max if spec.m_max is not None else 8
    out = []
    for kind in kinds:
        for m in range(0, top + 1):
            cid = (f"{suite}:m={m}" if len(kinds) == 1
                   else f"{suite}:{kind}:m={m}")
            out.append(_Case(
                cid, {"kind": kind, "m": m},
                _from_verdict(lambda k=kind, mm=m:
                              identities.identity_check(
                                  k, mm, margin=spec.grid_margin))))
    return out


def _cases_wei(spec: SuiteSpec) -> list[_Case]:
    out = []
    for tag, which, low, high, residue in (
            ("dd", "wei_dd", 7, 13, 1), ("ee", "wei_ee", 5, 11, 5)):
        for n in _class_range(low, high, 6, residue, spec.n_min, spec.n_max):
            out.append(_Case(
                f"wei-chain:{tag}:n={n}", {"n": n, "kind": tag},
                _from_verdict(lambda w=which, m=n:
                              theorems.wei_chain_check(
                                  w, m, margin=spec.grid_margin))))
    return out


def _cases_limits(spec: SuiteSpec) -> list[_Case]:
    out = []
    for variant, low, high, residue in (("a", 7, 13, 1), ("b", 5, 11, 5)):
        for n in _class_range(low, high, 6, residue, spec.n_min, spec.n_max):
            out.append(_Case(
                f"limits:{variant}:n={n}", {"n": n, "variant": variant},
                _from_verdict(lambda v=variant, m=n:
                              theorems.lhopital_check(
                                  v, m, margin=spec.grid_margin))))
    return out


def _cases_prime_family(suite: str, fn, spec: SuiteSpec,
                        residue: int | None = None) -> list[_Case]:
    return [_Case(f"{suite}:p={p}", {"p": p},
                  _from_verdict(lambda q=p: fn(q)))
            for p in _prime_range(spec, residue)]


def _cases_invariants(spec: SuiteSpec) -> list[_Case]:
    out = [
        _Case("invariants:cyclotomic-product:n<=300", {"n_max": 300},
              _from_verdict(lambda: cyclotomic.product_soundness(300))),
        _Case(f"invariants:ring-props:trials={_RING_TRIALS}",
              {"trials": _RING_TRIALS, "seed": _RING_SEED},
              _from_verdict(ring_property_sweep)),
    ]
    for name, fn in (("gamma-functional", padic.check_gamma_functional),
                     ("gamma-reflection", padic.check_gamma_reflection),
                     ("gamma-factorial", padic.check_gamma_factorial)):
        for p in _GAMMA_PRIMES:
            out.append(_Case(f"invariants:{name}:p={p}", {"p": p},
                             _from_verdict(lambda f=fn, q=p: f(q))))
    for p in _GAMMA_PRIMES:
        out.append(_Case(f"invariants:cross-limit:p={p}", {"p": p},
                         _from_verdict(lambda q=p: cross_limit_check(q))))
    return out


_SUITE_BUILDERS = {
    "thm-a": lambda spec: _cases_thm("a", spec),
    "thm-b": lambda spec: _cases_thm("b", spec),
    "thm-c": _cases_thm_c,
    "lemma": _cases_lemma,
    "saalschutz": lambda spec: _cases_identity("saalschutz", ("saalschutz",),
                                               spec),
    "relations": lambda spec: _cases_identity(
        "relations", ("eq21", "rel4phi3", "rel5phi4"), spec),
    "wei-chain": _cases_wei,
    "limits": _cases_limits,
    "long": lambda spec: _cases_prime_family("long", padic.check_long, spec),
    "liu": lambda spec: _cases_prime_family("liu", padic.check_liu, spec),
    "cor-a": lambda spec: _cases_prime_family(
        "cor-a", lambda p: padic.check_cor("a", p), spec, residue=1),
    "cor-b": lambda spec: _cases_prime_family(
        "cor-b", lambda p: padic.check_cor("b", p), spec, residue=5),
    "prop-a": lambda spec: _cases_prime_family(
        "prop-a", lambda p: padic.check_prop("a", p), spec, residue=1),
    "prop-b": lambda spec: _cases_prime_family(
        "prop-b", lambda p: padic.check_prop("b", p), spec, residue=5),
    "harmonic": lambda spec: _cases_prime_family(
        "harmonic", padic.check_harmonic_cong, spec, residue=5),
    "invariants": _cases_invariants,
}


# ---------------------------------------------------------------------------
# composed property checks that live at harness level


def cross_limit_check(p: int) -> cyclotomic.Verdict:
    """The q = 1 value of the truncated basic series must equal the cubed
    sum exactly, and both closed routes must land on the same residue."""
    which = "a" if p % 6 == 1 else "b"
    M = (2 * p + 1) // 3 if which == "a" else (p + 1) // 3
    lhs_q1, rhs_q1 = theorems.sides_at_one("thm_" + which, p)
    if lhs_q1 != padic._cubed_sum(Fraction(-1, 3), M):
        return cyclotomic.Verdict("fail", "series value differs at q = 1",
                                  {"p": p, "truncation": M})
    gap = lhs_q1 - rhs_q1
    if gap.denominator % p == 0 or gap.numerator % p ** 3 != 0:
        return cyclotomic.Verdict("fail", "q = 1 gap not divisible by p^3",
                                  {"p": p, "gap": str(gap)})
    cor = padic.check_cor(which, p)
    ctx = padic.PadicContext(p, 3)
    lres = padic.residue_of_rational(lhs_q1, ctx).value
    if cor.status != "pass" or cor.witness["lhs_residue"] != lres:
        return cyclotomic.Verdict("fail", "residue routes disagree",
                                  {"p": p, "direct": lres,
                                   "closed": cor.witness})
    return cyclotomic.Verdict("pass", "q = 1 specialization consistent",
                              {"p": p, "class": p % 6, "truncation": M,
                               "residue": lres})


def _rand_poly(rng: random.Random, allow_zero: bool = True) -> LaurentPoly:
    terms = {}
    for _ in range(rng.randint(0 if allow_zero else 1, 5)):
        terms[rng.randint(-4, 6)] = Fraction(rng.randint(-9, 9))
    poly = LaurentPoly(terms)
    if not allow_zero and poly.is_zero():
        return LaurentPoly.one()
    return poly


def ring_property_sweep(trials: int = _RING_TRIALS,
                        seed: int = _RING_SEED) -> cyclotomic.Verdict:
    """Randomized ring, normalization, and evaluation invariants."""
    rng = random.Random(seed)
    points = [Fraction(2), Fraction(-1), Fraction(1, 3), Fraction(7, 2)]
    for i in range(trials):
        f, g, h = (_rand_poly(rng) for _ in range(3))
        w = _rand_poly(rng, allow_zero=False)
        x = points[i % len(points)]
        fr = RationalFunc.of(f, w)
        gr = RationalFunc.of(g + LaurentPoly.one(), w)
        ok = (
            (f + g) + h == f + (g + h)
            and f * g == g * f
            and f * (g + h) == f * g + f * h
            and (f * g).eval(x) == f.eval(x) * g.eval(x)
            and (fr + gr) - gr == fr
            and RationalFunc.of(f * w, w * w) == fr
            and (fr * gr).num * fr.den * gr.den
                == fr.num * gr.num * (fr * gr).den
        )
        if not ok:
            return cyclotomic.Verdict("fail", f"invariant breaks at trial {i}",
                                      {"trial": i, "seed": seed})
    return cyclotomic.Verdict("pass", f"{trials} randomized trials hold",
                              {"trials": trials, "seed": seed})


# ---------------------------------------------------------------------------
# execution


def _validate(spec: SuiteSpec):
    if spec.suite not in SUITES + ("all",):
        raise ConfigError(f"unknown suite {spec.suite!r}")
    if spec.grid_margin < 0:
        raise ConfigError("grid margin must be >= 0")
    if spec.jobs < 1:
        raise ConfigError("jobs must be >= 1")
    if spec.t is not None and spec.t not in (1, 2):
        raise ConfigError("t must be 1 or 2")
    if spec.m_max is not None and spec.m_max < 0:
        raise ConfigError("m-max must be >= 0")
    if (spec.n_min is not None and spec.n_max is not None
            and spec.n_min > spec.n_max):
        raise ConfigError("empty n range")
    if spec.t is not None and spec.suite not in ("thm-c", "all"):
        raise ConfigError(f"t does not apply to suite {spec.suite!r}")


def _enumerate(spec: SuiteSpec) -> list[_Case]:
    names = SUITES if spec.suite == "all" else (spec.suite,)
    cases = []
    for name in names:
        got = _SUITE_BUILDERS[name](spec)
        if not got:
            raise ConfigError(
                f"suite {name!r} has no cases in the requested ranges")
        cases.extend(got)
    ids = [c.id for c in cases]
    if len(set(ids)) != len(ids):  # enumeration invariant
        raise AssertionError("duplicate case ids")
    return cases


def _run_case(case: _Case) -> CaseResult:
    t0 = time.perf_counter()
    try:
        status, witness, certified = case.thunk()
    except Exception as exc:
        status = "error"
        witness = {"error": f"{type(exc).__name__}: {exc}"}
        certified = False
    ms = int(round((time.perf_counter() - t0) * 1000))
    return CaseResult(case.id, case.params, status, witness, certified, ms)


def run_suite(spec: SuiteSpec) -> Report:
    _validate(spec)
    cases = _enumerate(spec)
    if spec.jobs == 1:
        results = [_run_case(c) for c in cases]
    else:
        with ThreadPoolExecutor(max_workers=spec.jobs) as pool:
            results = list(pool.map(_run_case, cases))
    # report order is enumeration order regardless of scheduling
    summary = {"pass": 0, "fail": 0, "error": 0, "skipped": 0}
    for r in results:
        summary[r.status] += 1
    config = {
        "suite": spec.suite, "n_min": spec.n_min, "n_max": spec.n_max,
        "p_max": spec.p_max, "t": spec.t, "m_max": spec.m_max,
        "grid_margin": spec.grid_margin, "jobs": spec.jobs,
        "include_degenerate": spec.include_degenerate,
    }
    return Report(VERSION, config, results, summary)


def exit_code(report: Report) -> int:
    if report.summary.get("error"):
        return 2
    if report.summary.get("fail"):
        return 1
    return 0


# ---------------------------------------------------------------------------
# emission


def format_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report.to_obj(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["id", "status", "certified", "ms"])
        for c in report.cases:
            writer.writerow([c.id, c.status, str(c.certified).lower(), c.ms])
        return buf.getvalue()
    if fmt == "text":
        lines = [f"qscheck {report.version} suite={report.config['suite']}"]
        for c in report.cases:
            mark = " certified" if c.certified else ""
            line = f"{c.id}: {c.status}{mark} ({c.ms} ms)"
            if c.status in ("fail", "error") and c.witness:
                detail = c.witness.get("detail") or c.witness.get("error")
                if detail:
                    line += f" -- {detail}"
            lines.append(line)
        s = report.summary
        lines.append(f"pass={s['pass']} fail={s['fail']} "
                     f"error={s['error']} skipped={s['skipped']}")
        return "\n".join(lines) + "\n"
    raise ConfigError(f"unknown report format {fmt!r}")


def emit_report(report: Report, path: str, fmt: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_report(report, fmt))
