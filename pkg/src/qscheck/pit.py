"""Deterministic polynomial-identity-testing support.

Grids are arithmetic progressions of rationals with syntactic exclusions;
degree bounds are assembled by the expression builders into a ledger, and a
grid strictly larger than the bound turns a pointwise pass into a proof of
the identity (finitely many roots otherwise).  Pole points discovered during
evaluation are skipped and the grid extended; running dry raises.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional

from .cyclotomic import Verdict
from .errors import GridExhausted, GridPole
from .packedeval import NeedWidth, PackedCtx, PoleHit

_CANDIDATE_FACTOR = 10


@dataclass(frozen=True)
class Exclusion:
    description: str
    values: tuple = ()
    predicate: Optional[Callable[[Fraction], bool]] = None

    def hits(self, x: Fraction) -> bool:
        if any(x == v for v in self.values):
            return True
        return bool(self.predicate and self.predicate(x))


def exclude_values(*vals) -> Exclusion:
    vals = tuple(Fraction(v) for v in vals)
    return Exclusion("not in {" + ", ".join(map(str, vals)) + "}", vals)


def exclude_when(description: str, predicate) -> Exclusion:
    return Exclusion(description, (), predicate)


@dataclass(frozen=True)
class GridSpec:
    variable: str
    required_points: int
    exclusions: tuple = ()
    start: Fraction = Fraction(2)
    stride: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "start", Fraction(self.start))
        object.__setattr__(self, "stride", Fraction(self.stride))
        object.__setattr__(self, "exclusions", tuple(self.exclusions))
        if self.stride == 0:
            raise ValueError("grid stride must be nonzero")
        if self.required_points < 0:
            raise ValueError("required_points must be nonnegative")


def candidate_stream(spec: GridSpec) -> Iterator[Fraction]:
    """Admissible candidates in order; capped at 10x the required count."""
    x = spec.start
    budget = _CANDIDATE_FACTOR * max(spec.required_points, 1)
    for _ in range(budget):
        if not any(ex.hits(x) for ex in spec.exclusions):
            yield x
        x += spec.stride


def generate_grid(spec: GridSpec) -> list[Fraction]:
    if spec.required_points == 0:
        return []
    out = []
    for x in candidate_stream(spec):
        out.append(x)
        if len(out) == spec.required_points:
            return out
    raise GridExhausted(
        f"{spec.variable}: {len(out)}/{spec.required_points} points after "
        f"{_CANDIDATE_FACTOR}x candidates")


# ---------------------------------------------------------------------------


class BoundLedger:
    """Per-variable degree contributions keyed by factor description.

    Conservative by construction: every displayed factor registers at least
    its true degree, and totals only ever grow.
    """

    def __init__(self):
        self._items: dict[str, dict[str, int]] = {}

    def add(self, variable: str, description: str, degree: int):
        if degree < 0:
            raise ValueError("degree contribution must be nonnegative")
        bucket = self._items.setdefault(variable, {})
        bucket[description] = bucket.get(description, 0) + degree

    def contributions(self, variable: str) -> dict[str, int]:
        return dict(self._items.get(variable, {}))

    def variables(self) -> list[str]:
        return sorted(self._items)


def degree_bound(ledger: BoundLedger, variable: str) -> int:
    return sum(ledger.contributions(variable).values())


# ---------------------------------------------------------------------------


def verify_on_grid(builder, grid) -> Verdict:
    """builder: point -> (lhs, rhs) canonical RationalFunc; exact comparison.

    First failure (smallest point in the deterministic order) becomes the
    witness; builder errors propagate.
    """
    checked = 0
    for x in grid:
        lhs, rhs = builder(x)
        if lhs != rhs:
            diff = lhs - rhs
            return Verdict(
                "fail", f"sides differ at point {x}",
                {"point": str(x), "difference": diff.to_obj()})
        checked += 1
    return Verdict("pass", f"sides equal at all {checked} points",
                   {"points_checked": checked})


class _FirstFailure(Exception):
    def __init__(self, verdict: Verdict):
        self.verdict = verdict


def nested_grid_check(specs: list[GridSpec], evaluate) -> Verdict:
    """Check `evaluate(point_dict, ctx) -> bool` over nested grids.

    evaluate receives a dict {variable: Fraction} and a PackedCtx and returns
    whether the identity holds there; PoleHit skips the point (innermost grid
    extends past it, outer levels treat a dried-up inner level as a pole of
    their own point).  Width retries are handled here, re-entering the same
    point with a wider context.
    """
    state = {"width": 128, "points": 0}

    def eval_point(point: dict) -> None:
        while True:
            try:
                ok = evaluate(dict(point), PackedCtx(state["width"]))
                break
            except NeedWidth as nw:
                # escalate to the certified need (rounded up) rather than
                # doubling; widths track the true coefficient growth closely
                need = max(state["width"] + 32, nw.bits + 32)
                state["width"] = -(-need // 64) * 64
        if not ok:
            raise _FirstFailure(Verdict(
                "fail", "sides differ at " +
                ", ".join(f"{k}={v}" for k, v in sorted(point.items())),
                {"point": {k: str(v) for k, v in sorted(point.items())}}))
        state["points"] += 1

    def run_level(level: int, point: dict) -> None:
        spec = specs[level]
        got = 0
        for x in candidate_stream(spec):
            point[spec.variable] = x
            try:
                if level + 1 == len(specs):
                    eval_point(point)
                else:
                    run_level(level + 1, point)
            except PoleHit as ph:
                blamed = getattr(ph, "variable", None)
                if (blamed is not None and blamed != spec.variable
                        and blamed in point):
                    del point[spec.variable]
                    raise
                continue
            except GridPole:
                # inner level starved at this outer value: treat as pole here
                continue
            got += 1
            if got == spec.required_points:
                del point[spec.variable]
                return
        del point[spec.variable]
        raise GridPole(
            f"{spec.variable} grid reached only {got}/{spec.required_points} "
            "usable points")

    if not specs:
        raise ValueError("nested_grid_check needs at least one grid")
    try:
        run_level(0, {})
    except _FirstFailure as ff:
        return ff.verdict
    return Verdict("pass",
                   f"identity holds at all {state['points']} grid points",
                   {"points_checked": state["points"]})
