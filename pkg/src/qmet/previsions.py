"""Finitely generated sublinear and superlinear previsions, and forks.

A sublinear prevision evaluates to the largest generator integral and a
superlinear one to the smallest.  Distances between them reduce to small
exact LPs over the polytope of bounded 1-Lipschitz functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ext import INF, Ext, rational
from .lipschitz import ExtFunc, envelope, is_alpha_lipschitz
from .lp import LE, EmptyPolytope, LpProblem, Optimal, Polytope, Unbounded, solve_lp, solve_saddle
from .powerdomains import QuasiLens
from .space import QSpace
from .valuations import SimpleValuation, integrate, lipschitz_rows

SUBLINEAR, SUPERLINEAR = "sublinear", "superlinear"


class KindMismatch(ValueError):
    pass


class WalleyViolation(ValueError):
    pass


class NotLipschitz(ValueError):
    pass


class DegenerateInstance(ValueError):
    pass


@dataclass(frozen=True)
class GenPrevision:
    kind: str
    generators: tuple[SimpleValuation, ...]

    def __post_init__(self):
        if self.kind not in (SUBLINEAR, SUPERLINEAR):
            raise ValueError(f"unknown prevision kind {self.kind!r}")
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("a prevision needs at least one generator")
        if len({g.n for g in gens}) != 1:
            raise ValueError("generators live on different spaces")
        if any(g.mass > 1 for g in gens):
            raise ValueError("generators must be subnormalized")
        object.__setattr__(self, "generators", gens)

    @property
    def n(self) -> int:
        return self.generators[0].n

    @property
    def normalization(self) -> str:
        return "normalized" if all(g.mass == 1 for g in self.generators) else "subnormalized"

    def __call__(self, h: ExtFunc) -> Ext:
        return eval_prevision(self, h)

    def to_json(self, space: QSpace) -> dict:
        return {"kind": self.kind, "generators": [g.to_json(space) for g in self.generators]}

    @classmethod
    def from_json(cls, space: QSpace, data: dict) -> GenPrevision:
        return cls(data["kind"], tuple(SimpleValuation.from_json(space, g) for g in data["generators"]))


def dirac_prevision(n: int, kind: str, pts: Iterable[int]) -> GenPrevision:
    return GenPrevision(kind, tuple(SimpleValuation.dirac(n, x) for x in sorted(set(pts))))


def eval_prevision(F: GenPrevision, h: ExtFunc) -> Ext:
    if len(h) != F.n:
        raise ValueError("function and prevision live on different spaces")
    values = [integrate(g, h) for g in F.generators]
    return max(values) if F.kind == SUBLINEAR else min(values)


def _check_pair(A: GenPrevision, B: GenPrevision, kind: str) -> None:
    if A.kind != kind or B.kind != kind:
        raise KindMismatch(f"expected two {kind} previsions, got {A.kind} and {B.kind}")
    if A.n != B.n:
        raise ValueError("previsions live on different spaces")
    if A.normalization != B.normalization:
        raise KindMismatch("previsions belong to different normalization classes")


def _gap_lp(space: QSpace, bound, alpha, maximize_over: Sequence[Sequence[Fraction]],
            region: Sequence[Sequence[Fraction]] = ()) -> LpProblem:
    """max t s.t. t <= c_k . h for each c_k, region rows r . h <= 0, h in the Lipschitz box.

    Variables: h_0..h_{n-1}, then t (free).
    """
    n = space.n
    cons = [(row + [Fraction(0)], rel, b) for row, rel, b in lipschitz_rows(space, alpha)]
    for c in maximize_over:
        cons.append(([-v for v in c] + [Fraction(1)], LE, Fraction(0)))
    for r in region:
        cons.append((list(r) + [Fraction(0)], LE, Fraction(0)))
    upper = {} if bound is None else {x: rational(bound) for x in range(n)}
    return LpProblem("max", [Fraction(0)] * n + [Fraction(1)], cons, free=frozenset({n}), upper=upper)


def _diff(g: SimpleValuation, g2: SimpleValuation) -> list[Fraction]:
    return [a - b for a, b in zip(g.dense(), g2.dense())]


def _lp_value(problem: LpProblem) -> Ext | None:
    out = solve_lp(problem)
    if isinstance(out, Unbounded):
        return INF
    if isinstance(out, Optimal):
        return out.value
    return None


def dkrh_sublinear(space: QSpace, A: GenPrevision, B: GenPrevision, bound=None) -> Ext:
    """sup_h dreal(A(h), B(h)) over 1-Lipschitz h with values in [0, bound].

    Splits the outer max over A's generators: for each G_j solve
    max t s.t. t <= G_j(h) - G'_k(h) for every generator G'_k of B.
    Without ``bound`` the value may be infinite.
    """
    _check_pair(A, B, SUBLINEAR)
    best: Ext = Fraction(0)
    for g in A.generators:
        value = _lp_value(_gap_lp(space, bound, 1, [_diff(g, g2) for g2 in B.generators]))
        best = max(best, value)
    return best


def dkrh_superlinear(space: QSpace, A: GenPrevision, B: GenPrevision, bound=None) -> Ext:
    """sup_h dreal(min_j G_j(h), min_k G'_k(h)) over bounded 1-Lipschitz h.

    Decomposes the h-polytope into the regions where G_j attains the
    minimum and maximizes G_j(h) - G'_k(h) on each region.  The unbounded
    variant is offered only for single-generator previsions.
    """
    _check_pair(A, B, SUPERLINEAR)
    if bound is None and (len(A.generators) > 1 or len(B.generators) > 1):
        raise KindMismatch("unbounded superlinear distance needs single-generator previsions")
    best: Ext = Fraction(0)
    gens = A.generators
    for j, g in enumerate(gens):
        region = [_diff(g, other) for i, other in enumerate(gens) if i != j]
        for g2 in B.generators:
            value = _lp_value(_gap_lp(space, bound, 1, [_diff(g, g2)], region))
            if value is not None:
                best = max(best, value)
    return best


@dataclass(frozen=True)
class Fork:
    lower: GenPrevision
    upper: GenPrevision

    def to_json(self, space: QSpace) -> dict:
        return {"lower": self.lower.to_json(space), "upper": self.upper.to_json(space)}

    @classmethod
    def from_json(cls, space: QSpace, data: dict) -> Fork:
        return cls(GenPrevision.from_json(space, data["lower"]), GenPrevision.from_json(space, data["upper"]))


def fork_distance(space: QSpace, f: Fork, f2: Fork, bound) -> Ext:
    return max(dkrh_superlinear(space, f.lower, f2.lower, bound), dkrh_sublinear(space, f.upper, f2.upper, bound))


@dataclass
class WalleyReport:
    checked: int = 0
    violations: list[tuple[ExtFunc, ExtFunc, str]] = field(default_factory=list)
    exhaustive: bool = False

    @property
    def ok(self) -> bool:
        return not self.violations


def check_walley(fork: Fork, probes: Iterable[tuple[ExtFunc, ExtFunc]]) -> WalleyReport:
    """F-(h + h') <= F-(h) + F+(h') <= F+(h + h') on every probe pair."""
    report = WalleyReport()
    lo, up = fork.lower, fork.upper
    for h, h2 in probes:
        report.checked += 1
        s = h + h2
        mid = eval_prevision(lo, h) + eval_prevision(up, h2)
        if not eval_prevision(lo, s) <= mid:
            report.violations.append((h, h2, "left"))
        if not mid <= eval_prevision(up, s):
            report.violations.append((h, h2, "right"))
    return report


def monotone_functions(space: QSpace, values: Sequence[Fraction]) -> list[ExtFunc]:
    """All specialization-monotone functions with values in ``values``."""
    n = space.n
    leq = [(x, y) for x in range(n) for y in range(n) if x != y and space.d(x, y) == 0]
    out = []
    for combo in itertools.product(values, repeat=n):
        if all(combo[x] <= combo[y] for x, y in leq):
            out.append(ExtFunc(combo))
    return out


def walley_exhaustive(space: QSpace, fork: Fork, bound=1, steps: int = 2) -> WalleyReport:
    """Every pair of monotone functions valued in {0, a/steps, ..., a}."""
    a = rational(bound)
    grid = [a * k / steps for k in range(steps + 1)]
    funcs = monotone_functions(space, grid)
    report = check_walley(fork, itertools.product(funcs, repeat=2))
    report.exhaustive = True
    return report


def lens_lower_inf(space: QSpace, L: QuasiLens, h: ExtFunc) -> Ext:
    """Alternative form of the lower prevision: inf over Q & C."""
    return min(h(x) for x in L.Q.members & L.C.members)


def fork_from_lens(space: QSpace, L: QuasiLens, probes: Iterable[tuple[ExtFunc, ExtFunc]] | None = None) -> Fork:
    """Fork (F_Q, F^C) from a quasi-lens, checked against Walley's condition.

    Small spaces are probed exhaustively; ``probes`` adds further pairs.
    """
    fork = Fork(dirac_prevision(space.n, SUPERLINEAR, L.Q.members), dirac_prevision(space.n, SUBLINEAR, L.C.members))
    reports = []
    if space.n <= 4:
        reports.append(walley_exhaustive(space, fork))
    if probes is not None:
        reports.append(check_walley(fork, probes))
    for rep in reports:
        if not rep.ok:
            h, h2, side = rep.violations[0]
            raise WalleyViolation(f"{side} inequality fails on h={h.values}, h'={h2.values}")
    return fork


def extend_prevision(space: QSpace, F: GenPrevision, h: ExtFunc, alpha) -> Ext:
    """F applied to the largest alpha-Lipschitz map below ``h``."""
    alpha = rational(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    if not is_alpha_lipschitz(space, h, alpha):
        raise NotLipschitz(f"function is not {alpha}-Lipschitz")
    return eval_prevision(F, envelope(space, h, alpha))


def _lipschitz_box(space: QSpace, bound, alpha) -> Polytope:
    n = space.n
    ineq = [(row, b) for row, _, b in lipschitz_rows(space, alpha)]
    a = rational(bound)
    for x in range(n):
        ineq.append(([Fraction(int(i == x)) for i in range(n)], a))
    return Polytope(n, ineq=ineq)


def minimax_forms(G: SimpleValuation, gens: Sequence[SimpleValuation], side: str) -> list[list[Fraction]]:
    """Linear forms L_k(h) whose min over k (or convex mix) is being optimized.

    AN: G fixed, L_k = G - G'_k.  DN: G' fixed, L_k = G_k - G'.
    """
    if side == "AN":
        return [_diff(G, g) for g in gens]
    if side == "DN":
        return [_diff(g, G) for g in gens]
    raise ValueError(f"unknown side {side!r}")


def minimax_check(space: QSpace, G: SimpleValuation, gens: Sequence[SimpleValuation], side: str,
                  bound, alpha) -> tuple[Fraction, Fraction]:
    """Both orders of sup over bounded alpha-Lipschitz h and inf over the hull of ``gens``.

    lhs = sup_h min_k L_k(h), one LP over (h, t).
    rhs = min over the simplex of max_h of the mixed form, via ``solve_saddle``.
    """
    if not gens:
        raise DegenerateInstance("no generators")
    if rational(bound) <= 0 or rational(alpha) <= 0:
        raise DegenerateInstance("bound and alpha must be positive")
    forms = minimax_forms(G, gens, side)
    out = solve_lp(_gap_lp(space, bound, alpha, forms))
    if not isinstance(out, Optimal):
        raise DegenerateInstance(f"sup-inf LP ended {type(out).__name__}")
    lhs = out.value
    try:
        rhs = solve_saddle(forms, Polytope.simplex(len(forms)), _lipschitz_box(space, bound, alpha))
    except EmptyPolytope as exc:
        raise DegenerateInstance(str(exc)) from exc
    return lhs, rhs

