"""Simple valuations and the Kantorovich-Rubinshtein-Hutchinson quasi-metrics.

Distances are computed by two independent routes: the supremum over
1-Lipschitz test functions (an LP over function values) and, for normalized
pairs, the cheapest transport plan.  The routes agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .ext import INF, Ext, ext, fmt, rational, scale
from .lipschitz import ExtFunc
from .lp import EQ, GE, LE, Infeasible, LpProblem, Optimal, Unbounded, solve_lp
from .space import QSpace


class SpaceMismatch(ValueError):
    pass


class NotNormalized(ValueError):
    pass


class InvalidPlan(ValueError):
    pass


class NotAChain(ValueError):
    pass


@dataclass(frozen=True)
class SimpleValuation:
    """Finite combination sum a_x delta_x over the points of a space of size ``n``."""

    n: int
    weights: tuple[tuple[int, Fraction], ...]

    def __init__(self, n: int, weights: Mapping[int, object]):
        clean = {}
        for x, w in weights.items():
            w = rational(w)
            if w < 0:
                raise ValueError("weights must be nonnegative")
            if not 0 <= x < n:
                raise ValueError(f"point {x} outside a space of {n} points")
            if w:
                clean[x] = clean.get(x, Fraction(0)) + w
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "weights", tuple(sorted(clean.items())))

    @classmethod
    def dirac(cls, n: int, x: int) -> SimpleValuation:
        return cls(n, {x: 1})

    def weight(self, x: int) -> Fraction:
        return dict(self.weights).get(x, Fraction(0))

    def dense(self) -> list[Fraction]:
        out = [Fraction(0)] * self.n
        for x, w in self.weights:
            out[x] = w
        return out

    @property
    def support(self) -> list[int]:
        return [x for x, _ in self.weights]

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.weights), Fraction(0))

    @property
    def normalization(self) -> str:
        m = self.mass
        return "normalized" if m == 1 else "subnormalized" if m < 1 else "general"

    def mix(self, other: SimpleValuation, t: Fraction) -> SimpleValuation:
        """(1 - t) self + t other."""
        a, b = self.dense(), other.dense()
        return SimpleValuation(self.n, {x: (1 - t) * a[x] + t * b[x] for x in range(self.n)})

    def to_json(self, space: QSpace) -> dict:
        return {"weights": {space.labels[x]: fmt(w) for x, w in self.weights}}

    @classmethod
    def from_json(cls, space: QSpace, data: Mapping) -> SimpleValuation:
        return cls(space.n, {space.index(k): rational(v) for k, v in data["weights"].items()})


def _same_space(space: QSpace, *vals: SimpleValuation) -> None:
    for v in vals:
        if v.n != space.n:
            raise SpaceMismatch(f"valuation over {v.n} points used on a space of {space.n}")


def integrate(nu: SimpleValuation, h: ExtFunc) -> Ext:
    if len(h) != nu.n:
        raise SpaceMismatch("function and valuation live on different spaces")
    return sum((scale(w, h(x)) for x, w in nu.weights), Fraction(0))


def lipschitz_rows(space: QSpace, alpha=1) -> list[tuple[list[Fraction], str, Fraction]]:
    """h(u) - h(v) <= alpha d(u, v) for every ordered pair at finite distance."""
    alpha = rational(alpha)
    n = space.n
    rows = []
    for u in range(n):
        for v in range(n):
            d = space.d(u, v)
            if u == v or d is INF:
                continue
            row = [Fraction(0)] * n
            row[u], row[v] = Fraction(1), Fraction(-1)
            rows.append((row, LE, alpha * d))
    return rows


def dkrh_problem(space: QSpace, mu: SimpleValuation, nu: SimpleValuation, bound=None) -> LpProblem:
    a, b = mu.dense(), nu.dense()
    upper = {} if bound is None else {x: rational(bound) for x in range(space.n)}
    return LpProblem("max", [a[x] - b[x] for x in range(space.n)], lipschitz_rows(space), upper=upper)


def dkrh_lp(space: QSpace, mu: SimpleValuation, nu: SimpleValuation, bound=None) -> Ext:
    """sup over 1-Lipschitz h >= 0 (and h <= bound) of the integral gap.

    An unbounded LP means the distance is infinite.
    """
    _same_space(space, mu, nu)
    if bound is not None and rational(bound) <= 0:
        raise ValueError("bound must be positive")
    out = solve_lp(dkrh_problem(space, mu, nu, bound))
    if isinstance(out, Unbounded):
        return INF
    assert isinstance(out, Optimal)
    return max(out.value, Fraction(0))


@dataclass(frozen=True)
class TransportPlan:
    """Transport matrix with optional slack vectors for the bounded variant."""

    t: tuple[tuple[Fraction, ...], ...]
    u: tuple[Fraction, ...] | None = None
    v: tuple[Fraction, ...] | None = None
    bound: Fraction | None = None

    def weight(self, space: QSpace) -> Ext:
        total: Ext = Fraction(0)
        for x, row in enumerate(self.t):
            for y, m in enumerate(row):
                if m:
                    total = total + scale(m, space.d(x, y))
        if self.bound is not None:
            total = total + self.bound * (sum(self.u) + sum(self.v))
        return total

    def to_json(self, space: QSpace) -> dict:
        lab = space.labels
        out: dict = {
            "t": {f"{lab[x]}->{lab[y]}": fmt(m) for x, row in enumerate(self.t) for y, m in enumerate(row) if m}
        }
        if self.bound is not None:
            out["u"] = {lab[x]: fmt(m) for x, m in enumerate(self.u) if m}
            out["v"] = {lab[y]: fmt(m) for y, m in enumerate(self.v) if m}
            out["bound"] = fmt(self.bound)
        return out


def _require_normalized(*vals: SimpleValuation) -> None:
    for v in vals:
        if v.mass != 1:
            raise NotNormalized(f"valuation has mass {v.mass}, expected 1")


def _finite_pairs(space: QSpace, mu: SimpleValuation, nu: SimpleValuation) -> list[tuple[int, int]]:
    return [(x, y) for x in mu.support for y in nu.support if space.d(x, y) is not INF]


def dkrh_transport(space: QSpace, mu: SimpleValuation, nu: SimpleValuation) -> tuple[Ext, TransportPlan | None]:
    """Cheapest transport plan from ``mu`` to ``nu``.

    Pairs at infinite distance carry no mass; if the marginals cannot be met
    without them the distance is infinite and no plan is returned.
    """
    _same_space(space, mu, nu)
    _require_normalized(mu, nu)
    pairs = _finite_pairs(space, mu, nu)
    k = len(pairs)
    cons = []
    for x, w in mu.weights:
        cons.append(([Fraction(int(p[0] == x)) for p in pairs], EQ, w))
    for y, w in nu.weights:
        cons.append(([Fraction(int(p[1] == y)) for p in pairs], EQ, w))
    out = solve_lp(LpProblem("min", [space.d(x, y) for x, y in pairs], cons))
    if isinstance(out, Infeasible):
        return INF, None
    assert isinstance(out, Optimal)
    n = space.n
    t = [[Fraction(0)] * n for _ in range(n)]
    for (x, y), m in zip(pairs, out.primal[:k]):
        t[x][y] = m
    return out.value, TransportPlan(tuple(map(tuple, t)))


def dkrha_transport(space: QSpace, mu: SimpleValuation, nu: SimpleValuation, bound) -> tuple[Fraction, TransportPlan]:
    """Bounded transport: unmoved source mass and surplus target mass cost ``bound`` per unit."""
    _same_space(space, mu, nu)
    _require_normalized(mu, nu)
    a = rational(bound)
    if a <= 0:
        raise ValueError("bound must be positive")
    n = space.n
    pairs = _finite_pairs(space, mu, nu)
    k = len(pairs)
    src, dst = mu.support, nu.support
    nvar = k + len(src) + len(dst)
    cons = []
    for i, (x, w) in enumerate(mu.weights):
        row = [Fraction(int(p[0] == x)) for p in pairs] + [Fraction(0)] * (nvar - k)
        row[k + i] = Fraction(1)
        cons.append((row, GE, w))
    for j, (y, w) in enumerate(nu.weights):
        row = [Fraction(int(p[1] == y)) for p in pairs] + [Fraction(0)] * (nvar - k)
        row[k + len(src) + j] = Fraction(-1)
        cons.append((row, LE, w))
    cost = [space.d(x, y) for x, y in pairs] + [a] * (len(src) + len(dst))
    out = solve_lp(LpProblem("min", cost, cons))
    assert isinstance(out, Optimal)
    t = [[Fraction(0)] * n for _ in range(n)]
    for (x, y), m in zip(pairs, out.primal[:k]):
        t[x][y] = m
    u = [Fraction(0)] * n
    v = [Fraction(0)] * n
    for i, x in enumerate(src):
        u[x] = out.primal[k + i]
    for j, y in enumerate(dst):
        v[y] = out.primal[k + len(src) + j]
    return out.value, TransportPlan(tuple(map(tuple, t)), tuple(u), tuple(v), a)


@dataclass(frozen=True)
class Move:
    source: int
    target: int
    mass: Fraction
    cost: Ext


def decompose_plan(space: QSpace, mu: SimpleValuation, plan: TransportPlan) -> list[Move]:
    """Split a transport matrix into single-mass moves, in row-major order.

    Applying the moves one after another walks from ``mu`` to the plan's
    target marginal; the costs add up to the plan's weight.
    """
    t = plan.t
    if len(t) != space.n or any(len(row) != space.n for row in t):
        raise InvalidPlan("plan shape does not match the space")
    if any(m < 0 for row in t for m in row):
        raise InvalidPlan("negative transport mass")
    for x in range(space.n):
        if sum(t[x], Fraction(0)) != mu.weight(x):
            raise InvalidPlan(f"row {space.labels[x]} does not sum to the source weight")
    moves = []
    for x in range(space.n):
        for y in range(space.n):
            m = t[x][y]
            if m:
                moves.append(Move(x, y, m, scale(m, space.d(x, y))))
    return moves


def apply_moves(mu: SimpleValuation, moves: Sequence[Move]) -> list[SimpleValuation]:
    """Intermediate valuations mu_0 = mu, ..., mu_k after each move."""
    current = mu.dense()
    path = [mu]
    for mv in moves:
        current[mv.source] -= mv.mass
        current[mv.target] += mv.mass
        path.append(SimpleValuation(mu.n, {x: w for x, w in enumerate(current) if w}))
    return path


def ball_leq_valuations(space: QSpace, left: tuple[SimpleValuation, object], right: tuple[SimpleValuation, object],
                        bound=None) -> bool:
    (mu, r), (nu, s) = left, right
    gap = rational(r) - rational(s)
    if gap < 0:
        return False
    return dkrh_lp(space, mu, nu, bound) <= gap


def naive_sup_chain(space: QSpace, chain: Sequence[tuple[SimpleValuation, object]],
                    probes: Sequence[tuple[ExtFunc, object]], bound=None) -> list[Ext]:
    """Evaluate the naive supremum of an increasing chain of valuation balls on each probe.

    For a probe h with Lipschitz constant alpha the value is
    sup_i (int h d nu_i + alpha r - alpha r_i), r the least radius.
    """
    if not chain:
        raise NotAChain("empty chain")
    for lo, hi in zip(chain, chain[1:]):
        if not ball_leq_valuations(space, lo, hi, bound):
            raise NotAChain("consecutive balls are not ordered")
    radii = [rational(r) for _, r in chain]
    r = min(radii)
    table = []
    for h, alpha in probes:
        alpha = rational(alpha)
        table.append(max(integrate(nu, h) + alpha * (r - ri) for (nu, _), ri in zip(chain, radii)))
    return table
