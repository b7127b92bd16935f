"""Extended-valued functions on a finite quasi-metric space.

Covers alpha-Lipschitz tests, the largest alpha-Lipschitz map below a
function, sea functions and their suprema, distance to closed sets and the
dyadic step approximants of the envelope.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ext import INF, Ext, dreal, ext, fmt, rational, scale
from .space import QSpace


@dataclass(frozen=True)
class ExtFunc:
    """Function from the points of a space to the extended nonnegative rationals."""

    values: tuple[Ext, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(ext(v) for v in self.values))

    def __call__(self, x: int) -> Ext:
        return self.values[x]

    def __len__(self) -> int:
        return len(self.values)

    def __add__(self, other: ExtFunc) -> ExtFunc:
        return ExtFunc(tuple(a + b for a, b in zip(self.values, other.values, strict=True)))

    def __le__(self, other: ExtFunc) -> bool:
        return all(a <= b for a, b in zip(self.values, other.values, strict=True))

    def scaled(self, c) -> ExtFunc:
        c = rational(c)
        if c == 0:
            return ExtFunc((Fraction(0),) * len(self.values))
        return ExtFunc(tuple(scale(c, v) for v in self.values))

    def pointwise_min(self, other: ExtFunc) -> ExtFunc:
        return ExtFunc(tuple(min(a, b) for a, b in zip(self.values, other.values, strict=True)))

    def pointwise_max(self, other: ExtFunc) -> ExtFunc:
        return ExtFunc(tuple(max(a, b) for a, b in zip(self.values, other.values, strict=True)))

    def to_json(self, space: QSpace) -> dict:
        return {space.labels[i]: fmt(v) for i, v in enumerate(self.values)}

    @classmethod
    def from_json(cls, space: QSpace, data: Mapping[str, object]) -> ExtFunc:
        vals = [Fraction(0)] * space.n
        for label, v in data.items():
            vals[space.index(label)] = ext(v)
        return cls(tuple(vals))


def constant(space: QSpace, c) -> ExtFunc:
    return ExtFunc((ext(c),) * space.n)


def is_alpha_lipschitz(space: QSpace, f: ExtFunc, alpha) -> bool:
    """dreal(f(x), f(y)) <= alpha * d(x, y) for every pair, with 0 * inf = inf."""
    alpha = rational(alpha)
    n = space.n
    for x in range(n):
        for y in range(n):
            if dreal(f(x), f(y)) > scale(alpha, space.d(x, y)):
                return False
    return True


def envelope(space: QSpace, f: ExtFunc, alpha) -> ExtFunc:
    """Largest alpha-Lipschitz map below ``f``: x -> min_z f(z) + alpha d(x, z).

    With ``alpha = 0`` the product ``0 * d`` is 0 on finite distances and
    infinite otherwise, which gives the largest 0-Lipschitz minorant as well.
    """
    alpha = rational(alpha)
    n = space.n
    return ExtFunc(tuple(min(f(z) + scale(alpha, space.d(x, z)) for z in range(n)) for x in range(n)))


def sea(space: QSpace, x: int, b: Ext) -> ExtFunc:
    """Smallest 1-Lipschitz map with value at least ``b`` at ``x``."""
    b = ext(b)
    vals = []
    for y in space.points():
        d = space.d(x, y)
        if b is INF:
            vals.append(INF if d is not INF else Fraction(0))
        elif d is INF:
            vals.append(Fraction(0))
        else:
            vals.append(max(b - d, Fraction(0)))
    return ExtFunc(tuple(vals))


def min_lip_above(space: QSpace, constraints: Iterable[tuple[int, object]]) -> ExtFunc:
    """Pointwise max of the sea functions of ``(point, target)`` pairs."""
    out = constant(space, 0)
    seen = set()
    for x, b in constraints:
        if x in seen:
            raise ValueError(f"point {x} constrained twice")
        seen.add(x)
        out = out.pointwise_max(sea(space, x, b))
    return out


def dist_to_closed(space: QSpace, x: int, closed: Iterable[int]) -> Ext:
    """min_{y in C} d(x, y); infinite for the empty set."""
    return min((space.d(x, y) for y in closed), default=INF)


def step_function(f: ExtFunc, K: int, strict: bool = False) -> ExtFunc:
    """Dyadic staircase below ``f`` with mesh 2^-K, capped at ``K``.

    ``strict`` uses the open level sets f > k/2^K; otherwise f >= k/2^K,
    which reproduces ``f`` exactly when its values lie on the grid.
    """
    mesh = Fraction(1, 2**K)
    vals = []
    for v in f.values:
        best = Fraction(0)
        for k in range(1, K * 2**K + 1):
            level = k * mesh
            if (v > level) if strict else (v >= level):
                best = level
            else:
                break
        vals.append(best)
    return ExtFunc(tuple(vals))


def step_envelope(space: QSpace, f: ExtFunc, alpha, K: int, strict: bool = False) -> ExtFunc:
    """Largest alpha-Lipschitz map below the K-th dyadic staircase of ``f``.

    Evaluated level by level: min(min_k ((k-1)/2^K + alpha d(x, X minus U_k)), K)
    where U_k is the level set of ``f`` at height k/2^K.
    """
    alpha = rational(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    mesh = Fraction(1, 2**K)
    n = space.n
    levels = []
    for k in range(1, K * 2**K + 1):
        level = k * mesh
        upper = {x for x in range(n) if ((f(x) > level) if strict else (f(x) >= level))}
        levels.append(((k - 1) * mesh, [y for y in range(n) if y not in upper]))
    out = []
    for x in range(n):
        best: Ext = Fraction(K)
        for base, complement in levels:
            dist = dist_to_closed(space, x, complement)
            best = min(best, base + scale(alpha, dist))
        out.append(best)
    return ExtFunc(tuple(out))


def upward_closed(space: QSpace, pts: Sequence[int] | set[int]) -> bool:
    s = set(pts)
    return all(y in s for x in s for y in space.points() if space.d(x, y) == 0)
