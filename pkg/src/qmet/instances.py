"""Seeded random instances.

Spaces are built from a small rational grid of edge weights, closed under
shortest paths and then made T0 by merging points at two-way distance zero
(the later point of each such pair is dropped).  Reproducing a
counterexample only needs the seed string of its trial.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .ext import INF, Ext
from .lipschitz import ExtFunc
from .powerdomains import LowerSet, UpperSet, lower_closure, upper_closure
from .space import QSpace, shortest_paths
from .valuations import SimpleValuation

WEIGHT_GRID: tuple[Ext, ...] = (
    Fraction(0), Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(3), INF,
)
WEIGHT_ODDS = (2, 3, 4, 2, 2, 1, 4)
VALUE_GRID = tuple(Fraction(k, 2) for k in range(9))


def trial_rng(seed: int, suite: str, trial: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{trial}")


def _t0_merge(dist: list[list[Ext]]) -> list[int]:
    keep: list[int] = []
    for x in range(len(dist)):
        if all(not (dist[x][y] == 0 and dist[y][x] == 0) for y in keep):
            keep.append(x)
    return keep


def random_space(rng: random.Random, max_points: int = 6, min_points: int = 1, symmetric: bool = False) -> QSpace:
    n = rng.randint(min_points, max_points)
    weights = {}
    for x in range(n):
        for y in range(n):
            if x == y or (symmetric and y < x):
                continue
            w = rng.choices(WEIGHT_GRID, WEIGHT_ODDS)[0]
            if symmetric and w == 0:
                w = Fraction(1)
            if w is not INF:
                weights[(x, y)] = w
                if symmetric:
                    weights[(y, x)] = w
    dist = shortest_paths(n, weights)
    keep = _t0_merge(dist)
    labels = tuple(f"p{i}" for i in range(len(keep)))
    return QSpace(labels, tuple(tuple(dist[x][y] for y in keep) for x in keep))


def random_valuation(rng: random.Random, n: int, normalized: bool = True, max_support: int | None = None) -> SimpleValuation:
    k = rng.randint(1, min(n, max_support or n))
    support = rng.sample(range(n), k)
    raw = [rng.randint(1, 4) for _ in support]
    total = sum(raw)
    if normalized:
        scale = Fraction(1, total)
    else:
        # Subnormalized: total mass in (0, 1].
        scale = Fraction(rng.randint(1, total), total * total * rng.randint(1, 2))
    return SimpleValuation(n, {x: w * scale for x, w in zip(support, raw)})


def random_subset(rng: random.Random, n: int, nonempty: bool = False) -> list[int]:
    while True:
        pts = [x for x in range(n) if rng.random() < 0.4]
        if pts or not nonempty:
            return pts


def random_lower_set(rng: random.Random, space: QSpace, nonempty: bool = False) -> LowerSet:
    return lower_closure(space, random_subset(rng, space.n, nonempty))


def random_upper_set(rng: random.Random, space: QSpace) -> UpperSet:
    return upper_closure(space, random_subset(rng, space.n, nonempty=True))


def random_function(rng: random.Random, n: int, allow_inf: bool = True, grid: Sequence[Fraction] = VALUE_GRID) -> ExtFunc:
    values: list[Ext] = []
    for _ in range(n):
        if allow_inf and rng.random() < 0.1:
            values.append(INF)
        else:
            values.append(rng.choice(grid))
    return ExtFunc(tuple(values))


def random_radius(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(0, 12), rng.choice((1, 2, 4)))
