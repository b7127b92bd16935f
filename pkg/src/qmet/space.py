"""Finite quasi-metric spaces and their constructors."""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .ext import INF, Ext, ext, fmt


class SpaceError(ValueError):
    """Base class for malformed or axiom-violating spaces."""


class ZeroDiagonalViolation(SpaceError):
    def __init__(self, x: str):
        self.x = x
        super().__init__(f"d({x},{x}) != 0")


class TriangleViolation(SpaceError):
    def __init__(self, x: str, y: str, z: str):
        self.x, self.y, self.z = x, y, z
        super().__init__(f"d({x},{z}) > d({x},{y}) + d({y},{z})")


class T0Violation(SpaceError):
    def __init__(self, x: str, y: str):
        self.x, self.y = x, y
        super().__init__(f"d({x},{y}) = d({y},{x}) = 0 for distinct points")


class NotAPartialOrder(SpaceError):
    pass


class LabelClash(SpaceError):
    pass


class InvalidSpace(SpaceError):
    """Raised by :func:`validate_space`; carries every violation found."""

    def __init__(self, violations: list[SpaceError]):
        self.violations = violations
        shown = "; ".join(str(v) for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"{len(violations)} axiom violation(s): {shown}{more}")


@dataclass(frozen=True)
class QSpace:
    """A finite quasi-metric space.

    Points are identified by index; ``labels`` are for presentation.  Build
    instances through :func:`validate_space` or one of the constructors, which
    check the quasi-metric axioms.
    """

    labels: tuple[str, ...]
    dist: tuple[tuple[Ext, ...], ...]

    @property
    def n(self) -> int:
        return len(self.labels)

    def d(self, x: int, y: int) -> Ext:
        return self.dist[x][y]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown point {label!r}") from None

    def points(self) -> range:
        return range(self.n)

    def is_symmetric(self) -> bool:
        return all(self.dist[x][y] == self.dist[y][x] for x in self.points() for y in self.points())

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "dist": [[fmt(v) for v in row] for row in self.dist]}

    @classmethod
    def from_json(cls, data: Mapping) -> QSpace:
        return validate_space(data["labels"], data["dist"])

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def find_violations(labels: Sequence[str], dist: Sequence[Sequence[Ext]]) -> list[SpaceError]:
    n = len(labels)
    out: list[SpaceError] = []
    for x in range(n):
        if dist[x][x] != 0:
            out.append(ZeroDiagonalViolation(labels[x]))
    for x, y, z in itertools.product(range(n), repeat=3):
        if dist[x][z] > dist[x][y] + dist[y][z]:
            out.append(TriangleViolation(labels[x], labels[y], labels[z]))
    for x, y in itertools.combinations(range(n), 2):
        if dist[x][y] == 0 and dist[y][x] == 0:
            out.append(T0Violation(labels[x], labels[y]))
    return out


def validate_space(labels: Iterable[str], matrix: Iterable[Iterable[object]]) -> QSpace:
    """Check the quasi-metric axioms and return a :class:`QSpace`.

    Raises :class:`InvalidSpace` listing every zero-diagonal, triangle and T0
    violation, each naming its witnessing points.
    """
    labels = tuple(str(s) for s in labels)
    if len(set(labels)) != len(labels):
        raise LabelClash(f"duplicate labels in {labels}")
    rows = [tuple(ext(v) for v in row) for row in matrix]
    if len(rows) != len(labels) or any(len(r) != len(labels) for r in rows):
        raise SpaceError("distance matrix must be square and match the labels")
    violations = find_violations(labels, rows)
    if violations:
        raise InvalidSpace(violations)
    return QSpace(labels, tuple(rows))


def specialization_leq(space: QSpace, x: int, y: int) -> bool:
    return space.dist[x][y] == 0


def from_poset(labels: Sequence[str], relation: Iterable[tuple[str, str]]) -> QSpace:
    """The space with d(x, y) = 0 when x <= y and infinity otherwise.

    ``relation`` lists pairs ``(x, y)`` meaning ``x <= y``.  Reflexive pairs
    are added; the relation must already be transitive and antisymmetric.
    """
    idx = {s: i for i, s in enumerate(labels)}
    n = len(labels)
    leq = [[x == y for y in range(n)] for x in range(n)]
    for a, b in relation:
        if a not in idx or b not in idx:
            raise NotAPartialOrder(f"pair ({a}, {b}) mentions an unknown element")
        leq[idx[a]][idx[b]] = True
    for x, y in itertools.combinations(range(n), 2):
        if leq[x][y] and leq[y][x]:
            raise NotAPartialOrder(f"antisymmetry fails for {labels[x]}, {labels[y]}")
    for x, y, z in itertools.product(range(n), repeat=3):
        if leq[x][y] and leq[y][z] and not leq[x][z]:
            raise NotAPartialOrder(f"transitivity fails: {labels[x]} <= {labels[y]} <= {labels[z]}")
    return validate_space(labels, [[Fraction(0) if leq[x][y] else INF for y in range(n)] for x in range(n)])


def shortest_paths(n: int, weights: Mapping[tuple[int, int], Fraction]) -> list[list[Ext]]:
    dist: list[list[Ext]] = [[Fraction(0) if x == y else INF for y in range(n)] for x in range(n)]
    for (x, y), w in weights.items():
        if x != y and w < dist[x][y]:
            dist[x][y] = w
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            dik = dist[i][k]
            if dik is INF:
                continue
            di = dist[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    return dist


def from_digraph(labels: Sequence[str], weighted_edges: Iterable[tuple[str, str, object]]) -> QSpace:
    """Shortest-path quasi-metric of a weighted digraph.

    Unreachable pairs get distance infinity.  Zero-cost cycles between
    distinct nodes make the result fail T0, reported as :class:`InvalidSpace`.
    """
    idx = {s: i for i, s in enumerate(labels)}
    weights: dict[tuple[int, int], Fraction] = {}
    for a, b, w in weighted_edges:
        w = ext(w)
        if w is INF:
            continue
        key = (idx[a], idx[b])
        weights[key] = min(w, weights.get(key, w))
    return validate_space(labels, shortest_paths(len(labels), weights))


def opposite(space: QSpace) -> QSpace:
    n = space.n
    return QSpace(space.labels, tuple(tuple(space.dist[y][x] for y in range(n)) for x in range(n)))


def product_sq(space: QSpace) -> QSpace:
    """Pairs (x, y) with d2((x, y), (x', y')) = d(x, x') + d(y', y).

    Point ``(x, y)`` gets index ``x * n + y``.
    """
    n = space.n
    d = space.dist
    pairs = [(x, y) for x in range(n) for y in range(n)]
    labels = tuple(f"({space.labels[x]},{space.labels[y]})" for x, y in pairs)
    rows = tuple(tuple(d[x][x2] + d[y2][y] for x2, y2 in pairs) for x, y in pairs)
    return QSpace(labels, rows)


def coproduct(left: QSpace, right: QSpace) -> QSpace:
    clash = set(left.labels) & set(right.labels)
    if clash:
        raise LabelClash(f"labels shared by both spaces: {sorted(clash)}")
    n, m = left.n, right.n
    rows = [tuple(left.dist[x]) + (INF,) * m for x in range(n)]
    rows += [(INF,) * n + tuple(right.dist[y]) for y in range(m)]
    return QSpace(left.labels + right.labels, tuple(rows))


def load_space(path: str) -> QSpace:
    with open(path, encoding="utf-8") as fh:
        return QSpace.from_json(json.load(fh))
