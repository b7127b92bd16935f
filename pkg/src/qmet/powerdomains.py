"""Hoare, Smyth and Plotkin powerdomain quasi-metrics on finite spaces.

Closed sets are the downward-closed sets of the specialization order and
compact saturated sets are the upward-closed ones.  Quasi-lenses pair one of
each and stand for elements of the Plotkin powerdomain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ext import INF, Ext, rational
from .lipschitz import dist_to_closed
from .space import QSpace


class EmptySmythElement(ValueError):
    pass


class EmptyGenerator(ValueError):
    pass


class NotClosed(ValueError):
    pass


def _up(space: QSpace, pts: Iterable[int]) -> frozenset[int]:
    pts = set(pts)
    return frozenset(y for y in space.points() if any(space.d(x, y) == 0 for x in pts))


def _down(space: QSpace, pts: Iterable[int]) -> frozenset[int]:
    pts = set(pts)
    return frozenset(x for x in space.points() if any(space.d(x, y) == 0 for y in pts))


@dataclass(frozen=True)
class LowerSet:
    members: frozenset[int]

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def __le__(self, other: LowerSet) -> bool:
        return self.members <= other.members

    @classmethod
    def checked(cls, space: QSpace, pts: Iterable[int]) -> LowerSet:
        s = frozenset(pts)
        if _down(space, s) != s:
            raise NotClosed(f"{sorted(s)} is not downward closed")
        return cls(s)

    def to_json(self, space: QSpace) -> list[str]:
        return sorted(space.labels[x] for x in self.members)


@dataclass(frozen=True)
class UpperSet:
    members: frozenset[int]

    def __iter__(self):
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    @classmethod
    def checked(cls, space: QSpace, pts: Iterable[int]) -> UpperSet:
        s = frozenset(pts)
        if _up(space, s) != s:
            raise NotClosed(f"{sorted(s)} is not upward closed")
        return cls(s)

    def to_json(self, space: QSpace) -> list[str]:
        return sorted(space.labels[x] for x in self.members)


def lower_closure(space: QSpace, pts: Iterable[int]) -> LowerSet:
    return LowerSet(_down(space, pts))


def upper_closure(space: QSpace, pts: Iterable[int]) -> UpperSet:
    return UpperSet(_up(space, pts))


def _clamp(value: Ext, bound) -> Ext:
    return value if bound is None else min(value, rational(bound))


def dH(space: QSpace, C: LowerSet, C2: LowerSet, bound=None) -> Ext:
    """sup_{x in C} d(x, C'), zero when C is empty."""
    value = max((dist_to_closed(space, x, C2.members) for x in C.members), default=Fraction(0))
    return _clamp(value, bound)


def dist_from_compact(space: QSpace, Q: UpperSet, x: int) -> Ext:
    """d(Q, x) = min_{q in Q} d(q, x)."""
    return min((space.d(q, x) for q in Q.members), default=INF)


def dQ(space: QSpace, Q: UpperSet, Q2: UpperSet, bound=None) -> Ext:
    """sup_{x' in Q'} min_{x in Q} d(x, x')."""
    if not Q.members or not Q2.members:
        raise EmptySmythElement("Smyth elements must be nonempty")
    value = max(dist_from_compact(space, Q, y) for y in Q2.members)
    return _clamp(value, bound)


@dataclass(frozen=True)
class QuasiLens:
    Q: UpperSet
    C: LowerSet

    def to_json(self, space: QSpace) -> dict:
        return {"Q": self.Q.to_json(space), "C": self.C.to_json(space)}

    @classmethod
    def from_json(cls, space: QSpace, data: dict) -> QuasiLens:
        Q = UpperSet.checked(space, (space.index(s) for s in data["Q"]))
        C = LowerSet.checked(space, (space.index(s) for s in data["C"]))
        return cls(Q, C)


def dP(space: QSpace, L: QuasiLens, L2: QuasiLens, bound=None) -> Ext:
    return max(dQ(space, L.Q, L2.Q, bound), dH(space, L.C, L2.C, bound))


def ball_leq_H(space: QSpace, left: tuple[LowerSet, object], right: tuple[LowerSet, object]) -> bool:
    """(C, r) <= (C', r') pointwise: each (x, r - r') with x in C is in the closure of C'."""
    (C, r), (C2, r2) = left, right
    gap = rational(r) - rational(r2)
    return gap >= 0 and all(dist_to_closed(space, x, C2.members) <= gap for x in C.members)


def ball_leq_Q(space: QSpace, left: tuple[UpperSet, object], right: tuple[UpperSet, object]) -> bool:
    (Q, r), (Q2, r2) = left, right
    gap = rational(r) - rational(r2)
    return gap >= 0 and all(any(space.d(x, y) <= gap for x in Q.members) for y in Q2.members)


def make_quasi_lens(space: QSpace, pts: Iterable[int]) -> QuasiLens:
    pts = list(pts)
    if not pts:
        raise EmptyGenerator("a quasi-lens needs at least one generator")
    return QuasiLens(upper_closure(space, pts), lower_closure(space, pts))


@dataclass
class LensReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def validate_quasi_lens(space: QSpace, Q: UpperSet, C: LowerSet) -> LensReport:
    """Check the quasi-lens axioms; the neighbourhood condition is tested at U = Q."""
    report = LensReport()
    if _up(space, Q.members) != Q.members:
        report.violations.append("Q is not upward closed")
    if _down(space, C.members) != C.members:
        report.violations.append("C is not downward closed")
    core = Q.members & C.members
    if not core:
        report.violations.append("Q and C are disjoint")
    if not Q.members <= _up(space, core):
        report.violations.append("Q is not contained in the upward closure of Q & C")
    if not C.members <= _down(space, core):
        report.violations.append("C is not contained in the closure of Q & C")
    return report


def neighbourhood_condition(space: QSpace, Q: UpperSet, C: LowerSet) -> bool:
    """C within the closure of U & C for every upward-closed U containing Q (exhaustive)."""
    rest = [x for x in space.points() if x not in Q.members]
    for mask in range(1 << len(rest)):
        extra = {rest[i] for i in range(len(rest)) if mask >> i & 1}
        U = Q.members | extra
        if _up(space, U) != U:
            continue
        if not C.members <= _down(space, U & C.members):
            return False
    return True


def hausdorff(space: QSpace, E: Sequence[int], E2: Sequence[int]) -> Ext:
    """Classical two-sided Hausdorff distance between finite point sets."""
    forward = max(min(space.d(x, y) for y in E2) for x in E)
    backward = max(min(space.d(x, y) for x in E) for y in E2)
    return max(forward, backward)
