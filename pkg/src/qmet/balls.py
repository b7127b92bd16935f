"""Formal balls over a finite quasi-metric space."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .ext import INF, Ext, fmt, rational
from .space import QSpace


@dataclass(frozen=True, order=True)
class FormalBall:
    center: int
    radius: Fraction

    def __post_init__(self):
        r = rational(self.radius)
        if r < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "radius", r)

    def to_json(self, space: QSpace) -> dict:
        return {"center": space.labels[self.center], "radius": fmt(self.radius)}

    @classmethod
    def from_json(cls, space: QSpace, data: dict) -> FormalBall:
        return cls(space.index(data["center"]), rational(data["radius"]))


@dataclass(frozen=True)
class DoubleBall:
    """A formal ball of formal balls, ``((x, r), s)``."""

    inner: FormalBall
    outer_radius: Fraction

    def __post_init__(self):
        s = rational(self.outer_radius)
        if s < 0:
            raise ValueError("radius must be nonnegative")
        object.__setattr__(self, "outer_radius", s)


@dataclass(frozen=True)
class TripleBall:
    """``(((x, r), s), t)``; only used to exercise associativity of ``mu``."""

    inner: DoubleBall
    outer_radius: Fraction


def ball_leq(space: QSpace, b: FormalBall, c: FormalBall) -> bool:
    """(x, r) <= (y, s) iff d(x, y) <= r - s."""
    gap = b.radius - c.radius
    return gap >= 0 and space.d(b.center, c.center) <= gap


def dplus(space: QSpace, b: FormalBall, c: FormalBall) -> Ext:
    d = space.d(b.center, c.center)
    if d is INF:
        return INF
    return max(d - b.radius + c.radius, Fraction(0))


def eta(x: int) -> FormalBall:
    return FormalBall(x, Fraction(0))


def eta_ball(b: FormalBall) -> DoubleBall:
    return DoubleBall(b, Fraction(0))


def mu(db: DoubleBall) -> FormalBall:
    return FormalBall(db.inner.center, db.inner.radius + db.outer_radius)


def mu_double(tb: TripleBall) -> DoubleBall:
    """Multiplication one level up: (((x, r), s), t) -> ((x, r), s + t)."""
    return DoubleBall(tb.inner.inner, tb.inner.outer_radius + tb.outer_radius)


def map_mu(tb: TripleBall) -> DoubleBall:
    """Functor action of ``mu`` on a triple ball: -> ((x, r + s), t)."""
    return DoubleBall(mu(tb.inner), tb.outer_radius)


def map_eta(b: FormalBall) -> DoubleBall:
    """Functor action of ``eta`` on a ball: (x, r) -> ((x, 0), r)."""
    return DoubleBall(eta(b.center), b.radius)


def dplus_double(space: QSpace, p: DoubleBall, q: DoubleBall) -> Ext:
    d = dplus(space, p.inner, q.inner)
    if d is INF:
        return INF
    return max(d - p.outer_radius + q.outer_radius, Fraction(0))


def double_leq(space: QSpace, p: DoubleBall, q: DoubleBall) -> bool:
    gap = p.outer_radius - q.outer_radius
    return gap >= 0 and dplus(space, p.inner, q.inner) <= gap


@dataclass
class LawReport:
    checked: int = 0
    failures: list[tuple[str, object]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def check_monad_laws(space: QSpace, samples: Iterable[object]) -> LawReport:
    """Check the four unit/multiplication laws on each sample.

    ``FormalBall`` samples exercise laws (i) and (ii), ``DoubleBall`` samples
    law (iv) and ``TripleBall`` samples law (iii).
    """
    report = LawReport()
    for s in samples:
        report.checked += 1
        if isinstance(s, FormalBall):
            if mu(eta_ball(s)) != s:
                report.failures.append(("i", s))
            if mu(map_eta(s)) != s:
                report.failures.append(("ii", s))
        elif isinstance(s, DoubleBall):
            # eta_B(mu(b)) sits above b in the d++ order.
            if not double_leq(space, s, eta_ball(mu(s))):
                report.failures.append(("iv", s))
        elif isinstance(s, TripleBall):
            left, right = mu(mu_double(s)), mu(map_mu(s))
            total = s.inner.inner.radius + s.inner.outer_radius + s.outer_radius
            if not (left == right == FormalBall(s.inner.inner.center, total)):
                report.failures.append(("iii", s))
        else:
            raise TypeError(f"unsupported sample {s!r}")
    return report


def way_below(space: QSpace, b: FormalBall, c: FormalBall) -> bool:
    """Strict form of ball_leq; every point of a finite space is taken as a center point."""
    return space.d(b.center, c.center) < b.radius - c.radius


class NoUpperBound(ValueError):
    pass


class NoLeast(ValueError):
    def __init__(self, candidates: Sequence[FormalBall]):
        self.candidates = list(candidates)
        super().__init__(f"{len(self.candidates)} minimal upper bounds, none least")


def lub_formal_balls(space: QSpace, balls: Sequence[FormalBall]) -> FormalBall:
    """Least upper bound of a finite nonempty family, if it exists.

    For each center y the least upper bound centred at y is (y, s_y) with
    s_y = min_i (r_i - d(x_i, y)), provided s_y >= 0.  Any upper bound lies
    above one of these, so the lub is the candidate below all others.
    """
    if not balls:
        raise ValueError("empty family")
    candidates = []
    for y in space.points():
        gaps = [b.radius - space.d(b.center, y) if space.d(b.center, y) is not INF else None for b in balls]
        if any(g is None for g in gaps):
            continue
        s = min(gaps)
        if s >= 0:
            candidates.append(FormalBall(y, s))
    if not candidates:
        raise NoUpperBound("no formal ball lies above every input")
    for c in candidates:
        if all(ball_leq(space, c, other) for other in candidates):
            return c
    raise NoLeast(candidates)
