"""Exact rational linear programming.

A dense two-phase primal simplex over :class:`fractions.Fraction` with
Bland's rule in both phases.  Every outcome carries a certificate that
:func:`verify` checks from scratch: primal and dual solutions for an
optimum, a feasible point plus improving ray for an unbounded problem, and
a Farkas vector for an infeasible one.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .ext import rational

LE, EQ, GE = "<=", "=", ">="

ZERO = Fraction(0)


class MalformedProblem(ValueError):
    pass


class EmptyPolytope(ValueError):
    pass


@dataclass
class LpProblem:
    """``sense`` objective . x subject to rows, with x_j >= 0 unless listed in ``free``.

    ``upper`` maps variable index to an upper bound.
    """

    sense: str
    objective: Sequence[Fraction]
    constraints: list[tuple[Sequence[Fraction], str, Fraction]] = field(default_factory=list)
    free: frozenset[int] = frozenset()
    upper: dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.sense not in ("max", "min"):
            raise MalformedProblem(f"unknown sense {self.sense!r}")
        n = len(self.objective)
        self.objective = [rational(c) for c in self.objective]
        rows = []
        for coeffs, rel, rhs in self.constraints:
            if rel not in (LE, EQ, GE):
                raise MalformedProblem(f"unknown relation {rel!r}")
            if len(coeffs) != n:
                raise MalformedProblem(f"row has {len(coeffs)} coefficients, expected {n}")
            rows.append(([rational(a) for a in coeffs], rel, rational(rhs)))
        self.constraints = rows
        self.free = frozenset(self.free)
        if any(not 0 <= j < n for j in self.free) or any(not 0 <= j < n for j in self.upper):
            raise MalformedProblem("bound refers to a missing variable")
        self.upper = {j: rational(u) for j, u in self.upper.items()}

    @property
    def n(self) -> int:
        return len(self.objective)

    def rows(self) -> list[tuple[list[Fraction], str, Fraction]]:
        """User constraints followed by one row per upper bound."""
        out = list(self.constraints)
        for j in sorted(self.upper):
            out.append(([Fraction(int(k == j)) for k in range(self.n)], LE, self.upper[j]))
        return out

    def objective_value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((c * v for c, v in zip(self.objective, x)), ZERO)

    def dump(self) -> str:
        """Human-readable listing, one constraint per line."""

        def term(coeffs):
            parts = [f"{c}*x{j}" for j, c in enumerate(coeffs) if c != 0]
            return " + ".join(parts) if parts else "0"

        lines = [f"{self.sense} {term(self.objective)}"]
        lines += [f"  {term(a)} {rel} {b}" for a, rel, b in self.constraints]
        lines += [f"  x{j} <= {u}" for j, u in sorted(self.upper.items())]
        if self.free:
            lines.append("  free: " + ", ".join(f"x{j}" for j in sorted(self.free)))
        return "\n".join(lines)


@dataclass
class Optimal:
    value: Fraction
    primal: list[Fraction]
    dual: list[Fraction]


@dataclass
class Unbounded:
    point: list[Fraction]
    ray: list[Fraction]


@dataclass
class Infeasible:
    certificate: list[Fraction]


LpOutcome = Optimal | Unbounded | Infeasible


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], rhs: list[Fraction]):
        self.m = len(rows)
        self.ncols = len(rows[0]) if rows else 0
        self.T = [row[:] + [b] for row, b in zip(rows, rhs)]
        self.basis: list[int] = []

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        pr = T[r]
        p = pr[c]
        if p != 1:
            pr[:] = [v / p for v in pr]
        for i in range(self.m):
            if i == r:
                continue
            row = T[i]
            f = row[c]
            if f != 0:
                row[:] = [a - f * b for a, b in zip(row, pr)]
        self.basis[r] = c

    def reduced_costs(self, cost: list[Fraction]) -> list[Fraction]:
        cb = [cost[b] for b in self.basis]
        out = list(cost)
        for i, c in enumerate(cb):
            if c != 0:
                row = self.T[i]
                for j in range(self.ncols):
                    if row[j] != 0:
                        out[j] -= c * row[j]
        return out

    def run(self, cost: list[Fraction], allowed: list[bool]) -> int | None:
        """Maximize ``cost``; return an unbounded entering column or None at optimum."""
        T = self.T
        while True:
            rc = self.reduced_costs(cost)
            basic = set(self.basis)
            entering = next((j for j in range(self.ncols) if allowed[j] and j not in basic and rc[j] > 0), None)
            if entering is None:
                return None
            best = None
            for i in range(self.m):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][-1] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return entering
            self.pivot(best[1], entering)

    def values(self) -> list[Fraction]:
        x = [ZERO] * self.ncols
        for i, b in enumerate(self.basis):
            x[b] = self.T[i][-1]
        return x


def solve_lp(problem: LpProblem) -> LpOutcome:
    """Solve exactly; see the module docstring for the certificates returned."""
    rows = problem.rows()
    n = problem.n
    # Structural columns: one per variable, plus a negative copy for free ones.
    columns: list[tuple[int, int]] = [(j, 1) for j in range(n)]
    columns += [(j, -1) for j in sorted(problem.free)]
    nstruct = len(columns)
    m = len(rows)
    nslack = sum(1 for _, rel, _ in rows if rel != EQ)
    nart = 0
    signs: list[int] = []
    init_col: list[int] = []
    slack_of: list[int | None] = []
    matrix: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    s_next = nstruct
    # Layout: structural | slack | artificial; artificial indices assigned below.
    pending_art: list[int] = []
    for i, (coeffs, rel, b) in enumerate(rows):
        sign = -1 if b < 0 else 1
        row = [coeffs[j] * s * sign for j, s in columns] + [ZERO] * nslack
        slack = None
        if rel != EQ:
            slack = s_next
            row[slack] = Fraction(sign if rel == LE else -sign)
            s_next += 1
        matrix.append(row)
        rhs.append(b * sign)
        signs.append(sign)
        slack_of.append(slack)
        if slack is not None and row[slack] == 1:
            init_col.append(slack)
        else:
            init_col.append(-1)
            pending_art.append(i)
    nart = len(pending_art)
    base = nstruct + nslack
    for row in matrix:
        row.extend([ZERO] * nart)
    for k, i in enumerate(pending_art):
        matrix[i][base + k] = Fraction(1)
        init_col[i] = base + k
    ncols = base + nart
    tab = _Tableau(matrix, rhs)
    tab.ncols = ncols
    tab.basis = list(init_col)

    def duals(cost: list[Fraction]) -> list[Fraction]:
        out = []
        for i in range(m):
            col = init_col[i]
            out.append(sum((cost[b] * tab.T[k][col] for k, b in enumerate(tab.basis)), ZERO))
        return out

    if nart:
        phase1 = [ZERO] * base + [Fraction(-1)] * nart
        tab.run(phase1, [True] * ncols)
        infeas = sum((tab.T[k][-1] for k, b in enumerate(tab.basis) if b >= base), ZERO)
        if infeas > 0:
            y = duals(phase1)
            return Infeasible([y[i] * signs[i] for i in range(m)])
        for r in range(m):
            if tab.basis[r] >= base:
                col = next((j for j in range(base) if tab.T[r][j] != 0), None)
                if col is not None:
                    tab.pivot(r, col)

    flip = 1 if problem.sense == "max" else -1
    cost = [problem.objective[j] * s * flip for j, s in columns] + [ZERO] * (nslack + nart)
    allowed = [j < base for j in range(ncols)]
    entering = tab.run(cost, allowed)
    z = tab.values()

    def to_vars(vec: list[Fraction]) -> list[Fraction]:
        x = [ZERO] * n
        for c, (j, s) in enumerate(columns):
            if vec[c]:
                x[j] += s * vec[c]
        return x

    point = to_vars(z)
    if entering is not None:
        dz = [ZERO] * ncols
        dz[entering] = Fraction(1)
        for k, b in enumerate(tab.basis):
            dz[b] -= tab.T[k][entering]
        return Unbounded(point, to_vars(dz))
    y = duals(cost)
    dual = [y[i] * signs[i] * flip for i in range(m)]
    return Optimal(problem.objective_value(point), point, dual)


def _row_dot(coeffs: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((a * v for a, v in zip(coeffs, x)), ZERO)


def _feasible(problem: LpProblem, x: Sequence[Fraction]) -> bool:
    if any(x[j] < 0 for j in range(problem.n) if j not in problem.free):
        return False
    for coeffs, rel, b in problem.rows():
        lhs = _row_dot(coeffs, x)
        if (rel == LE and lhs > b) or (rel == GE and lhs < b) or (rel == EQ and lhs != b):
            return False
    return True


def verify(problem: LpProblem, outcome: LpOutcome) -> bool:
    """Check an outcome's certificate exactly, independently of the solver."""
    rows = problem.rows()
    n = problem.n
    if isinstance(outcome, Optimal):
        x, y = outcome.primal, outcome.dual
        if len(y) != len(rows) or not _feasible(problem, x):
            return False
        # Sign pattern of a dual solution for max; reversed for min.
        flip = 1 if problem.sense == "max" else -1
        for (coeffs, rel, b), yi in zip(rows, y):
            yi = yi * flip
            if (rel == LE and yi < 0) or (rel == GE and yi > 0):
                return False
        aty = [sum((rows[i][0][j] * y[i] for i in range(len(rows))), ZERO) for j in range(n)]
        for j in range(n):
            gap = (aty[j] - problem.objective[j]) * flip
            if j in problem.free:
                if gap != 0:
                    return False
            elif gap < 0 or (gap != 0 and x[j] != 0):
                return False
        for (coeffs, rel, b), yi in zip(rows, y):
            if yi != 0 and _row_dot(coeffs, x) != b:
                return False
        dual_value = sum((b * yi for (_, _, b), yi in zip(rows, y)), ZERO)
        return dual_value == outcome.value == problem.objective_value(x)
    if isinstance(outcome, Unbounded):
        x, r = outcome.point, outcome.ray
        if not _feasible(problem, x):
            return False
        if any(r[j] < 0 for j in range(n) if j not in problem.free):
            return False
        for coeffs, rel, _ in rows:
            lhs = _row_dot(coeffs, r)
            if (rel == LE and lhs > 0) or (rel == GE and lhs < 0) or (rel == EQ and lhs != 0):
                return False
        gain = problem.objective_value(r)
        return gain > 0 if problem.sense == "max" else gain < 0
    if isinstance(outcome, Infeasible):
        y = outcome.certificate
        if len(y) != len(rows):
            return False
        for (_, rel, _), yi in zip(rows, y):
            if (rel == LE and yi < 0) or (rel == GE and yi > 0):
                return False
        for j in range(n):
            col = sum((rows[i][0][j] * y[i] for i in range(len(rows))), ZERO)
            if col < 0 or (j in problem.free and col != 0):
                return False
        return sum((b * yi for (_, _, b), yi in zip(rows, y)), ZERO) < 0
    return False


@dataclass
class Polytope:
    """{y : A y <= b, E y = e}; variables are free unless ``nonneg``."""

    dim: int
    ineq: list[tuple[Sequence[Fraction], Fraction]] = field(default_factory=list)
    eq: list[tuple[Sequence[Fraction], Fraction]] = field(default_factory=list)
    nonneg: bool = True

    def contains(self, y: Sequence[Fraction]) -> bool:
        if self.nonneg and any(v < 0 for v in y):
            return False
        return all(_row_dot(a, y) <= b for a, b in self.ineq) and all(_row_dot(a, y) == b for a, b in self.eq)

    def constraints(self, offset: int, total: int) -> list[tuple[list[Fraction], str, Fraction]]:
        """Rows of this polytope over variables offset..offset+dim of a wider LP."""
        out = []
        for rel, group in ((LE, self.ineq), (EQ, self.eq)):
            for a, b in group:
                row = [ZERO] * total
                row[offset : offset + self.dim] = [rational(v) for v in a]
                out.append((row, rel, rational(b)))
        return out

    @classmethod
    def simplex(cls, dim: int) -> Polytope:
        return cls(dim, eq=[([Fraction(1)] * dim, Fraction(1))])


def solve_saddle(M: Sequence[Sequence[Fraction]], P: Polytope, Q: Polytope) -> Fraction:
    """min over x in P of max over y in Q of x^T M y.

    The inner maximization is replaced by its LP dual, so the whole value is
    a single minimization over x together with the inner dual variables.
    """
    p, q = P.dim, Q.dim
    M = [[rational(v) for v in row] for row in M]
    if len(M) != p or any(len(row) != q for row in M):
        raise MalformedProblem("bilinear form does not match the polytope dimensions")
    for poly in (P, Q):
        probe = solve_lp(LpProblem("max", [ZERO] * poly.dim, poly.constraints(0, poly.dim),
                                   free=frozenset() if poly.nonneg else frozenset(range(poly.dim))))
        if isinstance(probe, Infeasible):
            raise EmptyPolytope("polytope has no points")
    # Inner: max_y (M^T x) . y  s.t. A y <= b, E y = e  (y >= 0 if nonneg).
    # Dual: min b.u + e.w  s.t. A^T u + E^T w (>= or =) M^T x, u >= 0, w free.
    nu, nw = len(Q.ineq), len(Q.eq)
    total = p + nu + nw
    cons = P.constraints(0, total)
    for j in range(q):
        row = [ZERO] * total
        for i in range(p):
            row[i] = -M[i][j]
        for k, (a, _) in enumerate(Q.ineq):
            row[p + k] = rational(a[j])
        for k, (a, _) in enumerate(Q.eq):
            row[p + nu + k] = rational(a[j])
        cons.append((row, GE if Q.nonneg else EQ, ZERO))
    objective = [ZERO] * p + [rational(b) for _, b in Q.ineq] + [rational(b) for _, b in Q.eq]
    free = set(range(p + nu, total))
    if not P.nonneg:
        free |= set(range(p))
    out = solve_lp(LpProblem("min", objective, cons, free=frozenset(free)))
    if not isinstance(out, Optimal):
        raise MalformedProblem(f"saddle LP did not reach an optimum: {type(out).__name__}")
    return out.value
