"""Seeded property suites behind ``qmet check``."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import balls as B
from .ext import INF, fmt
from .instances import (
    random_function, random_lower_set, random_radius, random_space, random_subset,
    random_upper_set, random_valuation, trial_rng,
)
from .lipschitz import ExtFunc, envelope, is_alpha_lipschitz, step_envelope
from .powerdomains import (
    QuasiLens, ball_leq_H, ball_leq_Q, dH, dP, dQ, hausdorff, make_quasi_lens, validate_quasi_lens,
)
from .previsions import (
    SUBLINEAR, SUPERLINEAR, Fork, check_walley, dirac_prevision, dkrh_sublinear, dkrh_superlinear,
    fork_distance, fork_from_lens, minimax_check, walley_exhaustive,
)
from .space import QSpace, find_violations, opposite, product_sq, specialization_leq
from .valuations import SimpleValuation, decompose_plan, dkrh_lp, dkrh_transport, dkrha_transport

BOUNDS = (Fraction(1, 2), Fraction(1), Fraction(3))


@dataclass
class Tally:
    passed: int = 0
    failed: int = 0
    counterexample: dict | None = None

    def to_json(self) -> dict:
        out: dict = {"passed": self.passed, "failed": self.failed}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class SuiteRun:
    name: str
    seed: int
    trial: int = 0
    space: QSpace | None = None
    tallies: dict[str, Tally] = field(default_factory=dict)

    def record(self, prop: str, ok: bool, **detail) -> None:
        t = self.tallies.setdefault(prop, Tally())
        if ok:
            t.passed += 1
            return
        t.failed += 1
        if t.counterexample is None:
            t.counterexample = {
                "trial": self.trial,
                "rng": f"{self.seed}:{self.name}:{self.trial}",
                "space": self.space.to_json() if self.space is not None else None,
                **{k: _render(v) for k, v in detail.items()},
            }

    @property
    def ok(self) -> bool:
        return all(t.failed == 0 for t in self.tallies.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "properties": {k: v.to_json() for k, v in sorted(self.tallies.items())}}


def _render(v):
    if v is INF or isinstance(v, (Fraction, int)):
        return fmt(v)
    if isinstance(v, ExtFunc):
        return [fmt(x) for x in v.values]
    if isinstance(v, SimpleValuation):
        return {str(x): fmt(w) for x, w in v.weights}
    if isinstance(v, (list, tuple, set, frozenset)):
        return [_render(x) for x in (sorted(v) if isinstance(v, (set, frozenset)) else v)]
    return str(v)


def _space(run: SuiteRun, rng, fixed: QSpace | None, **kw) -> QSpace:
    run.space = fixed if fixed is not None else random_space(rng, **kw)
    return run.space


def suite_axioms(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    n = S.n
    run.record("opposite_valid", not find_violations(S.labels, opposite(S).dist))
    if n <= 4:
        sq = product_sq(S)
        run.record("product_sq_valid", not find_violations(sq.labels, sq.dist))
    x, y, z = (rng.randrange(n) for _ in range(3))
    leq = lambda a, b: specialization_leq(S, a, b)  # noqa: E731
    run.record("specialization_order", leq(x, x) and (not (leq(x, y) and leq(y, z)) or leq(x, z))
               and (not (leq(x, y) and leq(y, x)) or x == y), points=[x, y, z])
    for x in range(n):
        for y in range(n):
            dx, dy = SimpleValuation.dirac(n, x), SimpleValuation.dirac(n, y)
            run.record("dirac_dkrh", dkrh_lp(S, dx, dy) == S.d(x, y), points=[x, y])
            a = BOUNDS[(x + y) % 3]
            run.record("dirac_dkrh_a", dkrh_lp(S, dx, dy, a) == min(a, S.d(x, y)), points=[x, y], bound=a)
    mus = [random_valuation(rng, n, normalized=rng.random() < 0.7) for _ in range(3)]
    for bound in (None, BOUNDS[run.trial % 3]):
        d = lambda p, q: dkrh_lp(S, p, q, bound)  # noqa: E731
        a, b, c = mus
        tag = "dkrh" if bound is None else "dkrh_a"
        run.record(f"{tag}_self_zero", d(a, a) == 0, mu=a)
        run.record(f"{tag}_triangle", d(a, c) <= d(a, b) + d(b, c), mus=mus, bound=bound)
        run.record(f"{tag}_t0", not (d(a, b) == 0 and d(b, a) == 0) or a == b, mus=[a, b], bound=bound)


def suite_duality(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    mu, nu = random_valuation(rng, S.n), random_valuation(rng, S.n)
    lp_value = dkrh_lp(S, mu, nu)
    tr_value, plan = dkrh_transport(S, mu, nu)
    run.record("kantorovich_duality", lp_value == tr_value, mu=mu, nu=nu, lp=lp_value, transport=tr_value)
    if plan is not None:
        moves = decompose_plan(S, mu, plan)
        run.record("plan_decomposition", sum((m.cost for m in moves), Fraction(0)) == plan.weight(S) == tr_value)
    for a in BOUNDS:
        lp_a = dkrh_lp(S, mu, nu, a)
        tr_a, plan_a = dkrha_transport(S, mu, nu, a)
        run.record("bounded_duality", lp_a == tr_a and lp_a <= a and plan_a.weight(S) == tr_a,
                   mu=mu, nu=nu, bound=a, lp=lp_a, transport=tr_a)
        run.record("bound_monotone", lp_a <= lp_value, bound=a)


def suite_envelopes(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    f = random_function(rng, S.n)
    alpha = rng.choice((Fraction(1, 2), Fraction(1), Fraction(2)))
    env = envelope(S, f, alpha)
    run.record("envelope_lipschitz", is_alpha_lipschitz(S, env, alpha), f=f, alpha=alpha)
    run.record("envelope_below", env <= f, f=f)
    g = envelope(S, f.pointwise_min(random_function(rng, S.n)), alpha)
    run.record("envelope_maximal", g <= env, f=f, g=g)
    run.record("envelope_fixed", envelope(S, env, alpha) == env and envelope(S, env, 2 * alpha) == env, f=f)
    K = rng.randint(1, 3)
    steps = [step_envelope(S, f, alpha, k) for k in range(1, K + 1)]
    run.record("step_below_envelope", all(s <= env for s in steps), f=f)
    run.record("step_monotone", all(a <= b for a, b in zip(steps, steps[1:])), f=f)
    dyadic = ExtFunc(tuple(min(v, Fraction(K)) if v is not INF else Fraction(K) for v in f.values))
    run.record("step_dyadic_exact", step_envelope(S, dyadic, alpha, K) == envelope(S, dyadic, alpha), f=dyadic, K=K)


def suite_monad(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    n = S.n
    samples = []
    for _ in range(10):
        b = B.FormalBall(rng.randrange(n), random_radius(rng))
        db = B.DoubleBall(b, random_radius(rng))
        samples += [b, db, B.TripleBall(db, random_radius(rng))]
    report = B.check_monad_laws(S, samples)
    run.record("monad_laws", report.ok, failures=[law for law, _ in report.failures])
    b1, b2, b3 = (B.FormalBall(rng.randrange(n), random_radius(rng)) for _ in range(3))
    leq = lambda p, q: B.ball_leq(S, p, q)  # noqa: E731
    run.record("ball_order", leq(b1, b1) and (not (leq(b1, b2) and leq(b2, b3)) or leq(b1, b3))
               and (not (leq(b1, b2) and leq(b2, b1)) or b1 == b2), balls=[b1, b2, b3])
    run.record("dplus_zero_iff_leq", (B.dplus(S, b1, b2) == 0) == leq(b1, b2), balls=[b1, b2])
    run.record("way_below_implies_leq", not B.way_below(S, b1, b2) or leq(b1, b2), balls=[b1, b2])


def suite_powerdomains(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    Cs = [random_lower_set(rng, S) for _ in range(3)]
    Qs = [random_upper_set(rng, S) for _ in range(3)]
    Ls = [make_quasi_lens(S, random_subset(rng, S.n, nonempty=True)) for _ in range(3)]
    bound = BOUNDS[run.trial % 3]
    for name, dist, objs in (("dH", dH, Cs), ("dQ", dQ, Qs), ("dP", dP, Ls)):
        for b in (None, bound):
            d = lambda p, q: dist(S, p, q, b)  # noqa: E731
            x, y, z = objs
            tag = name if b is None else f"{name}_a"
            run.record(f"{tag}_self_zero", d(x, x) == 0)
            run.record(f"{tag}_triangle", d(x, z) <= d(x, y) + d(y, z), sets=[o.to_json(S) if hasattr(o, "to_json") else o for o in objs])
            run.record(f"{tag}_t0", not (d(x, y) == 0 and d(y, x) == 0) or x == y)
    C, C2 = Cs[0], Cs[1]
    run.record("dH_zero_iff_subset", (dH(S, C, C2) == 0) == (C.members <= C2.members))
    Q, Q2 = Qs[0], Qs[1]
    run.record("dQ_zero_iff_superset", (dQ(S, Q, Q2) == 0) == (Q.members >= Q2.members))
    r, r2 = random_radius(rng), random_radius(rng)
    run.record("ball_leq_H_consistent", ball_leq_H(S, (C, r), (C2, r2)) == (r >= r2 and dH(S, C, C2) <= r - r2))
    run.record("ball_leq_Q_consistent", ball_leq_Q(S, (Q, r), (Q2, r2)) == (r >= r2 and dQ(S, Q, Q2) <= r - r2))
    for L in Ls:
        ok = validate_quasi_lens(S, L.Q, L.C).ok
        run.record("lens_valid", ok and make_quasi_lens(S, L.Q.members & L.C.members) == L)


def suite_isometries(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed, max_points=5)
    n = S.n
    a = BOUNDS[run.trial % 3]
    C, C2 = random_lower_set(rng, S, nonempty=True), random_lower_set(rng, S, nonempty=True)
    F, F2 = dirac_prevision(n, SUBLINEAR, C.members), dirac_prevision(n, SUBLINEAR, C2.members)
    run.record("dH_isometry", dH(S, C, C2) == dkrh_sublinear(S, F, F2), C=C.members, C2=C2.members)
    run.record("dH_a_isometry", dH(S, C, C2, a) == dkrh_sublinear(S, F, F2, a), C=C.members, C2=C2.members, bound=a)
    Q, Q2 = random_upper_set(rng, S), random_upper_set(rng, S)
    G, G2 = dirac_prevision(n, SUPERLINEAR, Q.members), dirac_prevision(n, SUPERLINEAR, Q2.members)
    run.record("dQ_a_isometry", dQ(S, Q, Q2, a) == dkrh_superlinear(S, G, G2, a), Q=Q.members, Q2=Q2.members, bound=a)
    L = make_quasi_lens(S, random_subset(rng, n, nonempty=True))
    L2 = make_quasi_lens(S, random_subset(rng, n, nonempty=True))
    value = fork_distance(S, fork_from_lens(S, L), fork_from_lens(S, L2), a)
    run.record("dP_a_isometry", dP(S, L, L2, a) == value, bound=a)
    Ssym = random_space(rng, symmetric=True)
    run.space = Ssym
    E, E2 = random_subset(rng, Ssym.n, nonempty=True), random_subset(rng, Ssym.n, nonempty=True)
    run.record("hausdorff_recovery", dP(Ssym, make_quasi_lens(Ssym, E), make_quasi_lens(Ssym, E2)) == hausdorff(Ssym, E, E2),
               E=E, E2=E2)
    mu, nu = random_valuation(rng, Ssym.n), random_valuation(rng, Ssym.n)
    run.record("dkrh_a_symmetric", dkrh_lp(Ssym, mu, nu, a) == dkrh_lp(Ssym, nu, mu, a), mu=mu, nu=nu)


def suite_minimax(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed, max_points=4)
    n = S.n
    normalized = rng.random() < 0.5
    G = random_valuation(rng, n, normalized)
    gens = [random_valuation(rng, n, normalized) for _ in range(rng.randint(1, 3))]
    a = rng.choice(BOUNDS)
    alpha = rng.choice((Fraction(1, 2), Fraction(1), Fraction(2)))
    for side in ("AN", "DN"):
        lhs, rhs = minimax_check(S, G, gens, side, a, alpha)
        run.record(f"minimax_{side}", lhs == rhs, G=G, gens=gens, bound=a, alpha=alpha, lhs=lhs, rhs=rhs)


def suite_walley(run: SuiteRun, rng, fixed: QSpace | None) -> None:
    S = _space(run, rng, fixed)
    L = make_quasi_lens(S, random_subset(rng, S.n, nonempty=True))
    fork = Fork(dirac_prevision(S.n, SUPERLINEAR, L.Q.members), dirac_prevision(S.n, SUBLINEAR, L.C.members))
    if S.n <= 4:
        run.record("walley_exhaustive", walley_exhaustive(S, fork).ok, lens=L.to_json(S))
    probes = [(_monotone_probe(rng, S), _monotone_probe(rng, S)) for _ in range(20)]
    run.record("walley_random", check_walley(fork, probes).ok, lens=L.to_json(S))
    if len(L.Q.members & L.C.members) > 1:
        # With two incomparable core points, max over C exceeds min over Q on an indicator.
        corrupted = Fork(fork.upper, fork.lower)
        report = walley_exhaustive(S, corrupted) if S.n <= 4 else check_walley(corrupted, _indicator_probes(S))
        run.record("walley_catches_corruption", not report.ok, lens=L.to_json(S))


def _monotone_probe(rng, S: QSpace) -> ExtFunc:
    """Random monotone function: an envelope of a random function is monotone."""
    return envelope(S, random_function(rng, S.n, allow_inf=False), rng.choice((1, 2, 3)))


def _indicator_probes(S: QSpace) -> list[tuple[ExtFunc, ExtFunc]]:
    zero = ExtFunc((Fraction(0),) * S.n)
    out = []
    for x in S.points():
        up = [Fraction(int(S.d(x, y) == 0)) for y in S.points()]
        out.append((ExtFunc(tuple(up)), zero))
    return out


SUITES: dict[str, Callable] = {
    "axioms": suite_axioms,
    "duality": suite_duality,
    "envelopes": suite_envelopes,
    "monad": suite_monad,
    "powerdomains": suite_powerdomains,
    "isometries": suite_isometries,
    "minimax": suite_minimax,
    "walley": suite_walley,
}


def run_suite(name: str, seed: int, trials: int, space: QSpace | None = None) -> dict:
    if name == "all":
        parts = {k: run_suite(k, seed, trials, space) for k in SUITES}
        return {"suite": "all", "seed": seed, "trials": trials, "ok": all(p["ok"] for p in parts.values()),
                "suites": parts}
    if name not in SUITES:
        raise KeyError(name)
    run = SuiteRun(name, seed)
    for i in range(trials):
        run.trial = i
        SUITES[name](run, trial_rng(seed, name, i), space)
    return {"suite": name, "seed": seed, "trials": trials, **run.to_json()}
