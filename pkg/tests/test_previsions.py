import random
from fractions import Fraction as F

import pytest

from oracles import inf_max_vertex, lipschitz_box, sup_min_vertex, vertices
from qmet.ext import INF
from qmet.instances import random_function, random_space, random_subset, random_valuation
from qmet.lipschitz import ExtFunc, constant, envelope
from qmet.powerdomains import (
    LowerSet, QuasiLens, UpperSet, dH, dP, dQ, lower_closure, make_quasi_lens, upper_closure,
)
from qmet.previsions import (
    SUBLINEAR, SUPERLINEAR, DegenerateInstance, Fork, GenPrevision, KindMismatch, NotLipschitz, WalleyViolation,
    check_walley, dirac_prevision, dkrh_sublinear, dkrh_superlinear, eval_prevision, extend_prevision,
    fork_distance, fork_from_lens, lens_lower_inf, minimax_check, minimax_forms, walley_exhaustive,
)
from qmet.space import from_poset
from qmet.valuations import SimpleValuation, dkrh_lp


def dirac(n, x):
    return SimpleValuation.dirac(n, x)


def test_eval_examples(S3):
    h = ExtFunc((3, 0, 5))
    up = dirac_prevision(3, SUBLINEAR, [0, 1])
    down = dirac_prevision(3, SUPERLINEAR, [0, 1])
    assert eval_prevision(up, h) == 3 and up(h) == 3
    assert eval_prevision(down, h) == 0
    half = SimpleValuation(3, {0: F(1, 2), 2: F(1, 2)})
    assert eval_prevision(GenPrevision(SUBLINEAR, (half,)), h) == 4


def test_prevision_construction_errors():
    with pytest.raises(ValueError):
        GenPrevision(SUBLINEAR, ())
    with pytest.raises(ValueError):
        GenPrevision("linear", (dirac(2, 0),))
    with pytest.raises(ValueError):
        GenPrevision(SUBLINEAR, (SimpleValuation(2, {0: 2}),))


def test_kind_mismatch(S3):
    up = dirac_prevision(3, SUBLINEAR, [0])
    down = dirac_prevision(3, SUPERLINEAR, [0])
    with pytest.raises(KindMismatch):
        dkrh_sublinear(S3, up, down, 1)
    with pytest.raises(KindMismatch):
        dkrh_superlinear(S3, up, up, 1)
    sub = GenPrevision(SUBLINEAR, (SimpleValuation(3, {0: F(1, 2)}),))
    with pytest.raises(KindMismatch):
        dkrh_sublinear(S3, up, sub, 1)
    with pytest.raises(KindMismatch):
        dkrh_superlinear(S3, dirac_prevision(3, SUPERLINEAR, [0, 1]), down)


def test_distance_examples(S3):
    A = dirac_prevision(3, SUBLINEAR, [0, 1])
    assert dkrh_sublinear(S3, A, A, 1) == 0
    B = dirac_prevision(3, SUPERLINEAR, [0, 1])
    assert dkrh_superlinear(S3, B, B, 1) == 0
    mu, nu = dirac(3, 0), SimpleValuation(3, {1: F(1, 2), 2: F(1, 2)})
    for kind, d in ((SUBLINEAR, dkrh_sublinear), (SUPERLINEAR, dkrh_superlinear)):
        for a in (F(1, 2), F(1), F(5)):
            assert d(S3, GenPrevision(kind, (mu,)), GenPrevision(kind, (nu,)), a) == dkrh_lp(S3, mu, nu, a)
    assert dkrh_superlinear(S3, GenPrevision(SUPERLINEAR, (mu,)), GenPrevision(SUPERLINEAR, (nu,))) == F(3, 2)


def sub_oracle(space, A, B, bound):
    Ab, bb = lipschitz_box(space, bound)
    best = F(0)
    for g in A.generators:
        forms = [[a - b for a, b in zip(g.dense(), g2.dense())] for g2 in B.generators]
        best = max(best, sup_min_vertex(Ab, bb, forms))
    return best


def super_oracle(space, A, B, bound):
    # sup_h (min_j G_j - min_k G'_k) = max_k sup_h min_j (G_j - G'_k)
    Ab, bb = lipschitz_box(space, bound)
    best = F(0)
    for g2 in B.generators:
        forms = [[a - b for a, b in zip(g.dense(), g2.dense())] for g in A.generators]
        best = max(best, sup_min_vertex(Ab, bb, forms))
    return best


def random_prevision(rng, kind, n, normalized=True):
    return GenPrevision(kind, tuple(random_valuation(rng, n, normalized) for _ in range(rng.randint(1, 3))))


def test_distances_match_vertex_oracles():
    rng = random.Random(41)
    for _ in range(40):
        S = random_space(rng, max_points=3)
        normalized = rng.random() < 0.7
        a = rng.choice([F(1, 2), F(1), F(2)])
        A, B = random_prevision(rng, SUBLINEAR, S.n, normalized), random_prevision(rng, SUBLINEAR, S.n, normalized)
        if A.normalization == B.normalization:
            assert dkrh_sublinear(S, A, B, a) == sub_oracle(S, A, B, a)
        A, B = random_prevision(rng, SUPERLINEAR, S.n, normalized), random_prevision(rng, SUPERLINEAR, S.n, normalized)
        if A.normalization == B.normalization:
            assert dkrh_superlinear(S, A, B, a) == super_oracle(S, A, B, a)


def test_hull_invariance():
    rng = random.Random(42)
    for _ in range(60):
        S = random_space(rng)
        kind = rng.choice([SUBLINEAR, SUPERLINEAR])
        A = GenPrevision(kind, tuple(random_valuation(rng, S.n) for _ in range(2)))
        B = random_prevision(rng, kind, S.n)
        g0, g1 = A.generators
        A2 = GenPrevision(kind, A.generators + (g0.mix(g1, F(rng.randint(1, 3), 4)),))
        for _ in range(5):
            h = random_function(rng, S.n)
            assert eval_prevision(A, h) == eval_prevision(A2, h)
        d = dkrh_sublinear if kind == SUBLINEAR else dkrh_superlinear
        assert d(S, A, B, 1) == d(S, A2, B, 1)
        assert d(S, B, A, 1) == d(S, B, A2, 1)


def test_prevision_quasi_metric_axioms():
    rng = random.Random(43)
    for _ in range(40):
        S = random_space(rng, max_points=5)
        for kind, d in ((SUBLINEAR, dkrh_sublinear), (SUPERLINEAR, dkrh_superlinear)):
            A, B, C = (random_prevision(rng, kind, S.n) for _ in range(3))
            assert d(S, A, A, 1) == 0
            assert d(S, A, C, 1) <= d(S, A, B, 1) + d(S, B, C, 1)


def test_dirac_isometries():
    rng = random.Random(44)
    for _ in range(120):
        S = random_space(rng)
        C = lower_closure(S, random_subset(rng, S.n, nonempty=True))
        C2 = lower_closure(S, random_subset(rng, S.n, nonempty=True))
        up, up2 = dirac_prevision(S.n, SUBLINEAR, C.members), dirac_prevision(S.n, SUBLINEAR, C2.members)
        assert dkrh_sublinear(S, up, up2) == dH(S, C, C2)
        Q = upper_closure(S, random_subset(rng, S.n, nonempty=True))
        Q2 = upper_closure(S, random_subset(rng, S.n, nonempty=True))
        lo, lo2 = dirac_prevision(S.n, SUPERLINEAR, Q.members), dirac_prevision(S.n, SUPERLINEAR, Q2.members)
        for a in (F(1, 2), F(2)):
            assert dkrh_sublinear(S, up, up2, a) == dH(S, C, C2, a)
            assert dkrh_superlinear(S, lo, lo2, a) == dQ(S, Q, Q2, a)


def test_fork_distance_is_plotkin_distance():
    rng = random.Random(45)
    for _ in range(80):
        S = random_space(rng, max_points=4)
        L = make_quasi_lens(S, random_subset(rng, S.n, nonempty=True))
        L2 = make_quasi_lens(S, random_subset(rng, S.n, nonempty=True))
        f, f2 = fork_from_lens(S, L), fork_from_lens(S, L2)
        a = rng.choice([F(1, 2), F(1), F(3)])
        assert fork_distance(S, f, f2, a) == dP(S, L, L2, a)
        assert fork_distance(S, f, f, a) == 0


def test_fork_differing_in_upper_part(S3):
    lower = dirac_prevision(3, SUPERLINEAR, [0])
    f = Fork(lower, dirac_prevision(3, SUBLINEAR, [0]))
    f2 = Fork(lower, dirac_prevision(3, SUBLINEAR, [1]))
    assert fork_distance(S3, f, f2, 5) == dkrh_sublinear(S3, f.upper, f2.upper, 5) == 1


def monotone_probe(rng, S):
    # 1-Lipschitz maps are monotone for the specialization order.
    return envelope(S, random_function(rng, S.n, allow_inf=False), rng.choice([F(1, 2), F(1), F(2)]))


def test_fork_from_lens_passes_walley(S3):
    rng = random.Random(46)
    f = fork_from_lens(S3, make_quasi_lens(S3, [0]))
    assert f.lower == dirac_prevision(3, SUPERLINEAR, [0]) and f.upper == dirac_prevision(3, SUBLINEAR, [0])
    L = make_quasi_lens(S3, [0, 1])
    f = fork_from_lens(S3, L)
    probes = [(monotone_probe(rng, S3), monotone_probe(rng, S3)) for _ in range(100)]
    report = check_walley(f, probes)
    assert report.ok and report.checked == 100
    assert walley_exhaustive(S3, f).ok
    zero = constant(S3, 0)
    assert check_walley(f, [(h, zero) for h, _ in probes]).ok


def test_walley_on_random_lenses():
    rng = random.Random(47)
    for _ in range(30):
        S = random_space(rng, max_points=6, min_points=5)
        L = make_quasi_lens(S, random_subset(rng, S.n, nonempty=True))
        probes = [(monotone_probe(rng, S), monotone_probe(rng, S)) for _ in range(20)]
        f = fork_from_lens(S, L, probes)
        for h, _ in probes:
            assert eval_prevision(f.lower, h) == lens_lower_inf(S, L, h)


def test_swapped_fork_is_caught(S2):
    L = make_quasi_lens(S2, [0, 1])
    good = fork_from_lens(S2, L)
    # Lower becomes the max over generators, upper the min.
    swapped = Fork(good.upper, good.lower)
    report = walley_exhaustive(S2, swapped)
    assert not report.ok
    chi_p = ExtFunc((1, 0))
    assert not check_walley(swapped, [(chi_p, constant(S2, 0))]).ok


def test_fork_from_invalid_lens_raises():
    S = from_poset("pq", [])
    bad = QuasiLens(UpperSet(frozenset({0, 1})), LowerSet(frozenset({0})))
    with pytest.raises(WalleyViolation):
        fork_from_lens(S, bad)


def test_extend_prevision(S2, S3):
    F_ = dirac_prevision(3, SUBLINEAR, [0, 2])
    h = ExtFunc((1, 2, 3))
    assert extend_prevision(S3, F_, h, 1) == eval_prevision(F_, h) == 3
    assert extend_prevision(S3, F_, h, 2) == 3
    lo = dirac_prevision(3, SUPERLINEAR, [0, 1])
    assert extend_prevision(S3, lo, constant(S3, 2), 1) == 2
    with pytest.raises(NotLipschitz):
        extend_prevision(S3, F_, ExtFunc((3, 0, 0)), 1)
    with pytest.raises(ValueError):
        extend_prevision(S3, F_, h, 0)


def test_extend_prevision_independent_of_alpha():
    rng = random.Random(48)
    for _ in range(100):
        S = random_space(rng)
        alpha = rng.choice([F(1, 2), F(1), F(2)])
        h = envelope(S, random_function(rng, S.n), alpha)
        Fp = random_prevision(rng, rng.choice([SUBLINEAR, SUPERLINEAR]), S.n, normalized=False)
        assert extend_prevision(S, Fp, h, alpha) == extend_prevision(S, Fp, h, 2 * alpha)


def test_minimax_examples(S3):
    G = dirac(3, 0)
    gens = [dirac(3, 1), dirac(3, 2)]
    for side in ("AN", "DN"):
        lhs, rhs = minimax_check(S3, G, gens, side, 1, 1)
        assert lhs == rhs
        assert minimax_check(S3, G, [G], side, 1, 1) == (0, 0)
    lhs, rhs = minimax_check(S3, G, [dirac(3, 1)], "AN", 1, 1)
    assert lhs == rhs == dkrh_lp(S3, G, dirac(3, 1), 1)
    with pytest.raises(DegenerateInstance):
        minimax_check(S3, G, [], "AN", 1, 1)
    with pytest.raises(DegenerateInstance):
        minimax_check(S3, G, gens, "AN", 0, 1)


def test_minimax_matches_vertex_oracles():
    rng = random.Random(49)
    for _ in range(40):
        S = random_space(rng, max_points=3)
        G = random_valuation(rng, S.n)
        gens = [random_valuation(rng, S.n) for _ in range(rng.randint(1, 3))]
        side = rng.choice(["AN", "DN"])
        a, alpha = rng.choice([F(1), F(2)]), rng.choice([F(1, 2), F(1)])
        lhs, rhs = minimax_check(S, G, gens, side, a, alpha)
        forms = minimax_forms(G, gens, side)
        A, b = lipschitz_box(S, a, alpha)
        assert lhs == rhs == sup_min_vertex(A, b, forms) == inf_max_vertex(vertices(A, b), forms)
