import random
from fractions import Fraction as F

import pytest

from oracles import envelope_fixpoint
from qmet.ext import INF
from qmet.instances import random_function, random_space
from qmet.lipschitz import (
    ExtFunc, constant, dist_to_closed, envelope, is_alpha_lipschitz, min_lip_above, sea, step_envelope,
    step_function, upward_closed,
)


def f(*vals):
    return ExtFunc(tuple(vals))


def test_is_alpha_lipschitz(S2, S3):
    assert is_alpha_lipschitz(S2, f(0, 5), 1)
    assert is_alpha_lipschitz(S3, f(3, 3, 3), 0)
    assert is_alpha_lipschitz(S3, f(INF, INF, INF), F(1, 2))
    assert not is_alpha_lipschitz(S3, f(3, 0, 0), 1)


def test_zero_lipschitz_uses_infinite_product(S2):
    # 0 * d(q, p) = 0 * inf = inf, so only the finite pair p -> q constrains.
    assert is_alpha_lipschitz(S2, f(0, 5), 0)
    assert not is_alpha_lipschitz(S2, f(5, 0), 0)


def test_envelope_examples(S2, S3):
    assert envelope(S2, f(0, 5), 1) == f(0, 5)
    assert envelope(S3, f(3, 0, 0), 1) == f(1, 0, 0)
    g = f(1, 2, 3)
    assert is_alpha_lipschitz(S3, g, 1) and envelope(S3, g, 1) == g


def test_envelope_alpha_zero(S2, S3):
    assert envelope(S3, f(3, 1, 2), 0) == f(1, 1, 1)
    # On S2, p reaches q at finite distance but q does not reach p.
    assert envelope(S2, f(5, 2), 0) == f(2, 2)
    assert envelope(S2, f(2, 5), 0) == f(2, 5)


def test_envelope_matches_relaxation_oracle():
    rng = random.Random(2)
    for _ in range(200):
        S = random_space(rng)
        h = random_function(rng, S.n)
        alpha = rng.choice([F(0), F(1, 2), F(1), F(3)])
        assert envelope(S, h, alpha).values == envelope_fixpoint(S, h, alpha)


def test_sea(S2, S3):
    assert sea(S3, 0, 2)(1) == 1
    assert sea(S3, 1, 0) == constant(S3, 0)
    s = sea(S2, 0, INF)
    assert s(1) is INF
    assert sea(S2, 1, INF)(0) == 0


def test_min_lip_above(S3):
    assert min_lip_above(S3, [(0, 2)]) == sea(S3, 0, 2)
    assert min_lip_above(S3, []) == constant(S3, 0)
    g = min_lip_above(S3, [(0, 2), (2, 2)])
    assert g == f(2, 1, 2)
    with pytest.raises(ValueError):
        min_lip_above(S3, [(0, 1), (0, 2)])


def test_min_lip_above_is_least():
    rng = random.Random(4)
    for _ in range(100):
        S = random_space(rng, max_points=5)
        pts = rng.sample(range(S.n), rng.randint(0, S.n))
        cons = [(x, F(rng.randint(0, 8), 2)) for x in pts]
        g = min_lip_above(S, cons)
        assert is_alpha_lipschitz(S, g, 1)
        assert all(g(x) >= b for x, b in cons)
        # Any 1-Lipschitz map meeting the constraints: raise a random function until it does.
        other = envelope(S, random_function(rng, S.n), 1).pointwise_max(g)
        assert is_alpha_lipschitz(S, other, 1) and g <= other


def test_dist_to_closed(S3):
    assert dist_to_closed(S3, 0, [1]) == 1
    assert dist_to_closed(S3, 1, [1, 2]) == 0
    assert dist_to_closed(S3, 0, []) is INF


def test_step_envelope_examples(S3):
    assert step_envelope(S3, constant(S3, 1), 1, 1) == constant(S3, 1)
    assert step_envelope(S3, constant(S3, 0), 1, 4) == constant(S3, 0)
    for K in (3, 4):
        assert step_envelope(S3, f(3, 0, 0), 1, K) == f(1, 0, 0)


def test_strict_levels_stay_below_grid_values(S3):
    # Open level sets f > k/2^K give 1 - 2^-K on the constant 1 function.
    for K in (1, 2, 3):
        assert step_envelope(S3, constant(S3, 1), 1, K, strict=True) == constant(S3, 1 - F(1, 2**K))


def test_step_envelope_is_envelope_of_staircase():
    rng = random.Random(6)
    for _ in range(150):
        S = random_space(rng, max_points=5)
        h = random_function(rng, S.n)
        alpha = rng.choice([F(1, 2), F(1), F(2)])
        K = rng.randint(1, 3)
        for strict in (False, True):
            expect = envelope_fixpoint(S, step_function(h, K, strict), alpha)
            assert step_envelope(S, h, alpha, K, strict).values == expect


def test_step_envelope_monotone_bounded_and_dyadic_exact():
    rng = random.Random(7)
    for _ in range(150):
        S = random_space(rng, max_points=5)
        h = random_function(rng, S.n)
        alpha = rng.choice([F(1, 2), F(1), F(2)])
        env = envelope(S, h, alpha)
        steps = [step_envelope(S, h, alpha, K) for K in (1, 2, 3)]
        assert all(s <= env for s in steps)
        assert steps[0] <= steps[1] <= steps[2]
        K = 3
        dyadic = ExtFunc(tuple(F(K) if v is INF else min(v, F(K)) for v in h.values))
        assert step_envelope(S, dyadic, alpha, K) == envelope(S, dyadic, alpha)


def test_envelope_level_sets_are_upward_closed():
    rng = random.Random(9)
    for _ in range(100):
        S = random_space(rng)
        env = envelope(S, random_function(rng, S.n), 1)
        for level in {v for v in env.values if v is not INF}:
            assert upward_closed(S, [x for x in S.points() if env(x) > level])


def test_closure_laws():
    rng = random.Random(10)
    for _ in range(150):
        S = random_space(rng, max_points=5)
        a, b = F(rng.randint(1, 4), 2), F(rng.randint(1, 4), 2)
        g = envelope(S, random_function(rng, S.n), a)
        h = envelope(S, random_function(rng, S.n), b)
        c = F(rng.randint(0, 6), 2)
        assert is_alpha_lipschitz(S, g.scaled(c), c * a)
        assert is_alpha_lipschitz(S, g + h, a + b)
        m = max(a, b)
        assert is_alpha_lipschitz(S, g.pointwise_min(h), m)
        assert is_alpha_lipschitz(S, g.pointwise_max(h), m)
        assert is_alpha_lipschitz(S, constant(S, c), 0)
        # Lipschitz for two constants at once: both envelopes return the function itself.
        if is_alpha_lipschitz(S, g, b):
            assert envelope(S, g, a) == envelope(S, g, b) == g
