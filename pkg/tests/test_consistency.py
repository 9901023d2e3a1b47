import itertools
import random
from fractions import Fraction

import pytest

from acausal.consistency import (ALL_OPS, SUFFICIENT, check_nonnegativity,
                                 check_total_probability, constraint_maps, family_for,
                                 fixed_point_count, is_consistent, is_consistent_deterministic,
                                 pairing_trace)
from acausal.errors import DimensionError, InvalidInputError
from acausal.fixtures import (circular_flip_function, circular_identity_function, det1,
                              det1_function, ex1, two_party_vertices)
from acausal.polytope import build_hrep, enumerate_deterministic_vertices
from acausal.ratmat import RatMatrix, nullspace, zeros
from acausal.scenario import (DeterministicFunction, DeterministicLocalOp, EnvironmentProcess,
                              Scenario, det_function_to_process, identity_op, kron_ops,
                              sufficient_family, uniform_environment, unvectorize)
from oracles import (det_env, naive_consistent, naive_fixed_points, naive_trace_product,
                     rand_mixture, rand_stochastic)

ID2, FLIP2 = identity_op(2), DeterministicLocalOp(2, (1, 0))


def test_ex1_consistent():
    v = check_total_probability(ex1(), sufficient_family(2))
    assert v.consistent and v.witness is None


def test_circular_identity_trace_two():
    env = det_function_to_process(circular_identity_function())
    assert pairing_trace(env.matrix, (ID2,) * 3) == 2
    v = is_consistent(env)
    assert not v.consistent and v.witness[1] != 1


def test_constant_preparation_consistent():
    env = EnvironmentProcess(Scenario(1, 2), RatMatrix.from_rows([[1, 1], [0, 0]]))
    assert check_total_probability(env, sufficient_family(2)).consistent


def test_witness_is_first_violation():
    env = det_function_to_process(circular_identity_function())
    ops, tr = check_total_probability(env, sufficient_family(2)).witness
    for combo in itertools.product(sufficient_family(2), repeat=3):
        if combo == ops:
            break
        assert pairing_trace(env.matrix, combo) == 1
    assert tr == naive_trace_product(env.matrix, kron_ops(ops))


def test_dimension_mismatch():
    with pytest.raises(DimensionError):
        check_total_probability(ex1(), sufficient_family(3))
    with pytest.raises(InvalidInputError):
        check_total_probability(ex1(), [])


def test_nonnegativity():
    assert check_nonnegativity(det1()).consistent
    m = RatMatrix.from_rows([[Fraction(-1, 2), 0], [Fraction(3, 2), 1]])
    v = check_nonnegativity(m)
    assert not v.consistent and v.entry == (0, 0) and v.witness is None
    assert v.describe() == "inconsistent: entry (0,0) < 0"
    assert check_nonnegativity(zeros(4)).consistent
    assert not check_total_probability(zeros(4), sufficient_family(2), n=2).consistent


@pytest.mark.parametrize("mode", [SUFFICIENT, ALL_OPS])
def test_printed_two_party_vertices_consistent(mode):
    for env in two_party_vertices():
        assert is_consistent(env, mode).consistent


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_uniform_consistent(n, d):
    assert is_consistent(uniform_environment(Scenario(n, d))).consistent


def test_circular_flip_inconsistent():
    v = is_consistent(det_function_to_process(circular_flip_function()))
    assert not v.consistent
    assert v.describe() == f"inconsistent: trace={v.witness[1]} at ops ({','.join(o.label() for o in v.witness[0])})"


def test_fixed_point_examples():
    sc1 = Scenario(1, 2)
    g = DeterministicFunction(sc1, (0, 1))
    assert fixed_point_count(g, [ID2]) == 2
    assert fixed_point_count(g, [FLIP2]) == 0
    assert fixed_point_count(det1_function(), [ID2] * 3) == 1


def test_deterministic_examples():
    assert is_consistent_deterministic(det1_function())
    assert not is_consistent_deterministic(circular_identity_function())
    sc = Scenario(3, 2)
    for c in range(8):
        assert is_consistent_deterministic(DeterministicFunction(sc, (c,) * 8))


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (3, 2), (1, 3), (2, 3)])
def test_fixed_point_count_equals_trace(n, d):
    rng = random.Random(n * 10 + d)
    sc = Scenario(n, d)
    ops_all = [DeterministicLocalOp(d, t) for t in itertools.product(range(d), repeat=d)]
    for _ in range(60):
        g = DeterministicFunction(sc, [rng.randrange(sc.D) for _ in range(sc.D)])
        ops = [rng.choice(ops_all) for _ in range(n)]
        fp = fixed_point_count(g, ops)
        assert fp == naive_fixed_points(sc, g.table, [op.table for op in ops])
        assert fp == pairing_trace(det_function_to_process(g).matrix, ops)


@pytest.mark.parametrize("mode", [SUFFICIENT, ALL_OPS])
def test_deterministic_oracle_agreement(mode):
    # 1000 sampled tables across n <= 3, d = 2, half drawn from known vertices
    rng = random.Random(7)
    verts = {n: [g.table for g in enumerate_deterministic_vertices(Scenario(n, 2))] for n in (1, 2, 3)}
    for k in range(1000):
        n = (1, 2, 3)[k % 3]
        sc = Scenario(n, 2)
        if k % 2:
            table = rng.choice(verts[n])
        else:
            table = [rng.randrange(sc.D) for _ in range(sc.D)]
        g = DeterministicFunction(sc, table)
        assert is_consistent_deterministic(g, mode) == is_consistent(det_function_to_process(g), mode).consistent


def _random_environments(rng, sc, count, verts):
    envs = []
    for k in range(count):
        kind = k % 4
        if kind == 0:
            envs.append(EnvironmentProcess(sc, rand_stochastic(rng, sc.D)))
        elif kind == 1:
            envs.append(rand_mixture(rng, sc, verts, k=rng.randint(1, 4)))
        elif kind == 2:
            envs.append(det_env(sc, [rng.randrange(sc.D) for _ in range(sc.D)]))
        else:
            # mixtures of arbitrary tables, consistent or not
            tables = [[rng.randrange(sc.D) for _ in range(sc.D)] for _ in range(3)]
            envs.append(rand_mixture(rng, sc, tables + verts[:1], k=2))
    return envs


def test_sufficient_equals_all_ops_random():
    rng = random.Random(2024)
    plan = [((1, 2), 150), ((2, 2), 300), ((3, 2), 200), ((1, 3), 150), ((2, 3), 200)]
    counts = {True: 0, False: 0}
    total = 0
    for (n, d), count in plan:
        sc = Scenario(n, d)
        verts = [g.table for g in enumerate_deterministic_vertices(sc)]
        for env in _random_environments(rng, sc, count, verts):
            a = is_consistent(env, SUFFICIENT).consistent
            b = is_consistent(env, ALL_OPS).consistent
            assert a == b
            counts[a] += 1
            total += 1
    assert total >= 1000
    # both verdicts well represented
    assert min(counts.values()) > 200


def test_naive_oracle_on_subset():
    rng = random.Random(5)
    for n, d in [(1, 2), (2, 2), (1, 3)]:
        sc = Scenario(n, d)
        verts = [g.table for g in enumerate_deterministic_vertices(sc)]
        for env in _random_environments(rng, sc, 40, verts):
            assert is_consistent(env).consistent == naive_consistent(env.matrix, n, d)


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (2, 3)])
def test_affine_points_of_sufficient_equalities_satisfy_all_ops(n, d):
    # any solution of the sufficient-family equalities satisfies every
    # deterministic trace condition, negative entries or not
    sc = Scenario(n, d)
    p = build_hrep(sc)
    basis = nullspace(p.eq_lhs.to_rows(), p.num_coords)
    base = uniform_environment(sc).vec()
    rng = random.Random(n + d)
    for _ in range(5):
        point = list(base)
        for b in rng.sample(basis, min(6, len(basis))):
            t = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            point = [x + t * y for x, y in zip(point, b)]
        m = unvectorize(point, sc.D)
        assert check_total_probability(m, family_for(d, ALL_OPS), n=n).consistent


def test_convexity():
    rng = random.Random(11)
    sc = Scenario(3, 2)
    verts = [g.table for g in enumerate_deterministic_vertices(sc)]
    for _ in range(30):
        a, b = rand_mixture(rng, sc, verts), rand_mixture(rng, sc, verts)
        lam = Fraction(rng.randint(0, 10), 10)
        m = a.matrix.scale(lam) + b.matrix.scale(1 - lam)
        assert is_consistent(EnvironmentProcess(sc, m)).consistent


def test_constraint_maps_cover_family():
    sc = Scenario(3, 2)
    maps = constraint_maps(sc)
    assert len(maps) == 27
    assert len({m for m, _ in maps}) == 27
    with pytest.raises(InvalidInputError):
        family_for(2, "bogus")
