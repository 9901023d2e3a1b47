import itertools
import random
from fractions import Fraction

import pytest

from acausal.choi import (DiagonalLocalMap, DiagonalProcessMatrix, env_to_process_matrix,
                          format_triples, local_to_diagonal_map, pairing_trace, parse_triples,
                          process_matrix_to_env)
from acausal.consistency import is_consistent
from acausal.errors import DimensionError, InvalidInputError
from acausal.fixtures import circular_identity_function, det1, ex1
from acausal.polytope import enumerate_deterministic_vertices
from acausal.ratmat import RatMatrix, kron, trace
from acausal.scenario import (DeterministicLocalOp, EnvironmentProcess, LocalOperation, Scenario,
                              all_det_local_ops, det_function_to_process, det_local_matrix,
                              identity_op, sufficient_family)
from oracles import det_env, rand_mixture, rand_stochastic

SC1 = Scenario(1, 2)
CONST0 = EnvironmentProcess(SC1, RatMatrix.from_rows([[1, 1], [0, 0]]))


def test_constant_preparation():
    w = env_to_process_matrix(CONST0)
    assert w.diag == ((1, 0), (1, 0))
    assert format_triples(w) == "1 2\n0 0 1\n1 0 1\n"


def test_det1_unit_entries():
    w = env_to_process_matrix(det1())
    flat = [x for row in w.diag for x in row]
    assert sorted(flat) == [0] * 56 + [1] * 8


@pytest.mark.parametrize("env", [CONST0, det1(), ex1()])
def test_round_trips(env):
    w = env_to_process_matrix(env)
    assert process_matrix_to_env(w) == env
    assert parse_triples(format_triples(w)) == w


def test_local_maps():
    assert local_to_diagonal_map(det_local_matrix(identity_op(2))).diag == ((1, 0), (0, 1))
    assert local_to_diagonal_map(det_local_matrix(DeterministicLocalOp(2, (1, 0)))).diag == ((0, 1), (1, 0))
    assert local_to_diagonal_map(det_local_matrix(DeterministicLocalOp(2, (0, 0)))).diag == ((1, 1), (0, 0))


def test_pairing_equals_trace_one_party():
    rng = random.Random(100)
    for _ in range(100):
        d = rng.choice([2, 3, 4])
        env = EnvironmentProcess(Scenario(1, d), rand_stochastic(rng, d))
        op = LocalOperation(d, rand_stochastic(rng, d))
        lhs = pairing_trace(env_to_process_matrix(env), [local_to_diagonal_map(op)])
        assert lhs == trace(env.matrix @ op.matrix)


@pytest.mark.parametrize("n", [2, 3])
def test_pairing_equals_trace_multi_party(n):
    rng = random.Random(n)
    sc = Scenario(n, 2)
    for _ in range(40):
        env = EnvironmentProcess(sc, rand_stochastic(rng, sc.D))
        ops = [LocalOperation(2, rand_stochastic(rng, 2)) for _ in range(n)]
        big = ops[0].matrix
        for op in ops[1:]:
            big = kron(big, op.matrix)
        lhs = pairing_trace(env_to_process_matrix(env), [local_to_diagonal_map(o) for o in ops])
        assert lhs == trace(env.matrix @ big)


def test_consistent_env_pairs_to_one():
    rng = random.Random(3)
    sc = Scenario(3, 2)
    verts = [g.table for g in enumerate_deterministic_vertices(sc)]
    maps = [local_to_diagonal_map(det_local_matrix(op)) for op in all_det_local_ops(2)]
    for _ in range(10):
        w = env_to_process_matrix(rand_mixture(rng, sc, verts))
        for combo in itertools.product(maps, repeat=3):
            assert pairing_trace(w, combo) == 1


def test_circular_identity_pairs_to_two():
    w = env_to_process_matrix(det_function_to_process(circular_identity_function()))
    ident = local_to_diagonal_map(det_local_matrix(identity_op(2)))
    assert pairing_trace(w, [ident] * 3) == 2


def test_consistency_via_diagonal_maps():
    rng = random.Random(21)
    sc = Scenario(2, 2)
    fam = [local_to_diagonal_map(det_local_matrix(op)) for op in sufficient_family(2)]
    for _ in range(100):
        env = det_env(sc, [rng.randrange(4) for _ in range(4)]) if rng.random() < 0.5 \
            else EnvironmentProcess(sc, rand_stochastic(rng, 4))
        w = env_to_process_matrix(env)
        verdict = all(pairing_trace(w, c) == 1 for c in itertools.product(fam, repeat=2))
        assert verdict == is_consistent(env).consistent


def test_validation():
    with pytest.raises(InvalidInputError):
        DiagonalProcessMatrix(SC1, ((1, 1), (1, 0)))
    with pytest.raises(InvalidInputError):
        DiagonalProcessMatrix(SC1, ((2, -1), (1, 0)))
    with pytest.raises(DimensionError):
        DiagonalProcessMatrix(SC1, ((1,),))
    with pytest.raises(InvalidInputError):
        DiagonalLocalMap(2, ((1, 1), (1, 0)))
    w = env_to_process_matrix(CONST0)
    with pytest.raises(DimensionError):
        pairing_trace(w, [])


@pytest.mark.parametrize("text", ["", "1\n", "1 2\n0 0\n", "1 2\n0 5 1\n", "1 2\n0 0 1\n0 0 1\n", "1 2\n0 0 1\n"])
def test_parse_triples_rejects(text):
    with pytest.raises(InvalidInputError):
        parse_triples(text)
