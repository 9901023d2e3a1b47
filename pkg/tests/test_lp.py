import random
from fractions import Fraction

import pytest

from acausal.errors import DimensionError, InvalidInputError
from acausal.fixtures import ex1
from acausal.games import (Game, builtin_game, eval_noncausal, ex1_programs, forward_programs,
                           uniform_distribution)
from acausal.lp import (InfeasibleError, LinearProgram, game_objective, maximize,
                        parse_objective_text, solve_standard_form)
from acausal.polytope import build_hrep, enumerate_deterministic_vertices, enumerate_vertices_dd, is_vertex
from acausal.scenario import Scenario
from oracles import rand_mixture, rand_program


@pytest.fixture(scope="module")
def p3():
    return build_hrep(Scenario(3, 2))


def _val(c, v):
    return sum((a * b for a, b in zip(c, v)), Fraction(0))


def test_ex1_objective_at_ex1(p3):
    c = game_objective(builtin_game("ex1"), ex1_programs())
    assert _val(c, ex1().vec()) == 1


def test_ex1_lp_value_one(p3):
    c = game_objective(builtin_game("ex1"), ex1_programs())
    value, vertex = maximize(LinearProgram(c, p3))
    assert value == 1
    assert is_vertex(p3, vertex.point)
    assert _val(c, vertex.point) == 1


def test_objective_matches_compose():
    # <c, vec(E)> equals eval_noncausal for random consistent E and programs
    rng = random.Random(12)
    sc = Scenario(3, 2)
    verts = [g.table for g in enumerate_deterministic_vertices(sc)]
    ex2 = builtin_game("ex2")
    for _ in range(100):
        env = rand_mixture(rng, sc, verts)
        progs = [rand_program(rng, 2, 2, 2) for _ in range(3)]
        c = game_objective(ex2, progs)
        v = _val(c, env.vec())
        assert v == eval_noncausal(ex2, env, progs)
        assert 0 <= v <= 1


def test_always_win_objective(p3):
    win = {(a, 0): frozenset(__import__("itertools").product((0, 1), repeat=3))
           for a in __import__("itertools").product((0, 1), repeat=3)}
    game = Game(3, 2, 1, win, uniform_distribution(3, 2, 1))
    c = game_objective(game, forward_programs(game))
    rng = random.Random(1)
    verts = [g.table for g in enumerate_deterministic_vertices(Scenario(3, 2))]
    for _ in range(10):
        assert _val(c, rand_mixture(rng, Scenario(3, 2), verts).vec()) == 1


def test_one_party_corner():
    p = build_hrep(Scenario(1, 2))
    c = (1, 0, 0, 0)
    value, v = maximize(LinearProgram(c, p))
    assert value == 1 and v.point == (1, 0, 1, 0)


def test_zero_objective():
    p = build_hrep(Scenario(2, 2))
    value, v = maximize(LinearProgram((0,) * 16, p))
    assert value == 0 and is_vertex(p, v.point)


@pytest.mark.parametrize("n", [1, 2])
def test_lp_equals_vertex_max(n):
    sc = Scenario(n, 2)
    p = build_hrep(sc)
    verts = enumerate_vertices_dd(p)
    rng = random.Random(n)
    for _ in range(100):
        c = tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(p.num_coords))
        value, v = maximize(LinearProgram(c, p))
        assert value == max(_val(c, u.point) for u in verts)
        assert v.point in {u.point for u in verts}


def test_terminates_on_random_objectives():
    p = build_hrep(Scenario(2, 2))
    rng = random.Random(200)
    for _ in range(200):
        # small integer ranges force many ties and degenerate pivots
        c = tuple(rng.randint(-1, 1) for _ in range(16))
        value, v = maximize(LinearProgram(c, p))
        assert is_vertex(p, v.point)


def test_scale_equivariance():
    p = build_hrep(Scenario(2, 2))
    rng = random.Random(9)
    for _ in range(30):
        c = tuple(Fraction(rng.randint(-5, 5)) for _ in range(16))
        lam = Fraction(rng.randint(1, 9), rng.randint(1, 9))
        v1, x1 = maximize(LinearProgram(c, p))
        v2, x2 = maximize(LinearProgram(tuple(lam * x for x in c), p))
        assert v2 == lam * v1 and x1 == x2


def test_deterministic_output():
    p = build_hrep(Scenario(2, 2))
    c = tuple(range(16))
    assert maximize(LinearProgram(c, p)) == maximize(LinearProgram(c, p))


def test_infeasible_and_unbounded():
    with pytest.raises(InfeasibleError):
        solve_standard_form([[1, 1]], [-1], [0, 0])
    with pytest.raises(InvalidInputError):
        solve_standard_form([[1, -1]], [0], [1, 0])
    value, x = solve_standard_form([[1, 1], [2, 2]], [1, 2], [1, 2])
    assert value == 2 and x == [0, 1]


def test_objective_length_checked():
    with pytest.raises(DimensionError):
        LinearProgram((1, 2), build_hrep(Scenario(1, 2)))


def test_parse_objective():
    assert parse_objective_text("1 1/2\n# c\n-3\n") == (1, Fraction(1, 2), -3)
    with pytest.raises(InvalidInputError):
        parse_objective_text("0.5")
