"""Exact rational simplex over the process polytope.

Maximize ``<c, x>`` subject to ``A x = 1, x >= 0``.  Phase 1 drives out
artificial variables; both phases use Dantzig's rule for a bounded number of
pivots and then switch to Bland's rule, which cannot cycle.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InvalidInputError
from .games import Game, game_program_input
from .compose import PartyProgram
from .polytope import HPolytope, Vertex
from .ratmat import parse_rational
from .scenario import joint_decode, joint_encode

DANTZIG_STEPS = 200


@dataclass(frozen=True)
class LinearProgram:
    objective: tuple
    polytope: HPolytope

    def __post_init__(self):
        if len(self.objective) != self.polytope.num_coords:
            raise DimensionError(f"objective of length {len(self.objective)} for "
                                 f"{self.polytope.num_coords} coordinates")


class InfeasibleError(InvalidInputError):
    pass


def game_objective(game: Game, programs: Sequence[PartyProgram]) -> tuple:
    """Vector ``c`` with success probability ``= <c, vec(E)>`` for every E.

    Entry ``o * D + i`` collects the winning weight of outcomes where the
    environment returns joint ``i`` on joint ``o``.
    """
    from .scenario import Scenario
    sc = Scenario(game.n, game.d)
    D = sc.D
    if len(programs) != game.n:
        raise DimensionError(f"need {game.n} programs")
    c = [Fraction(0)] * (D * D)
    for (a, m), w in game.distribution.items():
        if not w:
            continue
        inputs = [game_program_input(game, a[j], m) for j in range(game.n)]
        for ii in range(D):
            idig = joint_decode(sc, ii)
            per_party = [programs[j].kernel[inputs[j]][idig[j]] for j in range(game.n)]
            for combo in itertools.product(*per_party):
                x = tuple(xc for (xc, _), _ in combo)
                if not game.wins(a, m, x):
                    continue
                o = joint_encode(sc, tuple(oc for (_, oc), _ in combo))
                p = w
                for _, q in combo:
                    p *= q
                c[o * D + ii] += p
    return tuple(c)


class _Tableau:
    def __init__(self, A: list[list[Fraction]], b: list[Fraction]):
        self.m = len(A)
        self.n = len(A[0]) if A else 0
        # columns: original variables, then one artificial per row
        self.rows = []
        for r in range(self.m):
            row = list(A[r])
            if b[r] < 0:
                row = [-x for x in row]
                rhs = -b[r]
            else:
                rhs = b[r]
            art = [Fraction(0)] * self.m
            art[r] = Fraction(1)
            self.rows.append(row + art + [rhs])
        self.basis = [self.n + r for r in range(self.m)]
        self.width = self.n + self.m

    def pivot(self, r: int, c: int) -> None:
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            prow = [x / piv for x in prow]
            self.rows[r] = prow
        nz = [k for k, x in enumerate(prow) if x]
        for i, row in enumerate(self.rows):
            if i != r and row[c]:
                f = row[c]
                for k in nz:
                    row[k] -= f * prow[k]
        self.basis[r] = c

    def reduced_costs(self, cost: Sequence[Fraction], allowed: int) -> list[Fraction]:
        """``c_j - c_B B^-1 A_j`` for columns below ``allowed``."""
        rc = list(cost[:allowed])
        for r, bcol in enumerate(self.basis):
            cb = cost[bcol]
            if cb:
                row = self.rows[r]
                for j in range(allowed):
                    if row[j]:
                        rc[j] -= cb * row[j]
        return rc

    def optimize(self, cost: Sequence[Fraction], allowed: int) -> None:
        """Maximize ``cost`` using columns ``< allowed`` as entering candidates."""
        steps = 0
        while True:
            rc = self.reduced_costs(cost, allowed)
            basic = set(self.basis)
            cands = [j for j in range(allowed) if rc[j] > 0 and j not in basic]
            if not cands:
                return
            if steps < DANTZIG_STEPS:
                enter = max(cands, key=lambda j: (rc[j], -j))
            else:
                enter = cands[0]
            best = None
            for r, row in enumerate(self.rows):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    key = (ratio, self.basis[r])
                    if best is None or key < best[0]:
                        best = (key, r)
            if best is None:
                raise InvalidInputError("objective is unbounded on the feasible set")
            self.pivot(best[1], enter)
            steps += 1

    def solution(self) -> list[Fraction]:
        x = [Fraction(0)] * self.width
        for r, bcol in enumerate(self.basis):
            x[bcol] = self.rows[r][-1]
        return x


def solve_standard_form(A: list[list], b: list, c: Sequence) -> tuple[Fraction, list[Fraction]]:
    """Maximize ``c.x`` over ``A x = b, x >= 0``; returns ``(value, x)``."""
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    c = [Fraction(x) for x in c]
    t = _Tableau(A, b)
    n, m = t.n, t.m
    # phase 1: maximize -(sum of artificials)
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    t.optimize(phase1, n + m)
    if any(t.rows[r][-1] for r, bc in enumerate(t.basis) if bc >= n):
        raise InfeasibleError("equality system has no non-negative solution")
    # drive remaining zero-level artificials out of the basis
    r = 0
    while r < len(t.rows):
        if t.basis[r] >= n:
            col = next((j for j in range(n) if t.rows[r][j]), None)
            if col is None:
                del t.rows[r]
                del t.basis[r]
                continue
            t.pivot(r, col)
        r += 1
    for row in t.rows:
        for j in range(n, n + m):
            row[j] = Fraction(0)
    t.optimize(list(c) + [Fraction(0)] * m, n)
    x = t.solution()[:n]
    value = sum((ci * xi for ci, xi in zip(c, x) if ci and xi), Fraction(0))
    return value, x


def maximize(lp: LinearProgram) -> tuple[Fraction, Vertex]:
    p = lp.polytope
    A = p.eq_lhs.to_rows()
    value, x = solve_standard_form(A, list(p.eq_rhs), lp.objective)
    return value, Vertex.from_point(x)


def parse_objective_text(text: str) -> tuple:
    vals = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0]
        vals.extend(parse_rational(tok) for tok in line.split())
    return tuple(vals)
