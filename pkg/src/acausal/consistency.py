"""Logical-consistency checks for environments.

Two independent routes exist.  The matrix route evaluates
``trace(E (D_0 x ... x D_{n-1}))`` for every tuple of deterministic local
operations.  The table route counts fixed points of ``i = g(f(i))`` for a
deterministic environment ``g`` and is what the large searches use.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from . import kernels
from .errors import DimensionError, InvalidInputError
from .ratmat import RatMatrix
from .scenario import (
    DeterministicFunction,
    DeterministicLocalOp,
    EnvironmentProcess,
    Scenario,
    all_det_local_ops,
    kron_ops,
    sufficient_family,
)

SUFFICIENT = "sufficient-family"
ALL_OPS = "all-ops"
MODES = (SUFFICIENT, ALL_OPS)


@dataclass(frozen=True)
class ConsistencyVerdict:
    consistent: bool
    # violated (ops, trace) when a total-probability condition fails
    witness: tuple | None = None
    # (row, col) of the first negative entry when non-negativity fails
    entry: tuple | None = None

    def __bool__(self) -> bool:
        return self.consistent

    def describe(self) -> str:
        if self.consistent:
            return "consistent"
        if self.entry is not None:
            return f"inconsistent: entry ({self.entry[0]},{self.entry[1]}) < 0"
        ops, tr = self.witness
        labels = ",".join(op.label() for op in ops)
        return f"inconsistent: trace={tr} at ops ({labels})"


def family_for(d: int, mode: str) -> list[DeterministicLocalOp]:
    if mode == SUFFICIENT:
        return sufficient_family(d)
    if mode == ALL_OPS:
        return all_det_local_ops(d)
    raise InvalidInputError(f"unknown mode {mode!r}; expected one of {MODES}")


@lru_cache(maxsize=4096)
def _support(ops: tuple) -> tuple:
    # nonzero (row, col, value) of the Kronecker product, cached per tuple
    m = kron_ops(ops)
    return tuple((r, c, m.entries[r * m.cols + c])
                 for r in range(m.rows) for c in range(m.cols)
                 if m.entries[r * m.cols + c])


def pairing_trace(matrix: RatMatrix, ops: Sequence[DeterministicLocalOp]) -> Fraction:
    """``trace(matrix . kron(ops))`` using only the nonzeros of the product."""
    ent, D = matrix.entries, matrix.cols
    total = Fraction(0)
    for r, c, v in _support(tuple(ops)):
        # (E M)_{ii} = sum_k E[i,k] M[k,i]
        total += ent[c * D + r] * v
    return total


def _as_matrix(env) -> RatMatrix:
    return env.matrix if isinstance(env, EnvironmentProcess) else env


def check_total_probability(env, family: Sequence[DeterministicLocalOp],
                            n: int | None = None) -> ConsistencyVerdict:
    """Every n-tuple over ``family`` must give trace 1.

    ``env`` may be an :class:`EnvironmentProcess` or a bare square matrix
    (then ``n`` is required), so affine candidates can be tested too.
    """
    m = _as_matrix(env)
    if not family:
        raise InvalidInputError("empty operation family")
    d = family[0].d
    if any(op.d != d for op in family):
        raise DimensionError("family mixes alphabet sizes")
    if isinstance(env, EnvironmentProcess):
        n = env.scenario.n
        if env.scenario.d != d:
            raise DimensionError(f"family has d={d}, environment has d={env.scenario.d}")
    elif n is None:
        raise InvalidInputError("n is required for a bare matrix")
    if m.rows != m.cols or m.rows != d ** n:
        raise DimensionError(f"matrix {m.rows}x{m.cols} does not match n={n}, d={d}")
    for ops in itertools.product(family, repeat=n):
        tr = pairing_trace(m, ops)
        if tr != 1:
            return ConsistencyVerdict(False, witness=(ops, tr))
    return ConsistencyVerdict(True)


def check_nonnegativity(candidate) -> ConsistencyVerdict:
    m = _as_matrix(candidate)
    if m.rows != m.cols:
        raise DimensionError(f"non-square candidate {m.rows}x{m.cols}")
    for k, x in enumerate(m.entries):
        if x < 0:
            return ConsistencyVerdict(False, entry=divmod(k, m.cols))
    return ConsistencyVerdict(True)


def is_consistent(env: EnvironmentProcess, mode: str = SUFFICIENT) -> ConsistencyVerdict:
    verdict = check_nonnegativity(env)
    if not verdict:
        return verdict
    return check_total_probability(env, family_for(env.scenario.d, mode))


# ---------------------------------------------------------------------------
# table route

def composite_map(scenario: Scenario, ops: Sequence[DeterministicLocalOp]) -> tuple[int, ...]:
    """Joint table of the parties' combined local operation."""
    return _composite_map(scenario.n, scenario.d, tuple(op.table for op in ops))


@lru_cache(maxsize=65536)
def _composite_map(n: int, d: int, tables: tuple) -> tuple[int, ...]:
    if len(tables) != n:
        raise DimensionError(f"expected {n} local operations, got {len(tables)}")
    out = [0]
    for t in tables:
        if len(t) != d:
            raise DimensionError(f"local operation of size {len(t)} for d={d}")
        out = [x * d + t[y] for x in out for y in range(d)]
    return tuple(out)


def fixed_point_count(g: DeterministicFunction, ops: Sequence[DeterministicLocalOp]) -> int:
    return kernels.fixed_point_count(g.table, composite_map(g.scenario, ops))


@lru_cache(maxsize=64)
def constraint_maps(scenario: Scenario, mode: str = SUFFICIENT) -> tuple:
    """Composite maps for every op tuple, cheapest checks first.

    Ordered by how many table positions a check reads (ties keep tuple
    order).  Tuples where one party is active and the rest emit constants
    read only ``d`` positions and reject most candidates.
    """
    family = family_for(scenario.d, mode)
    maps = []
    for idx, ops in enumerate(itertools.product(family, repeat=scenario.n)):
        fm = composite_map(scenario, ops)
        maps.append((len(set(fm)), idx, fm, ops))
    maps.sort(key=lambda t: (t[0], t[1]))
    return tuple((fm, ops) for _, _, fm, ops in maps)


def is_consistent_deterministic(g: DeterministicFunction, mode: str = SUFFICIENT) -> bool:
    cm = constraint_maps(g.scenario, mode)
    return kernels.first_violation(g.table, [fm for fm, _ in cm]) < 0


def deterministic_violation(g: DeterministicFunction, mode: str = SUFFICIENT):
    """``(ops, fixed_point_count)`` of the first failing tuple, or None."""
    cm = constraint_maps(g.scenario, mode)
    k = kernels.first_violation(g.table, [fm for fm, _ in cm])
    if k < 0:
        return None
    fm, ops = cm[k]
    return ops, kernels.fixed_point_count(g.table, fm)
