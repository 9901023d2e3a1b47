"""Diagonal process matrices: the classical slice of the process-matrix picture.

An environment ``E`` becomes ``W = sum_k |k><k|_O (x) diag(E[:, k])_I`` and a
local operation ``P`` becomes ``A = sum |m'><m'|_O (x) |k'><k'|_I`` weighted by
``P[m', k']``.  Only the diagonals are stored.  With these conventions
``Tr(W A) = sum_{k,m} W[k,m] A[k,m] = Tr(E P)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, InvalidInputError
from .ratmat import RatMatrix, format_rational, parse_rational
from .scenario import EnvironmentProcess, LocalOperation, Scenario, joint_decode


@dataclass(frozen=True)
class DiagonalProcessMatrix:
    """``diag[k][m]``: ``k`` runs over joint outputs, ``m`` over joint inputs."""

    scenario: Scenario
    diag: tuple

    def __post_init__(self):
        D = self.scenario.D
        if len(self.diag) != D or any(len(r) != D for r in self.diag):
            raise DimensionError(f"diagonal table must be {D}x{D}")
        for k, row in enumerate(self.diag):
            if any(x < 0 for x in row):
                raise InvalidInputError(f"negative weight in block k={k}")
            if sum(row) != 1:
                raise InvalidInputError(f"block k={k} sums to {sum(row)}, not 1")

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        k, m = key
        return self.diag[k][m]


@dataclass(frozen=True)
class DiagonalLocalMap:
    """``diag[m'][k']``: ``m'`` runs over outputs, ``k'`` over inputs."""

    d: int
    diag: tuple

    def __post_init__(self):
        if len(self.diag) != self.d or any(len(r) != self.d for r in self.diag):
            raise DimensionError(f"local diagonal table must be {self.d}x{self.d}")
        for k in range(self.d):
            col = [self.diag[m][k] for m in range(self.d)]
            if any(x < 0 for x in col):
                raise InvalidInputError(f"negative weight at input {k}")
            if sum(col) != 1:
                raise InvalidInputError(f"input {k} column sums to {sum(col)}, not 1")


def env_to_process_matrix(env: EnvironmentProcess) -> DiagonalProcessMatrix:
    m = env.matrix
    D = env.scenario.D
    return DiagonalProcessMatrix(env.scenario, tuple(tuple(m[i, k] for i in range(D))
                                                     for k in range(D)))


def process_matrix_to_env(w: DiagonalProcessMatrix) -> EnvironmentProcess:
    D = w.scenario.D
    return EnvironmentProcess(w.scenario, RatMatrix(D, D, (w.diag[k][i] for i in range(D)
                                                           for k in range(D))))


def local_to_diagonal_map(op: LocalOperation) -> DiagonalLocalMap:
    m = op.matrix
    return DiagonalLocalMap(op.d, tuple(tuple(m[r, c] for c in range(op.d)) for r in range(op.d)))


def pairing_trace(w: DiagonalProcessMatrix, maps: Sequence[DiagonalLocalMap]) -> Fraction:
    """``Tr(W (A_0 (x) ... (x) A_{n-1}))`` from the diagonals alone."""
    sc = w.scenario
    if len(maps) != sc.n:
        raise DimensionError(f"need {sc.n} local maps, got {len(maps)}")
    if any(a.d != sc.d for a in maps):
        raise DimensionError(f"local maps must act on alphabet {sc.d}")
    digits = [joint_decode(sc, x) for x in range(sc.D)]
    total = Fraction(0)
    for k in range(sc.D):
        kd = digits[k]
        row = w.diag[k]
        for m in range(sc.D):
            wv = row[m]
            if not wv:
                continue
            md = digits[m]
            p = wv
            for j, a in enumerate(maps):
                p *= a.diag[kd[j]][md[j]]
                if not p:
                    break
            total += p
    return total


def format_triples(w: DiagonalProcessMatrix) -> str:
    """Header ``n d`` then one ``k m value`` line per nonzero weight."""
    lines = [f"{w.scenario.n} {w.scenario.d}"]
    for k, row in enumerate(w.diag):
        for m, x in enumerate(row):
            if x:
                lines.append(f"{k} {m} {format_rational(x)}")
    return "\n".join(lines) + "\n"


def parse_triples(text: str) -> DiagonalProcessMatrix:
    lines = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or len(lines[0]) != 2:
        raise InvalidInputError("triple list must start with 'n d'")
    try:
        sc = Scenario(int(lines[0][0]), int(lines[0][1]))
    except ValueError:
        raise InvalidInputError("bad scenario header") from None
    D = sc.D
    table = [[Fraction(0)] * D for _ in range(D)]
    seen = set()
    for ln in lines[1:]:
        if len(ln) != 3:
            raise InvalidInputError(f"expected 'k m value', got {' '.join(ln)!r}")
        try:
            k, m = int(ln[0]), int(ln[1])
        except ValueError:
            raise InvalidInputError(f"bad index in {' '.join(ln)!r}") from None
        if not (0 <= k < D and 0 <= m < D):
            raise InvalidInputError(f"index ({k},{m}) outside [0,{D})")
        if (k, m) in seen:
            raise InvalidInputError(f"duplicate entry ({k},{m})")
        seen.add((k, m))
        table[k][m] = parse_rational(ln[2])
    return DiagonalProcessMatrix(sc, tuple(tuple(r) for r in table))
