"""Composition of an environment with the parties' local programs.

``P(x, i, o | a) = E(i | o) * prod_j P_j(x_j, o_j | a_j, i_j)``; the sum over
``(x, i, o)`` is verified to be exactly 1 for every setting ``a``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .errors import DimensionError, InconsistentEnvironmentError, InvalidInputError
from .scenario import EnvironmentProcess, joint_decode, joint_encode


@dataclass(frozen=True)
class PartyProgram:
    """Stochastic map ``(a, i) -> (x, o)``.

    ``kernel[a][i]`` is a tuple of ``((x, o), probability)`` pairs listing the
    nonzero outcomes; each such tuple sums to 1.
    """

    d: int
    a_size: int
    x_size: int
    kernel: tuple

    def __post_init__(self):
        if len(self.kernel) != self.a_size or any(len(row) != self.d for row in self.kernel):
            raise DimensionError("kernel must be indexed [a][i]")
        for a, row in enumerate(self.kernel):
            for i, outcomes in enumerate(row):
                total = Fraction(0)
                for (x, o), p in outcomes:
                    if not (0 <= x < self.x_size and 0 <= o < self.d):
                        raise InvalidInputError(f"outcome ({x},{o}) out of range")
                    if p < 0:
                        raise InvalidInputError(f"negative probability at a={a}, i={i}")
                    total += p
                if total != 1:
                    raise InvalidInputError(f"kernel at a={a}, i={i} sums to {total}")

    @classmethod
    def from_dense(cls, d: int, a_size: int, x_size: int,
                   prob: Callable[[int, int, int, int], Fraction]) -> "PartyProgram":
        """``prob(x, o, a, i)`` gives every entry of the conditional table."""
        kernel = []
        for a in range(a_size):
            row = []
            for i in range(d):
                outs = []
                for x in range(x_size):
                    for o in range(d):
                        p = Fraction(prob(x, o, a, i))
                        if p:
                            outs.append(((x, o), p))
                row.append(tuple(outs))
            kernel.append(tuple(row))
        return cls(d, a_size, x_size, tuple(kernel))

    @classmethod
    def deterministic(cls, d: int, a_size: int, x_size: int,
                      fn: Callable[[int, int], tuple[int, int]]) -> "PartyProgram":
        """``fn(a, i) -> (x, o)``."""
        kernel = tuple(tuple((((fn(a, i)), Fraction(1)),) for i in range(d))
                       for a in range(a_size))
        return cls(d, a_size, x_size, kernel)

    def prob(self, x: int, o: int, a: int, i: int) -> Fraction:
        for (xx, oo), p in self.kernel[a][i]:
            if xx == x and oo == o:
                return p
        return Fraction(0)

    def mix(self, other: "PartyProgram", lam) -> "PartyProgram":
        """``lam * self + (1 - lam) * other``."""
        lam = Fraction(lam)
        if (self.d, self.a_size, self.x_size) != (other.d, other.a_size, other.x_size):
            raise DimensionError("cannot mix programs of different shape")
        return PartyProgram.from_dense(
            self.d, self.a_size, self.x_size,
            lambda x, o, a, i: lam * self.prob(x, o, a, i) + (1 - lam) * other.prob(x, o, a, i))


def forward_program(d: int) -> PartyProgram:
    """Send the setting into the environment and report what comes back."""
    return PartyProgram.deterministic(d, d, d, lambda a, i: (i, a))


def copy_program(d: int, a_size: int | None = None) -> PartyProgram:
    """Report the received value and also send it back."""
    return PartyProgram.deterministic(d, a_size or d, d, lambda a, i: (i, i))


@dataclass(frozen=True)
class JointDistribution:
    """Nonzero entries of ``P(x, i, o | a)`` keyed by digit tuples."""

    n: int
    inputs: tuple
    table: Mapping

    def total(self) -> Fraction:
        return sum(self.table.values(), Fraction(0))

    def prob(self, x: Sequence[int], i: Sequence[int], o: Sequence[int]) -> Fraction:
        return self.table.get((tuple(x), tuple(i), tuple(o)), Fraction(0))


def _unnormalized(env: EnvironmentProcess, programs: Sequence[PartyProgram], a: Sequence[int]) -> dict:
    sc = env.scenario
    if len(programs) != sc.n or len(a) != sc.n:
        raise DimensionError(f"need {sc.n} programs and inputs")
    for prog, aj in zip(programs, a):
        if prog.d != sc.d:
            raise DimensionError(f"program alphabet {prog.d} differs from d={sc.d}")
        if not 0 <= aj < prog.a_size:
            raise InvalidInputError(f"input {aj} outside [0, {prog.a_size})")
    m = env.matrix
    D = sc.D
    table = {}
    for ii in range(D):
        idig = joint_decode(sc, ii)
        per_party = [programs[j].kernel[a[j]][idig[j]] for j in range(sc.n)]
        row = m.entries[ii * D:(ii + 1) * D]
        for combo in itertools.product(*per_party):
            o = tuple(oc for (_, oc), _ in combo)
            e = row[joint_encode(sc, o)]
            if not e:
                continue
            p = e
            for _, q in combo:
                p *= q
            key = (tuple(xc for (xc, _), _ in combo), idig, o)
            table[key] = table.get(key, Fraction(0)) + p
    return table


def joint_distribution(env: EnvironmentProcess, programs: Sequence[PartyProgram],
                       a: Sequence[int]) -> JointDistribution:
    table = _unnormalized(env, programs, a)
    total = sum(table.values(), Fraction(0))
    if total != 1:
        raise InconsistentEnvironmentError(
            f"composition sums to {total} for inputs {tuple(a)}",
            deficit=total - 1, inputs=tuple(a))
    return JointDistribution(env.scenario.n, tuple(a), table)


def marginal(dist: JointDistribution, keep: Sequence[str]) -> dict:
    """Marginal over the labelled variables, e.g. ``["x0", "i2"]``.

    Labels are a group letter (``x``, ``i`` or ``o``) followed by a party
    index; the bare letter keeps the whole group.
    """
    groups = {"x": 0, "i": 1, "o": 2}
    picks = []
    for label in keep:
        g = label[:1]
        if g not in groups:
            raise InvalidInputError(f"unknown variable {label!r}")
        if len(label) == 1:
            picks.extend((groups[g], j) for j in range(dist.n))
        else:
            j = int(label[1:])
            if not 0 <= j < dist.n:
                raise InvalidInputError(f"party index out of range in {label!r}")
            picks.append((groups[g], j))
    out = {}
    for key, p in dist.table.items():
        k = tuple(key[g][j] for g, j in picks)
        out[k] = out.get(k, Fraction(0)) + p
    return {k: v for k, v in out.items() if v}
