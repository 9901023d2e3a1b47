"""Symmetry and signaling analysis of deterministic consistent environments.

Binary scenarios only.  Flipping the bits a party sends and receives maps
consistent environments to consistent environments; every orbit contains
exactly one member whose fixed point under identity operations is the
all-zero joint value, and the census classifies those canonical members by
who signals to whom.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ClaimFalsifiedError, InvalidInputError
from .scenario import DeterministicFunction, Scenario, joint_decode, joint_encode

CLASS_LABELS = "abcdefg"


@dataclass(frozen=True)
class FlipPattern:
    bits: tuple[int, ...]

    def __post_init__(self):
        if any(b not in (0, 1) for b in self.bits):
            raise InvalidInputError(f"flip pattern must be bits, got {self.bits}")

    def mask(self) -> int:
        m = 0
        for b in self.bits:
            m = 2 * m + b
        return m


@dataclass(frozen=True)
class SignalingDigraph:
    n: int
    edges: frozenset
    constant_receivers: frozenset

    def indegree(self, j: int) -> int:
        return sum(1 for _, t in self.edges if t == j)

    def is_complete(self) -> bool:
        return all((k, j) in self.edges
                   for k in range(self.n) for j in range(self.n) if k != j)


@dataclass
class TaxonomyReport:
    class_counts: dict = field(default_factory=lambda: dict.fromkeys(CLASS_LABELS, 0))
    canonical_count: int = 0
    orbit_count: int = 0
    total: int = 0

    def as_dict(self) -> dict:
        return {"classes": dict(self.class_counts), "canonical": self.canonical_count,
                "orbits": self.orbit_count, "total": self.total}

    def to_text(self) -> str:
        parts = [f"{k}:{self.class_counts[k]}" for k in CLASS_LABELS]
        parts += [f"orbits:{self.orbit_count}", f"total:{self.total}"]
        return " ".join(parts)

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True)


def _require_binary(scenario: Scenario) -> None:
    if scenario.d != 2:
        raise InvalidInputError(f"flip symmetry is only defined for d=2, got d={scenario.d}")


def conjugate_by_flips(g: DeterministicFunction, l: FlipPattern | Sequence[int]) -> DeterministicFunction:
    """``g'(o) = l XOR g(l XOR o)``."""
    _require_binary(g.scenario)
    if not isinstance(l, FlipPattern):
        l = FlipPattern(tuple(l))
    if len(l.bits) != g.scenario.n:
        raise InvalidInputError(f"flip pattern of length {len(l.bits)} for n={g.scenario.n}")
    m = l.mask()
    return DeterministicFunction(g.scenario, tuple(m ^ g.table[m ^ o] for o in range(g.scenario.D)))


def fixed_points(g: DeterministicFunction) -> list[int]:
    return [i for i in range(g.scenario.D) if g.table[i] == i]


def canonical_fixed_point(g: DeterministicFunction) -> int:
    fps = fixed_points(g)
    if len(fps) != 1:
        raise InvalidInputError(f"expected a unique fixed point, found {len(fps)}")
    return fps[0]


def orbit_decompose(gs: Iterable[DeterministicFunction], require_full: bool | None = None):
    """Split ``gs`` into flip orbits.

    Returns ``(orbits, canonical)``: each orbit is sorted by table and
    ``canonical`` lists the member fixing joint index 0, one per orbit.
    Full orbit size ``2^n`` is enforced when ``require_full`` is true,
    which defaults to the three-party binary scenario.
    """
    gs = list(gs)
    if not gs:
        return [], []
    scenario = gs[0].scenario
    _require_binary(scenario)
    if require_full is None:
        require_full = (scenario.n, scenario.d) == (3, 2)
    by_table = {g.table: g for g in gs}
    seen = set()
    orbits, canonical = [], []
    patterns = list(itertools.product((0, 1), repeat=scenario.n))
    for g in sorted(gs, key=lambda h: h.table):
        if g.table in seen:
            continue
        members = {}
        for l in patterns:
            h = conjugate_by_flips(g, l)
            if h.table not in by_table:
                raise ClaimFalsifiedError("input set is not closed under flip conjugation")
            members[h.table] = h
        if require_full and len(members) != 2 ** scenario.n:
            raise ClaimFalsifiedError(f"orbit of size {len(members)}, expected {2 ** scenario.n}")
        orbit = [members[t] for t in sorted(members)]
        seen.update(members)
        orbits.append(orbit)
        canon = [h for h in orbit if h.table[0] == 0]
        if len(canon) != 1:
            raise ClaimFalsifiedError(f"orbit has {len(canon)} members fixing 0")
        canonical.append(canon[0])
    return orbits, canonical


def signaling_digraph(g: DeterministicFunction) -> SignalingDigraph:
    sc = g.scenario
    n, d = sc.n, sc.d
    decoded = [joint_decode(sc, g.table[o]) for o in range(sc.D)]
    edges = set()
    for o in range(sc.D):
        digits = joint_decode(sc, o)
        for k in range(n):
            for v in range(digits[k] + 1, d):
                other = list(digits)
                other[k] = v
                o2 = joint_encode(sc, other)
                for j in range(n):
                    if j != k and decoded[o][j] != decoded[o2][j]:
                        edges.add((k, j))
    constants = frozenset(j for j in range(n)
                          if len({decoded[o][j] for o in range(sc.D)}) == 1)
    return SignalingDigraph(n, frozenset(edges), constants)


def classify_function(g: DeterministicFunction) -> str:
    """Label a three-party binary function with one of ``a``..``g``."""
    if (g.scenario.n, g.scenario.d) != (3, 2):
        raise InvalidInputError("the census is defined for three binary parties only")
    dg = signaling_digraph(g)
    const = dg.constant_receivers
    if len(const) == 3:
        return "a"
    if len(const) == 2:
        return "b"
    if len(const) == 0:
        return "g"
    (r,) = const
    u, v = [j for j in range(3) if j != r]
    uv, vu = (u, v) in dg.edges, (v, u) in dg.edges
    if uv and vu:
        return "f"
    if not uv and not vu:
        if (r, u) in dg.edges and (r, v) in dg.edges:
            return "c"
    else:
        src, dst = (u, v) if uv else (v, u)
        if (r, src) in dg.edges:
            return "e" if (r, dst) in dg.edges else "d"
    raise ClaimFalsifiedError(f"unclassifiable signaling pattern {sorted(dg.edges)} "
                              f"for table {g.table}")


def taxonomy_census(canonical: Sequence[DeterministicFunction], orbit_count: int | None = None,
                    total: int | None = None) -> TaxonomyReport:
    report = TaxonomyReport()
    for g in canonical:
        if g.table[0] != 0:
            raise InvalidInputError(f"function {g.table} does not fix joint index 0")
        report.class_counts[classify_function(g)] += 1
    report.canonical_count = len(canonical)
    report.orbit_count = len(canonical) if orbit_count is None else orbit_count
    report.total = (len(canonical) * 2 ** canonical[0].scenario.n
                    if total is None and canonical else (total or 0))
    return report


def relabel_parties(g: DeterministicFunction, perm: Sequence[int]) -> DeterministicFunction:
    """Rename party ``k`` to ``perm[k]`` on both sides of the environment."""
    sc = g.scenario
    inv = [0] * sc.n
    for k, p in enumerate(perm):
        inv[p] = k

    def permute(digits):
        return tuple(digits[inv[j]] for j in range(sc.n))

    table = [0] * sc.D
    for o in range(sc.D):
        src = joint_decode(sc, o)
        table[joint_encode(sc, permute(src))] = joint_encode(
            sc, permute(joint_decode(sc, g.table[o])))
    return DeterministicFunction(sc, tuple(table))


def relabel_values(g: DeterministicFunction, in_mask: int, out_mask: int) -> DeterministicFunction:
    """Flip the bits entering the environment by ``out_mask`` and those
    leaving it by ``in_mask`` independently: ``g'(o) = in_mask XOR g(out_mask XOR o)``.

    With equal masks this is :func:`conjugate_by_flips`.
    """
    _require_binary(g.scenario)
    D = g.scenario.D
    if not (0 <= in_mask < D and 0 <= out_mask < D):
        raise InvalidInputError("masks must be joint indices")
    return DeterministicFunction(g.scenario, tuple(in_mask ^ g.table[out_mask ^ o] for o in range(D)))


def relabeling_class(g: DeterministicFunction) -> set:
    """Tables reachable from ``g`` by renaming parties and relabeling values."""
    sc = g.scenario
    out = set()
    for perm in itertools.permutations(range(sc.n)):
        h = relabel_parties(g, perm)
        for a in range(sc.D):
            for b in range(sc.D):
                out.add(relabel_values(h, a, b).table)
    return out
