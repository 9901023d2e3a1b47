"""H-representation of the process polytope and vertex enumeration.

Coordinates are the entries of the environment matrix read column-major:
coordinate ``o * D + i`` holds ``E[i, o]``.  With this pairing a constraint
row for the operation matrix ``M`` has ``row[o * D + i] = M[o, i]``, which
makes ``<row, vec(E)> = trace(E M)``.
"""
from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import kernels
from .consistency import SUFFICIENT, constraint_maps
from .errors import BudgetExceededError, ClaimFalsifiedError, DimensionError, InvalidInputError
from .ratmat import RatMatrix, format_rational, parse_rational, rank, rref
from .scenario import DeterministicFunction, Scenario, kron_ops, sufficient_family

# rough per-entry cost of a dense Fraction table; used for the memory guard
_BYTES_PER_ENTRY = 100
MEMORY_BUDGET = 1 << 30


@dataclass(frozen=True)
class HPolytope:
    scenario: Scenario
    eq_lhs: RatMatrix
    eq_rhs: tuple

    @property
    def nonneg_count(self) -> int:
        return self.eq_lhs.cols

    @property
    def num_coords(self) -> int:
        return self.eq_lhs.cols


@dataclass(frozen=True)
class Vertex:
    point: tuple
    deterministic: bool

    @classmethod
    def from_point(cls, point: Sequence) -> "Vertex":
        pt = tuple(Fraction(x) for x in point)
        return cls(pt, all(x in (0, 1) for x in pt))


def expected_dimension(scenario: Scenario) -> int:
    n, d = scenario.n, scenario.d
    return d ** (2 * n) - (d * (d - 1) + 1) ** n


def build_hrep(scenario: Scenario) -> HPolytope:
    D = scenario.D
    N = D * D
    family = sufficient_family(scenario.d)
    nrows = len(family) ** scenario.n
    need = nrows * N * _BYTES_PER_ENTRY
    if need > MEMORY_BUDGET:
        raise BudgetExceededError(
            f"equality system {nrows}x{N} needs about {need / 2**20:.0f} MiB")
    entries = []
    for ops in itertools.product(family, repeat=scenario.n):
        m = kron_ops(ops)
        row = [0] * N
        for o in range(D):
            for i in range(D):
                row[o * D + i] = m.entries[o * D + i]
        entries.extend(row)
    return HPolytope(scenario, RatMatrix(nrows, N, entries), (Fraction(1),) * nrows)


def polytope_dimension(p: HPolytope) -> int:
    dim = p.num_coords - rank(p.eq_lhs)
    if dim != expected_dimension(p.scenario):
        raise ClaimFalsifiedError(
            f"dimension {dim} of {p.scenario} disagrees with the closed form "
            f"{expected_dimension(p.scenario)}")
    return dim


def facet_count(p: HPolytope) -> int:
    return p.nonneg_count


def contains(p: HPolytope, point: Sequence) -> bool:
    if len(point) != p.num_coords:
        raise DimensionError(f"point of length {len(point)}, polytope has {p.num_coords} coordinates")
    if any(x < 0 for x in point):
        return False
    A = p.eq_lhs
    for r in range(A.rows):
        row = A.row(r)
        if sum((a * x for a, x in zip(row, point) if a), Fraction(0)) != p.eq_rhs[r]:
            return False
    return True


def is_vertex(p: HPolytope, point: Sequence) -> bool:
    if not contains(p, point):
        raise InvalidInputError("point is not in the polytope")
    N = p.num_coords
    rows = p.eq_lhs.to_rows()
    for k, x in enumerate(point):
        if x == 0:
            unit = [0] * N
            unit[k] = 1
            rows.append(unit)
    return rank(rows) == N


# ---------------------------------------------------------------------------
# double description

def _int_vector(vec: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for x in vec:
        den = den * x.denominator // math.gcd(den, x.denominator)
    return tuple(int(x * den) for x in vec)


def _normalize(v: list[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


class _Parametrization:
    """Affine chart of the equality subspace.

    Solving the equalities for their pivot coordinates leaves the free
    coordinates as parameters.  The DD runs on the homogenized cone over
    ``(t, x_free)``, starting from the orthant ``t >= 0, x_free >= 0``.
    """

    def __init__(self, p: HPolytope):
        A = p.eq_lhs
        aug = [list(A.row(r)) + [p.eq_rhs[r]] for r in range(A.rows)]
        red, pivots = rref(aug)
        N = A.cols
        if pivots and pivots[-1] == N:
            raise InvalidInputError("equality system is infeasible")
        self.N = N
        self.basic = pivots
        self.free = [k for k in range(N) if k not in set(pivots)]
        self.red = red
        col = {f: j + 1 for j, f in enumerate(self.free)}
        # homogeneous constraint for each basic coordinate: rhs*t - sum red*x_f >= 0
        self.basic_constraints = {}
        for r, b in enumerate(pivots):
            v = [Fraction(0)] * (1 + len(self.free))
            v[0] = red[r][N]
            for f in self.free:
                if red[r][f]:
                    v[col[f]] = -red[r][f]
            self.basic_constraints[b] = _int_vector(v)

    @property
    def cone_dim(self) -> int:
        return 1 + len(self.free)

    def to_point(self, ray: Sequence[int]) -> tuple:
        t = ray[0]
        x = [Fraction(0)] * self.N
        for j, f in enumerate(self.free):
            x[f] = Fraction(ray[j + 1], t)
        for r, b in enumerate(self.basic):
            val = self.red[r][self.N]
            row = self.red[r]
            for f in self.free:
                if row[f]:
                    val -= row[f] * x[f]
            x[b] = val
        return tuple(x)


def enumerate_vertices_dd(p: HPolytope, budget_seconds: float | None = None,
                          max_rays: int | None = None, progress=None) -> list[Vertex]:
    """All vertices of ``{x >= 0, A x = 1}`` by the double description method.

    Rays are kept as gcd-normalized integer vectors, so every step is exact.
    Adjacency uses the combinatorial test on zero sets (bit masks).  Raises
    :class:`BudgetExceededError` without returning partial results.
    """
    start = time.monotonic()
    chart = _Parametrization(p)
    m = chart.cone_dim
    N = chart.N
    t_bit = 1 << N

    # initial orthant: ray e_0 (the t direction) and e_j for each free coordinate
    all_free = 0
    for f in chart.free:
        all_free |= 1 << f
    rays: list[tuple[int, ...]] = []
    zsets: list[int] = []
    for j in range(m):
        v = [0] * m
        v[j] = 1
        rays.append(tuple(v))
        if j == 0:
            zsets.append(all_free)
        else:
            zsets.append(t_bit | (all_free & ~(1 << chart.free[j - 1])))

    pending = dict(chart.basic_constraints)
    while pending:
        # fewest rays cut first, ties by coordinate index
        best = None
        for k in sorted(pending):
            a = pending[k]
            cut = sum(1 for r in rays if sum(x * y for x, y in zip(a, r) if x and y) < 0)
            if best is None or cut < best[0]:
                best = (cut, k)
        k = best[1]
        a = pending.pop(k)
        bit = 1 << k
        vals = [sum(x * y for x, y in zip(a, r) if x and y) for r in rays]
        pos = [j for j, v in enumerate(vals) if v > 0]
        neg = [j for j, v in enumerate(vals) if v < 0]
        zero = [j for j, v in enumerate(vals) if v == 0]
        new_rays, new_z = [], []
        for jp in pos:
            zp = zsets[jp]
            for jn in neg:
                common = zp & zsets[jn]
                if bin(common).count("1") < m - 2:
                    continue
                adjacent = True
                for j in range(len(rays)):
                    if j != jp and j != jn and (zsets[j] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vn = vals[jp], -vals[jn]
                rp, rn = rays[jp], rays[jn]
                new_rays.append(_normalize([vp * y + vn * x for x, y in zip(rp, rn)]))
                new_z.append(common | bit)
            if budget_seconds is not None and time.monotonic() - start > budget_seconds:
                raise BudgetExceededError(
                    f"double description exceeded {budget_seconds}s with "
                    f"{len(pending) + 1} constraints left")
        rays = [rays[j] for j in pos] + [rays[j] for j in zero] + new_rays
        zsets = [zsets[j] for j in pos] + [zsets[j] | bit for j in zero] + new_z
        if progress is not None:
            progress(len(pending), len(rays))
        if max_rays is not None and len(rays) > max_rays:
            raise BudgetExceededError(f"double description passed {max_rays} rays")

    verts = []
    for r in rays:
        if r[0] <= 0:
            raise ClaimFalsifiedError("unbounded direction in a polytope that must be bounded")
        verts.append(Vertex.from_point(chart.to_point(r)))
    verts.sort(key=lambda v: v.point, reverse=True)
    return verts


# ---------------------------------------------------------------------------
# deterministic vertices

def enumerate_deterministic_vertices(scenario: Scenario, threads: int = 1,
                                     budget_seconds: float | None = None,
                                     mode: str = SUFFICIENT) -> list[DeterministicFunction]:
    """Every consistent 0-1 environment, found by a pruned counter scan.

    The counter's first table position is split into ``D`` chunks which may
    run on a thread pool (the compiled kernel releases the GIL).  Results
    come back sorted by table regardless of thread count.
    """
    D = scenario.D
    fmaps = [fm for fm, _ in constraint_maps(scenario, mode)]
    start = time.monotonic()

    def run(lo):
        if budget_seconds is not None and time.monotonic() - start > budget_seconds:
            raise BudgetExceededError(f"deterministic scan exceeded {budget_seconds}s")
        return kernels.scan_tables(D, fmaps, lo, lo + 1)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run, range(D)))
    else:
        chunks = [run(lo) for lo in range(D)]
    tables = sorted(t for chunk in chunks for t in chunk)
    return [DeterministicFunction(scenario, t) for t in tables]


def function_to_point(g: DeterministicFunction) -> tuple:
    D = g.scenario.D
    pt = [Fraction(0)] * (D * D)
    for o, i in enumerate(g.table):
        pt[o * D + i] = Fraction(1)
    return tuple(pt)


# ---------------------------------------------------------------------------
# file formats

def format_cdd_hrep(p: HPolytope) -> str:
    A = p.eq_lhs
    N = A.cols
    lines = ["H-representation",
             "linearity " + " ".join(str(x) for x in [A.rows] + list(range(1, A.rows + 1))),
             "begin",
             f"{A.rows + N} {N + 1} rational"]
    for r in range(A.rows):
        lines.append(" ".join([format_rational(p.eq_rhs[r])] +
                              [format_rational(-a) for a in A.row(r)]))
    for k in range(N):
        lines.append(" ".join(["0"] + ["1" if j == k else "0" for j in range(N)]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_cdd_hrep(text: str):
    """Return ``(linearity_rows, rows)``; each row is ``[b, -a_1, ..., -a_n]``."""
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("*")]
    linearity = set()
    it = iter(lines)
    for line in it:
        if line.startswith("linearity"):
            parts = line.split()
            linearity = {int(x) - 1 for x in parts[2:2 + int(parts[1])]}
        if line == "begin":
            break
    m, n1, _ = next(it).split()
    rows = [[parse_rational(x) for x in next(it).split()] for _ in range(int(m))]
    if any(len(r) != int(n1) for r in rows) or next(it) != "end":
        raise InvalidInputError("malformed cdd H-representation")
    return linearity, rows


def format_cdd_vrep(vertices: Sequence[Vertex]) -> str:
    N = len(vertices[0].point) if vertices else 0
    lines = ["V-representation", "begin", f"{len(vertices)} {N + 1} rational"]
    for v in vertices:
        lines.append(" ".join(["1"] + [format_rational(x) for x in v.point]))
    lines.append("end")
    return "\n".join(lines) + "\n"


def parse_cdd_vrep(text: str) -> list[Vertex]:
    lines = [l.strip() for l in text.splitlines() if l.strip() and not l.startswith("*")]
    i = lines.index("begin")
    m, n1, _ = lines[i + 1].split()
    out = []
    for line in lines[i + 2:i + 2 + int(m)]:
        vals = [parse_rational(x) for x in line.split()]
        if len(vals) != int(n1) or vals[0] != 1:
            raise InvalidInputError(f"bad V-representation row: {line!r}")
        out.append(Vertex.from_point(vals[1:]))
    return out


def format_vertex_list(scenario: Scenario, vertices: Sequence[Vertex]) -> str:
    ndet = sum(v.deterministic for v in vertices)
    lines = [f"# n={scenario.n} d={scenario.d} vertices={len(vertices)} deterministic={ndet}"]
    for v in vertices:
        flag = "deterministic" if v.deterministic else "probabilistic"
        lines.append(" ".join(format_rational(x) for x in v.point) + f"  # {flag}")
    return "\n".join(lines) + "\n"


def parse_vertex_list(text: str) -> list[Vertex]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(Vertex.from_point([parse_rational(x) for x in line.split()]))
    return out
