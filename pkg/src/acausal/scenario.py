"""Party/alphabet bookkeeping, environments, local operations.

Joint indices put party 0 in the most significant base-``d`` digit, so the
Kronecker product of per-party matrices lines up with joint indices.  Rows of
an environment matrix index the joint incoming value I, columns the joint
outgoing value O.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import DimensionError, InvalidInputError
from .ratmat import RatMatrix, format_rational, kron, parse_rational

# d^d blows up quickly; past this the sufficient family is the only option.
MAX_ALL_OPS_D = 6
# guards d^n against runaway scenarios
MAX_JOINT_DIM = 1 << 20


@dataclass(frozen=True)
class Scenario:
    n: int
    d: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError(f"need at least one party, got n={self.n}")
        if self.d < 2:
            raise InvalidInputError(f"local alphabet must have d>=2, got d={self.d}")
        if self.d ** self.n > MAX_JOINT_DIM:
            raise InvalidInputError(f"joint dimension {self.d}^{self.n} is too large")

    @property
    def D(self) -> int:
        """Joint dimension d**n."""
        return self.d ** self.n

    def encode(self, digits: Sequence[int]) -> int:
        return joint_encode(self, digits)

    def decode(self, idx: int) -> tuple[int, ...]:
        return joint_decode(self, idx)


def joint_encode(scenario: Scenario, digits: Sequence[int]) -> int:
    if len(digits) != scenario.n:
        raise InvalidInputError(f"expected {scenario.n} digits, got {len(digits)}")
    value = 0
    for x in digits:
        if not 0 <= x < scenario.d:
            raise InvalidInputError(f"digit {x} outside [0, {scenario.d})")
        value = value * scenario.d + x
    return value


def joint_decode(scenario: Scenario, idx: int) -> tuple[int, ...]:
    if not 0 <= idx < scenario.D:
        raise InvalidInputError(f"joint index {idx} outside [0, {scenario.D})")
    out = []
    for _ in range(scenario.n):
        idx, r = divmod(idx, scenario.d)
        out.append(r)
    return tuple(reversed(out))


def _check_column_stochastic(m: RatMatrix, what: str) -> None:
    for j in range(m.cols):
        col = m.col(j)
        if any(x < 0 for x in col):
            raise InvalidInputError(f"{what}: negative entry in column {j}")
        if sum(col) != 1:
            raise InvalidInputError(f"{what}: column {j} sums to {sum(col)}, not 1")


@dataclass(frozen=True)
class EnvironmentProcess:
    """Column-stochastic ``d^n x d^n`` matrix P(I|O)."""

    scenario: Scenario
    matrix: RatMatrix

    def __post_init__(self):
        D = self.scenario.D
        if self.matrix.shape != (D, D):
            raise DimensionError(f"environment for {self.scenario} must be {D}x{D}, "
                                 f"got {self.matrix.rows}x{self.matrix.cols}")
        _check_column_stochastic(self.matrix, "environment")

    def vec(self) -> tuple:
        return vectorize(self.matrix)


@dataclass(frozen=True)
class LocalOperation:
    """Column-stochastic ``d x d`` matrix P(O|I) of a single party."""

    d: int
    matrix: RatMatrix

    def __post_init__(self):
        if self.matrix.shape != (self.d, self.d):
            raise DimensionError(f"local operation must be {self.d}x{self.d}")
        _check_column_stochastic(self.matrix, "local operation")


@dataclass(frozen=True)
class DeterministicLocalOp:
    d: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(x) for x in self.table))
        if len(self.table) != self.d or any(not 0 <= x < self.d for x in self.table):
            raise InvalidInputError(f"invalid local table {self.table} for d={self.d}")

    def __call__(self, i: int) -> int:
        return self.table[i]

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) == 1

    def label(self) -> str:
        if self.is_constant:
            return f"const{self.table[0]}"
        if self.table == tuple(range(self.d)):
            return "id"
        if self.d == 2 and self.table == (1, 0):
            return "flip"
        return "f" + "".join(map(str, self.table))


@dataclass(frozen=True)
class DeterministicFunction:
    """Lookup table from joint O-index to joint I-index."""

    scenario: Scenario
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(int(x) for x in self.table))
        D = self.scenario.D
        if len(self.table) != D or any(not 0 <= x < D for x in self.table):
            raise InvalidInputError(f"invalid joint table for {self.scenario}")

    def __call__(self, o: int) -> int:
        return self.table[o]

    @classmethod
    def from_components(cls, scenario: Scenario, fn) -> "DeterministicFunction":
        """Build from ``fn(digits) -> digits`` acting on decoded tuples."""
        return cls(scenario, tuple(joint_encode(scenario, fn(joint_decode(scenario, o)))
                                   for o in range(scenario.D)))


def identity_op(d: int) -> DeterministicLocalOp:
    return DeterministicLocalOp(d, tuple(range(d)))


def constant_op(d: int, c: int) -> DeterministicLocalOp:
    return DeterministicLocalOp(d, (c,) * d)


def det_local_matrix(op: DeterministicLocalOp) -> LocalOperation:
    d = op.d
    entries = [0] * (d * d)
    for i, o in enumerate(op.table):
        entries[o * d + i] = 1
    return LocalOperation(d, RatMatrix(d, d, entries))


def sufficient_family(d: int) -> list[DeterministicLocalOp]:
    """The operations sending input ``i`` to ``j`` and everything else to 0.

    Duplicates (all the ``j = 0`` members are the constant 0) are dropped,
    leaving ``d(d-1)+1`` operations in lexicographic table order.
    """
    if d < 2:
        raise InvalidInputError(f"d must be >= 2, got {d}")
    seen = {}
    for i in range(d):
        for j in range(d):
            t = [0] * d
            t[i] = j
            seen.setdefault(tuple(t), None)
    return [DeterministicLocalOp(d, t) for t in sorted(seen)]


def all_det_local_ops(d: int, cap: int = MAX_ALL_OPS_D) -> list[DeterministicLocalOp]:
    if d > cap:
        raise InvalidInputError(f"refusing to enumerate {d}^{d} operations (cap d<={cap})")
    return [DeterministicLocalOp(d, t) for t in itertools.product(range(d), repeat=d)]


def det_function_to_process(f: DeterministicFunction) -> EnvironmentProcess:
    D = f.scenario.D
    entries = [0] * (D * D)
    for o, i in enumerate(f.table):
        entries[i * D + o] = 1
    return EnvironmentProcess(f.scenario, RatMatrix(D, D, entries))


def process_to_det_function(env: EnvironmentProcess) -> DeterministicFunction | None:
    """Inverse of :func:`det_function_to_process`; None if not 0-1."""
    m = env.matrix
    table = []
    for o in range(m.cols):
        col = m.col(o)
        if any(x not in (0, 1) for x in col):
            return None
        table.append(col.index(1))
    return DeterministicFunction(env.scenario, tuple(table))


def product_function(scenario: Scenario, ops: Sequence[DeterministicLocalOp]) -> DeterministicFunction:
    """Joint function applying ``ops[j]`` to the j-th digit."""
    return DeterministicFunction.from_components(
        scenario, lambda digits: tuple(op(x) for op, x in zip(ops, digits)))


def kron_ops(ops: Sequence[DeterministicLocalOp]) -> RatMatrix:
    m = det_local_matrix(ops[0]).matrix
    for op in ops[1:]:
        m = kron(m, det_local_matrix(op).matrix)
    return m


def vectorize(m: RatMatrix) -> tuple:
    """Flatten column-major (joint O outer, joint I inner)."""
    return tuple(m.entries[i * m.cols + o] for o in range(m.cols) for i in range(m.rows))


def unvectorize(v: Sequence, D: int) -> RatMatrix:
    if len(v) != D * D:
        raise DimensionError(f"vector of length {len(v)} is not {D}x{D}")
    return RatMatrix(D, D, (v[o * D + i] for i in range(D) for o in range(D)))


# ---------------------------------------------------------------------------
# process file format

def _data_lines(text: str) -> Iterable[str]:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            yield line


def parse_process_text(text: str) -> tuple[Scenario, RatMatrix]:
    """Parse a process file without enforcing stochasticity.

    Callers that need a valid environment wrap the matrix in
    :class:`EnvironmentProcess`; ``check`` inspects raw candidates.
    """
    lines = list(_data_lines(text))
    if not lines:
        raise InvalidInputError("empty process file")
    header = lines[0].split()
    if len(header) != 2:
        raise InvalidInputError(f"header must be 'n d', got {lines[0]!r}")
    try:
        scenario = Scenario(int(header[0]), int(header[1]))
    except ValueError:
        raise InvalidInputError(f"header must be 'n d', got {lines[0]!r}") from None
    D = scenario.D
    rows = [[parse_rational(tok) for tok in line.split()] for line in lines[1:]]
    if len(rows) != D or any(len(r) != D for r in rows):
        raise InvalidInputError(f"expected {D} rows of {D} entries")
    return scenario, RatMatrix.from_rows(rows)


def format_process_text(scenario: Scenario, matrix: RatMatrix, comment: str | None = None) -> str:
    out = []
    if comment:
        out.extend(f"# {c}" for c in comment.splitlines())
    out.append(f"{scenario.n} {scenario.d}")
    for i in range(matrix.rows):
        out.append(" ".join(format_rational(x) for x in matrix.row(i)))
    return "\n".join(out) + "\n"


def read_process(path) -> tuple[Scenario, RatMatrix]:
    return parse_process_text(Path(path).read_text())


def load_environment(path) -> EnvironmentProcess:
    scenario, m = read_process(path)
    return EnvironmentProcess(scenario, m)


def write_process(path, env: EnvironmentProcess, comment: str | None = None) -> None:
    Path(path).write_text(format_process_text(env.scenario, env.matrix, comment))


def uniform_environment(scenario: Scenario) -> EnvironmentProcess:
    D = scenario.D
    return EnvironmentProcess(scenario, RatMatrix(D, D, [Fraction(1, D)] * (D * D)))
