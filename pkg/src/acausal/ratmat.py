"""Exact rational scalars, dense matrices and a small linear-algebra kernel.

Scalars are :class:`fractions.Fraction`, which already keeps numerator and
denominator reduced with a positive denominator.  Vectors are plain tuples of
Fractions.  :class:`RatMatrix` is an immutable row-major table.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionError, InvalidInputError

Rational = Fraction
RatVector = tuple

__all__ = [
    "Rational",
    "RatVector",
    "RatMatrix",
    "parse_rational",
    "format_rational",
    "ratvec",
    "identity",
    "zeros",
    "mat_mul",
    "kron",
    "trace",
    "rank",
    "rref",
    "nullspace",
    "dot",
]


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer literal.  Decimal strings are rejected."""
    s = text.strip()
    if not s:
        raise InvalidInputError("empty rational literal")
    num, sep, den = s.partition("/")
    try:
        if sep:
            q = int(den)
            if q == 0:
                raise InvalidInputError(f"zero denominator in {text!r}")
            return Fraction(int(num), q)
        return Fraction(int(num))
    except ValueError:
        raise InvalidInputError(f"not a rational literal: {text!r}") from None


def format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def ratvec(values: Iterable) -> tuple:
    return tuple(Fraction(v) for v in values)


def dot(u: Sequence, v: Sequence) -> Fraction:
    if len(u) != len(v):
        raise DimensionError(f"vector lengths differ: {len(u)} vs {len(v)}")
    return sum((a * b for a, b in zip(u, v) if a and b), Fraction(0))


class RatMatrix:
    """Dense immutable matrix of Fractions, zero-based, row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Iterable):
        entries = tuple(Fraction(e) for e in entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise DimensionError(
                f"expected {rows}x{cols}={rows * cols} entries, got {len(entries)}"
            )
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("RatMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence]) -> "RatMatrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise DimensionError("ragged rows")
        return cls(len(rows), ncols, (e for r in rows for e in r))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {key} out of range for shape {self.shape}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return self.entries[j::self.cols]

    def to_rows(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(self.cols, self.rows,
                         (self.entries[i * self.cols + j]
                          for j in range(self.cols) for i in range(self.rows)))

    def scale(self, s) -> "RatMatrix":
        s = Fraction(s)
        return RatMatrix(self.rows, self.cols, (s * e for e in self.entries))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot add {self.shape} and {other.shape}")
        return RatMatrix(self.rows, self.cols,
                         (a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise DimensionError(f"cannot subtract {other.shape} from {self.shape}")
        return RatMatrix(self.rows, self.cols,
                         (a - b for a, b in zip(self.entries, other.entries)))

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        return mat_mul(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(e) for e in self.row(i))
                         for i in range(self.rows))
        return f"RatMatrix({self.rows}x{self.cols}: {body})"


def identity(n: int) -> RatMatrix:
    return RatMatrix(n, n, (1 if i == j else 0 for i in range(n) for j in range(n)))


def zeros(rows: int, cols: int | None = None) -> RatMatrix:
    cols = rows if cols is None else cols
    return RatMatrix(rows, cols, [0] * (rows * cols))


def mat_mul(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    bcols = [b.col(j) for j in range(b.cols)]
    out = []
    for i in range(a.rows):
        r = a.row(i)
        nz = [(k, x) for k, x in enumerate(r) if x]
        for c in bcols:
            out.append(sum((x * c[k] for k, x in nz), Fraction(0)))
    return RatMatrix(a.rows, b.cols, out)


def kron(a: RatMatrix, b: RatMatrix) -> RatMatrix:
    rows, cols = a.rows * b.rows, a.cols * b.cols
    out = [Fraction(0)] * (rows * cols)
    for i in range(a.rows):
        for j in range(a.cols):
            x = a.entries[i * a.cols + j]
            if not x:
                continue
            for k in range(b.rows):
                base = (i * b.rows + k) * cols + j * b.cols
                for l in range(b.cols):
                    out[base + l] = x * b.entries[k * b.cols + l]
    return RatMatrix(rows, cols, out)


def trace(a: RatMatrix) -> Fraction:
    if a.rows != a.cols:
        raise DimensionError(f"trace of non-square {a.rows}x{a.cols} matrix")
    return sum((a.entries[i * a.cols + i] for i in range(a.rows)), Fraction(0))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(m):
            break
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        piv = m[r][c]
        if piv != 1:
            m[r] = [x / piv for x in m[r]]
        prow = m[r]
        nzc = [k for k in range(c, ncols) if prow[k]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row_i = m[i]
                for k in nzc:
                    row_i[k] -= f * prow[k]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: RatMatrix | Sequence[Sequence]) -> int:
    rows = a.to_rows() if isinstance(a, RatMatrix) else a
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple]:
    """Basis of {x : rows . x = 0}, one vector per free column."""
    red, pivots = rref(rows) if rows else ([], [])
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(tuple(v))
    return basis
