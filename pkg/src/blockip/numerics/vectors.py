"""Named integer/rational vectors and matrices, norms and the conformal order.

All entries are Python ints (arbitrary precision) or Fractions; nothing here ever touches
floating point. Values are frozen after construction and safe to share between threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

from blockip.errors import ContractViolation

Vector = tuple[int, ...]


def default_index(prefix: str, n: int) -> tuple[str, ...]:
    """Variable names prefix0, prefix1, ... used when no index is given."""
    return tuple(f"{prefix}{i}" for i in range(n))


def _check_names(names: tuple[str, ...], what: str) -> None:
    if len(set(names)) != len(names):
        raise ContractViolation(f"duplicate names in {what}: {names}")


@dataclass(frozen=True)
class IntVec:
    """An integer vector over an ordered tuple of variable names."""

    entries: tuple[int, ...]
    index: tuple[str, ...] = ()

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not self.index:
            object.__setattr__(self, "index", default_index("x", len(entries)))
        elif len(self.index) != len(entries):
            raise ContractViolation(
                f"index has {len(self.index)} names but vector has {len(entries)} entries"
            )
        _check_names(self.index, "vector index")

    @classmethod
    def zeros(cls, index: Sequence[str]) -> IntVec:
        return cls((0,) * len(index), tuple(index))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> int:
        return self.entries[i]

    def get(self, name: str) -> int:
        return self.entries[self.index.index(name)]

    def __add__(self, other: IntVec) -> IntVec:
        _check_aligned(self, other)
        return IntVec(tuple(a + b for a, b in zip(self.entries, other.entries)), self.index)

    def __sub__(self, other: IntVec) -> IntVec:
        _check_aligned(self, other)
        return IntVec(tuple(a - b for a, b in zip(self.entries, other.entries)), self.index)

    def __neg__(self) -> IntVec:
        return IntVec(tuple(-a for a in self.entries), self.index)

    def scale(self, k: int) -> IntVec:
        return IntVec(tuple(k * a for a in self.entries), self.index)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_nonnegative(self) -> bool:
        return all(a >= 0 for a in self.entries)

    def renamed(self, index: Sequence[str]) -> IntVec:
        return IntVec(self.entries, tuple(index))


@dataclass(frozen=True)
class RatVec:
    """A rational vector; Fraction keeps every entry reduced with a positive denominator."""

    entries: tuple[Fraction, ...]
    index: tuple[str, ...] = ()

    def __post_init__(self):
        entries = tuple(Fraction(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not self.index:
            object.__setattr__(self, "index", default_index("x", len(entries)))
        elif len(self.index) != len(entries):
            raise ContractViolation("index length does not match entries")
        _check_names(self.index, "vector index")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.entries)

    def __getitem__(self, i: int) -> Fraction:
        return self.entries[i]

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for e in self.entries)

    def to_int(self) -> IntVec:
        if not self.is_integral():
            raise ContractViolation("vector has non-integral entries")
        return IntVec(tuple(int(e) for e in self.entries), self.index)


@dataclass(frozen=True)
class IntMat:
    """Dense integer matrix with named rows and columns.

    Columns of a matrix double as generator sets: a set 𝓓 of t-dimensional vectors is an
    IntMat with t rows and one column per generator, which keeps the row dimension even
    when 𝓓 is empty.
    """

    rows: tuple[tuple[int, ...], ...]
    column_index: tuple[str, ...] = ()
    row_index: tuple[str, ...] = ()
    _ncols: int | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        rows = tuple(tuple(int(e) for e in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        if not self.column_index:
            n = self._ncols if self._ncols is not None else (len(rows[0]) if rows else 0)
            object.__setattr__(self, "column_index", default_index("y", n))
        if not self.row_index:
            object.__setattr__(self, "row_index", default_index("t", len(rows)))
        if len(self.row_index) != len(rows):
            raise ContractViolation(
                f"row index has {len(self.row_index)} names but matrix has {len(rows)} rows"
            )
        width = len(self.column_index)
        for i, row in enumerate(rows):
            if len(row) != width:
                raise ContractViolation(f"row {i} has {len(row)} entries, expected {width}")
        _check_names(self.column_index, "column index")
        _check_names(self.row_index, "row index")

    @classmethod
    def of(
        cls,
        rows: Iterable[Iterable[int]],
        ncols: int | None = None,
        column_index: Sequence[str] = (),
        row_index: Sequence[str] = (),
    ) -> IntMat:
        return cls(
            tuple(tuple(r) for r in rows), tuple(column_index), tuple(row_index), _ncols=ncols
        )

    @classmethod
    def from_columns(cls, columns: Iterable[Sequence[int]], dim: int) -> IntMat:
        cols = [tuple(c) for c in columns]
        for c in cols:
            if len(c) != dim:
                raise ContractViolation(f"generator {c} does not have dimension {dim}")
        rows = [tuple(c[i] for c in cols) for i in range(dim)]
        return cls.of(rows, ncols=len(cols))

    @classmethod
    def identity(cls, n: int) -> IntMat:
        return cls.of([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @property
    def nrows(self) -> int:
        return len(self.row_index)

    @property
    def ncols(self) -> int:
        return len(self.column_index)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> Vector:
        return tuple(row[j] for row in self.rows)

    @property
    def columns(self) -> tuple[Vector, ...]:
        return tuple(self.column(j) for j in range(self.ncols))

    def transpose(self) -> IntMat:
        return IntMat.of(self.columns, ncols=self.nrows)

    def norm_inf(self) -> int:
        return max((abs(e) for row in self.rows for e in row), default=0)

    def select_columns(self, keep: Sequence[int]) -> IntMat:
        return IntMat.of(
            [[row[j] for j in keep] for row in self.rows],
            ncols=len(keep),
            column_index=[self.column_index[j] for j in keep],
            row_index=self.row_index,
        )

    def hstack(self, other: IntMat) -> IntMat:
        if self.nrows != other.nrows:
            raise ContractViolation("cannot stack matrices with different row counts")
        return IntMat.of(
            [a + b for a, b in zip(self.rows, other.rows)], ncols=self.ncols + other.ncols
        )

    def key(self) -> tuple:
        """Canonical hashable content (shape and entries, names ignored)."""
        return (self.nrows, self.ncols, self.rows)


def _check_aligned(u, v) -> None:
    if isinstance(u, (IntVec, RatVec)) and isinstance(v, (IntVec, RatVec)):
        if u.index != v.index:
            raise ContractViolation(f"index mismatch: {u.index} vs {v.index}")
    elif len(u) != len(v):
        raise ContractViolation(f"length mismatch: {len(u)} vs {len(v)}")


def conformal_leq(u: Sequence[int], v: Sequence[int]) -> bool:
    """u ⊑ v: same sign pattern where u is non-zero and |u_x| <= |v_x| everywhere."""
    _check_aligned(u, v)
    for a, b in zip(u, v):
        if a == 0:
            continue
        if (a > 0) != (b > 0) or abs(a) > abs(b):
            return False
    return True


def mat_apply(m: IntMat, u: Sequence[int]) -> IntVec:
    """Exact product M·u over the row index of M."""
    if isinstance(u, IntVec):
        if u.index != m.column_index:
            raise ContractViolation(
                f"vector index {u.index} does not match column index {m.column_index}"
            )
    elif len(u) != m.ncols:
        raise ContractViolation(f"vector of length {len(u)} for {m.ncols} columns")
    return IntVec(tuple(sum(a * b for a, b in zip(row, u)) for row in m.rows), m.row_index)


def norms(u: Sequence[int]) -> tuple[int, int]:
    """(ℓ∞, ℓ1) of u."""
    return max((abs(a) for a in u), default=0), sum(abs(a) for a in u)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> Vector:
    """Divide by the gcd of the entries; the zero vector is returned unchanged."""
    g = 0
    for a in v:
        g = gcd(g, a)
    if g <= 1:
        return tuple(v)
    return tuple(a // g for a in v)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b) >= 0."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix by fraction-free Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return 1
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
