"""Linear algebra over GF(2) on int bitsets.

Coordinate ``i`` of a vector (or column ``i`` of a matrix row) is bit ``i`` of
a Python int. Rows of a matrix are stored as a tuple of such ints.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import BudgetError, DimensionMismatchError, ParameterError


def parity(v: int) -> int:
    return v.bit_count() & 1


def lowest_bit(v: int) -> int:
    """Index of the least significant set bit of a nonzero int."""
    return (v & -v).bit_length() - 1


def _mask(length: int) -> int:
    return (1 << length) - 1


@dataclass(frozen=True)
class GF2Vector:
    length: int
    bits: int = 0

    def __post_init__(self):
        if self.length < 0:
            raise ParameterError("vector length must be non-negative")
        if self.bits < 0 or self.bits >> self.length:
            raise ParameterError("bits set beyond vector length")

    @classmethod
    def zeros(cls, length: int) -> GF2Vector:
        return cls(length, 0)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> GF2Vector:
        value = 0
        length = 0
        for i, b in enumerate(bits):
            if b not in (0, 1, True, False):
                raise ParameterError(f"not a bit: {b!r}")
            value |= int(b) << i
            length = i + 1
        return cls(length, value)

    @classmethod
    def from_str(cls, text: str) -> GF2Vector:
        """Parse a string of ``0``/``1`` characters, first character is coordinate 0."""
        text = "".join(text.split())
        if any(ch not in "01" for ch in text):
            raise ParameterError(f"not a 0/1 string: {text!r}")
        return cls.from_bits(int(ch) for ch in text)

    @classmethod
    def unit(cls, length: int, i: int) -> GF2Vector:
        if not 0 <= i < length:
            raise DimensionMismatchError(f"index {i} outside length {length}")
        return cls(length, 1 << i)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return (self.bits >> i) & 1

    def __iter__(self) -> Iterator[int]:
        return ((self.bits >> i) & 1 for i in range(self.length))

    def __str__(self) -> str:
        return "".join(str(b) for b in self)

    def _check(self, other: GF2Vector) -> None:
        if self.length != other.length:
            raise DimensionMismatchError(f"lengths {self.length} and {other.length} differ")

    def __xor__(self, other: GF2Vector) -> GF2Vector:
        self._check(other)
        return GF2Vector(self.length, self.bits ^ other.bits)

    __add__ = __xor__

    def dot(self, other: GF2Vector) -> int:
        self._check(other)
        return parity(self.bits & other.bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def to_list(self) -> list[int]:
        return list(self)

    def concat(self, other: GF2Vector) -> GF2Vector:
        return GF2Vector(self.length + other.length, self.bits | (other.bits << self.length))

    def slice(self, start: int, stop: int) -> GF2Vector:
        if not 0 <= start <= stop <= self.length:
            raise DimensionMismatchError(f"slice [{start}, {stop}) outside length {self.length}")
        return GF2Vector(stop - start, (self.bits >> start) & _mask(stop - start))


@dataclass(frozen=True)
class GF2Matrix:
    rows: int
    cols: int
    data: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise ParameterError(f"expected {self.rows} rows, got {len(self.data)}")
        limit = 1 << self.cols
        for row in self.data:
            if row < 0 or row >= limit:
                raise ParameterError("row has bits beyond the column count")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> GF2Matrix:
        return cls(rows, cols, (0,) * rows)

    @classmethod
    def identity(cls, n: int) -> GF2Matrix:
        return cls(n, n, tuple(1 << i for i in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> GF2Matrix:
        vecs = [GF2Vector.from_bits(r) for r in rows]
        if cols is None:
            cols = vecs[0].length if vecs else 0
        if any(v.length != cols for v in vecs):
            raise DimensionMismatchError("ragged rows")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_vectors(cls, vecs: Sequence[GF2Vector], cols: int | None = None) -> GF2Matrix:
        if cols is None:
            cols = vecs[0].length if vecs else 0
        if any(v.length != cols for v in vecs):
            raise DimensionMismatchError("ragged rows")
        return cls(len(vecs), cols, tuple(v.bits for v in vecs))

    @classmethod
    def from_strs(cls, rows: Sequence[str]) -> GF2Matrix:
        return cls.from_vectors([GF2Vector.from_str(r) for r in rows])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def row(self, i: int) -> GF2Vector:
        return GF2Vector(self.cols, self.data[i])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.cols:
            raise IndexError(j)
        return (self.data[i] >> j) & 1

    def to_lists(self) -> list[list[int]]:
        return [self.row(i).to_list() for i in range(self.rows)]

    def to_strs(self) -> list[str]:
        return [str(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> GF2Matrix:
        out = [0] * self.cols
        for i, row in enumerate(self.data):
            while row:
                j = lowest_bit(row)
                out[j] |= 1 << i
                row &= row - 1
        return GF2Matrix(self.cols, self.rows, tuple(out))

    @property
    def T(self) -> GF2Matrix:
        return self.transpose()

    def __add__(self, other: GF2Matrix) -> GF2Matrix:
        if self.shape != other.shape:
            raise DimensionMismatchError(f"shapes {self.shape} and {other.shape} differ")
        return GF2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def __matmul__(self, other: GF2Matrix) -> GF2Matrix:
        if self.cols != other.rows:
            raise DimensionMismatchError(f"cannot multiply {self.shape} by {other.shape}")
        out = []
        for row in self.data:
            acc = 0
            while row:
                t = lowest_bit(row)
                acc ^= other.data[t]
                row &= row - 1
            out.append(acc)
        return GF2Matrix(self.rows, other.cols, tuple(out))

    def mul_vec(self, x: GF2Vector) -> GF2Vector:
        if x.length != self.cols:
            raise DimensionMismatchError(f"vector of length {x.length} for {self.cols} columns")
        bits = 0
        for i, row in enumerate(self.data):
            bits |= parity(row & x.bits) << i
        return GF2Vector(self.rows, bits)

    def rank(self) -> int:
        return rank(self)

    def row_weights(self) -> list[int]:
        return [row.bit_count() for row in self.data]


def rref_rows(rows: Iterable[int]) -> list[int]:
    """Reduced row-echelon basis of the span of ``rows``, sorted by pivot.

    The pivot of each returned row is its lowest set bit, and that column is
    zero in every other returned row.
    """
    basis: list[int] = []
    for v in rows:
        for b in basis:
            if (v >> lowest_bit(b)) & 1:
                v ^= b
        if not v:
            continue
        p = lowest_bit(v)
        basis = [b ^ v if (b >> p) & 1 else b for b in basis]
        basis.append(v)
    basis.sort(key=lowest_bit)
    return basis


def rank(M: GF2Matrix) -> int:
    return len(rref_rows(M.data))


def null_space(rows: Sequence[int], ncols: int) -> list[int]:
    """Basis of ``{a : row . a = 0 for every row}``, one vector per free column."""
    basis = rref_rows(rows)
    pivots = {lowest_bit(b): b for b in basis}
    out = []
    for f in range(ncols):
        if f in pivots:
            continue
        v = 1 << f
        for p, b in pivots.items():
            if (b >> f) & 1:
                v |= 1 << p
        out.append(v)
    return out


@dataclass(frozen=True)
class AffineSubspace:
    """The set ``{x in GF(2)^n : A x = b}`` kept in canonical form.

    ``_rows`` holds ``(row, rhs)`` pairs in reduced row-echelon form sorted by
    pivot, so two subspaces with the same point set compare equal. The empty
    set is a distinguished value with no rows.
    """

    ambient_dim: int
    _rows: tuple[tuple[int, int], ...] = ()
    is_empty: bool = False

    @classmethod
    def full(cls, n: int) -> AffineSubspace:
        return cls(n)

    @classmethod
    def empty(cls, n: int) -> AffineSubspace:
        return cls(n, (), True)

    @classmethod
    def from_fixing(cls, n: int, fixing: dict[int, int]) -> AffineSubspace:
        """Subspace where the given coordinates take the given values."""
        for i in fixing:
            if not 0 <= i < n:
                raise DimensionMismatchError(f"index {i} outside ambient dimension {n}")
        rows = tuple(sorted((1 << i, int(b) & 1) for i, b in fixing.items()))
        return cls(n, rows)

    @property
    def constraints(self) -> GF2Matrix:
        return GF2Matrix(len(self._rows), self.ambient_dim, tuple(r for r, _ in self._rows))

    @property
    def rhs(self) -> GF2Vector:
        return GF2Vector.from_bits(c for _, c in self._rows) if self._rows else GF2Vector(0)

    def dimension(self) -> int:
        """Dimension of the subspace, ``-1`` for the empty set."""
        if self.is_empty:
            return -1
        return self.ambient_dim - len(self._rows)

    def size(self) -> int:
        if self.is_empty:
            return 0
        return 1 << (self.ambient_dim - len(self._rows))

    def __len__(self) -> int:
        return self.size()

    def _reduce(self, a: int, c: int) -> tuple[int, int]:
        for row, rhs in self._rows:
            if (a >> lowest_bit(row)) & 1:
                a ^= row
                c ^= rhs
        return a, c

    def _check_len(self, length: int) -> None:
        if length != self.ambient_dim:
            raise DimensionMismatchError(f"length {length} for ambient dimension {self.ambient_dim}")

    def contains_int(self, x: int) -> bool:
        if self.is_empty:
            return False
        return all(parity(row & x) == rhs for row, rhs in self._rows)

    def contains(self, x: GF2Vector) -> bool:
        self._check_len(x.length)
        return self.contains_int(x.bits)

    def __contains__(self, x: GF2Vector) -> bool:
        return self.contains(x)

    def implies(self, a: int, c: int) -> bool:
        """True when every point satisfies ``a . x = c`` (vacuous for the empty set)."""
        if self.is_empty:
            return True
        a, c = self._reduce(a, c)
        return a == 0 and c == 0

    def intersect_hyperplane_int(self, a: int, c: int) -> AffineSubspace:
        if self.is_empty:
            return self
        a, c = self._reduce(a, c & 1)
        if a == 0:
            return self if c == 0 else AffineSubspace.empty(self.ambient_dim)
        p = lowest_bit(a)
        rows = [(row ^ a, rhs ^ c) if (row >> p) & 1 else (row, rhs) for row, rhs in self._rows]
        rows.append((a, c))
        rows.sort(key=lambda rc: lowest_bit(rc[0]))
        return AffineSubspace(self.ambient_dim, tuple(rows))

    def intersect_hyperplane(self, a: GF2Vector, c: int) -> AffineSubspace:
        self._check_len(a.length)
        return self.intersect_hyperplane_int(a.bits, c)

    def intersect_many(self, constraints: Iterable[tuple[int, int]]) -> AffineSubspace:
        out = self
        for a, c in constraints:
            out = out.intersect_hyperplane_int(a, c)
            if out.is_empty:
                break
        return out

    def intersect(self, other: AffineSubspace) -> AffineSubspace:
        self._check_len(other.ambient_dim)
        if other.is_empty:
            return other
        return self.intersect_many(other._rows)

    def is_subset_of(self, other: AffineSubspace) -> bool:
        self._check_len(other.ambient_dim)
        if self.is_empty:
            return True
        if other.is_empty:
            return False
        return all(self.implies(row, rhs) for row, rhs in other._rows)

    def _free_columns(self) -> list[int]:
        pivots = {lowest_bit(row) for row, _ in self._rows}
        return [j for j in range(self.ambient_dim) if j not in pivots]

    def iter_ints(self) -> Iterator[int]:
        """Points as ints; the free coordinates count up with the lowest free column most significant."""
        if self.is_empty:
            return
        free = self._free_columns()
        for values in product((0, 1), repeat=len(free)):
            x = 0
            for j, v in zip(free, values):
                x |= v << j
            for row, rhs in self._rows:
                p = lowest_bit(row)
                x |= (rhs ^ parity(row & x & ~(1 << p))) << p
            yield x

    def enumerate_points(self, limit: int = 1 << 20) -> list[GF2Vector]:
        if self.size() > limit:
            raise BudgetError(f"subspace has {self.size()} points, limit is {limit}")
        return [GF2Vector(self.ambient_dim, x) for x in self.iter_ints()]

    def point(self) -> GF2Vector:
        """Some point of the subspace (the first in enumeration order)."""
        if self.is_empty:
            raise ParameterError("empty subspace has no points")
        return GF2Vector(self.ambient_dim, next(self.iter_ints()))


def subspace_from_constraints(A: GF2Matrix, b: GF2Vector) -> AffineSubspace:
    if b.length != A.rows:
        raise DimensionMismatchError(f"rhs of length {b.length} for {A.rows} constraints")
    return AffineSubspace.full(A.cols).intersect_many(zip(A.data, b))


def intersect_hyperplane(S: AffineSubspace, a: GF2Vector, c: int) -> AffineSubspace:
    return S.intersect_hyperplane(a, c)


def dimension(S: AffineSubspace) -> int:
    return S.dimension()


def size(S: AffineSubspace) -> int:
    return S.size()


def contains(S: AffineSubspace, x: GF2Vector) -> bool:
    return S.contains(x)


def enumerate_points(S: AffineSubspace, limit: int = 1 << 20) -> list[GF2Vector]:
    return S.enumerate_points(limit)
