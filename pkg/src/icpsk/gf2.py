"""Bit-packed linear algebra over GF(2).

Vectors are stored as Python ints, most significant bit first: element 0 of a
width-``w`` vector is bit ``w - 1``.  With that convention the integer value of
a broadcast vector is the "decimal equivalent" used when rendering mappings.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

MAX_WIDTH = 64


def _check_width(width: int) -> None:
    if not 1 <= width <= MAX_WIDTH:
        raise ValueError(f"width must be in [1, {MAX_WIDTH}], got {width}")


@dataclass(frozen=True, order=True)
class BitVec:
    """Fixed-width GF(2) vector; ``value`` holds the bits MSB-first."""

    value: int
    width: int

    def __post_init__(self) -> None:
        _check_width(self.width)
        if not 0 <= self.value < (1 << self.width):
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int] | str) -> "BitVec":
        bits = [int(b) for b in bits]
        value = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"not a bit: {b}")
            value = (value << 1) | b
        return cls(value, len(bits))

    @classmethod
    def zero(cls, width: int) -> "BitVec":
        return cls(0, width)

    @classmethod
    def unit(cls, index: int, width: int) -> "BitVec":
        if not 0 <= index < width:
            raise IndexError(index)
        return cls(1 << (width - 1 - index), width)

    def __getitem__(self, index: int) -> int:
        if not 0 <= index < self.width:
            raise IndexError(index)
        return (self.value >> (self.width - 1 - index)) & 1

    def __len__(self) -> int:
        return self.width

    def __iter__(self) -> Iterator[int]:
        return (self[i] for i in range(self.width))

    def __add__(self, other: "BitVec") -> "BitVec":
        if self.width != other.width:
            raise ValueError("width mismatch")
        return BitVec(self.value ^ other.value, self.width)

    __xor__ = __add__

    def weight(self) -> int:
        return bin(self.value).count("1")

    def select(self, indices: Sequence[int]) -> "BitVec":
        """Sub-vector on ``indices`` (kept in ascending order)."""
        idx = sorted(indices)
        if not idx:
            raise ValueError("empty index set")
        return BitVec.from_bits(self[i] for i in idx)

    def __str__(self) -> str:
        return format(self.value, f"0{self.width}b")


@dataclass(frozen=True)
class BitMatrix:
    """GF(2) matrix stored as a tuple of row bitmasks (MSB-first)."""

    rows: tuple[int, ...]
    ncols: int

    def __post_init__(self) -> None:
        _check_width(self.ncols)
        if not self.rows:
            raise ValueError("matrix needs at least one row")
        limit = 1 << self.ncols
        for r in self.rows:
            if not 0 <= r < limit:
                raise ValueError(f"row {r} does not fit in {self.ncols} columns")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        if not entries:
            raise ValueError("matrix needs at least one row")
        rows = [BitVec.from_bits(r) for r in entries]
        ncols = rows[0].width
        if any(r.width != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(tuple(r.value for r in rows), ncols)

    @classmethod
    def from_columns(cls, columns: Sequence[int], nrows: int) -> "BitMatrix":
        """Build the ``nrows x len(columns)`` matrix with the given column masks."""
        ncols = len(columns)
        rows = []
        for i in range(nrows):
            shift = nrows - 1 - i
            row = 0
            for c in columns:
                row = (row << 1) | ((c >> shift) & 1)
            rows.append(row)
        return cls(tuple(rows), ncols)

    @classmethod
    def identity(cls, size: int) -> "BitMatrix":
        return cls(tuple(1 << (size - 1 - i) for i in range(size)), size)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> BitVec:
        return BitVec(self.rows[i], self.ncols)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not 0 <= j < self.ncols:
            raise IndexError(j)
        return (self.rows[i] >> (self.ncols - 1 - j)) & 1

    def columns(self) -> tuple[int, ...]:
        """Column masks, each ``nrows`` wide."""
        return self.transpose().rows

    def transpose(self) -> "BitMatrix":
        n = self.nrows
        cols = []
        for j in range(self.ncols):
            shift = self.ncols - 1 - j
            col = 0
            for r in self.rows:
                col = (col << 1) | ((r >> shift) & 1)
            cols.append(col)
        return BitMatrix(tuple(cols), n)

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.nrows)]

    def __str__(self) -> str:
        return "\n".join(format(r, f"0{self.ncols}b") for r in self.rows)


def mat_vec_mul(x: BitVec, L: BitMatrix) -> BitVec:
    """Row vector times matrix: ``y = x L`` over GF(2)."""
    if x.width != L.nrows:
        raise ValueError(f"vector width {x.width} != matrix rows {L.nrows}")
    return BitVec(xor_rows(x.value, L.rows), L.ncols)


def xor_rows(selector: int, rows: Sequence[int]) -> int:
    """XOR of ``rows[i]`` for every bit ``i`` set in ``selector`` (MSB-first)."""
    n = len(rows)
    acc = 0
    for i, r in enumerate(rows):
        if (selector >> (n - 1 - i)) & 1:
            acc ^= r
    return acc


def _rref(rows: Iterable[int], width: int) -> list[int]:
    """Reduced row echelon basis, pivots leftmost, rows sorted by pivot."""
    basis: list[int] = []
    for r in rows:
        for b in basis:
            if r ^ b < r:
                r ^= b
        if r:
            # clear the new pivot from existing rows
            top = r.bit_length() - 1
            basis = [b ^ r if (b >> top) & 1 else b for b in basis]
            basis.append(r)
    basis.sort(reverse=True)
    return basis


def rank(M: BitMatrix | Sequence[int], width: int | None = None) -> int:
    """GF(2) rank by Gaussian elimination on column-major pivoting."""
    if isinstance(M, BitMatrix):
        rows, width = list(M.rows), M.ncols
    else:
        rows = list(M)
        if width is None:
            width = max((r.bit_length() for r in rows), default=1) or 1
    r = 0
    for col in range(width - 1, -1, -1):
        pivot = next((k for k in range(r, len(rows)) if (rows[k] >> col) & 1), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        for k in range(len(rows)):
            if k != r and (rows[k] >> col) & 1:
                rows[k] ^= rows[r]
        r += 1
        if r == len(rows):
            break
    return r


@dataclass(frozen=True)
class Subspace:
    """Linear subspace of F_2^width held as its unique RREF basis.

    Two spans are equal exactly when their ``Subspace`` values compare equal.
    """

    basis: tuple[int, ...]
    width: int

    @classmethod
    def span(cls, vectors: Iterable[int], width: int) -> "Subspace":
        _check_width(width)
        return cls(tuple(_rref(vectors, width)), width)

    @classmethod
    def full(cls, width: int) -> "Subspace":
        return cls(tuple(1 << (width - 1 - i) for i in range(width)), width)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __contains__(self, v: int | BitVec) -> bool:
        if isinstance(v, BitVec):
            if v.width != self.width:
                raise ValueError("width mismatch")
            v = v.value
        return reduce_vector(v, self.basis) == 0

    def elements(self) -> list[int]:
        return sorted(coset_enumerate(self.basis, 0))

    def coset_representatives(self) -> list[int]:
        """Smallest member of every coset of this subspace in F_2^width."""
        pivots = 0
        for b in self.basis:
            pivots |= 1 << (b.bit_length() - 1)
        free = [1 << k for k in range(self.width) if not (pivots >> k) & 1]
        # vectors supported on non-pivot columns are already reduced
        return sorted(coset_enumerate(free, 0))

    def __str__(self) -> str:
        inner = ", ".join(format(b, f"0{self.width}b") for b in self.basis)
        return f"<{inner}>"


def reduce_vector(v: int, basis: Sequence[int]) -> int:
    """Reduce ``v`` against an RREF basis; result 0 iff ``v`` is in the span."""
    for b in basis:
        if (v >> (b.bit_length() - 1)) & 1:
            v ^= b
    return v


def row_space(M: BitMatrix) -> Subspace:
    return Subspace.span(M.rows, M.ncols)


def in_span(v: BitVec, S: Subspace) -> bool:
    if v.width != S.width:
        raise ValueError(f"width mismatch: {v.width} vs {S.width}")
    return v.value in S


def coset_enumerate(basis: Sequence[int | BitVec], offset: int | BitVec) -> set:
    """All ``offset + sum c_j b_j``.  Returns ``BitVec`` members if given ``BitVec``s."""
    as_vec = isinstance(offset, BitVec)
    width = offset.width if as_vec else None
    vals = [b.value if isinstance(b, BitVec) else b for b in basis]
    off = offset.value if as_vec else offset
    if rank(vals, max([width or 1] + [v.bit_length() for v in vals])) != len(vals):
        raise ValueError("basis vectors are linearly dependent")
    out = [off]
    for b in vals:
        out += [v ^ b for v in out]
    if as_vec:
        return {BitVec(v, width) for v in out}
    return set(out)


def all_vectors(width: int) -> range:
    return range(1 << width)
