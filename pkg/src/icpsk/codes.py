"""Scalar linear index codes: enumeration and effective broadcast vector sets."""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .gf2 import BitMatrix, Subspace, coset_enumerate, rank, reduce_vector, xor_rows
from .problem import IndexCodingProblem, Receiver


class DecodabilityError(ValueError):
    """A code does not let some receiver recover its wanted message."""


class IndexCode:
    """Encoder ``y = x L`` given by the ``N`` columns of ``L`` (each ``n`` bits).

    The column order fixes the coordinates of broadcast vectors, so it is kept,
    but two codes with the same column *set* compare equal.
    """

    __slots__ = ("columns", "n", "_rows")

    def __init__(self, columns: Sequence[int], n: int):
        cols = tuple(int(c) for c in columns)
        if not cols:
            raise ValueError("code needs at least one column")
        if any(not 0 < c < (1 << n) for c in cols):
            raise ValueError("columns must be nonzero n-bit vectors")
        if rank(list(cols), n) != len(cols):
            raise ValueError("columns of L must be linearly independent (rank N)")
        self.columns = cols
        self.n = n
        self._rows = BitMatrix.from_columns(cols, n).rows

    @classmethod
    def from_matrix(cls, L: BitMatrix) -> "IndexCode":
        return cls(L.columns(), L.nrows)

    @property
    def N(self) -> int:
        return len(self.columns)

    @property
    def rows(self) -> tuple[int, ...]:
        """Row ``j`` is the N-bit contribution of message ``x_j``."""
        return self._rows

    @property
    def matrix(self) -> BitMatrix:
        return BitMatrix(self._rows, self.N)

    def encode(self, x: int) -> int:
        return xor_rows(x, self._rows)

    def sort_key(self) -> tuple[int, ...]:
        return tuple(sorted(self.columns, reverse=True))

    def canonical(self) -> "IndexCode":
        """Same code with columns in canonical order (descending as bit strings)."""
        return IndexCode(self.sort_key(), self.n)

    def column_order(self) -> tuple[int, ...]:
        """``perm`` with ``canonical().columns[k] == columns[perm[k]]``."""
        return tuple(sorted(range(self.N), key=lambda k: -self.columns[k]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IndexCode):
            return NotImplemented
        return self.n == other.n and frozenset(self.columns) == frozenset(other.columns)

    def __hash__(self) -> int:
        return hash((self.n, frozenset(self.columns)))

    def __repr__(self) -> str:
        return f"IndexCode({format_code(self)})"


def format_column(col: int, n: int) -> str:
    terms = [f"x{j + 1}" for j in range(n) if (col >> (n - 1 - j)) & 1]
    return "+".join(terms)


def format_code(code: IndexCode) -> str:
    """Set notation, e.g. ``{x1, x2+x3, x4+x5}``."""
    return "{" + ", ".join(format_column(c, code.n) for c in code.columns) + "}"


def format_code_equations(code: IndexCode) -> str:
    return ", ".join(f"y{k + 1}={format_column(c, code.n)}" for k, c in enumerate(code.columns))


_TERM = re.compile(r"^x(\d+)$")


def parse_column(text: str, n: int) -> int:
    """Parse ``x1+x4`` or a bit string ``10010`` into an n-bit column mask."""
    text = text.strip().replace(" ", "")
    if "=" in text:
        text = text.split("=", 1)[1]
    if text and set(text) <= {"0", "1"}:
        if len(text) != n:
            raise ValueError(f"bit-string column {text!r} must have {n} bits")
        return int(text, 2)
    col = 0
    for term in text.split("+"):
        m = _TERM.match(term)
        if not m:
            raise ValueError(f"cannot parse code term {term!r}")
        j = int(m.group(1))
        if not 1 <= j <= n:
            raise ValueError(f"message x{j} out of range 1..{n}")
        col ^= 1 << (n - j)
    if col == 0:
        raise ValueError(f"column {text!r} is zero")
    return col


def parse_code(text: str, n: int) -> IndexCode:
    """Parse ``{x1, x2+x3, x4+x5}`` / ``y1=x1+x4, y2=...`` / ``10000,01100,00011``."""
    body = text.strip().strip("{}()[]")
    parts = [p for p in re.split(r"[,;]", body) if p.strip()]
    return IndexCode([parse_column(p, n) for p in parts], n)


# --- decodability ---------------------------------------------------------


def _unknown_rows(code: IndexCode, r: Receiver) -> list[int]:
    return [code.rows[j] for j in range(code.n) if j not in r.knows]


def _interference_rows(code: IndexCode, r: Receiver) -> list[int]:
    return [code.rows[j] for j in range(code.n) if j not in r.knows and j != r.wants]


def is_decodable(code: IndexCode, r: Receiver) -> bool:
    """Unit vector of the wanted message lies in span(columns) + span(e_j, j known)."""
    n = code.n
    gens = list(code.columns) + [1 << (n - 1 - j) for j in r.knows]
    basis = Subspace.span(gens, n).basis
    return reduce_vector(1 << (n - 1 - r.wants), basis) == 0


def check_decodable(code: IndexCode, icp: IndexCodingProblem) -> None:
    if code.n != icp.n:
        raise DecodabilityError(f"code {format_code(code)} has {code.n} messages, problem has {icp.n}")
    bad = [k for k, r in enumerate(icp.receivers) if not is_decodable(code, r)]
    if bad:
        who = ", ".join(f"R{k + 1}" for k in bad)
        raise DecodabilityError(f"code {format_code(code)} is not decodable at {who}")


# --- effective broadcast vector sets --------------------------------------


class EffectiveSet:
    """One effective broadcast vector set split by the wanted bit.

    ``zero``/``one`` carry the labels from the realization used to build the
    set, but equality treats ``{zero, one}`` as an unordered pair.
    """

    __slots__ = ("carrier", "zero", "one", "realization")

    def __init__(self, zero: Iterable[int], one: Iterable[int], realization: int | None = None):
        self.zero = frozenset(zero)
        self.one = frozenset(one)
        if self.zero & self.one:
            raise DecodabilityError("0- and 1-parts intersect")
        self.carrier = self.zero | self.one
        self.realization = realization

    @property
    def parts(self) -> frozenset[frozenset[int]]:
        return frozenset((self.zero, self.one))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EffectiveSet):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self) -> int:
        return hash(self.parts)

    def __repr__(self) -> str:
        return f"EffectiveSet(zero={sorted(self.zero)}, one={sorted(self.one)})"


@dataclass(frozen=True)
class EffectiveSetFamily:
    receiver: int
    sets: tuple[EffectiveSet, ...]
    unknown_space: Subspace  # span of rows outside the side information
    interference_space: Subspace  # same, without the wanted row

    @property
    def set_size(self) -> int:
        return 1 << self.unknown_space.dimension


def effective_set_size(code: IndexCode, r: Receiver) -> int:
    return 1 << rank(_unknown_rows(code, r), code.N)


def _realization_offsets(code: IndexCode, r: Receiver) -> Iterator[tuple[int, int]]:
    """``(a_i, sum_j a_j row_j)`` for every side-information realization."""
    side = r.side_info
    k = len(side)
    for a in range(1 << k):
        off = 0
        for pos, j in enumerate(side):
            if (a >> (k - 1 - pos)) & 1:
                off ^= code.rows[j]
        yield a, off


def effective_sets(code: IndexCode, r: Receiver, i: int = 0) -> EffectiveSetFamily:
    """Distinct effective sets of receiver ``r`` (index ``i``), split into 0/1 parts."""
    N = code.N
    V = Subspace.span(_unknown_rows(code, r), N)
    W = Subspace.span(_interference_rows(code, r), N)
    wanted = code.rows[r.wants]
    if reduce_vector(wanted, W.basis) == 0:
        raise DecodabilityError(f"code {format_code(code)} is not decodable at R{i + 1}")
    w_elems = coset_enumerate(W.basis, 0)
    target = (1 << N) >> V.dimension
    seen: dict[int, EffectiveSet] = {}
    for a, off in _realization_offsets(code, r):
        key = reduce_vector(off, V.basis)
        if key in seen:
            continue
        zero = {off ^ w for w in w_elems}
        one = {off ^ wanted ^ w for w in w_elems}
        seen[key] = EffectiveSet(zero, one, a)
        if len(seen) == target:
            break
    sets = tuple(sorted(seen.values(), key=lambda s: min(s.carrier)))
    return EffectiveSetFamily(i, sets, V, W)


def realization_table(code: IndexCode, r: Receiver) -> list[tuple[int, EffectiveSet]]:
    """One row per side-information realization ``a_i``, labels as realized.

    Unlike :func:`effective_sets` nothing is merged, so repeated cosets show
    up once per realization (possibly with 0 and 1 swapped).
    """
    W = Subspace.span(_interference_rows(code, r), code.N)
    wanted = code.rows[r.wants]
    w_elems = coset_enumerate(W.basis, 0)
    return [
        (a, EffectiveSet({off ^ w for w in w_elems}, {off ^ wanted ^ w for w in w_elems}, a))
        for a, off in _realization_offsets(code, r)
    ]


def effective_sets_bruteforce(code: IndexCode, r: Receiver) -> set[EffectiveSet]:
    """Enumerate every message vector; independent check of :func:`effective_sets`."""
    n = code.n
    side = r.side_info
    groups: dict[int, tuple[set[int], set[int]]] = {}
    for x in range(1 << n):
        a = 0
        for j in side:
            a = (a << 1) | ((x >> (n - 1 - j)) & 1)
        bit = (x >> (n - 1 - r.wants)) & 1
        groups.setdefault(a, (set(), set()))[bit].add(code.encode(x))
    out = set()
    for zero, one in groups.values():
        out.add(EffectiveSet(zero, one))
    return out


def eta(codes: Iterable[IndexCode], r: Receiver) -> int:
    sizes = [effective_set_size(c, r) for c in codes]
    if not sizes:
        raise ValueError("eta needs a nonempty code set")
    return min(sizes)


# --- enumeration via fitting matrices -------------------------------------


def _require_single_unicast(icp: IndexCodingProblem) -> None:
    if not icp.is_single_unicast():
        raise ValueError(
            "fitting-matrix enumeration needs a single-unicast problem "
            "(receiver i wants x_i, m == n); supply the codes explicitly instead"
        )


def enumerate_fitting_matrices(icp: IndexCodingProblem) -> Iterator[BitMatrix]:
    """Every n x n matrix with unit diagonal, free entries on side-information columns."""
    _require_single_unicast(icp)
    n = icp.n
    diag = [1 << (n - 1 - i) for i in range(n)]
    free = [[1 << (n - 1 - j) for j in sorted(r.knows)] for r in icp.receivers]
    choices = [
        [diag[i] ^ sum(b for b, on in zip(f, bits) if on) for bits in itertools.product((0, 1), repeat=len(f))]
        for i, f in enumerate(free)
    ]
    for rows in itertools.product(*choices):
        yield BitMatrix(tuple(rows), n)


def valid_row_spaces(icp: IndexCodingProblem, N: int) -> set[Subspace]:
    return {Subspace.span(A.rows, icp.n) for A in enumerate_fitting_matrices(icp) if rank(A) == N}


def bases_per_space(N: int) -> int:
    return math.prod((1 << N) - (1 << k) for k in range(N)) // math.factorial(N)


def enumerate_codes(spaces: Iterable[Subspace], N: int | None = None) -> list[IndexCode]:
    """All unordered bases of every space, as codes sorted canonically."""
    codes: set[IndexCode] = set()
    for S in spaces:
        if N is not None and S.dimension != N:
            raise ValueError(f"space {S} has dimension {S.dimension}, expected {N}")
        d = S.dimension
        nonzero = sorted(coset_enumerate(S.basis, 0) - {0}, reverse=True)
        for combo in itertools.combinations(nonzero, d):
            if rank(list(combo), S.width) == d:
                codes.add(IndexCode(combo, S.width))
    return sorted(codes, key=IndexCode.sort_key)


@dataclass(frozen=True)
class EnumerationStats:
    candidates: int
    rank_n: int
    spaces: int
    codes_per_space: int
    codes: int

    def line(self) -> str:
        return (
            f"candidates={self.candidates} rankN={self.rank_n} spaces={self.spaces} "
            f"codes={self.codes}"
        )


def enumerate_all(icp: IndexCodingProblem, N: int) -> tuple[EnumerationStats, list[IndexCode]]:
    """Fitting-matrix pipeline: candidates -> rank-N -> distinct spaces -> codes."""
    candidates = 0
    rank_n = 0
    spaces: set[Subspace] = set()
    for A in enumerate_fitting_matrices(icp):
        candidates += 1
        if rank(A) == N:
            rank_n += 1
            spaces.add(Subspace.span(A.rows, icp.n))
    codes = enumerate_codes(spaces, N)
    per = bases_per_space(N)
    stats = EnumerationStats(candidates, rank_n, len(spaces), per, len(codes))
    if stats.codes != stats.spaces * per:
        raise AssertionError("code count disagrees with spaces x bases-per-space")
    return stats, codes
