"""2^N-PSK constellation, broadcast-vector mappings and inter-set distances.

Point ``s_{k+1}`` sits at angle ``2*pi*k / 2^N``; positions are 0-based here, so
position 0 is ``s_1``.  Distances are computed from integer circular index
gaps through the chord formula, which keeps ties exact.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .codes import IndexCode, effective_sets
from .problem import IndexCodingProblem, Receiver

TOL = 1e-9


def chord_steps(gap: int, order: int) -> float:
    """Chord length between two points ``gap`` positions apart."""
    return 2.0 * math.sin(math.pi * gap / order)


def circular_gap(k1: int, k2: int, order: int) -> int:
    d = abs(k1 - k2) % order
    return min(d, order - d)


def chord(k1: int, k2: int, order: int) -> float:
    if not (0 <= k1 < order and 0 <= k2 < order):
        raise IndexError(f"point index out of range for {order}-PSK")
    return chord_steps(circular_gap(k1, k2, order), order)


@dataclass(frozen=True)
class Constellation:
    N: int

    @property
    def order(self) -> int:
        return 1 << self.N

    @property
    def points(self) -> np.ndarray:
        k = np.arange(self.order)
        ang = 2.0 * np.pi * k / self.order
        return np.stack([np.cos(ang), np.sin(ang)], axis=1)

    @property
    def min_distance(self) -> float:
        return chord_steps(1, self.order)


class PskMapping:
    """Bijection from N-bit broadcast vectors to constellation positions.

    ``words[k]`` is the broadcast vector (as an integer) sent on position ``k``;
    that tuple is also the compact rendering ``(0,1,2,...)``.
    """

    __slots__ = ("words", "positions")

    def __init__(self, words: Sequence[int]):
        w = tuple(int(v) for v in words)
        order = len(w)
        if order < 2 or order & (order - 1):
            raise ValueError("mapping length must be a power of two >= 2")
        if sorted(w) != list(range(order)):
            raise ValueError("mapping is not a bijection onto 0..2^N-1")
        self.words = w
        pos = [0] * order
        for k, v in enumerate(w):
            pos[v] = k
        self.positions = tuple(pos)

    @classmethod
    def identity(cls, order: int) -> "PskMapping":
        return cls(range(order))

    @classmethod
    def parse(cls, text: str) -> "PskMapping":
        nums = re.findall(r"\d+", text)
        return cls(int(v) for v in nums)

    @property
    def order(self) -> int:
        return len(self.words)

    @property
    def N(self) -> int:
        return self.order.bit_length() - 1

    def position(self, word: int) -> int:
        return self.positions[word]

    def is_canonical(self) -> bool:
        return self.words[0] == 0

    def canonical(self) -> "PskMapping":
        return rotate_mapping(self, -self.positions[0])

    def permute_bits(self, perm: Sequence[int]) -> "PskMapping":
        """Relabel words after reordering code columns: new bit k = old bit perm[k]."""
        return PskMapping(permute_word(w, perm, self.N) for w in self.words)

    def render(self) -> str:
        return "(" + ",".join(str(w) for w in self.words) + ")"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PskMapping):
            return NotImplemented
        return self.words == other.words

    def __hash__(self) -> int:
        return hash(self.words)

    def __repr__(self) -> str:
        return f"PskMapping{self.render()}"


def permute_word(word: int, perm: Sequence[int], N: int) -> int:
    out = 0
    for k, src in enumerate(perm):
        out = (out << 1) | ((word >> (N - 1 - src)) & 1)
    return out


def rotate_mapping(M: PskMapping, steps: int) -> PskMapping:
    """Shift every word ``steps`` positions counterclockwise."""
    order = M.order
    steps %= order
    words = [0] * order
    for k, w in enumerate(M.words):
        words[(k + steps) % order] = w
    return PskMapping(words)


def inter_set_distance(S0: Iterable[int], S1: Iterable[int], order: int) -> float:
    """Minimum chord between a point of ``S0`` and a point of ``S1`` (positions)."""
    a, b = set(S0), set(S1)
    if not a or not b:
        raise ValueError("inter-set distance needs two nonempty point sets")
    if a & b:
        raise ValueError("point sets overlap")
    return chord_steps(min(circular_gap(p, q, order) for p in a for q in b), order)


def cross_pairs(code: IndexCode, r: Receiver) -> np.ndarray:
    """All (0-part word, 1-part word) pairs across a receiver's effective sets."""
    fam = effective_sets(code, r)
    pairs = [(a, b) for s in fam.sets for a in sorted(s.zero) for b in sorted(s.one)]
    return np.asarray(pairs, dtype=np.int64)


def min_separation(code: IndexCode, M: PskMapping, r: Receiver) -> int:
    """Smallest circular index gap between mapped 0- and 1-parts of any effective set."""
    fam = effective_sets(code, r)
    pos = M.positions
    return min(
        circular_gap(pos[a], pos[b], M.order) for s in fam.sets for a in s.zero for b in s.one
    )


def min_inter_set_distance(code: IndexCode, M: PskMapping, r: Receiver) -> float:
    if M.order != 1 << code.N:
        raise ValueError(f"mapping order {M.order} does not match code length {code.N}")
    return chord_steps(min_separation(code, M, r), M.order)


def psk_icg(d: float, n: int) -> float:
    """Gain in dB of inter-set distance ``d`` over the 2^n-PSK minimum distance."""
    if d <= 0:
        raise ValueError("PSK-ICG needs a positive distance")
    return 20.0 * math.log10(d / chord_steps(1, 1 << n))


@dataclass(frozen=True)
class DistanceProfile:
    distances: tuple[float, ...]
    gains: tuple[float, ...]

    @classmethod
    def from_distances(cls, distances: Sequence[float], n: int) -> "DistanceProfile":
        d = tuple(distances)
        return cls(d, tuple(psk_icg(v, n) if v > 0 else -math.inf for v in d))


def distance_profile(icp: IndexCodingProblem, code: IndexCode, M: PskMapping) -> DistanceProfile:
    return DistanceProfile.from_distances(
        [min_inter_set_distance(code, M, r) for r in icp.receivers], icp.n
    )
