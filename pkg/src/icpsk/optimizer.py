"""Optimal (index code, mapping) search under the minimum inter-set distance.

Mappings are handled in bulk as integer arrays: row ``r`` of a mapping array
lists the broadcast vector placed on each constellation position, always in
canonical rotation (the all-zeros vector on position 0).  Distances are
compared as integer circular gaps, which orders them exactly like the chords.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .codes import (
    DecodabilityError,
    IndexCode,
    check_decodable,
    effective_set_size,
    effective_sets,
    effective_sets_bruteforce,
    format_code,
)
from .geometry import (
    TOL,
    DistanceProfile,
    PskMapping,
    chord_steps,
    cross_pairs,
    min_inter_set_distance,
    psk_icg,
)
from .problem import IndexCodingProblem

MAX_MAPPINGS = 20_000_000


class ScaleGuardError(RuntimeError):
    """Exhaustive search would exceed the configured size limit."""


@dataclass(frozen=True)
class CandidatePair:
    code: IndexCode
    mapping: PskMapping
    profile: DistanceProfile | None = None

    def canonical(self) -> "CandidatePair":
        """Columns in canonical order, mapping words relabelled to match."""
        perm = self.code.column_order()
        return CandidatePair(self.code.canonical(), self.mapping.permute_bits(perm).canonical(), self.profile)

    def key(self) -> tuple:
        c = self.canonical()
        return c.code.sort_key(), c.mapping.words

    def render(self) -> str:
        return f"({format_code(self.code)},{self.mapping.render()})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CandidatePair):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass
class TraceStep:
    receiver: int
    eta: int
    survivors: int | None
    gap: int
    delta: float
    gain: float
    skipped: bool


@dataclass
class CascadeResult:
    """Survivors of the priority cascade, stored per code as mapping arrays."""

    icp: IndexCodingProblem
    N: int
    trace: list[TraceStep]
    blocks: list[tuple[IndexCode, np.ndarray]]
    arbitrary: bool = False
    _pairs: list[CandidatePair] | None = field(default=None, repr=False)

    @property
    def count(self) -> int:
        return int(sum(len(w) for _, w in self.blocks))

    def pairs(self, with_profile: bool = True) -> list[CandidatePair]:
        """All surviving pairs, sorted by canonical key."""
        if self._pairs is None:
            out = []
            for code, words in self.blocks:
                gaps = [_backend.min_gaps(words, cross_pairs(code, r), 1 << self.N) for r in self.icp.receivers]
                for k, row in enumerate(words):
                    prof = None
                    if with_profile:
                        d = [chord_steps(int(g[k]), 1 << self.N) for g in gaps]
                        prof = DistanceProfile.from_distances(d, self.icp.n)
                    out.append(CandidatePair(code, PskMapping(row), prof))
            out.sort(key=CandidatePair.key)
            self._pairs = out
        return self._pairs

    def canonical_keys(self) -> set:
        keys = set()
        for code, words in self.blocks:
            perm = code.column_order()
            canon = code.canonical().sort_key()
            for row in words:
                keys.add((canon, PskMapping(row).permute_bits(perm).canonical().words))
        return keys

    def contains(self, pair: CandidatePair) -> bool:
        return pair.key() in self.canonical_keys()

    @property
    def survivor_counts(self) -> list[int]:
        return [s.survivors for s in self.trace if s.survivors is not None]


# --- optimal mappings for one receiver --------------------------------------


def optimal_mapping_count(code: IndexCode, r) -> int:
    P = 1 << code.N
    size = effective_set_size(code, r)
    t, K = size // 2, P // size
    return math.factorial(K - 1) * 2 ** (K - 1) * math.factorial(t) ** (2 * K)


def optimal_mappings_for_receiver(code: IndexCode, r) -> np.ndarray:
    """All canonical mappings meeting the adjacent/antipodal arc placement.

    Each effective set of size ``2t`` gets a run of ``t`` consecutive positions
    for its 0-part and the diametrically opposite run for its 1-part; runs of
    all sets tile the circle and the order inside a run is free.  Returns an
    ``(count, 2^N)`` int16 array, rows sorted lexicographically.
    """
    fam = effective_sets(code, r)
    P = 1 << code.N
    size = fam.set_size
    if size >= P:
        raise ValueError("receiver sees the whole constellation; every mapping is optimal")
    total = optimal_mapping_count(code, r)
    if total > MAX_MAPPINGS:
        raise ScaleGuardError(f"{total} optimal mappings exceed the limit of {MAX_MAPPINGS}")
    t, K = size // 2, P // size
    first = next(s for s in fam.sets if 0 in s.carrier)
    others = [s for s in fam.sets if s is not first]
    near = sorted(first.zero if 0 in first.zero else first.one)
    far = sorted(first.one if 0 in first.zero else first.zero)

    # arc k covers positions [k t, (k+1) t); arcs k and k+K are antipodal.
    # The set holding word 0 is pinned to arcs 0/K, which removes the rotations
    # by multiples of t; the final shift below removes the rest.
    layouts = []
    for slots in itertools.permutations(range(1, K)):
        for flips in itertools.product((False, True), repeat=K - 1):
            arcs: list[list[int]] = [[] for _ in range(2 * K)]
            arcs[0], arcs[K] = near, far
            for s, slot, flip in zip(others, slots, flips):
                zero, one = sorted(s.zero), sorted(s.one)
                if flip:
                    zero, one = one, zero
                arcs[slot], arcs[slot + K] = zero, one
            layouts.append([w for arc in arcs for w in arc])
    base = np.asarray(layouts, dtype=np.int16)

    inner = list(itertools.permutations(range(t)))
    orders = np.asarray(
        [[k * t + p for k, perm in enumerate(combo) for p in perm] for combo in itertools.product(inner, repeat=2 * K)],
        dtype=np.int64,
    )
    full = base[:, orders].reshape(-1, P)
    shift = np.argmax(full == 0, axis=1)
    cols = (np.arange(P)[None, :] + shift[:, None]) % P
    canon = np.take_along_axis(full, cols, axis=1)
    out = np.unique(canon, axis=0)
    if len(out) != total:
        raise AssertionError(f"generated {len(out)} mappings, expected {total}")
    return out


def mappings_from_array(words: np.ndarray) -> list[PskMapping]:
    return [PskMapping(row) for row in words]


# --- cascade -----------------------------------------------------------------


def receiver_gaps(code: IndexCode, words: np.ndarray, r) -> np.ndarray:
    return _backend.min_gaps(words, cross_pairs(code, r), 1 << code.N)


def filter_by_receiver(pairs: Sequence[CandidatePair], r) -> tuple[list[CandidatePair], float]:
    """Pairs with the largest minimum inter-set distance for ``r``, and that distance."""
    if not pairs:
        raise ValueError("filter needs at least one pair")
    scored = [(min_inter_set_distance(p.code, p.mapping, r), p) for p in pairs]
    best = max(d for d, _ in scored)
    return [p for d, p in scored if d >= best - TOL], best


def _check_codes(icp: IndexCodingProblem, codes: Sequence[IndexCode]) -> int:
    if not codes:
        raise ValueError("need at least one index code")
    lengths = {c.N for c in codes}
    if len(lengths) != 1:
        raise ValueError("all codes must have the same length N")
    for c in codes:
        check_decodable(c, icp)
    return lengths.pop()


def priority_cascade(
    icp: IndexCodingProblem,
    codes: Sequence[IndexCode],
    priority: Sequence[int] | None = None,
) -> CascadeResult:
    """Priority cascade over (code, mapping) pairs.

    The first receiver in priority order whose best effective set is smaller
    than the constellation seeds the pair set with every optimal mapping of
    every code reaching that size; each later receiver keeps only the pairs
    maximizing its minimum inter-set distance.
    """
    N = _check_codes(icp, codes)
    order = list(priority) if priority is not None else list(icp.priority)
    if sorted(order) != list(range(icp.m)):
        raise ValueError("priority must be a permutation of the receivers")
    P = 1 << N
    codes = sorted(set(codes), key=IndexCode.sort_key)
    sizes = {i: {c: effective_set_size(c, icp.receivers[i]) for c in codes} for i in order}
    etas = {i: min(sizes[i].values()) for i in order}
    floor = chord_steps(1, P)

    def step(i, survivors, gap, skipped):
        d = chord_steps(gap, P)
        return TraceStep(i, etas[i], survivors, gap, d, psk_icg(d, icp.n), skipped)

    trace: list[TraceStep] = []
    seed_at = next((k for k, i in enumerate(order) if etas[i] < P), None)
    if seed_at is None:
        trace = [step(i, None, 1, True) for i in order]
        trace[-1].survivors = 1
        block = np.arange(P, dtype=np.int16)[None, :]
        return CascadeResult(icp, N, trace, [(codes[0], block)], arbitrary=True)

    for i in order[:seed_at]:
        trace.append(step(i, None, 1, True))

    seed = order[seed_at]
    r = icp.receivers[seed]
    blocks = []
    for c in codes:
        if sizes[seed][c] == etas[seed]:
            blocks.append((c, optimal_mappings_for_receiver(c, r)))
    gap = max(int(receiver_gaps(c, w, r).min()) for c, w in blocks)
    trace.append(step(seed, sum(len(w) for _, w in blocks), gap, False))

    for i in order[seed_at + 1:]:
        r = icp.receivers[i]
        gaps = [receiver_gaps(c, w, r) for c, w in blocks]
        best = max(int(g.max()) for g in gaps)
        blocks = [(c, w[g == best]) for (c, w), g in zip(blocks, gaps)]
        blocks = [(c, w) for c, w in blocks if len(w)]
        trace.append(step(i, sum(len(w) for _, w in blocks), best, etas[i] == P))
    assert floor <= trace[-1].delta + TOL
    return CascadeResult(icp, N, trace, blocks)


def expected_seed_gap(P: int, size: int) -> int:
    """Gap achieved by two antipodal runs of ``size/2`` consecutive points."""
    return P // 2 - size // 2 + 1


# --- exhaustive oracle -------------------------------------------------------


@dataclass
class OracleResult:
    gaps: list[int]  # lexicographic optimum, in priority order
    distances: list[float]
    gains: list[float]
    optimal_pairs: int
    code_count: int
    mapping_count: int


def all_canonical_mappings(P: int) -> np.ndarray:
    rest = np.asarray(list(itertools.permutations(range(1, P))), dtype=np.int16)
    return np.concatenate([np.zeros((len(rest), 1), dtype=np.int16), rest], axis=1)


def brute_force_oracle(
    icp: IndexCodingProblem,
    codes: Sequence[IndexCode],
    priority: Sequence[int] | None = None,
    max_evaluations: int = 5_000_000,
) -> OracleResult:
    """Evaluate every canonical mapping of every code; lexicographic best profile.

    Effective sets come from enumerating all message vectors and distances from
    direct position differences, so nothing here shares a path with the cascade.
    """
    N = _check_codes(icp, codes)
    P = 1 << N
    n_maps = math.factorial(P - 1)
    if P > 8 or n_maps * len(codes) > max_evaluations:
        raise ScaleGuardError(f"{len(codes)} codes x {n_maps} mappings exceeds the oracle limit")
    order = list(priority) if priority is not None else list(icp.priority)
    maps = all_canonical_mappings(P)
    pos = np.argsort(maps, axis=1)
    prof = np.empty((len(codes), len(maps), len(order)), dtype=np.int16)
    for ci, code in enumerate(codes):
        for k, i in enumerate(order):
            sets = effective_sets_bruteforce(code, icp.receivers[i])
            a, b = zip(*[(u, v) for s in sets for u in s.zero for v in s.one])
            d = np.abs(pos[:, list(a)] - pos[:, list(b)])
            prof[ci, :, k] = np.minimum(d, P - d).min(axis=1)
    alive = np.ones(prof.shape[:2], dtype=bool)
    gaps = []
    for k in range(len(order)):
        best = int(prof[..., k][alive].max())
        gaps.append(best)
        alive &= prof[..., k] == best
    dist = [chord_steps(g, P) for g in gaps]
    return OracleResult(gaps, dist, [psk_icg(d, icp.n) for d in dist], int(alive.sum()), len(codes), len(maps))


__all__ = [
    "CandidatePair",
    "CascadeResult",
    "DecodabilityError",
    "OracleResult",
    "ScaleGuardError",
    "TraceStep",
    "priority_cascade",
    "brute_force_oracle",
    "filter_by_receiver",
    "optimal_mappings_for_receiver",
]
