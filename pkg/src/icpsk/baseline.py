"""Comparison mappings that ignore the 0/1 split of effective sets.

The spread cascade places the members of each effective set as far apart on
the circle as possible, receiver by receiver in priority order, with no regard
for which half of a set a vector belongs to.  It is the reference labelling the
simulations compare optimized pairs against.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from . import _backend
from .codes import IndexCode, check_decodable, effective_sets
from .geometry import PskMapping
from .optimizer import MAX_MAPPINGS, ScaleGuardError, all_canonical_mappings
from .problem import IndexCodingProblem


def intra_pairs(code: IndexCode, r) -> np.ndarray:
    """Every unordered pair of vectors sharing an effective set of ``r``."""
    fam = effective_sets(code, r)
    pairs = [p for s in fam.sets for p in itertools.combinations(sorted(s.carrier), 2)]
    return np.asarray(pairs, dtype=np.int64)


def spread_mapping_count(P: int, size: int) -> int:
    K = P // size
    return math.factorial(K - 1) * math.factorial(size - 1) * math.factorial(size) ** (K - 1)


def spread_mappings_for_receiver(code: IndexCode, r) -> np.ndarray:
    """Canonical mappings putting every effective set of ``r`` on a regular polygon.

    With sets of size ``s`` and ``K = P/s`` of them, set ``c`` takes positions
    ``{p, p+K, p+2K, ...}`` for a distinct residue ``p``; that is the only way
    to reach the largest possible smallest gap ``K`` inside every set.
    """
    fam = effective_sets(code, r)
    P = 1 << code.N
    s = fam.set_size
    if s >= P:
        raise ValueError("one effective set covers the constellation; nothing to spread")
    total = spread_mapping_count(P, s)
    if total > MAX_MAPPINGS:
        raise ScaleGuardError(f"{total} spread mappings exceed the limit of {MAX_MAPPINGS}")
    K = P // s
    first = next(x for x in fam.sets if 0 in x.carrier)
    others = [sorted(x.carrier) for x in fam.sets if x is not first]
    head = sorted(first.carrier - {0})

    rows = []
    for residues in itertools.permutations(range(1, K)):
        for head_order in itertools.permutations(head):
            for orders in itertools.product(*(itertools.permutations(o) for o in others)):
                w = [0] * P
                w[K::K] = head_order
                for p, members in zip(residues, orders):
                    w[p::K] = members
                rows.append(w)
    out = np.asarray(rows, dtype=np.int16)
    assert len(out) == total
    return out


def spread_cascade(
    icp: IndexCodingProblem, code: IndexCode, priority=None, exhaustive: bool | None = None
) -> tuple[np.ndarray, list[int]]:
    """Mappings that lexicographically maximize each receiver's smallest intra-set gap.

    Seeds from every canonical mapping when ``exhaustive`` (default for
    constellations up to 8 points), otherwise from the regular-polygon layouts
    of the first receiver whose sets are smaller than the constellation.
    Returns the surviving mapping rows (sorted) and the gap per receiver in
    priority order.
    """
    check_decodable(code, icp)
    order = list(priority) if priority is not None else list(icp.priority)
    P = 1 << code.N
    if exhaustive is None:
        exhaustive = P <= 8
    sizes = [effective_sets(code, icp.receivers[i]).set_size for i in order]
    if exhaustive:
        alive = all_canonical_mappings(P)
    else:
        k = next((k for k, s in enumerate(sizes) if s < P), None)
        alive = (
            np.arange(P, dtype=np.int16)[None, :]
            if k is None
            else spread_mappings_for_receiver(code, icp.receivers[order[k]])
        )
    gaps = []
    for i in order:
        g = _backend.min_gaps(alive, intra_pairs(code, icp.receivers[i]), P)
        best = int(g.max())
        gaps.append(best)
        alive = alive[g == best]
    alive = alive[np.lexsort(alive.T[::-1])]
    return alive, gaps


def spread_mapping(icp: IndexCodingProblem, code: IndexCode, priority=None) -> PskMapping:
    """First (lexicographically smallest) survivor of :func:`spread_cascade`."""
    rows, _ = spread_cascade(icp, code, priority)
    return PskMapping(rows[0])
