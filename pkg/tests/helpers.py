"""Shared generators for property tests."""

import numpy as np

from icpsk.codes import IndexCode, is_decodable
from icpsk.gf2 import rank
from icpsk.problem import IndexCodingProblem, Receiver


def random_problem(rng, n):
    m = int(rng.integers(1, n + 1))
    receivers = []
    for _ in range(m):
        wants = int(rng.integers(n))
        knows = frozenset(j for j in range(n) if j != wants and rng.random() < 0.5)
        receivers.append(Receiver(wants, knows))
    return IndexCodingProblem(n, tuple(receivers))


def random_code(rng, n, N):
    while True:
        cols = [int(c) for c in rng.integers(1, 1 << n, size=N)]
        if rank(cols, n) == N:
            return IndexCode(cols, n)


def random_decodable_instances(count, seed=2024, max_n=6):
    """``count`` (problem, code) pairs with n <= max_n, decodable at every receiver."""
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(2, max_n + 1))
        N = int(rng.integers(max(1, n - 2), n + 1))
        icp = random_problem(rng, n)
        code = random_code(rng, n, N)
        if all(is_decodable(code, r) for r in icp.receivers):
            out.append((icp, code))
    return out
