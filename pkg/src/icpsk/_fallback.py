"""Pure numpy implementations of the hot kernels.

Same signatures and results as the compiled ``_kernels`` module; used when the
extension is not built or when ``ICPSK_BACKEND=python``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
STREAM = np.uint64(0xD1B54A32D192ED03)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_TWO53 = 1.0 / 9007199254740992.0
CHUNK = 1 << 15


def mix64(z: np.ndarray) -> np.ndarray:
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= _M1
    z ^= z >> np.uint64(27)
    z *= _M2
    z ^= z >> np.uint64(31)
    return z


def trial_keys(seed: int, snr_index: int, trials: np.ndarray) -> np.ndarray:
    """Per-trial 64-bit keys derived from (seed, snr index, trial index)."""
    with np.errstate(over="ignore"):
        base = mix64(np.array([seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64) ^ GOLDEN)
        ks = mix64(base + np.uint64(snr_index + 1) * GOLDEN)
        t = np.asarray(trials, dtype=np.uint64) + np.uint64(1)
        return mix64(ks + t * STREAM)


def trial_draws(seed: int, snr_index: int, trials: np.ndarray):
    """Message bits word, and two uniforms in (0, 1] for each trial."""
    keys = trial_keys(seed, snr_index, trials)
    with np.errstate(over="ignore"):
        h0 = mix64(keys + GOLDEN)
        h1 = mix64(keys + np.uint64(2) * GOLDEN)
        h2 = mix64(keys + np.uint64(3) * GOLDEN)
    u1 = ((h1 >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO53
    u2 = ((h2 >> np.uint64(11)).astype(np.float64) + 1.0) * _TWO53
    return h0, u1, u2


def gaussian_pair(u1: np.ndarray, u2: np.ndarray):
    rad = np.sqrt(-2.0 * np.log(u1))
    ang = 2.0 * np.pi * u2
    return rad * np.cos(ang), rad * np.sin(ang)


def min_gaps(words: np.ndarray, pairs: np.ndarray, order: int) -> np.ndarray:
    """For each mapping row, the smallest circular gap over the given word pairs."""
    words = np.asarray(words)
    pos = np.argsort(words, axis=1, kind="stable").astype(np.int16)
    d = np.abs(pos[:, pairs[:, 0]] - pos[:, pairs[:, 1]])
    d = np.minimum(d, order - d)
    return d.min(axis=1).astype(np.int64)


def _xor_select(bits: np.ndarray, rows: np.ndarray, n: int) -> np.ndarray:
    acc = np.zeros(bits.shape, dtype=np.int64)
    for j in range(n):
        on = ((bits >> np.uint64(n - 1 - j)) & np.uint64(1)).astype(bool)
        acc[on] ^= rows[j]
    return acc


def _chunk_errors(lo, hi, s, n0, args):
    (rows, n, positions, points, side_masks, wanted, wanted_rows, wsets, wsizes, seed, decoder) = args
    m = len(wanted)
    trials = np.arange(lo, hi, dtype=np.uint64)
    h0, u1, u2 = trial_draws(seed, s, trials)
    x = h0 & np.uint64((1 << n) - 1)
    g1, g2 = gaussian_pair(u1, u2)
    sigma = np.sqrt(n0 / 2.0)
    y = _xor_select(x, rows, n)
    tx = points[positions[y]]
    rx = tx[:, 0] + sigma * g1
    ry = tx[:, 1] + sigma * g2
    errs = np.zeros(m, dtype=np.int64)
    for i in range(m):
        c0 = _xor_select(x & np.uint64(side_masks[i]), rows, n)
        ws = wsets[i, : wsizes[i]]
        w0 = c0[:, None] ^ ws[None, :]
        w1 = w0 ^ wanted_rows[i]
        p0 = points[positions[w0]]
        p1 = points[positions[w1]]
        d0 = (rx[:, None] - p0[..., 0]) ** 2 + (ry[:, None] - p0[..., 1]) ** 2
        d1 = (rx[:, None] - p1[..., 0]) ** 2 + (ry[:, None] - p1[..., 1]) ** 2
        if decoder == 0:
            e0 = -d0 / n0
            e1 = -d1 / n0
            top = np.maximum(e0.max(axis=1), e1.max(axis=1))
            x0 = np.exp(e0 - top[:, None])
            x1 = np.exp(e1 - top[:, None])
            # left-to-right sums, same rounding as the compiled loop
            s0 = np.zeros(len(top))
            s1 = np.zeros(len(top))
            for k in range(x0.shape[1]):
                s0 += x0[:, k]
                s1 += x1[:, k]
            bit = (s0 < s1).astype(np.uint64)
        else:
            bit = (d0.min(axis=1) > d1.min(axis=1)).astype(np.uint64)
        truth = (x >> np.uint64(n - 1 - wanted[i])) & np.uint64(1)
        errs[i] = int(np.count_nonzero(bit != truth))
    return errs


def count_errors(
    rows, n, positions, points, side_masks, wanted, wanted_rows, wsets, wsizes,
    n0s, trials, seed, decoder, threads=1,
):
    """Error counts, shape (len(n0s), m), for the Monte Carlo broadcast simulation."""
    args = (
        np.asarray(rows, dtype=np.int64), n, np.asarray(positions, dtype=np.int64),
        np.asarray(points, dtype=np.float64), list(side_masks), list(wanted),
        np.asarray(wanted_rows, dtype=np.int64), np.asarray(wsets, dtype=np.int64),
        list(wsizes), seed, decoder,
    )
    m = len(wanted)
    out = np.zeros((len(n0s), m), dtype=np.int64)
    jobs = [(lo, min(lo + CHUNK, trials)) for lo in range(0, trials, CHUNK)]
    for s, n0 in enumerate(n0s):
        if threads > 1:
            with ThreadPoolExecutor(threads) as pool:
                parts = list(pool.map(lambda j: _chunk_errors(j[0], j[1], s, n0, args), jobs))
        else:
            parts = [_chunk_errors(lo, hi, s, n0, args) for lo, hi in jobs]
        for p in parts:
            out[s] += p
    return out
