# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: mapping separation scans and the Monte Carlo decoder loop.

Must agree with ``_fallback``; the counter-based generator is bit-for-bit the
same construction.
"""

import numpy as np
cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport sqrt, log, cos, sin, exp, M_PI
from libc.stdint cimport uint64_t
ctypedef cnp.int64_t int64_t

cnp.import_array()

DEF MAXP = 64
DEF MAXW = 64

cdef uint64_t GOLDEN = 0x9E3779B97F4A7C15ULL
cdef uint64_t STREAM = 0xD1B54A32D192ED03ULL
cdef double TWO53 = 1.0 / 9007199254740992.0
CHUNK = 1 << 15


cdef inline uint64_t mix64(uint64_t z) noexcept nogil:
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL
    return z ^ (z >> 31)


cdef inline uint64_t snr_key(uint64_t seed, uint64_t s) noexcept nogil:
    return mix64(mix64(seed ^ GOLDEN) + (s + 1) * GOLDEN)


def trial_draws(seed, int snr_index, trials):
    cdef cnp.ndarray[cnp.uint64_t, ndim=1] t = np.ascontiguousarray(trials, dtype=np.uint64)
    cdef Py_ssize_t k, cnt = t.shape[0]
    h0 = np.empty(cnt, dtype=np.uint64)
    u1 = np.empty(cnt, dtype=np.float64)
    u2 = np.empty(cnt, dtype=np.float64)
    cdef uint64_t[:] h0v = h0
    cdef double[:] u1v = u1, u2v = u2
    cdef uint64_t ks = snr_key(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), snr_index), key
    for k in range(cnt):
        key = mix64(ks + (t[k] + 1) * STREAM)
        h0v[k] = mix64(key + GOLDEN)
        u1v[k] = (<double>(mix64(key + 2 * GOLDEN) >> 11) + 1.0) * TWO53
        u2v[k] = (<double>(mix64(key + 3 * GOLDEN) >> 11) + 1.0) * TWO53
    return h0, u1, u2


def min_gaps(words, pairs, int order):
    """For each mapping row, the smallest circular gap over the given word pairs."""
    cdef cnp.ndarray w_arr = np.ascontiguousarray(words, dtype=np.int16)
    cdef short[:, :] w = w_arr
    cdef cnp.int64_t[:, :] pr = np.ascontiguousarray(pairs, dtype=np.int64)
    cdef Py_ssize_t rows = w.shape[0], P = w.shape[1], npairs = pr.shape[0]
    out = np.empty(rows, dtype=np.int64)
    cdef cnp.int64_t[:] o = out
    cdef Py_ssize_t r, k
    cdef int pos[MAXP]
    cdef int d, best
    if P > MAXP:
        raise ValueError("constellation too large for the compiled kernel")
    with nogil:
        for r in range(rows):
            for k in range(P):
                pos[w[r, k]] = <int>k
            best = order
            for k in range(npairs):
                d = pos[pr[k, 0]] - pos[pr[k, 1]]
                if d < 0:
                    d = -d
                if order - d < d:
                    d = order - d
                if d < best:
                    best = d
            o[r] = best
    return out


cdef inline int64_t xor_select(uint64_t bits, const int64_t* rows, int n) noexcept nogil:
    cdef int64_t acc = 0
    cdef int j
    for j in range(n):
        if (bits >> (n - 1 - j)) & 1:
            acc ^= rows[j]
    return acc


cdef void run_chunk(
    Py_ssize_t lo, Py_ssize_t hi, uint64_t ks, double n0,
    const int64_t* rows, int n, const int64_t* positions, const double* points,
    const int64_t* side_masks, const int64_t* wanted, const int64_t* wanted_rows,
    const int64_t* wsets, Py_ssize_t wstride, const int64_t* wsizes, int m,
    int decoder, int64_t* errs,
) noexcept nogil:
    cdef Py_ssize_t t
    cdef int i, k, nw
    cdef uint64_t key, x, bit, truth
    cdef uint64_t xmask = (<uint64_t>1 << n) - 1
    cdef double sigma = sqrt(n0 / 2.0)
    cdef double u1, u2, rad, ang, rx, ry, dx, dy
    cdef double e0[MAXW]
    cdef double e1[MAXW]
    cdef double top, s0, s1, m0, m1
    cdef int64_t y, c0, w0, w1
    for t in range(lo, hi):
        key = mix64(ks + (<uint64_t>t + 1) * STREAM)
        x = mix64(key + GOLDEN) & xmask
        u1 = (<double>(mix64(key + 2 * GOLDEN) >> 11) + 1.0) * TWO53
        u2 = (<double>(mix64(key + 3 * GOLDEN) >> 11) + 1.0) * TWO53
        rad = sqrt(-2.0 * log(u1))
        ang = 2.0 * M_PI * u2
        y = xor_select(x, rows, n)
        rx = points[2 * positions[y]] + sigma * (rad * cos(ang))
        ry = points[2 * positions[y] + 1] + sigma * (rad * sin(ang))
        for i in range(m):
            c0 = xor_select(x & <uint64_t>side_masks[i], rows, n)
            nw = <int>wsizes[i]
            for k in range(nw):
                w0 = c0 ^ wsets[i * wstride + k]
                w1 = w0 ^ wanted_rows[i]
                dx = rx - points[2 * positions[w0]]
                dy = ry - points[2 * positions[w0] + 1]
                e0[k] = dx * dx + dy * dy
                dx = rx - points[2 * positions[w1]]
                dy = ry - points[2 * positions[w1] + 1]
                e1[k] = dx * dx + dy * dy
            if decoder == 0:
                top = -e0[0] / n0
                for k in range(nw):
                    if -e0[k] / n0 > top:
                        top = -e0[k] / n0
                    if -e1[k] / n0 > top:
                        top = -e1[k] / n0
                s0 = 0.0
                s1 = 0.0
                for k in range(nw):
                    s0 = s0 + exp(-e0[k] / n0 - top)
                    s1 = s1 + exp(-e1[k] / n0 - top)
                bit = 1 if s0 < s1 else 0
            else:
                m0 = e0[0]
                m1 = e1[0]
                for k in range(1, nw):
                    if e0[k] < m0:
                        m0 = e0[k]
                    if e1[k] < m1:
                        m1 = e1[k]
                bit = 1 if m0 > m1 else 0
            truth = (x >> (n - 1 - wanted[i])) & 1
            if bit != truth:
                errs[i] += 1


def count_errors(
    rows, int n, positions, points, side_masks, wanted, wanted_rows, wsets, wsizes,
    n0s, Py_ssize_t trials, seed, int decoder, int threads=1,
):
    """Error counts, shape (len(n0s), m), for the Monte Carlo broadcast simulation."""
    cdef cnp.int64_t[:] rows_v = np.ascontiguousarray(rows, dtype=np.int64)
    cdef cnp.int64_t[:] pos_v = np.ascontiguousarray(positions, dtype=np.int64)
    cdef double[:, :] pts_v = np.ascontiguousarray(points, dtype=np.float64)
    cdef cnp.int64_t[:] side_v = np.ascontiguousarray(side_masks, dtype=np.int64)
    cdef cnp.int64_t[:] want_v = np.ascontiguousarray(wanted, dtype=np.int64)
    cdef cnp.int64_t[:] wrow_v = np.ascontiguousarray(wanted_rows, dtype=np.int64)
    cdef cnp.int64_t[:, :] ws_v = np.ascontiguousarray(wsets, dtype=np.int64)
    cdef cnp.int64_t[:] wsz_v = np.ascontiguousarray(wsizes, dtype=np.int64)
    cdef int m = want_v.shape[0]
    cdef Py_ssize_t nchunks = (trials + CHUNK - 1) // CHUNK
    cdef Py_ssize_t c, chunk = CHUNK
    cdef int s
    cdef uint64_t ks
    cdef double n0
    if max(wsizes) > MAXW:
        raise ValueError("effective sets too large for the compiled kernel")
    if n > 63:
        raise ValueError("too many messages for the compiled kernel")
    out = np.zeros((len(n0s), m), dtype=np.int64)
    partial = np.zeros((nchunks, m), dtype=np.int64)
    cdef cnp.int64_t[:, :] part_v = partial
    for s in range(len(n0s)):
        n0 = float(n0s[s])
        ks = snr_key(<uint64_t>(seed & 0xFFFFFFFFFFFFFFFF), s)
        part_v[:, :] = 0
        for c in prange(nchunks, nogil=True, num_threads=threads, schedule="static"):
            run_chunk(
                c * chunk, min((c + 1) * chunk, trials), ks, n0,
                &rows_v[0], n, &pos_v[0], &pts_v[0, 0], &side_v[0], &want_v[0],
                &wrow_v[0], &ws_v[0, 0], ws_v.shape[1], &wsz_v[0], m, decoder, &part_v[c, 0],
            )
        out[s] = partial.sum(axis=0)
    return out
