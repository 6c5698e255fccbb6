"""AWGN broadcast of index-coded PSK symbols and per-receiver decoding.

SNR is Es/N0 in dB with unit symbol energy, so ``N0 = 10**(-snr_db/10)`` and
each noise dimension has variance ``N0/2``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from statistics import NormalDist
from typing import Sequence

import numpy as np

from . import _backend
from .codes import IndexCode, check_decodable, effective_sets
from .geometry import Constellation, PskMapping
from .gf2 import BitVec
from .problem import IndexCodingProblem

DECODERS = {"ml": 0, "mindist": 1}
Z95 = NormalDist().inv_cdf(0.975)


@dataclass(frozen=True)
class NoiseModel:
    n0: float

    def __post_init__(self) -> None:
        if not self.n0 > 0:
            raise ValueError("N0 must be positive")

    @classmethod
    def from_snr_db(cls, snr_db: float, es: float = 1.0) -> "NoiseModel":
        return cls(es / 10.0 ** (snr_db / 10.0))

    @property
    def sigma(self) -> float:
        return math.sqrt(self.n0 / 2.0)


@dataclass(frozen=True)
class SimConfig:
    snr_db: tuple[float, ...]
    trials: int
    seed: int = 0
    decoder: str = "ml"
    threads: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "snr_db", tuple(float(s) for s in self.snr_db))
        if not self.snr_db:
            raise ValueError("need at least one SNR point")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if self.decoder not in DECODERS:
            raise ValueError(f"decoder must be one of {sorted(DECODERS)}")


def wilson_interval(errors: int, trials: int, z: float = Z95) -> tuple[float, float]:
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


@dataclass(frozen=True)
class CurvePoint:
    snr_db: float
    receiver: int
    trials: int
    errors: int

    @property
    def rate(self) -> float:
        return self.errors / self.trials

    @property
    def interval(self) -> tuple[float, float]:
        return wilson_interval(self.errors, self.trials)

    @property
    def sigma(self) -> float:
        p = self.rate
        return math.sqrt(max(p * (1 - p), 1.0 / self.trials) / self.trials)


@dataclass(frozen=True)
class ErrorRateCurve:
    points: tuple[CurvePoint, ...]
    decoder: str

    def at(self, receiver: int, snr_db: float) -> CurvePoint:
        for p in self.points:
            if p.receiver == receiver and abs(p.snr_db - snr_db) < 1e-12:
                return p
        raise KeyError((receiver, snr_db))

    def receiver(self, i: int) -> list[CurvePoint]:
        return [p for p in self.points if p.receiver == i]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["snr_db", "receiver", "trials", "errors", "rate", "ci_lo", "ci_hi"])
        for p in self.points:
            lo, hi = p.interval
            w.writerow([repr(p.snr_db), p.receiver + 1, p.trials, p.errors, repr(p.rate), repr(lo), repr(hi)])
        return buf.getvalue()


def transmit(x: BitVec | int, code: IndexCode, M: PskMapping) -> np.ndarray:
    """Noiseless constellation point for message vector ``x``."""
    if isinstance(x, BitVec):
        if x.width != code.n:
            raise ValueError(f"message width {x.width} != {code.n}")
        x = x.value
    if M.order != 1 << code.N:
        raise ValueError("mapping order does not match code length")
    return Constellation(code.N).points[M.position(code.encode(x))]


def _log_likelihoods(r, points: np.ndarray, n0: float) -> np.ndarray:
    d = points - np.asarray(r, dtype=float)[None, :]
    return -(d * d).sum(axis=1) / n0


def ml_decode(r, S0: Sequence[int], S1: Sequence[int], n0: float, order: int) -> int:
    """Compare summed Gaussian likelihoods of the two point sets; ties go to 0."""
    if not S0 or not S1:
        raise ValueError("both point sets must be nonempty")
    pts = Constellation(order.bit_length() - 1).points
    e0 = _log_likelihoods(r, pts[list(S0)], n0)
    e1 = _log_likelihoods(r, pts[list(S1)], n0)
    top = max(e0.max(), e1.max())
    return 0 if np.exp(e0 - top).sum() >= np.exp(e1 - top).sum() else 1


def mindist_decode(r, S0: Sequence[int], S1: Sequence[int], order: int) -> int:
    """0 iff the nearest point to ``r`` lies in ``S0`` (ties go to 0)."""
    if not S0 or not S1:
        raise ValueError("both point sets must be nonempty")
    pts = Constellation(order.bit_length() - 1).points
    d0 = ((pts[list(S0)] - np.asarray(r)) ** 2).sum(axis=1).min()
    d1 = ((pts[list(S1)] - np.asarray(r)) ** 2).sum(axis=1).min()
    return 0 if d0 <= d1 else 1


def kernel_inputs(icp: IndexCodingProblem, code: IndexCode, M: PskMapping) -> dict:
    """Flat arrays describing each receiver's decoding problem for the kernels."""
    n = code.n
    side_masks, wanted, wanted_rows, wsets = [], [], [], []
    for i, r in enumerate(icp.receivers):
        fam = effective_sets(code, r, i)
        side_masks.append(sum(1 << (n - 1 - j) for j in r.knows))
        wanted.append(r.wants)
        wanted_rows.append(code.rows[r.wants])
        wsets.append(fam.interference_space.elements())
    width = max(len(w) for w in wsets)
    padded = np.zeros((len(wsets), width), dtype=np.int64)
    for k, w in enumerate(wsets):
        padded[k, : len(w)] = w
    return dict(
        rows=np.asarray(code.rows, dtype=np.int64),
        n=n,
        positions=np.asarray(M.positions, dtype=np.int64),
        points=Constellation(code.N).points,
        side_masks=np.asarray(side_masks, dtype=np.int64),
        wanted=np.asarray(wanted, dtype=np.int64),
        wanted_rows=np.asarray(wanted_rows, dtype=np.int64),
        wsets=padded,
        wsizes=np.asarray([len(w) for w in wsets], dtype=np.int64),
    )


def simulate(
    icp: IndexCodingProblem,
    code: IndexCode,
    M: PskMapping,
    config: SimConfig,
    kernels=None,
) -> ErrorRateCurve:
    """Monte Carlo message error rates for every receiver at every SNR point.

    Trial ``t`` at SNR index ``s`` draws its message vector and noise from a
    counter-based stream keyed by ``(seed, s, t)``, so counts do not depend on
    how trials are split across threads.  All receivers decode the same
    received point in a trial.
    """
    check_decodable(code, icp)
    if M.order != 1 << code.N:
        raise ValueError("mapping order does not match code length")
    k = kernels or _backend.kernels
    args = kernel_inputs(icp, code, M)
    n0s = [NoiseModel.from_snr_db(s).n0 for s in config.snr_db]
    errs = k.count_errors(
        args["rows"], args["n"], args["positions"], args["points"], args["side_masks"],
        args["wanted"], args["wanted_rows"], args["wsets"], args["wsizes"],
        n0s, config.trials, config.seed, DECODERS[config.decoder], config.threads,
    )
    pts = []
    for s, snr in enumerate(config.snr_db):
        for i in range(icp.m):
            pts.append(CurvePoint(snr, i, config.trials, int(errs[s, i])))
    return ErrorRateCurve(tuple(pts), config.decoder)


def simulate_reference(
    icp: IndexCodingProblem, code: IndexCode, M: PskMapping, config: SimConfig
) -> ErrorRateCurve:
    """Scalar trial-by-trial loop over :func:`ml_decode` / :func:`mindist_decode`.

    Uses the same random stream as :func:`simulate`; slow, meant for checking
    the vectorized and compiled paths on small trial counts.
    """
    check_decodable(code, icp)
    n, P = code.n, M.order
    pts = Constellation(code.N).points
    fams = [effective_sets(code, r, i) for i, r in enumerate(icp.receivers)]
    trials = np.arange(config.trials, dtype=np.uint64)
    out = []
    for s, snr in enumerate(config.snr_db):
        noise = NoiseModel.from_snr_db(snr)
        h0, u1, u2 = _backend.trial_draws(config.seed, s, trials)
        rad = np.sqrt(-2.0 * np.log(u1))
        ang = 2.0 * np.pi * u2
        errs = [0] * icp.m
        for t in range(config.trials):
            x = int(h0[t]) & ((1 << n) - 1)
            rx = pts[M.position(code.encode(x))] + noise.sigma * np.array([rad[t] * np.cos(ang[t]), rad[t] * np.sin(ang[t])])
            for i, r in enumerate(icp.receivers):
                side = x & sum(1 << (n - 1 - j) for j in r.knows)
                c0 = code.encode(side)
                S0 = [M.position(c0 ^ w) for w in fams[i].interference_space.elements()]
                S1 = [M.position(c0 ^ code.rows[r.wants] ^ w) for w in fams[i].interference_space.elements()]
                if config.decoder == "ml":
                    bit = ml_decode(rx, S0, S1, noise.n0, P)
                else:
                    bit = mindist_decode(rx, S0, S1, P)
                errs[i] += bit != (x >> (n - 1 - r.wants)) & 1
        out += [CurvePoint(snr, i, config.trials, errs[i]) for i in range(icp.m)]
    return ErrorRateCurve(tuple(out), config.decoder)
