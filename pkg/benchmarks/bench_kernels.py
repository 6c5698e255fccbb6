"""Time the compiled kernels against the numpy fallback.

    python benchmarks/bench_kernels.py [--trials 200000] [--repeat 3]
"""

import argparse
import time
from pathlib import Path

import numpy as np

from icpsk import _fallback
from icpsk.baseline import intra_pairs
from icpsk.channel import NoiseModel, kernel_inputs
from icpsk.fileio import load_codes
from icpsk.geometry import PskMapping
from icpsk.optimizer import all_canonical_mappings
from icpsk.problem import load_problem

try:
    from icpsk import _kernels
except ImportError:
    _kernels = None

DATA = Path(__file__).resolve().parent.parent / "data"


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    icp = load_problem(DATA / "example1.json")
    code = load_codes(str(DATA / "example1.codes"), icp.n)[0]
    rows = all_canonical_mappings(8)
    pairs = intra_pairs(code, icp.receivers[0])
    M = PskMapping(range(8))
    k = kernel_inputs(icp, code, M)
    n0s = [NoiseModel.from_snr_db(s).n0 for s in (6.0, 14.0)]

    backends = [("numpy", _fallback)] + ([("cython", _kernels)] if _kernels else [])
    results = {}
    print(f"{'kernel':<22}{'backend':<10}{'seconds':>10}")
    for name, mod in backends:
        t, g = best_of(lambda: mod.min_gaps(rows, pairs, 8), args.repeat)
        print(f"{'min_gaps (5040 maps)':<22}{name:<10}{t:>10.4f}")
        results.setdefault("min_gaps", []).append((t, g))
        for dec, label in ((0, "ml"), (1, "mindist")):
            call = lambda: mod.count_errors(
                k["rows"], k["n"], k["positions"], k["points"], k["side_masks"], k["wanted"],
                k["wanted_rows"], k["wsets"], k["wsizes"], n0s, args.trials, 1, dec, 1,
            )
            t, e = best_of(call, args.repeat)
            print(f"{'count_errors ' + label:<22}{name:<10}{t:>10.4f}")
            results.setdefault(label, []).append((t, e))
    if _kernels is None:
        print("compiled kernels not built; fallback only")
        return
    for key, ((tp, a), (tc, b)) in results.items():
        same = np.array_equal(np.asarray(a), np.asarray(b))
        print(f"{key}: speedup {tp / tc:.1f}x, identical output: {same}")


if __name__ == "__main__":
    main()
