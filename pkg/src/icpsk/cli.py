"""``icpsk`` command line: enumerate codes, inspect effective sets, optimize, simulate."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, _backend
from .channel import DECODERS, SimConfig, simulate
from .codes import (
    DecodabilityError,
    check_decodable,
    effective_sets,
    enumerate_all,
    format_code_equations,
    realization_table,
)
from .fileio import (
    FormatError,
    RunManifest,
    canonical_json,
    cascade_document,
    format_pair,
    load_codes,
    load_pairs,
    parse_pairs,
    sha256_file,
)
from .geometry import distance_profile
from .optimizer import ScaleGuardError, priority_cascade
from .problem import IndexCodingProblem, ProblemError, load_problem

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_DECODABILITY = 4
EXIT_SCALE = 5

SHOW_LIMIT = 50


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _problem(path: str) -> IndexCodingProblem:
    try:
        return load_problem(path)
    except FileNotFoundError as exc:
        raise CliError(f"{path}: no such file", EXIT_PARSE) from exc
    except ProblemError as exc:
        code = EXIT_VALIDATION if exc.violations else EXIT_PARSE
        raise CliError(str(exc), code) from exc


def _priority(text: str | None, icp: IndexCodingProblem) -> list[int]:
    if not text:
        return list(icp.priority)
    try:
        order = [int(t) - 1 for t in text.split(",")]
    except ValueError as exc:
        raise CliError(f"--priority: expected comma-separated receiver numbers, got {text!r}", EXIT_PARSE) from exc
    if sorted(order) != list(range(icp.m)):
        raise CliError(f"--priority must be a permutation of 1..{icp.m}", EXIT_VALIDATION)
    return order


def _snr_list(text: str) -> list[float]:
    """``0,4,8`` or ``start:step:stop`` (inclusive)."""
    try:
        if ":" in text:
            a, step, b = (float(v) for v in text.split(":"))
            if step <= 0:
                raise ValueError
            count = int(round((b - a) / step)) + 1
            return [round(a + k * step, 10) for k in range(count)]
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise CliError(f"--snr: cannot parse {text!r}", EXIT_PARSE) from exc


def _vec(v: int, width: int) -> str:
    return f"({v:0{width}b})"


def _vecset(vs, width: int) -> str:
    return "{" + ",".join(_vec(v, width) for v in sorted(vs)) + "}"


def _manifest(args, command: str, parameters: dict, seed=None) -> RunManifest:
    return RunManifest(
        command=command,
        problem=args.problem,
        problem_sha256=sha256_file(args.problem),
        tool_version=__version__,
        parameters=parameters,
        seed=seed,
    )


# --- subcommands --------------------------------------------------------------


def cmd_enumerate(args) -> int:
    icp = _problem(args.problem)
    try:
        stats, codes = enumerate_all(icp, args.n_code_len)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    print(stats.line())
    print(f"codes_per_space={stats.codes_per_space}")
    if args.list:
        for c in codes:
            print(format_code_equations(c))
    return EXIT_OK


def _codes_from_args(args, icp: IndexCodingProblem):
    if args.codes:
        try:
            codes = load_codes(args.codes, icp.n)
        except ValueError as exc:
            raise CliError(str(exc), EXIT_PARSE) from exc
        if args.n_code_len is not None and any(c.N != args.n_code_len for c in codes):
            raise CliError("--codes contain a code whose length differs from --n-code-len", EXIT_VALIDATION)
        return codes
    if args.n_code_len is None:
        raise CliError("give --n-code-len or --codes", EXIT_PARSE)
    try:
        codes = enumerate_all(icp, args.n_code_len)[1]
    except ValueError as exc:
        raise CliError(str(exc), EXIT_VALIDATION) from exc
    if not codes:
        raise CliError(f"no decodable code of length {args.n_code_len}", EXIT_DECODABILITY)
    return codes


def cmd_effective_sets(args) -> int:
    icp = _problem(args.problem)
    codes = _codes_from_args(args, icp)
    code = codes[0]
    N = code.N
    wanted = range(icp.m) if args.receiver is None else [args.receiver - 1]
    print(f"code: {format_code_equations(code)}")
    for i in wanted:
        if not 0 <= i < icp.m:
            raise CliError(f"--receiver must be in 1..{icp.m}", EXIT_VALIDATION)
        r = icp.receivers[i]
        k = len(r.side_info)
        known = ", ".join(f"x{j + 1}" for j in r.side_info) or "nothing"
        print(f"\nR{i + 1}: wants x{r.wants + 1}, knows {known}")
        print("a | C_L(a) | C_L0(a) | C_L1(a)")
        if args.distinct:
            rows = [(s.realization, s) for s in effective_sets(code, r, i).sets]
        else:
            rows = realization_table(code, r)
        for a, s in rows:
            a_txt = _vec(a, k) if k else "()"
            print(f"{a_txt} | {_vecset(s.carrier, N)} | {_vecset(s.zero, N)} | {_vecset(s.one, N)}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    icp = _problem(args.problem)
    order = _priority(args.priority, icp)
    codes = _codes_from_args(args, icp)
    result = priority_cascade(icp, codes, order)

    print("receiver  eta  survivors  delta     g_dB")
    for s in result.trace:
        surv = "-" if s.survivors is None else str(s.survivors)
        note = "  (skipped: sees the whole constellation)" if s.skipped else ""
        print(f"R{s.receiver + 1:<8} {s.eta:<4} {surv:<10} {s.delta:.5f}  {s.gain:.4f}{note}")
    flow = " -> ".join(str(c) for c in result.survivor_counts)
    print(f"trace: {flow}")
    if result.arbitrary:
        print("every receiver sees the whole constellation; returning an arbitrary pair")

    pairs = result.pairs()
    shown = pairs if args.list or len(pairs) <= SHOW_LIMIT else pairs[:SHOW_LIMIT]
    print(f"survivors: {len(pairs)}")
    for p in shown:
        print(p.render())
    if len(shown) < len(pairs):
        print(f"... {len(pairs) - len(shown)} more (use --list or --out)")

    if args.out:
        params = {
            "N": result.N,
            "codes": args.codes,
            "n_code_len": args.n_code_len,
            "priority": [i + 1 for i in order],
        }
        if args.codes and Path(args.codes).is_file():
            params["codes_sha256"] = sha256_file(args.codes)
        doc = cascade_document(result, _manifest(args, "optimize", params))
        Path(args.out).write_text(canonical_json(doc))
    return EXIT_OK


def _pairs_from_args(args, icp):
    try:
        if args.pair:
            return parse_pairs(args.pair, icp.n, "--pair")
        return load_pairs(args.pairs, icp.n)
    except FileNotFoundError as exc:
        raise CliError(f"{args.pairs}: no such file", EXIT_PARSE) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_PARSE) from exc


def cmd_icg(args) -> int:
    icp = _problem(args.problem)
    for code, M in _pairs_from_args(args, icp):
        check_decodable(code, icp)
        prof = distance_profile(icp, code, M)
        print(format_pair(code, M))
        for i, (d, g) in enumerate(zip(prof.distances, prof.gains)):
            print(f"  R{i + 1}  d_IS,min={d:.5f}  g={g:.4f} dB")
    return EXIT_OK


def cmd_simulate(args) -> int:
    icp = _problem(args.problem)
    pairs = _pairs_from_args(args, icp)
    decoders = sorted(DECODERS) if args.decoder == "both" else [args.decoder]
    snrs = _snr_list(args.snr)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    status = EXIT_OK
    for k, (code, M) in enumerate(pairs, 1):
        check_decodable(code, icp)
        curves = {}
        for dec in decoders:
            cfg = SimConfig(snrs, args.trials, args.seed, dec, args.threads)
            curve = simulate(icp, code, M, cfg)
            curves[dec] = curve
            stem = out / f"pair{k}_{dec}"
            stem.with_suffix(".csv").write_text(curve.to_csv())
            params = {
                "pair": format_pair(code, M),
                "snr_db": list(cfg.snr_db),
                "trials": cfg.trials,
                "decoder": dec,
                "threads": cfg.threads,
                "backend": _backend.NAME,
            }
            if args.pairs:
                params["pairs_file"] = args.pairs
                params["pairs_sha256"] = sha256_file(args.pairs)
            man = _manifest(args, "simulate", params, seed=cfg.seed)
            Path(f"{stem}.manifest.json").write_text(man.to_json())
            print(f"wrote {stem}.csv")
        if {"ml", "mindist"} <= curves.keys():
            bad = [
                (p.receiver, p.snr_db)
                for p in curves["ml"].points
                if p.rate > curves["mindist"].at(p.receiver, p.snr_db).rate + 3 * p.sigma
            ]
            if bad:
                print(f"warning: ML worse than min-distance beyond 3 sigma at {bad}", file=sys.stderr)
            else:
                print("check: ML error rate <= min-distance + 3 sigma at every point")
    return status


# --- entry point ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="icpsk", description=__doc__)
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def problem(p):
        p.add_argument("problem", help="problem file (JSON)")

    def code_source(p):
        p.add_argument("--n-code-len", type=int, help="code length N (enumerate all valid codes)")
        p.add_argument("--codes", help="code list file, or codes inline such as '{x1+x4, x2+x3, x5, x6}'")

    def pair_source(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--pairs", help="file with one (code, mapping) pair per line")
        g.add_argument("--pair", help="a single pair inline")

    p = sub.add_parser("enumerate-codes", help="count and list valid codes of length N")
    problem(p)
    p.add_argument("--n-code-len", type=int, required=True)
    p.add_argument("--list", action="store_true", help="print every code")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("effective-sets", help="effective sets and their 0/1 parts")
    problem(p)
    code_source(p)
    p.add_argument("--receiver", type=int, help="1-based receiver (default: all)")
    p.add_argument("--distinct", action="store_true", help="one row per distinct set")
    p.set_defaults(func=cmd_effective_sets)

    p = sub.add_parser("optimize", help="priority cascade over (code, mapping) pairs")
    problem(p)
    code_source(p)
    p.add_argument("--priority", help="comma-separated 1-based receivers, highest first")
    p.add_argument("--list", action="store_true", help="print every survivor")
    p.add_argument("--out", help="write a JSON dump of the result here")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("icg", help="distance profile and gains of given pairs")
    problem(p)
    pair_source(p)
    p.set_defaults(func=cmd_icg)

    p = sub.add_parser("simulate", help="Monte Carlo error rates over AWGN")
    problem(p)
    pair_source(p)
    p.add_argument("--snr", default="0:2:16", help="Es/N0 in dB: list '0,4,8' or range 'start:step:stop'")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--decoder", choices=[*sorted(DECODERS), "both"], default="ml")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--out", default="sim-out", help="output directory")
    p.set_defaults(func=cmd_simulate)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except DecodabilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DECODABILITY
    except ScaleGuardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ProblemError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
