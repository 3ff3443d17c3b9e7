"""Command-line front end.

Every subcommand writes JSON records to stdout, one per line, and finishes
with a ``manifest`` record carrying the command line, seed, library
versions and a SHA-256 digest of the preceding records. Exact integers are
written as decimal strings and rationals as ``"p/q"``.

Exit status: 0 on success, 1 on invalid input, 2 when a checked
mathematical property fails.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import os
import platform
import sys
import time
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

import numpy as np
import scipy

from . import __version__, analysis, counting, injection, sweep
from .chains import transition_matrix
from .counting import StepConstraints
from .matroid import check_balanced, pair_verdicts, read_lpm

log = logging.getLogger("catalan_mixing")

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION = 0, 1, 2
JOBS_ENV = "CATALAN_MIXING_JOBS"
CHAINS = ("dyck-rt", "dyck-adj", "basis-exchange", "bernoulli-laplace", "cube")


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational(v) -> str | None:
    if v is None:
        return None
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _parse_index_list(text: str) -> frozenset[int]:
    try:
        return frozenset(int(t) for t in text.replace(",", " ").split())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a list of indices: {text!r}") from exc


class RecordWriter:
    def __init__(self, stream):
        self.stream = stream
        self.digest = hashlib.sha256()

    def emit(self, kind: str, **fields) -> None:
        line = json.dumps({"type": kind, **fields}, sort_keys=True, separators=(",", ":"))
        self.digest.update(line.encode() + b"\n")
        self.stream.write(line + "\n")
        self.stream.flush()

    def manifest(self, argv, seed, started: float) -> None:
        record = {
            "type": "manifest",
            "argv": list(argv),
            "seed": seed,
            "versions": {
                "catalan_mixing": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
                "scipy": scipy.__version__,
            },
            "digest": self.digest.hexdigest(),
            # the only field that varies between identical runs
            "timestamp": {
                "finished": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "wall_time_s": round(time.perf_counter() - started, 3),
            },
        }
        self.stream.write(json.dumps(record, sort_keys=True, separators=(",", ":")) + "\n")


def _load_matroid(path: str):
    try:
        return read_lpm(Path(path).read_text())
    except OSError as exc:
        raise InputError(f"cannot read matroid file {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"bad matroid file {path}: {exc}") from exc


def _kernel(args):
    from .chains import basis_exchange

    if args.chain == "basis-exchange" and args.matroid:
        return basis_exchange(_load_matroid(args.matroid))
    if args.n is None:
        raise InputError("--n is required")
    if args.n < 1:
        raise InputError("--n must be at least 1")
    return analysis.kernel_for(args.chain, args.n)


def _write_csv(path: str | None, text: str) -> None:
    if path:
        Path(path).write_text(text)
        log.info("wrote %s", path)


def cmd_count(args, out: RecordWriter) -> int:
    M = _load_matroid(args.matroid)
    try:
        c = StepConstraints(args.force_up, args.force_down)
        n = counting.count_between(M.lower, M.upper, c)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    out.emit(
        "count", lower=str(M.lower), upper=str(M.upper),
        forced_up=sorted(c.forced_up), forced_down=sorted(c.forced_down), count=str(n),
    )
    return EXIT_OK


def cmd_sample(args, out: RecordWriter) -> int:
    M = _load_matroid(args.matroid)
    try:
        c = StepConstraints(args.force_up, args.force_down)
        paths = counting.sample_many(M.lower, M.upper, c, num=args.num, seed=args.seed)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    for k, p in enumerate(paths):
        out.emit("sample", index=k, path=str(p))
    status = EXIT_OK
    for p in paths:
        if not (M.contains(p) and c.admits(p.steps)):
            log.error("sample %s violates the bounds or constraints", p)
            status = EXIT_VIOLATION
    return status


def cmd_check_nc(args, out: RecordWriter) -> int:
    M = _load_matroid(args.matroid)
    verdicts = pair_verdicts(M)
    for v in verdicts:
        out.emit(
            "pair", e=v.e, f=v.f, both=str(v.both), neither=str(v.neither),
            e_only=str(v.e_only), f_only=str(v.f_only), slack=str(v.slack), holds=v.holds,
        )
    nc = all(v.holds for v in verdicts)
    report = check_balanced(M, minor_budget=args.minors, seed=args.seed)
    out.emit(
        "balance", lower=str(M.lower), upper=str(M.upper), negatively_correlated=nc,
        minors_checked=report.minors_checked, pairs_checked=report.pairs_checked,
        violations=[list(w) for w in report.violations[:20]], balanced=report.balanced,
    )
    return EXIT_OK if nc and report.balanced else EXIT_VIOLATION


def cmd_verify_injection(args, out: RecordWriter) -> int:
    if args.matroid:
        M = _load_matroid(args.matroid)
        rep = injection.verify_matroid(M)
        out.emit(
            "injection", lower=str(M.lower), upper=str(M.upper),
            domain=str(rep.domain_size), image=str(rep.image_size), codomain=str(rep.codomain_size),
            cases={k: str(v) for k, v in rep.case_counts.items()}, case2_below=str(rep.case2_below),
            violations=[list(v) for v in rep.violations[:20]], injective=rep.injective,
        )
        return EXIT_OK if rep.injective else EXIT_VIOLATION
    if args.sweep_m < 1:
        raise InputError("--sweep-m must be at least 1")
    total = sweep.InjectionSweep()
    for m in range(1, args.sweep_m + 1):
        log.info("sweeping m = %d", m)
        rep = sweep.injection_sweep(m, m_min=m, jobs=args.jobs)
        out.emit(
            "injection-sweep-m", m=m, matroids=rep.matroids, domain=str(rep.domain),
            image=str(rep.image), codomain=str(rep.codomain),
            cases={k: str(v) for k, v in rep.cases.items()}, case2_below=str(rep.case2_below),
            violations=str(rep.violations), injective=rep.ok,
        )
        total.add(rep)
    out.emit(
        "injection-summary", m_max=args.sweep_m, matroids=total.matroids, domain=str(total.domain),
        image=str(total.image), violations=str(total.violations),
        witnesses=[list(w) for w in total.witnesses[:20]], injective=total.ok,
    )
    return EXIT_OK if total.ok else EXIT_VIOLATION


def cmd_spectral(args, out: RecordWriter) -> int:
    k = _kernel(args)
    T = transition_matrix(k, cap=args.cap)
    rep = analysis.spectral_gap(T, kernel=k)
    out.emit(
        "spectral", chain=k.variant.value, lower=str(k.lower), upper=str(k.upper),
        states=rep.num_states, gap=repr(rep.gap), gap_exact=_rational(rep.gap_exact),
        jerrum_son_lower=_rational(rep.jerrum_son_lower), test_fn_upper=_rational(rep.test_fn_upper),
        dyck_upper=_rational(rep.dyck_upper), eigen_min=repr(rep.eigen_min),
        log_sobolev_lower=_rational(analysis.log_sobolev_lower_bound(k)), consistent=rep.consistent,
    )
    ok = rep.consistent
    if rep.dyck_upper is not None:
        ok &= rep.gap <= float(rep.dyck_upper) + rep.tolerance
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_mixing(args, out: RecordWriter) -> int:
    k = _kernel(args)
    T = transition_matrix(k, cap=args.cap)
    mix = analysis.exact_mixing_time(T, args.eps)
    out.emit(
        "mixing", chain=k.variant.value, lower=str(k.lower), upper=str(k.upper), states=len(T),
        epsilon=_rational(mix.epsilon), t_mix=mix.t_mix, error_budget=repr(float(mix.error_budget)),
        tv_curve=[[t, repr(tv)] for t, tv in mix.tv_curve],
    )
    _write_csv(args.csv, mix.to_csv())
    curve = [tv for _, tv in mix.tv_curve]
    monotone = all(b <= a + mix.error_budget for a, b in zip(curve, curve[1:]))
    return EXIT_OK if monotone else EXIT_VIOLATION


def cmd_scaling(args, out: RecordWriter) -> int:
    if args.n_min < 1 or args.n_max < args.n_min:
        raise InputError("need 1 <= --n-min <= --n-max")
    table = analysis.scaling_experiment(args.chain, range(args.n_min, args.n_max + 1), args.eps)
    status = EXIT_OK
    for r in table.rows:
        out.emit(
            "scaling-row", chain=args.chain, n=r.n, states=r.states, gap=repr(r.gap),
            jerrum_son_lower=_rational(r.jerrum_son_lower), four_over_n=_rational(r.dyck_upper),
            t_mix=r.t_mix,
        )
        if r.jerrum_son_lower is not None and r.gap < float(r.jerrum_son_lower) - 1e-9:
            status = EXIT_VIOLATION
    out.emit(
        "scaling-summary", chain=args.chain, epsilon=_rational(table.epsilon),
        exponent=None if table.exponent is None else repr(table.exponent),
    )
    _write_csv(args.csv, table.to_csv())
    return status


def build_parser() -> argparse.ArgumentParser:
    default_jobs = int(os.environ.get(JOBS_ENV, "1"))
    parser = _Parser(prog="catalan-mixing", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true", help="progress messages on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=True, jobs=False):
        if seed:
            p.add_argument("--seed", type=int, default=0)
        if jobs:
            p.add_argument("--jobs", type=int, default=default_jobs, help=f"worker processes (env {JOBS_ENV})")

    p = sub.add_parser("count", help="count bases of a lattice path matroid or one of its minors")
    p.add_argument("--matroid", required=True, metavar="FILE")
    p.add_argument("--force-up", type=_parse_index_list, default=frozenset(), metavar="LIST")
    p.add_argument("--force-down", type=_parse_index_list, default=frozenset(), metavar="LIST")
    common(p, seed=False)
    p.set_defaults(func=cmd_count, seed=None)

    p = sub.add_parser("sample", help="exactly uniform random bases")
    p.add_argument("--matroid", required=True, metavar="FILE")
    p.add_argument("--num", type=int, default=1)
    p.add_argument("--force-up", type=_parse_index_list, default=frozenset(), metavar="LIST")
    p.add_argument("--force-down", type=_parse_index_list, default=frozenset(), metavar="LIST")
    common(p)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("check-nc", help="negative correlation and a balance search over minors")
    p.add_argument("--matroid", required=True, metavar="FILE")
    p.add_argument("--minors", type=int, default=1000, metavar="BUDGET")
    common(p)
    p.set_defaults(func=cmd_check_nc)

    p = sub.add_parser("verify-injection", help="audit the correlation injection exhaustively")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matroid", metavar="FILE")
    g.add_argument("--sweep-m", type=int, metavar="M")
    common(p, seed=False, jobs=True)
    p.set_defaults(func=cmd_verify_injection, seed=None)

    for name, func, help_ in (
        ("spectral", cmd_spectral, "spectral gap with bound certificates"),
        ("mixing", cmd_mixing, "exact total-variation mixing time"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--chain", choices=CHAINS, required=True)
        p.add_argument("--n", type=int)
        p.add_argument("--matroid", metavar="FILE", help="basis-exchange only: use this matroid")
        p.add_argument("--cap", type=int, default=20_000, help="maximum number of states")
        if name == "mixing":
            p.add_argument("--eps", type=_parse_fraction, default=Fraction(1, 4))
            p.add_argument("--csv", metavar="FILE", help="also write the TV curve here")
        common(p, seed=False)
        p.set_defaults(func=func, seed=None)

    p = sub.add_parser("scaling", help="gap and mixing time across a range of n")
    p.add_argument("--chain", choices=CHAINS, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--eps", type=_parse_fraction, default=Fraction(1, 4))
    p.add_argument("--csv", metavar="FILE")
    common(p, seed=False)
    p.set_defaults(func=cmd_scaling, seed=None)
    return parser


def main(argv: list[str] | None = None, stdout=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s", stream=sys.stderr,
    )
    started = time.perf_counter()
    out = RecordWriter(stdout)
    try:
        status = args.func(args, out)
    except InputError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    except ValueError as exc:
        log.error("%s", exc)
        return EXIT_INPUT
    out.manifest(["catalan-mixing", *argv], args.seed, started)
    return status


if __name__ == "__main__":
    sys.exit(main())
