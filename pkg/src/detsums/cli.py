"""Command line driver: prime scans to CSV, plus calibration management.

One kind per run, one CSV schema per kind:
  s, u, t_abs, t_n, de_moment -> p,d,N,sum_kind,re_value,im_value,abs_value,normalized,wall_ms
  delta_profile               -> N,delta,count
  census                      -> p,n_total,n_square,n_nonsquare_invertible,ratio
  nonresidue                  -> p,z_p,kappa_empirical,X,count,density
  sift                        -> N,x,y,r,size
Exit codes: 0 success, 2 validation problem, 3 internal invariant violation.
"""

import argparse
import functools
import json
import math
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import resources

from . import __version__, mat2, residues, sifter, sums
from .characters import WeightSeq, de_moment, make_character
from .errors import DetsumsError, InternalInvariantViolation
from .fp_arith import is_prime, make_field

SUM_KINDS = ("s", "u", "t_abs", "t_n", "de_moment")
ALL_KINDS = SUM_KINDS + ("delta_profile", "census", "nonresidue", "sift")

HEADERS = {
    "sums": ["p", "d", "N", "sum_kind", "re_value", "im_value", "abs_value", "normalized", "wall_ms"],
    "delta_profile": ["N", "delta", "count"],
    "census": ["p", "n_total", "n_square", "n_nonsquare_invertible", "ratio"],
    "nonresidue": ["p", "z_p", "kappa_empirical", "X", "count", "density"],
    "sift": ["N", "x", "y", "r", "size"],
}


class ValidationError(DetsumsError):
    """Bad flag combination; maps to exit code 2."""


def _parse_int_list(text):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _collect_primes(args):
    ps = []
    if args.p:
        ps.extend(_parse_int_list(args.p))
    if args.p_range:
        try:
            lo, hi = (int(tok) for tok in args.p_range.split(":"))
        except ValueError:
            raise ValidationError("--p-range wants LO:HI, got %r" % args.p_range)
        ps.extend(int(q) for q in sifter.primes_upto(hi) if q >= lo)
    ps = sorted(set(ps))
    for p in ps:
        if p < 3 or not is_prime(p):
            raise ValidationError("p=%d is not an odd prime" % p)
    return ps


@functools.lru_cache(maxsize=8)
def _field(p):
    return make_field(p)


def _signs(indices, seed_parts):
    rng = random.Random("|".join(str(s) for s in seed_parts))
    return WeightSeq({i: float(rng.choice((-1, 1))) for i in indices})


def _fmt(x):
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _run_task(task):
    """Compute one task tuple into CSV rows; must stay picklable for workers."""
    kind = task[0]
    if kind in ("s", "u", "t_n"):
        _, p, d, N, seed = task
        F = _field(p)
        chi = make_character(F, d)
        t0 = time.perf_counter()
        if kind == "s":
            val = sums.s_sum_binned(chi, N).value()
        elif kind == "u":
            alpha = _signs(range(1, N + 1), (seed, "u-alpha", p, d, N))
            beta = _signs(range(1, N + 1), (seed, "u-beta", p, d, N))
            val = sums.u_sum(chi, alpha, beta, N)
        else:
            val = complex(sums.t_n_sum(chi, N), 0.0)
        ms = (time.perf_counter() - t0) * 1000.0
        return [[p, d, N, kind, _fmt(val.real), _fmt(val.imag), _fmt(abs(val)), _fmt(abs(val) / N**4), "%.3f" % ms]]
    if kind == "t_abs":
        _, p, d, (A, B, C), n_shifts, seed = task
        F = _field(p)
        chi = make_character(F, d)
        rng = random.Random("|".join(str(s) for s in (seed, "t-shifts", p, d, A, B, C)))
        shifts = sorted(rng.sample(range(1, p), min(n_shifts, p - 1)))
        alpha = _signs(shifts, (seed, "t-alpha", p, d, A, B, C))
        t0 = time.perf_counter()
        val = sums.t_abs_sum(chi, A, B, C, shifts, alpha)
        ms = (time.perf_counter() - t0) * 1000.0
        n_col = A * B * C
        return [[p, d, n_col, kind, _fmt(val), _fmt(0.0), _fmt(abs(val)), _fmt(abs(val) / n_col**4), "%.3f" % ms]]
    if kind == "de_moment":
        _, p, d, n_shifts, nu, seed = task
        F = _field(p)
        chi = make_character(F, d)
        rng = random.Random("|".join(str(s) for s in (seed, "dm-shifts", p, d, n_shifts, nu)))
        shifts = sorted(rng.sample(range(1, p), min(n_shifts, p - 1)))
        alpha = _signs(shifts, (seed, "dm-alpha", p, d, n_shifts, nu))
        t0 = time.perf_counter()
        val = de_moment(chi, shifts, alpha, nu)
        ms = (time.perf_counter() - t0) * 1000.0
        n_col = len(shifts)
        return [[p, d, n_col, kind, _fmt(val), _fmt(0.0), _fmt(abs(val)), _fmt(abs(val) / n_col**4), "%.3f" % ms]]
    if kind == "delta_profile":
        _, N = task
        prof = sums.delta_profile(N)
        return [[N, delta, prof.count(delta)] for delta in prof.deltas() if prof.count(delta)]
    if kind == "census":
        _, p, bound = task
        cen = mat2.census(_field(p), bound)
        return [[cen.p, cen.n_total, cen.n_square, cen.n_nonsquare_invertible, _fmt(cen.ratio)]]
    if kind == "nonresidue":
        _, p, x_limit = task
        X = x_limit if x_limit > 0 else max(2, math.isqrt(p))
        X = min(X, p - 1)
        rep = residues.nonresidue_report(_field(p), X)
        return [[rep.p, rep.z_p, _fmt(rep.kappa_empirical), rep.X, rep.count, _fmt(rep.count / rep.X)]]
    if kind == "sift":
        _, N, x, y, multiplicity = task
        prof = sifter.sift(N, x, y, multiplicity)
        return [[prof.N, _fmt(prof.x), _fmt(prof.y), r, size] for r, size in enumerate(prof.sizes)]
    raise ValidationError("unknown kind %r" % (kind,))


def _build_tasks(args):
    kind = args.kind
    n_grid = _parse_int_list(args.n_grid) if args.n_grid else []
    if kind == "sift":
        if not n_grid:
            raise ValidationError("sift needs --n-grid")
        tasks = []
        for N in n_grid:
            x = args.sift_x
            y = args.sift_y if args.sift_y > 0 else max(x, math.isqrt(N))
            tasks.append(("sift", N, x, y, not args.distinct))
        return tasks, "sift"
    if kind == "delta_profile":
        if not n_grid:
            raise ValidationError("delta_profile needs --n-grid")
        return [("delta_profile", N) for N in n_grid], "delta_profile"

    ps = _collect_primes(args)
    if not ps:
        raise ValidationError("kind %s needs --p or --p-range" % kind)
    if kind == "census":
        return [("census", p, args.census_bound) for p in ps], "census"
    if kind == "nonresidue":
        return [("nonresidue", p, args.x_limit) for p in ps], "nonresidue"

    d = args.order
    for p in ps:
        if d < 2 or (p - 1) % d != 0:
            raise ValidationError("order d=%d does not divide p-1 for p=%d" % (d, p))
    if kind == "de_moment":
        return [("de_moment", p, d, args.shift_count, args.nu, args.seed) for p in ps], "sums"
    if kind == "t_abs":
        abc = tuple(_parse_int_list(args.abc))
        if len(abc) != 3:
            raise ValidationError("--abc wants three comma-separated values")
        tasks = []
        for p in ps:
            if abc[0] * abc[1] * abc[2] >= p:
                raise ValidationError("t_abs needs A*B*C < p, got %s with p=%d" % (list(abc), p))
            tasks.append(("t_abs", p, d, abc, args.shift_count, args.seed))
        return tasks, "sums"
    if not n_grid:
        raise ValidationError("kind %s needs --n-grid" % kind)
    tasks = []
    for p in ps:
        for N in n_grid:
            if not 1 <= N < p:
                raise ValidationError("need 1 <= N < p, got N=%d with p=%d" % (N, p))
            if kind == "t_n" and N**3 >= p:
                raise ValidationError("t_n needs N^3 < p, got N=%d with p=%d" % (N, p))
            tasks.append((kind, p, d, N, args.seed))
    return tasks, "sums"


def default_calibration_path():
    return str(resources.files("detsums") / "data" / "calibration.txt")


def _cmd_scan(args):
    tasks, schema = _build_tasks(args)
    t0 = time.perf_counter()
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            chunks = list(ex.map(_run_task, tasks))
    else:
        chunks = [_run_task(t) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    wall = time.perf_counter() - t0

    lines = [",".join(HEADERS[schema])]
    lines.extend(",".join(str(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)

    manifest = {
        "kind": args.kind,
        "config": {k: v for k, v in vars(args).items() if k != "func"},
        "version": __version__,
        "python": sys.version.split()[0],
        "rows": len(rows),
        "wall_s": round(wall, 3),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    if args.out == "-":
        sys.stderr.write(json.dumps(manifest) + "\n")
    else:
        with open(args.out + ".manifest.json", "w") as fh:
            json.dump(manifest, fh, indent=2)
            fh.write("\n")
    return 0


def _cmd_calibrate(args):
    path = args.calibration_file or default_calibration_path()
    fresh = sifter.measure_constants()
    try:
        old = sifter.read_calibration(path)
    except FileNotFoundError:
        old = {}
    worsened = []
    for name in sorted(fresh):
        if name in old:
            prev, cur = old[name], fresh[name]
            if cur == prev:
                print("%s %r (unchanged)" % (name, cur))
            else:
                rel = (cur - prev) / prev if prev else float("inf")
                print("%s %r -> %r (%+.2f%%)" % (name, prev, cur, 100 * rel))
                if cur > prev * 1.05:
                    worsened.append(name)
        else:
            print("%s %r (new)" % (name, fresh[name]))
    for name in sorted(set(old) - set(fresh)):
        print("%s %r (stale, dropped)" % (name, old[name]))
    if worsened:
        sys.stderr.write("constants worsened by more than 5%%: %s\n" % ", ".join(worsened))
        return 3
    sifter.write_calibration(path, fresh)
    print("wrote %s" % path)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="detsums", description="Exact character-sum and matrix-square experiments over F_p")
    sub = ap.add_subparsers(dest="command", required=True)

    sc = sub.add_parser("scan", help="compute one kind over a prime/N grid, emit CSV")
    sc.add_argument("--kind", required=True, choices=ALL_KINDS)
    sc.add_argument("--p", default="", help="comma-separated primes")
    sc.add_argument("--p-range", default="", help="LO:HI, all primes in the range")
    sc.add_argument("--order", type=int, default=2, help="character order d (default 2, the quadratic character)")
    sc.add_argument("--n-grid", default="", help="comma-separated N values")
    sc.add_argument("--workers", type=int, default=1)
    sc.add_argument("--out", default="-", help="CSV path, - for stdout")
    sc.add_argument("--seed", default="detsums", help="seed string for randomized weights")
    sc.add_argument("--x-limit", type=int, default=0, help="nonresidue count limit X (0: isqrt(p))")
    sc.add_argument("--census-bound", type=int, default=mat2.DEFAULT_CENSUS_BOUND)
    sc.add_argument("--sift-x", type=float, default=2.0)
    sc.add_argument("--sift-y", type=float, default=0.0, help="0 picks isqrt(N)")
    sc.add_argument("--distinct", action="store_true", help="count distinct window primes instead of multiplicity")
    sc.add_argument("--shift-count", type=int, default=8, help="size of the random shift set for t_abs/de_moment")
    sc.add_argument("--nu", type=int, default=2, help="moment index for de_moment")
    sc.add_argument("--abc", default="4,4,4", help="A,B,C box for t_abs")
    sc.set_defaults(func=_cmd_scan)

    ca = sub.add_parser("calibrate", help="measure grid constants, diff and rewrite the calibration file")
    ca.add_argument("--calibration-file", default="", help="target file (default: the packaged one)")
    ca.set_defaults(func=_cmd_calibrate)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalInvariantViolation as exc:
        sys.stderr.write("internal invariant violation: %s\n" % exc)
        return 3
    except DetsumsError as exc:
        sys.stderr.write("error: %s\n" % exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
