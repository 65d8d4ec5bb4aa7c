"""Command-line entry point: ``kzred {reduce,svp,bench,example}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from . import bench, intlat, kz, svp
from .errors import ConfigInvalid, KzredError
from .lll import is_lll_reduced, lll_reduce
from .matcore import cond2, qr_factorize
from .textio import read_matrix, write_int_matrix, write_matrix

EXIT_CONFIG = 2
EXIT_FAILURE = 1


def _n_values(spec: str) -> list[int]:
    """Parse ``2:2:20`` (start:step:stop, inclusive), ``4:8`` or ``2,4,6``."""
    try:
        if ":" in spec:
            parts = [int(p) for p in spec.split(":")]
            if len(parts) == 2:
                start, step, stop = parts[0], 1, parts[1]
            elif len(parts) == 3:
                start, step, stop = parts
            else:
                raise ValueError
            if step < 1:
                raise ValueError
            return list(range(start, stop + 1, step))
        return [int(p) for p in spec.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {spec!r}") from None


def _trace_lines(res: kz.KzResult) -> list[str]:
    out = [f"{'step':>4} {'max|v|':>14} {'skipped':>8} {'cond(R[k:,k:])':>16}"]
    for s in res.per_step:
        c = "-" if s.cond is None else f"{s.cond:.3g}"
        out.append(f"{s.k + 1:>4} {s.max_entry:>14} {str(s.skipped).lower():>8} {c:>16}")
    return out


def cmd_reduce(args) -> int:
    a = read_matrix(args.input)
    _, r = qr_factorize(a)
    if args.alg == "lll":
        qrz = lll_reduce(r, args.delta)
        r_bar, z, res = qrz.R_bar, qrz.Z, None
    else:
        res = kz.ALGORITHMS[args.alg](r, args.delta, trace=args.trace)
        r_bar, z = res.R_bar, res.Z
    if args.out_r:
        write_matrix(r_bar, args.out_r)
    if args.out_z:
        write_int_matrix(z, args.out_z)
    if not args.out_r:
        write_matrix(r_bar, sys.stdout)
    if not args.out_z:
        if not args.out_r:
            sys.stdout.write("\n")
        write_int_matrix(z, sys.stdout)
    if args.trace and res is not None:
        print("\n".join(_trace_lines(res)), file=sys.stderr)
    return 0


def cmd_svp(args) -> int:
    a = read_matrix(args.input)
    _, r = qr_factorize(a)
    if args.brute_box is not None:
        sol = svp.brute_force_svp(r, args.brute_box)
        x, nodes = sol.x, sol.nodes
    else:
        res = svp.lll_aided_svp(r, args.delta)
        x, nodes = svp.normalize_sign(res.x), res.nodes
    norm = svp.lattice_norm(r, x)
    if args.json:
        print(json.dumps({"x": [str(int(v)) for v in x], "norm": norm, "nodes": nodes}))
    else:
        print("x = " + " ".join(str(int(v)) for v in x))
        print(f"norm = {norm:.17g}")
        print(f"nodes = {nodes}")
    return 0


def cmd_bench(args) -> int:
    cfg = bench.BenchConfig(
        case=args.case,
        n_values=args.n,
        trials=args.trials,
        seed=args.seed,
        timeout=args.timeout,
        delta=args.delta,
        algorithms=[s.strip() for s in args.algs.split(",") if s.strip()],
        jobs=args.jobs,
        path=args.input,
    )
    cfg.validate()
    records = bench.run_benchmark(cfg)
    bench.write_csv(records, args.out or sys.stdout)
    for alg in sorted(set(cfg.algorithms)):
        mean = bench.mean_seconds(records, alg, cfg.timeout)
        n_to = sum(r.status == "timeout" and r.algorithm == alg for r in records)
        print(f"{alg}: mean {mean:.6f}s, timeouts {n_to}", file=sys.stderr)
    return 0


def cmd_example(args) -> int:
    a = bench.paper_example()
    print("A =")
    print(np.array2string(a, precision=4, suppress_small=True))
    print(f"cond2(A) = {cond2(a):.3g}\n")
    _, r = qr_factorize(a)
    rows = []
    for name in ("kz-baseline", "kz-modified"):
        res = kz.ALGORITHMS[name](r, args.delta, trace=True)
        print(f"== {name}")
        for s in res.per_step:
            print(f"  step {s.k + 1}: v = [{', '.join(str(int(t)) for t in s.vector)}]")
        print("\n".join("  " + ln for ln in _trace_lines(res)))
        print("  R_bar =")
        text = np.array2string(res.R_bar, precision=4, suppress_small=True)
        print("\n".join("  " + ln for ln in text.splitlines()))
        rows.append(
            (
                name,
                res.expansions,
                res.max_entry,
                intlat.det_exact(res.Z),
                is_lll_reduced(res.R_bar, args.delta),
                kz.is_kz_reduced(res.R_bar),
            )
        )
        print()
    print(f"{'algorithm':<12} {'expansions':>10} {'max|v|':>14} {'det Z':>6} {'LLL':>6} {'KZ':>6}")
    for name, e, m, d, l, k in rows:
        print(f"{name:<12} {e:>10} {m:>14} {d:>6} {str(l).lower():>6} {str(k).lower():>6}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kzred", description="KZ and LLL lattice reduction")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("reduce", help="reduce the basis in a matrix file")
    r.add_argument("--alg", choices=["kz-baseline", "kz-modified", "lll"], default="kz-modified")
    r.add_argument("--input", required=True)
    r.add_argument("--delta", type=float, default=1.0)
    r.add_argument("--trace", action="store_true", help="per-step log on stderr")
    r.add_argument("--out-r", help="write R_bar here instead of stdout")
    r.add_argument("--out-z", help="write Z here instead of stdout")
    r.set_defaults(func=cmd_reduce)

    s = sub.add_parser("svp", help="shortest vector of the lattice in a matrix file")
    s.add_argument("--input", required=True)
    s.add_argument("--delta", type=float, default=1.0)
    s.add_argument("--brute-box", type=int, help="use the exhaustive box search instead")
    s.add_argument("--json", action="store_true", help="single-line JSON output")
    s.set_defaults(func=cmd_svp)

    b = sub.add_parser("bench", help="benchmark the KZ algorithms and write CSV")
    b.add_argument("--case", choices=list(bench.CASES), required=True)
    b.add_argument("--input", help="matrix file for --case file")
    b.add_argument("--n", type=_n_values, default=[2, 4, 6, 8, 10])
    b.add_argument("--trials", type=int, default=200)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--timeout", type=float, default=60.0)
    b.add_argument("--delta", type=float, default=1.0)
    b.add_argument("--algs", default="kz-baseline,kz-modified")
    b.add_argument("--out")
    b.add_argument("--jobs", type=int, default=1)
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("example", help="run both algorithms on the built-in 5x5 example")
    e.add_argument("--delta", type=float, default=1.0)
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigInvalid, OSError) as exc:
        print(f"kzred: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except KzredError as exc:
        print(f"kzred: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    except ValueError as exc:
        print(f"kzred: bad input: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
