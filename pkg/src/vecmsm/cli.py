"""Command-line driver: verify, bench, trace, simulate, msm.

Exit status: 0 success, 1 property/validation failure, 2 usage or parse
errors.  With a fixed --seed every command prints byte-identical output.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass

from . import curve as cv
from . import kernels
from . import mapping as mp
from . import msm as mm
from . import oracle
from . import verify as vf
from .limbvec import pack

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class RunConfig:
    """Flat record of one invocation; a fixed seed makes runs byte-identical."""
    command: str
    seed: int = 0
    iterations: int | None = None
    window: int = 13
    count: int = 1000
    parallelism: int = 1
    format: str = "table"
    check: bool = False
    table1: bool = False
    suite: str = ""
    mode: str = ""
    kernel: str = ""
    strategy: str = ""
    spec: str | None = None
    points: str | None = None
    scalars: str | None = None
    dump: bool = False

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "RunConfig":
        fields = {f for f in cls.__dataclass_fields__}
        return cls(**{k: v for k, v in vars(args).items() if k in fields})


def _emit(rows, fmt):
    """rows: list of (key, value) pairs."""
    if fmt == "kv":
        for k, v in rows:
            print(f"{k}={v}")
    elif fmt == "json-lines":
        print(json.dumps(dict(rows)))
    else:
        width = max(len(k) for k, _ in rows)
        for k, v in rows:
            print(f"{k:<{width}}  {v}")


def cmd_verify(args) -> int:
    if args.suite not in vf.SUITES:
        print(f"unknown suite {args.suite!r}; choose from {sorted(vf.SUITES)}",
              file=sys.stderr)
        return EXIT_USAGE
    iters = args.iterations or vf.DEFAULT_ITERATIONS[args.suite]
    results = vf.SUITES[args.suite](iters, args.seed)
    failed = False
    for r in results:
        status = "pass" if r.ok else "FAIL"
        detail = f" ({r.detail})" if r.detail and not r.ok else ""
        print(f"[{status}] {r.name}: {r.trials - r.failures}/{r.trials}{detail}")
        failed |= not r.ok
    return EXIT_FAIL if failed else EXIT_OK


def _bench_points(ctx, count):
    """Deterministic point pool via an additive chain; cheap at bench scale."""
    g = oracle.generator(ctx.curve)
    step = cv.input_from_affine_int(g, ctx)
    cur = cv.identity_ext_int(ctx)
    pool = []
    for _ in range(min(count, 4096)):
        cur = cv.mixed_padd_int(cur, step, ctx)
        pool.append(cv.to_affine_int(cur, ctx))
    return [pool[i % len(pool)] for i in range(count)]


def _throughput_worker(count: int) -> int:
    """One worker's share of independent mixed additions."""
    ctx = cv.make_context()
    g = oracle.generator(ctx.curve)
    q = cv.input_from_affine_int(g, ctx)
    acc = [cv.identity_ext_int(ctx) for _ in range(64)]
    for i in range(count):
        slot = i % 64
        acc[slot] = cv.mixed_padd_int(acc[slot], q, ctx)
    return count


def cmd_bench(args) -> int:
    ctx = cv.make_context()
    count = args.count
    if count < 1:
        print("count must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    t_start = time.perf_counter()
    pts = _bench_points(ctx, count)
    if args.mode == "padd-throughput":
        workers = max(args.parallelism, 1)
        if workers > 1:
            # data-parallel: the stream splits across worker processes
            import multiprocessing as mp_
            shares = [count // workers + (1 if i < count % workers else 0)
                      for i in range(workers)]
            t0 = time.perf_counter()
            with mp_.Pool(workers) as pool:
                done = sum(pool.map(_throughput_worker, shares))
            elapsed = time.perf_counter() - t0
            assert done == count
        else:
            stream = [cv.input_from_affine_int(p, ctx) for p in pts]
            acc = [cv.identity_ext_int(ctx) for _ in range(64)]
            t0 = time.perf_counter()
            for i, q in enumerate(stream):  # independent accumulators: pipelined shape
                slot = i % 64
                acc[slot] = cv.mixed_padd_int(acc[slot], q, ctx)
            elapsed = time.perf_counter() - t0
        label = "mixed_padd"
    elif args.mode == "padd-latency":
        ext = [cv.ext_from_affine_int(p, ctx) for p in pts]
        chain = cv.identity_ext_int(ctx)
        t0 = time.perf_counter()
        for p in ext:                        # dependent chain: serial shape
            chain = cv.complete_padd_int(chain, p, ctx)
        elapsed = time.perf_counter() - t0
        label = "complete_padd"
        if args.check:
            want = oracle.AffinePoint.identity()
            for p in pts:
                want = oracle.padd_ref(want, p, ctx.curve)
            if cv.to_affine_int(chain, ctx) != want:
                print("serial chain result diverges from the reference fold",
                      file=sys.stderr)
                return EXIT_FAIL
    else:  # msm
        rng = random.Random(args.seed)
        sca = [rng.randrange(ctx.curve.r) for _ in range(count)]
        cfg = mm.MsmConfig(window_bits=args.window)
        t0 = time.perf_counter()
        result = mm.msm(sca, pts, cfg, ctx)
        elapsed = time.perf_counter() - t0
        label = f"msm(w={args.window})"
        if args.check:
            if result != oracle.msm_ref(sca, pts, ctx.curve):
                print("msm result diverges from msm_ref", file=sys.stderr)
                return EXIT_FAIL
    rows = [("mode", label), ("count", count),
            ("elapsed_s", f"{elapsed:.4f}"),
            ("tasks_per_s", f"{count / elapsed:.1f}" if elapsed > 0 else "inf"),
            ("us_per_task", f"{1e6 * elapsed / count:.2f}"),
            ("setup_s", f"{t0 - t_start:.3f}")]
    _emit(rows, args.format)
    return EXIT_OK


TRACE_KERNELS = ("modmul", "modmul-coarse", "mixed-padd", "complete-padd")


def cmd_trace(args) -> int:
    if args.kernel not in TRACE_KERNELS:
        print(f"unknown kernel {args.kernel!r}; choose from {TRACE_KERNELS}",
              file=sys.stderr)
        return EXIT_USAGE
    ctx = cv.make_context()
    m = ctx.modulus
    rng = random.Random(args.seed)
    if args.kernel in ("modmul", "modmul-coarse"):
        bound = 2 * m if args.kernel == "modmul" else 6 * m
        a, b = pack(rng.randrange(bound)), pack(rng.randrange(bound))
        _, vm = kernels.run_modmul(a, b, ctx.barrett)
    else:
        g = oracle.generator(ctx.curve)
        p1 = cv.ext_from_affine(g, ctx, z=rng.randrange(1, m))
        coords = [list(c) for c in (p1.X, p1.Y, p1.T, p1.Z)]
        if args.kernel == "mixed-padd":
            q = cv.input_from_affine(g, ctx)
            _, vm = kernels.run_mixed_padd(coords, [list(c) for c in (q.X, q.Y, q.U)], ctx)
        else:
            _, vm = kernels.run_complete_padd(coords, coords, ctx)
    if args.dump:
        sys.stdout.write(vm.trace.to_text())
        return EXIT_OK
    summary = vm.trace.summary()
    rows = [("kernel", args.kernel)] + sorted(summary.items())
    rows.append(("modmul_subkernels", count_modmul_subkernels(vm.trace)))
    rows.append(("scalar_ops_in_coarse_carry", scalar_ops_in(vm.trace, ".coarse")))
    rows.append(("scalar_ops_in_exact_carry", scalar_ops_in(vm.trace, ".exact")))
    _emit(rows, args.format)
    return EXIT_OK


def count_modmul_subkernels(trace) -> int:
    return len({r.split(".mul_in")[0] for r in trace.regions() if ".mul_in" in r})


def scalar_ops_in(trace, segment: str) -> int:
    return sum(1 for op in trace.ops
               if segment in op.region and op.slot_class == "scalar")


def cmd_simulate(args) -> int:
    if args.table1:
        if args.strategy not in mp.TABLE1:
            print(f"unknown strategy {args.strategy!r}", file=sys.stderr)
            return EXIT_USAGE
        report = mp.table1_metrics(args.strategy)
        _emit(report.as_rows(), args.format)
        return EXIT_OK
    if args.spec:
        try:
            spec = mp.spec_from_text(open(args.spec).read())
        except (OSError, ValueError) as exc:
            print(f"cannot load spec: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        try:
            spec = mp.builtin_spec(args.strategy)
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_USAGE
    violations = mp.validate(spec)
    if violations:
        for v in violations:
            print(f"violation: {v}", file=sys.stderr)
        return EXIT_FAIL
    report = mp.compute_metrics(spec)
    _emit(report.as_rows(), args.format)
    return EXIT_OK


def _parse_points(path):
    pts = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            if line == "identity":
                pts.append(oracle.AffinePoint.identity())
                continue
            try:
                xs, ys = line.split(",")
                pts.append(oracle.AffinePoint(int(xs, 16), int(ys, 16)))
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: malformed point line") from exc
    return pts


def _parse_scalars(path):
    out = []
    with open(path) as fh:
        for ln, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line:
                continue
            try:
                out.append(int(line, 16))
            except ValueError as exc:
                raise ValueError(f"{path}:{ln}: malformed scalar line") from exc
    return out


def format_point(pt: oracle.AffinePoint) -> str:
    if pt.is_identity:
        return "identity"
    return f"{pt.x:x},{pt.y:x}"


def cmd_msm(args) -> int:
    try:
        pts = _parse_points(args.points)
        sca = _parse_scalars(args.scalars)
    except (OSError, ValueError) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    if len(pts) != len(sca):
        print(f"length mismatch: {len(pts)} points vs {len(sca)} scalars",
              file=sys.stderr)
        return EXIT_USAGE
    ctx = cv.make_context()
    cfg = mm.MsmConfig(window_bits=args.window)
    try:
        result = mm.msm(sca, pts, cfg, ctx)
    except ValueError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    print(format_point(result))
    if args.check:
        if result != oracle.msm_ref(sca, pts, ctx.curve):
            print("cross-check against msm_ref FAILED", file=sys.stderr)
            return EXIT_FAIL
        print("cross-check against msm_ref: ok", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="vecmsm",
                                 description="Limb-vector PADD/MSM pipeline tools")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("table", "kv", "json-lines"),
                    default="table")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a randomized property suite")
    v.add_argument("suite")
    v.add_argument("--iterations", type=int, default=None)

    b = sub.add_parser("bench", help="timing harnesses")
    b.add_argument("mode", choices=("padd-throughput", "padd-latency", "msm"))
    b.add_argument("--count", type=int, default=1000)
    b.add_argument("--window", type=int, default=13)
    b.add_argument("--parallelism", type=int, default=1)
    b.add_argument("--check", action="store_true")

    t = sub.add_parser("trace", help="instruction/operation counts for a kernel")
    t.add_argument("kernel")
    t.add_argument("--dump", action="store_true",
                   help="emit the raw trace, one op per line")

    s = sub.add_parser("simulate", help="mapping metrics")
    s.add_argument("strategy", nargs="?", default="coarse")
    s.add_argument("--spec", default=None)
    s.add_argument("--table1", action="store_true")

    m = sub.add_parser("msm", help="multi-scalar multiplication over input files")
    m.add_argument("--points", required=True)
    m.add_argument("--scalars", required=True)
    m.add_argument("--window", type=int, default=13)
    m.add_argument("--check", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    cfg = RunConfig.from_args(args)
    handlers = {"verify": cmd_verify, "bench": cmd_bench, "trace": cmd_trace,
                "simulate": cmd_simulate, "msm": cmd_msm}
    return handlers[cfg.command](cfg)


if __name__ == "__main__":
    sys.exit(main())
