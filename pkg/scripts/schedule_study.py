#!/usr/bin/env python3
"""Bucket-collision study for the accumulation pipeline schedule.

Sweeps bucket counts for a fixed arrival stream and reports stall
fractions and deferral-window depths; reproduces the intuition that a few
hundred buckets absorb a 260-cycle adder latency almost completely.
"""

import argparse
import random

from vecmsm import msm as mm
from vecmsm import oracle
from vecmsm.curve import input_from_affine_int, make_context


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--arrivals", type=int, default=1 << 14)
    ap.add_argument("--latency", type=int, default=260)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    ctx = make_context()
    rng = random.Random(args.seed)
    g = oracle.generator(ctx.curve)
    q = input_from_affine_int(g, ctx)

    print(f"arrivals={args.arrivals} latency={args.latency}")
    print(f"{'buckets':>8} {'cycles':>10} {'stalls':>8} {'stall%':>7} "
          f"{'max_fifo':>9} {'issue_util':>10}")
    for nbuckets in (1 << 4, 1 << 6, 1 << 8, 1 << 10, 1 << 13):
        arrivals = [(rng.randrange(nbuckets), q) for _ in range(args.arrivals)]
        cfg = mm.MsmConfig(window_bits=13, pipeline_latency=args.latency)
        rep, _ = mm.schedule_accumulation(arrivals, cfg, nbuckets=nbuckets,
                                          ctx=ctx)
        frac = rep.stalls / rep.total_cycles
        print(f"{nbuckets:>8} {rep.total_cycles:>10} {rep.stalls:>8} "
              f"{100 * frac:>6.2f} {rep.max_fifo_depth:>9} "
              f"{rep.issue_utilization:>10.3f}")


if __name__ == "__main__":
    main()
