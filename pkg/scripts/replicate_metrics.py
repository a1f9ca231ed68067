#!/usr/bin/env python3
"""Print the metric replication table next to the model-mode numbers.

Replication mode feeds the published cycle-simulation counts through the
metric formulas; model mode rebuilds each strategy from the traced tile
kernels and the dependency-graph latency model.
"""

from vecmsm import mapping as mp
from vecmsm.curve import make_context


def main():
    ctx = make_context()
    header = f"{'strategy':<10} {'mode':<8} {'thr/cyc':>8} {'latency':>8} " \
             f"{'total_i':>8} {'core':>6} {'tile':>6} {'vliw':>6}"
    print(header)
    print("-" * len(header))
    for strategy in mp.STRATEGIES:
        for rep in (mp.table1_metrics(strategy),
                    mp.compute_metrics(mp.builtin_spec(strategy, ctx))):
            lat = "-" if rep.latency is None else rep.latency
            print(f"{rep.strategy:<10} {rep.mode:<8} {rep.throughput:>8.4f} "
                  f"{lat:>8} {rep.total_instructions:>8} "
                  f"{rep.core_utilization:>6.3f} {rep.tile_utilization:>6.3f} "
                  f"{rep.vliw_utilization:>6.3f}")
    print()
    bw = mp.carry_bandwidth_analysis()
    print("carry-propagation bandwidth analysis:")
    for k, v in bw.items():
        print(f"  {k} = {v:.4f}")


if __name__ == "__main__":
    main()
