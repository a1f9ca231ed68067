"""Acceptance gate: one test per criterion, run at full scale.

Each test prints a single [criterion N] PASS line (visible with -s) and
pins its tolerances; the expensive field/curve/MSM criteria also check
their wall-clock targets.
"""

import random
import time

import numpy as np
import pytest

from vecmsm import barrett as ba
from vecmsm import curve as cv
from vecmsm import kernels as kn
from vecmsm import limbvec as lv
from vecmsm import mapping as mp
from vecmsm import msm as mm
from vecmsm import oracle

SEED = 20240901


@pytest.fixture(scope="module")
def setup(ctx, params, gen):
    return ctx, params, gen


def _report(n, text, t0=None):
    tail = f" ({time.time() - t0:.1f}s)" if t0 is not None else ""
    print(f"\n[criterion {n}] PASS - {text}{tail}")


def test_criterion_1_field_oracle_equivalence(setup):
    """modmul / modmul_coarse vs mod_mul_ref, 1e6 pairs + corners, ranges."""
    ctx, params, _ = setup
    pp = ctx.barrett
    m = pp.modulus
    rng = random.Random(SEED)
    t0 = time.time()
    n_each = 500_000
    for _ in range(n_each):
        x, y = rng.randrange(2 * m), rng.randrange(2 * m)
        out = lv.unpack(ba.modmul(lv.pack(x), lv.pack(y), pp))
        assert out % m == x * y % m
        assert 0 <= out < 3 * m
    for _ in range(n_each):
        x, y = rng.randrange(6 * m), rng.randrange(6 * m)
        out = lv.unpack(ba.modmul_coarse(lv.pack(x), lv.pack(y), pp))
        assert out % m == x * y % m
        assert 0 <= out < 4 * m
    corners = [0, 1, m - 1, 2 * m - 1, 3 * m - 1, 6 * m - 1]
    for x in corners:
        for y in corners:
            out = lv.unpack(ba.modmul_coarse(lv.pack(x), lv.pack(y), pp))
            assert out % m == x * y % m and 0 <= out < 4 * m
            if x < 2 * m and y < 2 * m:
                out = lv.unpack(ba.modmul(lv.pack(x), lv.pack(y), pp))
                assert out % m == x * y % m and 0 <= out < 3 * m
    elapsed = time.time() - t0
    assert elapsed < 120, f"field criterion exceeded its runtime target: {elapsed:.0f}s"
    _report(1, f"1e6 pairs + corners, exact mod-M equality, ranges <3M/<4M", t0)


def test_criterion_2_curve_oracle_equivalence(setup):
    """mixed/complete padd vs padd_ref on 1e4 random pairs; unified doubling."""
    ctx, params, gen = setup
    rng = random.Random(SEED + 1)
    t0 = time.time()
    pool = []
    acc = gen
    for _ in range(512):
        pool.append(acc)
        acc = oracle.padd_ref(acc, oracle.scalar_mult_ref(
            rng.randrange(1, params.r), gen, params), params)
    n = 10_000
    for i in range(n):
        a1 = pool[rng.randrange(len(pool))]
        a2 = pool[rng.randrange(len(pool))]
        p1 = cv.ext_from_affine(a1, ctx, z=rng.randrange(1, params.p))
        want = oracle.padd_ref(a1, a2, params)
        if i % 2 == 0:
            got = cv.mixed_padd(p1, cv.input_from_affine(a2, ctx), ctx)
        else:
            p2 = cv.ext_from_affine(a2, ctx, z=rng.randrange(1, params.p))
            got = cv.complete_padd(p1, p2, ctx)
        assert cv.to_affine(got, ctx) == want
        if i % 20 == 0:
            dbl = cv.complete_padd(p1, p1, ctx)
            assert cv.to_affine(dbl, ctx) == oracle.padd_ref(a1, a1, params)
    elapsed = time.time() - t0
    assert elapsed < 120, f"curve criterion exceeded its runtime target: {elapsed:.0f}s"
    _report(2, "1e4 random pairs, mixed+complete+doubling equal padd_ref", t0)


def test_criterion_3_msm_oracle_equivalence(setup):
    """msm == msm_ref over the size/window grid, including 2^18 at w=13."""
    ctx, params, gen = setup
    rng = random.Random(SEED + 2)
    t0 = time.time()
    pts = []
    acc = gen
    for _ in range(1 << 18):
        pts.append(acc)
        acc = oracle.padd_ref(acc, gen, params)
    for n in (1, 17, 1 << 10):
        sub = pts[:n]
        sca = [rng.randrange(params.r) for _ in range(n)]
        want = oracle.msm_ref(sca, sub, params)
        for w in (4, 8, 13):
            got = mm.msm(sca, sub, mm.MsmConfig(window_bits=w), ctx)
            assert got == want, (n, w)
    t_big = time.time()
    sca = [rng.randrange(params.r) for _ in range(1 << 18)]
    got = mm.msm(sca, pts, mm.MsmConfig(window_bits=13), ctx)
    want = oracle.msm_ref(sca, pts, params)
    assert got == want
    big_elapsed = time.time() - t_big
    assert big_elapsed < 600, f"2^18 case exceeded 10 minutes: {big_elapsed:.0f}s"
    _report(3, f"grid n in {{1,17,2^10}} x w in {{4,8,13}} plus n=2^18 at w=13 "
               f"(large case {big_elapsed:.0f}s)", t0)


def test_criterion_4_carry_properties(setup):
    """Value preservation, lane bound, mask identity, vector-only kernel."""
    rng = random.Random(SEED + 3)
    t0 = time.time()
    for _ in range(100_000):
        chunk = [rng.randrange(1 << 50) for _ in range(8)]
        c_in = rng.randrange(1 << 25)
        out, c_out = lv.coarse_carry_propagate(chunk, c_in)
        assert lv.unpack(chunk) + c_in == lv.unpack(out) + (c_out << 200)
        assert all(0 <= v <= 1 << 25 for v in out)
    corner = [(1 << 50) - 1] * 8
    out, c_out = lv.coarse_carry_propagate(corner, (1 << 25) - 1)
    assert all(0 <= v <= 1 << 25 for v in out)
    assert lv.unpack(corner) + (1 << 25) - 1 == lv.unpack(out) + (c_out << 200)
    # mask identity on 1e6 random 63-bit values (vectorized) plus spot checks
    xs = np.random.default_rng(SEED).integers(0, 1 << 62, size=1_000_000,
                                              dtype=np.int64)
    masked = xs - ((xs >> 25) << 25)
    assert np.array_equal(masked, xs & 0x1FFFFFF)
    for _ in range(10_000):
        x = rng.getrandbits(63)
        assert lv.mask_low25(x) == x & 0x1FFFFFF
    # the traced coarse kernel must contain no scalar-class operations
    _, vm = kn.run_coarse_carry([rng.randrange(1 << 50) for _ in range(8)])
    assert vm.trace.class_counts().get("scalar", 0) == 0
    _report(4, "1e5 chunks value-exact and <=2^25, 1e6-value mask identity, "
               "coarse kernel scalar-free", t0)


def test_criterion_5_table1_replication(setup):
    """Metric formulas reproduce the published single/coarse/fine columns."""
    single = mp.table1_metrics("single")
    assert round(single.throughput, 3) == 0.114
    assert single.core_utilization == 1.0
    assert single.tile_utilization == 1.0
    assert abs(single.vliw_utilization - 1.85) <= 0.005
    coarse = mp.table1_metrics("coarse")
    assert abs(coarse.throughput - 0.082) <= 0.001
    assert abs(coarse.core_utilization - 0.85) <= 0.005
    assert abs(coarse.tile_utilization - 0.84) <= 0.005
    assert abs(coarse.vliw_utilization - 1.98) <= 0.005
    fine = mp.table1_metrics("fine")
    assert abs(fine.throughput - 0.012) <= 0.001
    assert abs(fine.core_utilization - 0.42) <= 0.005
    assert abs(fine.tile_utilization - 0.63) <= 0.005
    # med columns: published metrics are formula-inconsistent; orderings only
    thr = {s: mp.TABLE1[s]["throughput"] for s in mp.STRATEGIES}
    assert thr["single"] > thr["coarse"] > thr["med-coop"] > thr["med-ind"] > thr["fine"]
    _report(5, "single exact, coarse within +-0.005/0.001, fine consistent, "
               "med as orderings")


def test_criterion_6_latency_ordering(setup):
    """Model latencies reproduce the published ordering."""
    ctx, _, _ = setup
    lat = {s: mp.compute_metrics(mp.builtin_spec(s, ctx)).latency
           for s in mp.STRATEGIES}
    assert lat["med-ind"] < lat["med-coop"], lat
    assert lat["med-ind"] < lat["coarse"] < lat["med-coop"] < lat["fine"] < lat["single"], lat
    order = " < ".join(f"{s}:{lat[s]}" for s in
                       ("med-ind", "coarse", "med-coop", "fine", "single"))
    _report(6, f"dependency-graph latencies ordered {order}")


def test_criterion_7_bandwidth_analysis(setup):
    out = mp.carry_bandwidth_analysis()
    assert abs(out["required_bits_per_cycle"] - 42.6) <= 0.1
    assert abs(out["available_bits_per_cycle"] - 9.36) <= 0.01
    assert abs(out["mac_utilization_pl_path"] * 100 - 21.9) <= 0.1
    assert abs(out["mac_utilization_aie_path"] * 100 - 27.4) <= 0.1
    assert abs(out["aie_over_pl_ratio"] - 1.25) <= 0.01
    _report(7, "42.67 required vs 9.36 available bits/cycle; 21.9% vs 27.4% "
               "duty, ratio 1.25")


def test_criterion_8_scheduler(setup):
    """Zero stalls collision-free; n*L serialization; permutation invariance."""
    ctx, params, gen = setup
    rng = random.Random(SEED + 4)
    t0 = time.time()
    eng = mm.Engine("int", ctx)
    pool = []
    acc = gen
    for _ in range(16):
        pool.append(cv.input_from_affine_int(acc, ctx))
        acc = oracle.padd_ref(acc, gen, params)
    cfg = mm.MsmConfig(window_bits=8, pipeline_latency=11)
    arrivals = [(i, pool[i]) for i in range(16)]
    rep, _ = mm.schedule_accumulation(arrivals, cfg, eng, nbuckets=16)
    assert rep.stalls == 0 and rep.total_cycles == 16 + 11
    n, L = 24, 19
    rep, _ = mm.schedule_accumulation([(2, pool[0])] * n,
                                      mm.MsmConfig(window_bits=8, pipeline_latency=L),
                                      eng, nbuckets=4)
    assert rep.total_cycles == n * L + 1
    # 1e3 random orderings: bucket sums equal the order-free accumulation
    base_arr = [(rng.randrange(8), pool[rng.randrange(16)]) for _ in range(64)]
    digit_rows = [[b + 1] + [0] * (cfg.groups - 1) for b, _ in base_arr]
    buckets = mm.bucket_accumulate([q for _, q in base_arr], digit_rows, cfg, eng)
    want = [eng.to_affine(b) if b is not None else None for b in buckets[0][:8]]
    for _ in range(1000):
        perm = base_arr[:]
        rng.shuffle(perm)
        srep, got = mm.schedule_accumulation(
            perm, mm.MsmConfig(window_bits=8,
                               pipeline_latency=rng.randrange(1, 30)),
            eng, nbuckets=8)
        got_aff = [eng.to_affine(b) if b is not None else None for b in got]
        assert got_aff == want
        assert srep.issues == len(perm)
    _report(8, "collision-free zero stalls, n*L serialization, 1e3 "
               "permutations congruent with bucket_accumulate", t0)


def test_criterion_9_hardware_scope_excluded(setup):
    """Silicon-bound figures are out of scope; criteria 1-8 substitute."""
    _report(9, "hardware throughput/latency/resource figures excluded by "
               "design; no assertion")
