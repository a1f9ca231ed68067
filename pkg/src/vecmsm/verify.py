"""Randomized property suites driven by the CLI verify command.

Each suite returns PropertyResult records; a nonzero failure count on any
property is a verification failure.  All randomness is drawn from a
seeded generator so runs are reproducible.
"""

import random
from dataclasses import dataclass, field

from . import barrett as ba
from . import curve as cv
from . import limbvec as lv
from . import msm as mm
from . import oracle
from . import schoolbook as sb
from .params import bls12_377


@dataclass
class PropertyResult:
    name: str
    trials: int
    failures: int = 0
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _ctx():
    return cv.make_context(bls12_377())


def suite_field(iterations: int, seed: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    p = bls12_377().p
    res = []
    fails = 0
    for _ in range(iterations):
        a, b, c = (rng.randrange(p) for _ in range(3))
        if oracle.mod_mul_ref(a, b, p) != oracle.mod_mul_ref(b, a, p):
            fails += 1
        if oracle.mod_mul_ref(oracle.mod_mul_ref(a, b, p), c, p) != \
           oracle.mod_mul_ref(a, oracle.mod_mul_ref(b, c, p), p):
            fails += 1
    res.append(PropertyResult("mod_mul commutative+associative", iterations, fails))
    fails = sum(1 for _ in range(iterations)
                if lv.unpack(lv.pack(x := rng.getrandbits(377))) != x)
    res.append(PropertyResult("pack/unpack round trip", iterations, fails))
    return res


def suite_carry(iterations: int, seed: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    res = []
    fails = bound_fails = 0
    for _ in range(iterations):
        chunk = [rng.randrange(1 << 50) for _ in range(8)]
        c_in = rng.randrange(1 << 25)
        out, c_out = lv.coarse_carry_propagate(chunk, c_in)
        if lv.unpack(chunk) + c_in != lv.unpack(out) + (c_out << 200):
            fails += 1
        if any(v > 1 << 25 or v < 0 for v in out):
            bound_fails += 1
    res.append(PropertyResult("coarse carry value preservation", iterations, fails))
    res.append(PropertyResult("coarse carry lane bound", iterations, bound_fails))
    fails = 0
    for _ in range(iterations):
        x = rng.getrandbits(63)
        if lv.mask_low25(x) != x & 0x1FFFFFF:
            fails += 1
    res.append(PropertyResult("mask-via-shift identity", iterations, fails))
    fails = 0
    for _ in range(iterations):
        lanes = [rng.randrange(1 << 62) for _ in range(16)]
        once, c1 = lv.accurate_carry_propagate(lanes, spill=False)
        twice, c2 = lv.accurate_carry_propagate(once, spill=False)
        if once != twice or c2 != 0:
            fails += 1
        if lv.unpack(lanes) != lv.unpack(once) + (c1 << (25 * 16)):
            fails += 1
    res.append(PropertyResult("accurate carry exact+idempotent", iterations, fails))
    return res


def suite_schoolbook(iterations: int, seed: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    res = []
    fails = block_fails = 0
    for _ in range(iterations):
        a = lv.pack(rng.getrandbits(377))
        b = lv.pack(rng.getrandbits(377))
        w = sb.mul_full(a, b)
        if lv.unpack(w) != lv.unpack(a) * lv.unpack(b):
            fails += 1
        if w != sb.mul_full_blocks(a, b):
            block_fails += 1
    res.append(PropertyResult("product equals big-int oracle", iterations, fails))
    res.append(PropertyResult("six-block path equals fast path", iterations, block_fails))
    return res


def suite_barrett(iterations: int, seed: int,
                  params: ba.BarrettParams | None = None) -> list[PropertyResult]:
    rng = random.Random(seed)
    pp = params or _ctx().barrett
    m = pp.modulus
    res = []
    fails = range_fails = 0
    half = max(iterations // 2, 1)
    for _ in range(half):
        x, y = rng.randrange(2 * m), rng.randrange(2 * m)
        try:
            out = lv.unpack(ba.modmul(lv.pack(x), lv.pack(y), pp))
        except AssertionError:
            range_fails += 1
            continue
        if out % m != oracle.mod_mul_ref(x, y, m):
            fails += 1
        if out >= 3 * m:
            range_fails += 1
    res.append(PropertyResult("modmul oracle equivalence", half, fails))
    res.append(PropertyResult("modmul range < 3M", half, range_fails,
                              detail="" if range_fails == 0 else "range violation"))
    fails = range_fails = 0
    for _ in range(half):
        x, y = rng.randrange(6 * m), rng.randrange(6 * m)
        try:
            out = lv.unpack(ba.modmul_coarse(lv.pack(x), lv.pack(y), pp))
        except AssertionError:
            range_fails += 1
            continue
        if out % m != oracle.mod_mul_ref(x, y, m):
            fails += 1
        if out >= 4 * m:
            range_fails += 1
    res.append(PropertyResult("modmul_coarse oracle equivalence", half, fails))
    res.append(PropertyResult("modmul_coarse range < 4M", half, range_fails,
                              detail="" if range_fails == 0 else "range violation"))
    return res


def _random_ext(rng, ctx):
    pt = oracle.scalar_mult_ref(rng.randrange(1, ctx.curve.r), oracle.generator(ctx.curve), ctx.curve)
    return cv.ext_from_affine(pt, ctx, z=rng.randrange(1, ctx.modulus)), pt


def suite_curve(iterations: int, seed: int) -> list[PropertyResult]:
    rng = random.Random(seed)
    ctx = _ctx()
    res = []
    fails = 0
    for _ in range(iterations):
        p1, a1 = _random_ext(rng, ctx)
        p2, a2 = _random_ext(rng, ctx)
        q2 = cv.input_from_affine(a2, ctx)
        want = oracle.padd_ref(a1, a2, ctx.curve)
        if cv.to_affine(cv.mixed_padd(p1, q2, ctx), ctx) != want:
            fails += 1
        if cv.to_affine(cv.complete_padd(p1, p2, ctx), ctx) != want:
            fails += 1
        dbl = oracle.padd_ref(a1, a1, ctx.curve)
        if cv.to_affine(cv.complete_padd(p1, p1, ctx), ctx) != dbl:
            fails += 1
    res.append(PropertyResult("padd oracle equivalence (mixed/complete/double)",
                              iterations, fails))
    # reference-law group properties on random triples from a point pool
    g = oracle.generator(ctx.curve)
    pool = [g]
    for _ in range(31):
        pool.append(oracle.padd_ref(pool[-1], g, ctx.curve))
    triples = max(1000, iterations)
    fails = 0
    for _ in range(triples):
        a, b, c = (pool[rng.randrange(len(pool))] for _ in range(3))
        if oracle.padd_ref(a, b, ctx.curve) != oracle.padd_ref(b, a, ctx.curve):
            fails += 1
        lhs = oracle.padd_ref(oracle.padd_ref(a, b, ctx.curve), c, ctx.curve)
        rhs = oracle.padd_ref(a, oracle.padd_ref(b, c, ctx.curve), ctx.curve)
        if lhs != rhs:
            fails += 1
    res.append(PropertyResult("padd_ref commutative+associative", triples, fails))
    return res


def suite_msm(iterations: int, seed: int, n: int = 64) -> list[PropertyResult]:
    rng = random.Random(seed)
    ctx = _ctx()
    g = oracle.generator(ctx.curve)
    res = []
    fails = 0
    pts = []
    acc = g
    for _ in range(n):
        pts.append(acc)
        acc = oracle.padd_ref(acc, g, ctx.curve)
    for _ in range(max(iterations, 1)):
        sca = [rng.randrange(ctx.curve.r) for _ in range(n)]
        w = rng.choice((4, 8, 13))
        if mm.msm(sca, pts, mm.MsmConfig(window_bits=w), ctx) != \
           oracle.msm_ref(sca, pts, ctx.curve):
            fails += 1
    res.append(PropertyResult(f"msm equals msm_ref (n={n})", max(iterations, 1), fails))
    return res


SUITES = {
    "field": suite_field,
    "carry": suite_carry,
    "schoolbook": suite_schoolbook,
    "barrett": suite_barrett,
    "curve": suite_curve,
    "msm": suite_msm,
}

DEFAULT_ITERATIONS = {
    "field": 10_000, "carry": 2000, "schoolbook": 300,
    "barrett": 400, "curve": 25, "msm": 2,
}
