"""VectorMachine kernels for the arithmetic pipeline.

Each kernel mirrors the fast-path computation operation for operation, so
unpacked results are bit-identical, and leaves a typed trace when the
machine records.  Values travel as pairs of 8-lane vectors (low limbs,
high limbs); multiplication selection buffers span both halves.

The coarse carry kernel is vector-only: masking uses the shift identity,
the carry vector is realigned by a shuffle, and cross-chunk carries ride
along as vector lanes.  The accurate carry kernel is the scalar chain it
models: extract, add, shift, subtract, insert per limb.
"""

from .barrett import BarrettParams
from .curve import PaddContext
from .limbvec import CHUNK, NLIMBS
from .schoolbook import BLOCKS
from .vvm import VectorMachine

LIMB_BITS = 25


def pair_load(vm: VectorMachine, lanes, via: str = "vload"):
    """Load a 16-limb value as a (low, high) pair of 8-lane vectors."""
    fn = getattr(vm, via)
    return fn(lanes[:CHUNK]), fn(lanes[CHUNK:])


def pair_lanes(vm: VectorMachine, pair):
    return list(vm.value(pair[0])) + list(vm.value(pair[1]))


def lazy_add(vm, u, v):
    return (vm.vadd8(u[0], v[0]), vm.vadd8(u[1], v[1]))


def lazy_sub3m(vm, u, v, m3):
    lo = vm.vadd8(vm.vsub8(u[0], v[0]), m3[0])
    hi = vm.vadd8(vm.vsub8(u[1], v[1]), m3[1])
    return (lo, hi)


def k_coarse_round(vm: VectorMachine, chunk, carry_in_pick):
    """One coarse round; returns (out, carry_vec).

    carry_in_pick is a (source_id, lane) pair feeding lane 0 of the
    realigned carry vector (use a scalar or vector source), or None for a
    zero incoming carry.  No scalar-class operations are emitted.
    """
    c = vm.vshr8(chunk, LIMB_BITS)
    masked = vm.vsub8(chunk, vm.vshl8(c, LIMB_BITS))
    picks = [None] + [(0, i) for i in range(CHUNK - 1)]
    srcs = [c]
    if carry_in_pick is not None:
        src, lane = carry_in_pick
        picks[0] = (1, lane)
        srcs.append(src)
    shifted = vm.vshuffle(picks, *srcs)
    return vm.vadd8(masked, shifted), c


def k_coarse_chunk(vm: VectorMachine, chunk, carry_in_pick):
    """Two coarse rounds; returns (out, exit_carry_vec).

    The exit carry (both rounds' lane-7 carries summed) is returned as a
    vector so the next chunk can consume it through its shuffle.
    """
    r0, c0 = k_coarse_round(vm, chunk, carry_in_pick)
    r1, c1 = k_coarse_round(vm, r0, None)
    return r1, vm.vadd8(c0, c1)


def k_accurate_chunk(vm: VectorMachine, chunk, carry_scalar):
    """Sequential exact carry chain over one chunk; returns (out, carry).

    Emits several scalar-class operations per limb, which is the cost the
    coarse form avoids.
    """
    carry = carry_scalar if carry_scalar is not None else vm.sload(0)
    out = chunk
    for i in range(CHUNK):
        t = vm.sadd(vm.vextract(out, i), carry)
        carry = vm.sshr(t, LIMB_BITS)
        res = vm.ssub(t, vm.sshl(carry, LIMB_BITS))
        out = vm.vinsert(out, i, res)
    return out, carry


def k_block_mac(vm: VectorMachine, a_pair, b_pair, block, acc):
    """Eight MAC steps of one schoolbook block into an 8-lane accumulator."""
    base = 8 * block.chunk - 8 * block.row
    for j in range(CHUNK):
        off = base - j
        sel = [i + off if 0 <= i + off < NLIMBS else None for i in range(CHUNK)]
        acc = vm.vmac8(acc, a_pair, sel, b_pair, 8 * block.row + j)
    return acc


def k_mul_full(vm: VectorMachine, a_pair, b_pair):
    """Six-block product with the cp0..cp3 schedule; returns 4 chunk ids."""
    with vm.region("mac"):
        zero = vm.vload([0] * CHUNK)
        acc = {c: zero for c in range(4)}
        for blk in BLOCKS:
            acc[blk.chunk] = k_block_mac(vm, a_pair, b_pair, blk, acc[blk.chunk])
    with vm.region("exact"):
        # cp0: exact, exit spills into the next chunk's lane 0
        c0, e0 = k_accurate_chunk(vm, acc[0], None)
        spill = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), e0)
        c1in = vm.vadd8(acc[1], spill)
        # cp1: exact, exit feeds cp2 round 0
        c1, e1 = k_accurate_chunk(vm, c1in, None)
    with vm.region("coarse"):
        # cp2/cp3: coarse only; carries travel as vector lanes
        c2, x2 = k_coarse_chunk(vm, acc[2], (e1, 0))
        c3, x3 = k_coarse_chunk(vm, acc[3], (x2, CHUNK - 1))
        # fold cp3's exit back into lane 31
        fold = vm.vshuffle([None] * (CHUNK - 1) + [(0, CHUNK - 1)], x3)
        c3 = vm.vadd8(c3, vm.vshl8(fold, LIMB_BITS))
    return c0, c1, c2, c3


def k_modmul(vm: VectorMachine, a_pair, b_pair, params: BarrettParams,
             label: str = "modmul"):
    """Barrett chain: mul_in, extract, mul_mu, mul_m, LSB subtraction."""
    with vm.region(f"{label}.mul_in"):
        w0, w1, w2, w3 = k_mul_full(vm, a_pair, b_pair)
    with vm.region(f"{label}.align"):
        # u = limbs 15..30 with limb 31 folded into the top lane
        u_lo = vm.vshuffle([(0, 7)] + [(1, i) for i in range(7)], w1, w2)
        u_hi = vm.vshuffle([(0, 7)] + [(1, i) for i in range(7)], w2, w3)
        fold = vm.vshuffle([None] * 7 + [(0, 7)], w3)
        u_hi = vm.vadd8(u_hi, vm.vshl8(fold, LIMB_BITS))
    with vm.region(f"{label}.mul_mu"):
        mu = pair_load(vm, params.mu_limbs)
        m0, m1, m2, m3_ = k_mul_full(vm, (u_lo, u_hi), mu)
    with vm.region(f"{label}.mul_m"):
        mod = pair_load(vm, params.m_limbs)
        q_pair = (m2, m3_)  # limbs 16..31 of mul_mu, chunk-aligned
        s0, s1, s2, s3 = k_mul_full(vm, q_pair, mod)
    with vm.region(f"{label}.sub"):
        d_lo = vm.vsub8(w0, s0)
        d_hi = vm.vsub8(w1, s1)
        r_lo, borrow = k_accurate_chunk(vm, d_lo, None)
        r_hi, borrow = k_accurate_chunk(vm, d_hi, borrow)
        # subtraction is mod 2^400: an exit borrow of -1 is absorbed by the
        # discarded high halves (the range proof keeps the result in range)
        assert vm.value(borrow) in (0, -1)
    return r_lo, r_hi


def k_mixed_padd(vm: VectorMachine, p1, q2, ctx: PaddContext):
    """Mixed adder: P as 4 coordinate pairs, Q as 3; seven modmuls."""
    x1, y1, t1, z1 = p1
    x2, y2, u2 = q2
    m3 = pair_load(vm, ctx.m3_limbs)
    with vm.region("stage1.addsub"):
        s1 = lazy_sub3m(vm, y1, x1, m3)
        s2 = lazy_sub3m(vm, y2, x2, m3)
        a1 = lazy_add(vm, y1, x1)
        a2 = lazy_add(vm, y2, x2)
    va = k_modmul(vm, s1, s2, ctx.barrett, "modmul0")
    vb = k_modmul(vm, a1, a2, ctx.barrett, "modmul1")
    vc = k_modmul(vm, t1, u2, ctx.barrett, "modmul2")
    with vm.region("stage2.addsub"):
        vd = lazy_add(vm, z1, z1)
        e = lazy_sub3m(vm, vb, va, m3)
        f = lazy_sub3m(vm, vd, vc, m3)
        g = lazy_add(vm, vd, vc)
        h = lazy_add(vm, vb, va)
    x3 = k_modmul(vm, e, f, ctx.barrett, "modmul3")
    y3 = k_modmul(vm, g, h, ctx.barrett, "modmul4")
    t3 = k_modmul(vm, e, h, ctx.barrett, "modmul5")
    z3 = k_modmul(vm, f, g, ctx.barrett, "modmul6")
    return x3, y3, t3, z3


def k_complete_padd(vm: VectorMachine, p1, p2, ctx: PaddContext):
    """Complete adder: U2 = k*T2 precompute plus Z1*Z2; nine modmuls."""
    x1, y1, t1, z1 = p1
    x2, y2, t2, z2 = p2
    m3 = pair_load(vm, ctx.m3_limbs)
    kc = pair_load(vm, ctx.k_limbs)
    u2 = k_modmul(vm, kc, t2, ctx.barrett, "modmul_kt")
    zz = k_modmul(vm, z1, z2, ctx.barrett, "modmul_zz")
    with vm.region("stage1.addsub"):
        s1 = lazy_sub3m(vm, y1, x1, m3)
        s2 = lazy_sub3m(vm, y2, x2, m3)
        a1 = lazy_add(vm, y1, x1)
        a2 = lazy_add(vm, y2, x2)
    va = k_modmul(vm, s1, s2, ctx.barrett, "modmul0")
    vb = k_modmul(vm, a1, a2, ctx.barrett, "modmul1")
    vc = k_modmul(vm, t1, u2, ctx.barrett, "modmul2")
    with vm.region("stage2.addsub"):
        vd = lazy_add(vm, zz, zz)
        e = lazy_sub3m(vm, vb, va, m3)
        f = lazy_sub3m(vm, vd, vc, m3)
        g = lazy_add(vm, vd, vc)
        h = lazy_add(vm, vb, va)
    x3 = k_modmul(vm, e, f, ctx.barrett, "modmul3")
    y3 = k_modmul(vm, g, h, ctx.barrett, "modmul4")
    t3 = k_modmul(vm, e, h, ctx.barrett, "modmul5")
    z3 = k_modmul(vm, f, g, ctx.barrett, "modmul6")
    return x3, y3, t3, z3


# -- whole-kernel wrappers used by the CLI trace command and tests ----------

def run_modmul(a_limbs, b_limbs, params: BarrettParams, record: bool = True):
    """Execute the modmul kernel; returns (result_limbs, machine)."""
    vm = VectorMachine(record=record)
    a = pair_load(vm, a_limbs, via="stream_read")
    b = pair_load(vm, b_limbs, via="stream_read")
    lo, hi = k_modmul(vm, a, b, params)
    vm.stream_write(lo)
    vm.stream_write(hi)
    return pair_lanes(vm, (lo, hi)), vm


def run_mixed_padd(p1_limbs, q2_limbs, ctx: PaddContext, record: bool = True):
    """p1_limbs: 4x16 lists; q2_limbs: 3x16 lists."""
    vm = VectorMachine(record=record)
    p1 = tuple(pair_load(vm, c, via="stream_read") for c in p1_limbs)
    q2 = tuple(pair_load(vm, c, via="stream_read") for c in q2_limbs)
    out = k_mixed_padd(vm, p1, q2, ctx)
    for pair in out:
        vm.stream_write(pair[0])
        vm.stream_write(pair[1])
    return [pair_lanes(vm, pair) for pair in out], vm


def run_complete_padd(p1_limbs, p2_limbs, ctx: PaddContext, record: bool = True):
    vm = VectorMachine(record=record)
    p1 = tuple(pair_load(vm, c, via="stream_read") for c in p1_limbs)
    p2 = tuple(pair_load(vm, c, via="stream_read") for c in p2_limbs)
    out = k_complete_padd(vm, p1, p2, ctx)
    for pair in out:
        vm.stream_write(pair[0])
        vm.stream_write(pair[1])
    return [pair_lanes(vm, pair) for pair in out], vm


def run_coarse_carry(chunk_lanes, record: bool = True):
    """Standalone coarse-propagation kernel on one chunk."""
    vm = VectorMachine(record=record)
    chunk = vm.stream_read(chunk_lanes)
    out, _ = k_coarse_chunk(vm, chunk, None)
    vm.stream_write(out)
    return list(vm.value(out)), vm


def run_accurate_carry(chunk_lanes, record: bool = True):
    vm = VectorMachine(record=record)
    chunk = vm.stream_read(chunk_lanes)
    out, carry = k_accurate_chunk(vm, chunk, None)
    vm.stream_write(out)
    return list(vm.value(out)), vm


# -- per-tile stage kernels -------------------------------------------------
# These model the work a single tile performs under each spatial strategy;
# the mapping module reads instruction/operation counts off their traces.
# Inputs are representative canonical values; only counts matter, but the
# kernels still compute real arithmetic so the traces stay honest.

def _rep_inputs(ctx: PaddContext):
    m = ctx.barrett.modulus
    from .limbvec import pack
    a = pack((m - 1) // 3)
    b = pack((m - 1) // 7)
    return a, b


def stage_mul_in(ctx: PaddContext) -> VectorMachine:
    """Full product stage: stream operands in, carry-resolved chunks out."""
    vm = VectorMachine(record=True)
    a, b = _rep_inputs(ctx)
    ap = pair_load(vm, a, via="stream_read")
    bp = pair_load(vm, b, via="stream_read")
    c0, c1, c2, c3 = k_mul_full(vm, ap, bp)
    for v in (c0, c1):      # LSB halves to the subtraction tile
        vm.stream_write(v)
    for v in (c2, c3):      # MSB halves cascade to mul_mu
        vm.cascade_write(v)
    return vm


def stage_mul_mu(ctx: PaddContext) -> VectorMachine:
    """Reciprocal-constant multiply: u arrives by cascade, q leaves."""
    vm = VectorMachine(record=True)
    a, _ = _rep_inputs(ctx)
    u = pair_load(vm, a, via="cascade_read")
    mu = pair_load(vm, ctx.barrett.mu_limbs)
    _, _, m2, m3 = k_mul_full(vm, u, mu)
    vm.cascade_write(m2)
    vm.cascade_write(m3)
    return vm


def stage_mul_m(ctx: PaddContext) -> VectorMachine:
    """Modulus multiply; only the LSB chunks continue to the subtraction."""
    vm = VectorMachine(record=True)
    a, _ = _rep_inputs(ctx)
    q = pair_load(vm, a, via="cascade_read")
    mod = pair_load(vm, ctx.barrett.m_limbs)
    s0, s1, _, _ = k_mul_full(vm, q, mod)
    vm.cascade_write(s0)
    vm.cascade_write(s1)
    return vm


def stage_sub_glue(ctx: PaddContext) -> VectorMachine:
    """Result finalization: LSB subtraction plus next-operand staging."""
    vm = VectorMachine(record=True)
    a, b = _rep_inputs(ctx)
    m3 = pair_load(vm, ctx.m3_limbs)
    w = pair_load(vm, a, via="stream_read")
    s = pair_load(vm, b, via="cascade_read")
    d_lo = vm.vsub8(w[0], s[0])
    d_hi = vm.vsub8(w[1], s[1])
    r_lo, borrow = k_accurate_chunk(vm, d_lo, None)
    r_hi, _ = k_accurate_chunk(vm, d_hi, borrow)
    out_s = lazy_sub3m(vm, (r_lo, r_hi), s, m3)
    out_a = lazy_add(vm, (r_lo, r_hi), s)
    for pair in (out_s, out_a):
        vm.stream_write(pair[0])
        vm.stream_write(pair[1])
    return vm


def stage_sub_half(ctx: PaddContext, side: str) -> VectorMachine:
    """Half of the finalization tile for the two-core strategies.

    Side a runs the low-limb borrow chain and stages the low halves; side
    b continues the borrow through the high limbs and stages the rest.
    """
    vm = VectorMachine(record=True)
    a, b = _rep_inputs(ctx)
    m3 = pair_load(vm, ctx.m3_limbs)
    half = 0 if side == "a" else 1
    w = vm.stream_read(a[8 * half: 8 * half + CHUNK])
    s = vm.cascade_read(b[8 * half: 8 * half + CHUNK])
    d = vm.vsub8(w, s)
    if side == "b":
        inc = vm.cascade_read([0] * CHUNK)   # borrow lane from side a
        d = vm.vadd8(d, inc)
    r, borrow = k_accurate_chunk(vm, d, None)
    out_s = vm.vadd8(vm.vsub8(r, s), m3[half])
    out_a = vm.vadd8(r, s)
    vm.stream_write(out_s)
    vm.stream_write(out_a)
    if side == "a":
        out = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), borrow)
        vm.cascade_write(out)
    return vm


def stage_block(ctx: PaddContext, block_index: int) -> VectorMachine:
    """One schoolbook block on its own tile (fine-grained strategy).

    The tile owning the last block of a chunk also runs that chunk's carry
    stage; exact-carry chunks receive/forward their carries through shared
    memory (penalty modeled on the edges, not in the counts).
    """
    vm = VectorMachine(record=True)
    a, b = _rep_inputs(ctx)
    blk = BLOCKS[block_index]
    ap = pair_load(vm, a, via="stream_read")
    bh = vm.stream_read(b[8 * blk.row: 8 * blk.row + CHUNK])
    acc = vm.vload([0] * CHUNK)
    base = 8 * blk.chunk - 8 * blk.row
    for j in range(CHUNK):
        off = base - j
        sel = [i + off if 0 <= i + off < NLIMBS else None for i in range(CHUNK)]
        acc = vm.vmac8(acc, ap, sel, (bh, bh), j)
    owns_carry = {0: "cp0", 2: "cp1", 3: "cp2", 5: "cp3"}.get(block_index)
    if owns_carry in ("cp0", "cp1"):
        acc, carry = k_accurate_chunk(vm, acc, None)
        vm.stream_write(acc)
        out = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), carry)
        vm.cascade_write(out)
    elif owns_carry in ("cp2", "cp3"):
        acc, xc = k_coarse_chunk(vm, acc, None)
        vm.stream_write(acc)
        vm.cascade_write(xc)
    else:
        vm.cascade_write(acc)
    return vm


def stage_half(ctx: PaddContext, side: str, cooperative: bool) -> VectorMachine:
    """One core of a two-core multiplication split (medium strategies).

    cooperative: A runs the first-row blocks with cp0; B merges A's partial
    chunks (cascade) and runs cp1..cp3.  independent: A owns chunks 0-1
    with both exact stages, B owns chunks 2-3 with the coarse stages and no
    dependence on A (the two boundary lanes are fixed downstream).
    """
    vm = VectorMachine(record=True)
    a, b = _rep_inputs(ctx)
    ap = pair_load(vm, a, via="stream_read")
    bp = pair_load(vm, b, via="stream_read")
    zero = vm.vload([0] * CHUNK)
    if cooperative:
        rows = (0, 1, 3) if side == "a" else (2, 4, 5)
    else:
        rows = (0, 1, 2) if side == "a" else (3, 4, 5)
    acc = {c: zero for c in range(4)}
    for bi in rows:
        blk = BLOCKS[bi]
        acc[blk.chunk] = k_block_mac(vm, ap, bp, blk, acc[blk.chunk])
    if cooperative:
        if side == "a":
            # row-0 blocks and the exact stage of chunk 0
            c0, e0 = k_accurate_chunk(vm, acc[0], None)
            vm.stream_write(c0)
            spill = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), e0)
            vm.cascade_write(vm.vadd8(acc[1], spill))
            vm.cascade_write(acc[2])
        else:
            # merge A's partial chunks, then run cp1..cp3
            pa1 = vm.cascade_read(list(vm.value(acc[1])))
            pa2 = vm.cascade_read(list(vm.value(acc[2])))
            m1 = vm.vadd8(acc[1], pa1)
            m2 = vm.vadd8(acc[2], pa2)
            c1, e1 = k_accurate_chunk(vm, m1, None)
            c2, x2 = k_coarse_chunk(vm, m2, (e1, 0))
            c3, x3 = k_coarse_chunk(vm, acc[3], (x2, CHUNK - 1))
            fold = vm.vshuffle([None] * (CHUNK - 1) + [(0, CHUNK - 1)], x3)
            c3 = vm.vadd8(c3, vm.vshl8(fold, LIMB_BITS))
            for v in (c1, c2, c3):
                vm.stream_write(v)
    else:
        if side == "a":
            c0, e0 = k_accurate_chunk(vm, acc[0], None)
            spill = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), e0)
            c1, e1 = k_accurate_chunk(vm, vm.vadd8(acc[1], spill), None)
            vm.stream_write(c0)
            vm.stream_write(c1)
            out = vm.vshuffle([(0, 0)] + [None] * (CHUNK - 1), e1)
            vm.stream_write(out)   # boundary carry for the downstream fixup
        else:
            c2, x2 = k_coarse_chunk(vm, acc[2], None)
            c3, x3 = k_coarse_chunk(vm, acc[3], (x2, CHUNK - 1))
            fold = vm.vshuffle([None] * (CHUNK - 1) + [(0, CHUNK - 1)], x3)
            c3 = vm.vadd8(c3, vm.vshl8(fold, LIMB_BITS))
            vm.stream_write(c2)
            vm.stream_write(c3)
    return vm


def stage_single(ctx: PaddContext) -> VectorMachine:
    """Whole mixed adder on one tile."""
    from .limbvec import pack
    from . import oracle, curve as cv
    pt = oracle.generator(ctx.curve)
    p1 = cv.ext_from_affine(pt, ctx)
    q2 = cv.input_from_affine(pt, ctx)
    vm = VectorMachine(record=True)
    p = tuple(pair_load(vm, list(c), via="stream_read") for c in (p1.X, p1.Y, p1.T, p1.Z))
    q = tuple(pair_load(vm, list(c), via="stream_read") for c in (q2.X, q2.Y, q2.U))
    out = k_mixed_padd(vm, p, q, ctx)
    for pair in out:
        vm.stream_write(pair[0])
        vm.stream_write(pair[1])
    return vm
