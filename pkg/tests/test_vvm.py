import random

import pytest

from vecmsm import barrett as ba
from vecmsm import curve as cv
from vecmsm import kernels as kn
from vecmsm import limbvec as lv
from vecmsm import schoolbook as sb
from vecmsm.vvm import ProgramError, VecOp, VectorMachine, pack_vliw


def _op(cls, dest, srcs=()):
    return VecOp(cls, cls if cls != "vmac8" else "vector", dest, tuple(srcs), "t")


def test_seven_distinct_classes_pack_into_one_bundle():
    ops = [VecOp("vmac8", "vector", 0, (), "t"),
           VecOp("scalar_alu", "scalar", 1, (), "t"),
           VecOp("vload", "load", 2, (), "t"),
           VecOp("vload", "load", 3, (), "t"),
           VecOp("vstore", "store", 4, (), "t"),
           VecOp("stream_read", "stream_read", 5, (), "t"),
           VecOp("stream_write", "stream_write", 6, (), "t")]
    assert pack_vliw(ops) == 1


def test_dependent_scalars_serialize():
    ops = [VecOp("scalar_alu", "scalar", 0, (), "t"),
           VecOp("scalar_alu", "scalar", 1, (0,), "t"),
           VecOp("scalar_alu", "scalar", 2, (1,), "t")]
    assert pack_vliw(ops) == 3


def test_capacity_limits_respected():
    ops = [VecOp("vadd8", "vector", i, (), "t") for i in range(5)]
    assert pack_vliw(ops) == 5  # one vector slot per bundle
    loads = [VecOp("vload", "load", i, (), "t") for i in range(4)]
    assert pack_vliw(loads) == 2  # two load slots per bundle


def test_packer_determinism_and_bounds():
    rng = random.Random(3)
    classes = ["vector", "scalar", "load", "store", "stream_read", "stream_write"]
    ops = []
    for i in range(300):
        srcs = tuple(rng.sample(range(i), k=min(i, rng.randrange(3))))
        ops.append(VecOp("x", rng.choice(classes), i, srcs, "t"))
    n1 = pack_vliw(ops)
    n2 = pack_vliw(ops)
    assert n1 == n2
    assert len(ops) / 7 <= n1 <= len(ops)


def test_empty_program():
    vm = VectorMachine(record=True)
    assert vm.trace.operations == 0
    assert vm.trace.instructions() == 0


def test_single_vmac_counts():
    vm = VectorMachine(record=True)
    a = vm.vload([1] * 8)
    b = vm.vload([2] * 8)
    acc = vm.vload([0] * 8)
    out = vm.vmac8(acc, a, list(range(8)), b, 0)
    assert vm.value(out) == tuple(2 for _ in range(8))
    mac_ops = [op for op in vm.trace.ops if op.opcode == "vmac8"]
    assert len(mac_ops) == 1


def test_undefined_operand_rejected():
    vm = VectorMachine()
    with pytest.raises(ProgramError):
        vm.vadd8(123, 456)


def test_traced_equals_direct_modmul(ctx, rng):
    pp = ctx.barrett
    m = pp.modulus
    for _ in range(1000):
        a, b = lv.pack(rng.randrange(2 * m)), lv.pack(rng.randrange(2 * m))
        traced, _ = kn.run_modmul(a, b, pp, record=True)
        direct, _ = kn.run_modmul(a, b, pp, record=False)
        assert traced == direct
        assert traced == ba.modmul(a, b, pp)


def test_trace_is_deterministic(ctx):
    pp = ctx.barrett
    a, b = lv.pack(12345), lv.pack(67890)
    _, vm1 = kn.run_modmul(a, b, pp)
    _, vm2 = kn.run_modmul(a, b, pp)
    assert vm1.trace.ops == vm2.trace.ops
    assert vm1.trace.summary() == vm2.trace.summary()


def test_utilization_bounds_hold(ctx):
    _, vm = kn.run_modmul(lv.pack(3), lv.pack(5), ctx.barrett)
    t = vm.trace
    instr = t.instructions()
    assert t.operations >= instr >= t.operations / 7
    assert 1.0 <= t.vliw_utilization() <= 7.0


def test_coarse_kernel_is_vector_only(rng):
    chunk = [rng.randrange(1 << 50) for _ in range(8)]
    out, vm = kn.run_coarse_carry(chunk)
    ref, _ = lv.coarse_carry_propagate(chunk, 0)
    assert out == ref
    assert vm.trace.class_counts().get("scalar", 0) == 0
    # stream handling packs alongside the vector chain: fewer bundles than ops
    assert vm.trace.instructions() < vm.trace.operations


def test_trace_text_export(rng):
    _, vm = kn.run_coarse_carry([rng.randrange(1 << 50) for _ in range(8)])
    text = vm.trace.to_text()
    lines = text.strip().splitlines()
    assert len(lines) == vm.trace.operations
    assert lines[0].startswith("stream_read stream_read d0")


def test_accurate_kernel_scalar_per_limb(rng):
    chunk = [rng.randrange(1 << 50) for _ in range(8)]
    out, vm = kn.run_accurate_carry(chunk)
    ref, _ = lv.accurate_carry_propagate(chunk, 0, 8, spill=False)
    assert out == ref
    assert vm.trace.class_counts()["scalar"] >= 8


def test_modmul_trace_coarse_segments_have_no_scalars(ctx):
    _, vm = kn.run_modmul(lv.pack(777), lv.pack(888), ctx.barrett)
    for op in vm.trace.ops:
        if ".coarse" in op.region:
            assert op.slot_class != "scalar", op
    exact_scalars = [op for op in vm.trace.ops
                     if ".exact" in op.region and op.slot_class == "scalar"]
    assert len(exact_scalars) >= 16  # at least one per exact limb


def test_mixed_padd_kernel_structure(ctx, gen):
    p1 = cv.ext_from_affine(gen, ctx)
    q2 = cv.input_from_affine(gen, ctx)
    coords = [list(c) for c in (p1.X, p1.Y, p1.T, p1.Z)]
    out, vm = kn.run_mixed_padd(coords, [list(c) for c in (q2.X, q2.Y, q2.U)], ctx)
    ref = cv.mixed_padd(p1, q2, ctx)
    assert out == [list(c) for c in (ref.X, ref.Y, ref.T, ref.Z)]
    subs = {r.split(".mul_in")[0] for r in vm.trace.regions() if ".mul_in" in r}
    assert len(subs) == 7


def test_complete_padd_kernel_structure(ctx, gen):
    p1 = cv.ext_from_affine(gen, ctx, z=424242)
    coords = [list(c) for c in (p1.X, p1.Y, p1.T, p1.Z)]
    out, vm = kn.run_complete_padd(coords, coords, ctx)
    ref = cv.complete_padd(p1, p1, ctx)
    assert out == [list(c) for c in (ref.X, ref.Y, ref.T, ref.Z)]
    subs = {r.split(".mul_in")[0] for r in vm.trace.regions() if ".mul_in" in r}
    assert len(subs) == 9


def test_mul_in_mac_count_is_48(ctx):
    _, vm = kn.run_modmul(lv.pack(2), lv.pack(3), ctx.barrett)
    macs = [op for op in vm.trace.ops
            if op.opcode == "vmac8" and op.region.startswith("modmul.mul_in")]
    assert len(macs) == 48


def test_stage_inputs_drawn_from_msb_chunks(ctx):
    """Dataflow check: the q operand of mul_m is exactly mul_mu's output
    chunks, and mul_mu's u operand touches mul_in's coarse chunks plus one
    boundary lane of the exact chunk 1."""
    _, vm = kn.run_modmul(lv.pack(98765), lv.pack(43210), ctx.barrett)
    ops = vm.trace.ops

    def in_region(op, name):
        return op.region == name or op.region.startswith(name + ".")

    def dests(name):
        return {op.dest for op in ops if in_region(op, name)}

    mu_all = dests("modmul.mul_mu")
    mulm_all = dests("modmul.mul_m")
    mulm_macs = [op for op in ops
                 if op.opcode == "vmac8" and in_region(op, "modmul.mul_m")]
    assert len(mulm_macs) == 48
    # every external source of a mul_m MAC must come from the mul_mu stage
    for mac in mulm_macs:
        for s in mac.srcs[1:]:
            if s not in mulm_all:
                assert s in mu_all, "mul_m reads outside the mul_mu MSB chunks"
    # mul_mu's external inputs: the aligned u (built from the coarse chunks
    # of mul_in plus limb 15) and the loaded reciprocal constant
    align_all = dests("modmul.align")
    mumu_macs = [op for op in ops
                 if op.opcode == "vmac8" and in_region(op, "modmul.mul_mu")]
    for mac in mumu_macs:
        for s in mac.srcs[1:]:
            assert s in mu_all or s in align_all, \
                "mul_mu reads outside the aligned MSB extraction"


def test_shuffle_and_insert_semantics():
    vm = VectorMachine(record=True)
    v = vm.vload([10, 11, 12, 13, 14, 15, 16, 17])
    s = vm.sload(99)
    shuffled = vm.vshuffle([(1, 0), (0, 7), None, (0, 0)] + [None] * 4, v, s)
    assert vm.value(shuffled) == (99, 17, 0, 10, 0, 0, 0, 0)
    ins = vm.vinsert(v, 3, s)
    assert vm.value(ins) == (10, 11, 12, 99, 14, 15, 16, 17)
