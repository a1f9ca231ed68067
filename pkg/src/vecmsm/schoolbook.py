"""377x377-bit schoolbook multiplication split into six 8-lane blocks.

The 16x16 limb product grid is partitioned by output chunk c (limbs
8c..8c+7) and operand-b half r (limbs 8r..8r+7).  Exactly six (c, r) pairs
are non-empty: in0_0, in1_0, in2_0 on the first b half and in1_1, in2_1,
in3_1 on the second.  Each block runs eight vector MAC steps: step j
multiplies a shuffled window of operand a by the broadcast limb b[8r+j]
and accumulates into the chunk's eight lanes.

The carry schedule interleaved with accumulation is fixed: accurate
propagation after chunks 0 and 1 (their limbs feed positions where exact
magnitudes matter), coarse propagation after chunks 2 and 3.  Chunk
carries cross into the next chunk: exact carries spill into the next
accumulator lane, while a coarse stage receives the previous stage's exit
carry as its round-0 incoming carry, which is what keeps lanes 2..7 of
chunk 2 independent of the exact stages.
"""

from dataclasses import dataclass

import numpy as np

from .limbvec import (CHUNK, NLIMBS, WIDE_LIMBS, accurate_carry_propagate,
                      coarse_carry_propagate, max_abs)


@dataclass(frozen=True)
class BlockId:
    chunk: int
    row: int

    @property
    def name(self) -> str:
        return f"in{self.chunk}_{self.row}"


BLOCKS = (BlockId(0, 0), BlockId(1, 0), BlockId(1, 1),
          BlockId(2, 0), BlockId(2, 1), BlockId(3, 1))

# per block: step j contributes a[lane + 8*chunk - 8*row - j] * b[8*row + j]
# to output lane `lane`; out-of-window selections contribute zero.


def block_mac(a, b_half, block: BlockId, acc):
    """Accumulate one block's eight MAC steps into an 8-lane chunk."""
    assert len(b_half) == CHUNK and len(acc) == CHUNK
    out = list(acc)
    base = 8 * block.chunk - 8 * block.row
    for j in range(CHUNK):
        bj = b_half[j]
        if bj == 0:
            continue
        off = base - j
        lo = max(0, -off)
        hi = min(CHUNK, NLIMBS - off)
        for lane in range(lo, hi):
            out[lane] += a[lane + off] * bj
    return out


def _carry_schedule(acc):
    """cp0/cp1 accurate, cp2/cp3 coarse, over a 32-lane accumulator.

    Inlined equivalent of accurate_carry_propagate on chunks 0-1 followed
    by coarse_carry_propagate on chunks 2-3 (tests pin the equivalence).
    cp3's exit carry is folded back into lane 31 (weight 2^800 = 2^775 *
    2^25); for every in-contract product it is a small signed correction
    and the represented value is always preserved exactly.
    """
    carry = 0
    for i in range(8):                      # cp0
        t = acc[i] + carry
        carry = t >> 25
        acc[i] = t - (carry << 25)
    acc[8] += carry
    carry = 0
    for i in range(8, 16):                  # cp1; exit feeds cp2 round 0
        t = acc[i] + carry
        carry = t >> 25
        acc[i] = t - (carry << 25)
    for base in (16, 24):                   # cp2, cp3: two coarse rounds each
        cprev = carry
        for i in range(base, base + 8):
            v = acc[i]
            c = v >> 25
            acc[i] = v - (c << 25) + cprev
            cprev = c
        carry = cprev
        cprev = 0
        for i in range(base, base + 8):
            v = acc[i]
            c = v >> 25
            acc[i] = v - (c << 25) + cprev
            cprev = c
        carry += cprev
    acc[31] += carry << 25
    return acc


def carry_schedule_ops(acc):
    """The same schedule composed from the public carry operations."""
    acc, _ = accurate_carry_propagate(acc, 0, CHUNK)          # cp0, spills into lane 8
    acc, e1 = accurate_carry_propagate(acc, CHUNK, 2 * CHUNK, spill=False)
    c2, e2 = coarse_carry_propagate(acc[16:24], e1)           # cp2
    c3, e3 = coarse_carry_propagate(acc[24:32], e2)           # cp3
    out = acc[:16] + c2 + c3
    out[31] += e3 << 25
    return out


def mul_full_blocks(a, b):
    """Block-by-block product; reference shape for the vector kernels."""
    acc = [0] * WIDE_LIMBS
    acc8 = {c: [0] * CHUNK for c in range(4)}
    for blk in BLOCKS:
        b_half = b[8 * blk.row: 8 * blk.row + CHUNK]
        acc8[blk.chunk] = block_mac(a, b_half, blk, acc8[blk.chunk])
    for c in range(4):
        for lane in range(CHUNK):
            acc[8 * c + lane] = acc8[c][lane]
    return _carry_schedule(acc)


def mul_full(a, b):
    """Fast path: one exact int64 convolution, identical carry schedule.

    The convolution equals the sum of the six blocks' contributions limb
    by limb, so the result is bit-identical to mul_full_blocks.  Operand
    lanes may be signed/relaxed; the magnitude product must leave room for
    16 accumulated terms in 63 bits.
    """
    assert len(a) == NLIMBS and len(b) == NLIMBS
    assert max_abs(a) * max_abs(b) * NLIMBS < (1 << 62)
    conv = np.convolve(np.array(a, dtype=np.int64), np.array(b, dtype=np.int64))
    acc = conv.tolist()
    acc.append(0)  # limb 31 has no direct product term
    return _carry_schedule(acc)
