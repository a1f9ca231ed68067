"""16-limb radix-2^25 integer vectors and the two carry-propagation styles.

A field value is held as 16 lanes, limb i weighted 2^(25*i), grouped as two
8-lane vectors.  Products accumulate into 32-lane wide accumulators (four
8-lane chunks).  Lanes are signed and may legitimately exceed 25 bits
("relaxed" form); the carry operations below restore boundedness:

 - accurate propagation: exact sequential carry chain, scalar style,
   leaves every lane canonical in [0, 2^25).
 - coarse propagation: two rounds of a branch-free mask/shift/add sequence
   that is expressible with vector instructions only.  If every input lane
   is below 2^50 (and the incoming carry below 2^25) the output lanes are
   bounded by 2^25; for wider inputs the bound degrades gracefully to
   2^25 plus the residual second-round carry.

Masking is deliberately computed as x - ((x >> 25) << 25) rather than a
bitwise AND: the modeled vector unit has shifts and adds but no vector
bitwise operations, and for signed lanes the identity still yields the
floor residue in [0, 2^25).
"""

LIMB_BITS = 25
NLIMBS = 16
WIDE_LIMBS = 32
CHUNK = 8
LANE_GUARD = 1 << 63  # absolute magnitude guard for any lane

Limbs = list


def mask_low25(x: int) -> int:
    """x mod 2^25 via the shift identity (valid for signed x)."""
    return x - ((x >> LIMB_BITS) << LIMB_BITS)


def pack(x: int) -> Limbs:
    """Canonical 16-limb form of x; requires 0 <= x < 2^400."""
    if x < 0 or x >> (LIMB_BITS * NLIMBS):
        raise ValueError("value out of range for 16 limbs")
    return [(x >> (LIMB_BITS * i)) & 0x1FFFFFF for i in range(NLIMBS)]


def pack_wide(x: int) -> Limbs:
    """Canonical 32-limb form of x; requires 0 <= x < 2^800."""
    if x < 0 or x >> (LIMB_BITS * WIDE_LIMBS):
        raise ValueError("value out of range for 32 limbs")
    return [(x >> (LIMB_BITS * i)) & 0x1FFFFFF for i in range(WIDE_LIMBS)]


def unpack(lanes: Limbs) -> int:
    """Weighted lane sum; defined for relaxed (and signed) forms too."""
    acc = 0
    for i in reversed(range(len(lanes))):
        acc = (acc << LIMB_BITS) + lanes[i]
    return acc


def max_abs(lanes: Limbs) -> int:
    return max(abs(v) for v in lanes)


def coarse_carry_step(chunk: Limbs, c_in: int = 0) -> tuple[Limbs, int]:
    """One mask/shift round over an 8-lane chunk.

    out[i] = (in[i] mod 2^25) + carry[i-1], with c_in entering at lane 0 and
    lane 7's carry returned.  Value is preserved:
    sum(in)*weights + c_in == sum(out)*weights + c_out * 2^200.
    """
    assert len(chunk) == CHUNK
    assert all(abs(v) < LANE_GUARD for v in chunk)
    carries = [v >> LIMB_BITS for v in chunk]
    out = [mask_low25(v) for v in chunk]
    out[0] += c_in
    for i in range(1, CHUNK):
        out[i] += carries[i - 1]
    return out, carries[CHUNK - 1]


def coarse_carry_propagate(chunk: Limbs, c_in: int = 0) -> tuple[Limbs, int]:
    """Two coarse rounds; the second one takes no incoming carry.

    The returned carry is the sum of both rounds' exit carries (same 2^200
    weight).  With input lanes in [0, 2^50) and c_in in [0, 2^25] every
    output lane ends <= 2^25.
    """
    step0, c0 = coarse_carry_step(chunk, c_in)
    step1, c1 = coarse_carry_step(step0, 0)
    return step1, c0 + c1


def accurate_carry_propagate(lanes: Limbs, start: int = 0, stop: int | None = None,
                             spill: bool = True) -> tuple[Limbs, int]:
    """Exact sequential carry chain over lanes[start:stop].

    Every lane in range ends canonical in [0, 2^25).  The final carry is
    added into the first lane after the range when one exists (and spill is
    set), otherwise it is returned.  Idempotent on canonical input.
    """
    out = list(lanes)
    stop = len(out) if stop is None else stop
    carry = 0
    for i in range(start, stop):
        t = out[i] + carry
        assert abs(t) < LANE_GUARD
        out[i] = mask_low25(t)
        carry = t >> LIMB_BITS
    if spill and stop < len(out):
        out[stop] += carry
        carry = 0
    return out, carry
