"""Barrett modular multiplication as a three-multiplication chain.

The pipeline over a 32-limb product x = a*b is

    u  = floor(x / 2^(25*msb_cut))          (MSB of mul_in)
    q  = floor(u * mu / 2^(25*q_cut))       (MSB of mul_mu)
    r  = (x - q*M) mod 2^400                (LSB subtraction after mul_m)

with mu = floor(2^(25*(msb_cut+q_cut)) / M).  Cuts sit on limb boundaries
so each extraction is a whole-vector move.  For a 377-bit modulus the only
limb-aligned pair that keeps every operand inside 16 limbs and the
quotient error small is (msb_cut, q_cut) = (15, 16); mu then spans 399
bits.  The rigorous output bound (see reduction_output_bound) is

    r < M + M*x/2^775 + 2^375

which stays below 1.5*M for any product of operands up to 8*M, well
inside both the standard [0, 3M) and the loose [0, 4M) contracts, and
below 2^400 so the final limb-wise subtraction never wraps.
"""

from dataclasses import dataclass

from .limbvec import LIMB_BITS, NLIMBS, accurate_carry_propagate, pack, unpack
from .schoolbook import mul_full

MSB_CUT = 15
Q_CUT = 16
REDUCTION_K = 378  # looseness parameter: operands may exceed M by small multiples


@dataclass(frozen=True)
class BarrettParams:
    modulus: int
    mu: int
    k: int = REDUCTION_K
    msb_cut: int = MSB_CUT
    q_cut: int = Q_CUT

    @property
    def m_limbs(self):
        return pack(self.modulus)

    @property
    def mu_limbs(self):
        return pack(self.mu)


def reduction_output_bound(params: BarrettParams, x_max: int) -> int:
    """Rigorous upper bound on the reduction output for products <= x_max.

    From q >= x/M - x/2^(a+b) - 2^a/M - 1 with a = 25*msb_cut, b = 25*q_cut:
    r = x - q*M < M + M*x/2^(a+b) + 2^a.
    """
    shift = LIMB_BITS * (params.msb_cut + params.q_cut)
    return params.modulus + (params.modulus * x_max >> shift) + 1 + (1 << LIMB_BITS * params.msb_cut)


def validate_params(params: BarrettParams, operand_bound: int) -> int:
    """Check capacities and the output range for operands < operand_bound.

    Returns the proven output bound.  Raises if any intermediate can
    escape its 16/32-limb container.
    """
    m = params.modulus
    x_max = (operand_bound - 1) ** 2
    u_max = x_max >> (LIMB_BITS * params.msb_cut)
    if u_max >> (LIMB_BITS * NLIMBS):
        raise ValueError("MSB extraction exceeds 16 limbs")
    if params.mu >> (LIMB_BITS * NLIMBS):
        raise ValueError("mu exceeds 16 limbs")
    q_max = (u_max * params.mu) >> (LIMB_BITS * params.q_cut)
    if q_max >> (LIMB_BITS * NLIMBS):
        raise ValueError("quotient estimate exceeds 16 limbs")
    bound = reduction_output_bound(params, x_max)
    if bound > 3 * m // 2:
        raise ValueError("output bound exceeds 1.5*M")
    if bound >> (LIMB_BITS * NLIMBS):
        raise ValueError("output can wrap the 16-limb subtraction")
    return bound


def make_params(modulus: int, max_operand_multiple: int = 8) -> BarrettParams:
    """Derive mu for the limb-aligned cuts and prove the range contract."""
    if modulus.bit_length() != 377:
        raise ValueError("expected a 377-bit modulus")
    shift = LIMB_BITS * (MSB_CUT + Q_CUT)
    params = BarrettParams(modulus=modulus, mu=(1 << shift) // modulus)
    validate_params(params, max_operand_multiple * modulus)
    return params


def extract_msb(wide, cut: int):
    """Limbs [cut, cut+16) as a 16-lane vector.

    Lanes below the cut must be canonical, so the weighted sum of the
    extracted lanes equals floor(value / 2^(25*cut)).  Any limbs above
    cut+15 (only limb 31 for cut 15) are folded into the top lane; the
    carry schedule guarantees that residue is a small signed count.
    """
    out = list(wide[cut: cut + NLIMBS])
    for j, lane in enumerate(wide[cut + NLIMBS:], start=1):
        assert -8 <= lane <= 8
        out[NLIMBS - 1] += lane << (LIMB_BITS * j)
    return out


def _lsb_sub(win, wm):
    """Limbs 0..15 of (win - wm) mod 2^400, one borrow-aware propagation.

    The subtraction is modular: when the subtrahend's low half exceeds the
    minuend's, the exit borrow is absorbed by the (discarded) high halves.
    The range proof guarantees the true difference lies in [0, 2^400), so
    the wrapped lanes are exact and the borrow is never below -1.
    """
    diff = [win[i] - wm[i] for i in range(NLIMBS)]
    out, borrow = accurate_carry_propagate(diff, 0, NLIMBS, spill=False)
    assert borrow in (0, -1), "reduction result escaped [0, 2^400)"
    return out


def reduce_wide(wide, params: BarrettParams):
    """Shared reduction engine over a 32-limb product."""
    u = extract_msb(wide, params.msb_cut)
    w_mu = mul_full(u, params.mu_limbs)
    q = extract_msb(w_mu, params.q_cut)
    w_m = mul_full(q, params.m_limbs)
    return _lsb_sub(wide, w_m)


def modmul(a, b, params: BarrettParams):
    """a*b mod M for operand values below 2M; output below 3M (canonical lanes)."""
    m = params.modulus
    assert 0 <= unpack(a) < 2 * m and 0 <= unpack(b) < 2 * m
    out = reduce_wide(mul_full(a, b), params)
    assert unpack(out) < 3 * m
    return out


def modmul_coarse(a, b, params: BarrettParams):
    """a*b mod M for operand values below 6M; output below 4M (canonical lanes)."""
    m = params.modulus
    assert 0 <= unpack(a) < 6 * m and 0 <= unpack(b) < 6 * m
    out = reduce_wide(mul_full(a, b), params)
    assert unpack(out) < 4 * m
    return out


# -- value-mode twins: identical arithmetic on plain integers.  The limb
# pipeline computes exactly x - q*M with the q defined below, so these
# functions are bit-for-bit equal to the unpacked limb results.

def reduce_int(x: int, params: BarrettParams) -> int:
    u = x >> (LIMB_BITS * params.msb_cut)
    q = (u * params.mu) >> (LIMB_BITS * params.q_cut)
    return x - q * params.modulus


def modmul_int(a: int, b: int, params: BarrettParams) -> int:
    return reduce_int(a * b, params)
