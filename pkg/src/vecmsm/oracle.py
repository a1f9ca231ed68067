"""Brute-force reference arithmetic: field, curve and MSM.

This module is the test oracle for the optimized pipeline.  It deliberately
shares nothing with the limb/Barrett code path: values are plain big
integers (gmpy2.mpz when available, mirroring a GMP-based CPU reference),
reduction is by division, curve addition is the complete affine law with
explicit modular inverses, and MSM is plain per-point double-and-add with
no windowing or buckets.
"""

from dataclasses import dataclass

from .params import CurveParams, bls12_377

try:
    from gmpy2 import mpz, invert as _gmp_invert

    def _inv(a: int, p: int) -> int:
        return int(_gmp_invert(mpz(a), mpz(p)))
except ImportError:  # pragma: no cover
    mpz = int

    def _inv(a: int, p: int) -> int:
        return pow(a, -1, p)


def mod_mul_ref(a: int, b: int, p: int) -> int:
    """(a*b) mod p by multiply-then-divide."""
    if p == 0:
        raise ValueError("invalid modulus: 0")
    return a * b % p


def mod_inv_ref(a: int, p: int) -> int:
    """Modular inverse by Fermat exponentiation (independent of gmpy2.invert)."""
    if a % p == 0:
        raise ZeroDivisionError("inverse of 0")
    return pow(a, p - 2, p)


@dataclass(frozen=True)
class AffinePoint:
    x: int
    y: int
    is_identity: bool = False

    @staticmethod
    def identity() -> "AffinePoint":
        return AffinePoint(0, 1, True)


def on_curve(pt: AffinePoint, params: CurveParams) -> bool:
    if pt.is_identity:
        return True
    p, d = params.p, params.d
    x, y = pt.x % p, pt.y % p
    return (-x * x + y * y - 1 - d * x * x * y * y) % p == 0


def negate(pt: AffinePoint, params: CurveParams) -> AffinePoint:
    if pt.is_identity:
        return pt
    return AffinePoint((params.p - pt.x) % params.p, pt.y)


def padd_ref(pt1: AffinePoint, pt2: AffinePoint, params: CurveParams) -> AffinePoint:
    """Complete twisted Edwards addition on affine coordinates.

    x3 = (x1 y2 + y1 x2) / (1 + d x1 x2 y1 y2)
    y3 = (y1 y2 + x1 x2) / (1 - d x1 x2 y1 y2)
    """
    if pt1.is_identity:
        return pt2
    if pt2.is_identity:
        return pt1
    p, d = params.p, params.d
    x1, y1, x2, y2 = pt1.x, pt1.y, pt2.x, pt2.y
    dxy = d * x1 * x2 % p * y1 % p * y2 % p
    den_x = (1 + dxy) % p
    den_y = (1 - dxy) % p
    if den_x == 0 or den_y == 0:
        raise ArithmeticError("non-invertible denominator in complete addition")
    x3 = (x1 * y2 + y1 * x2) % p * _inv(den_x, p) % p
    y3 = (y1 * y2 + x1 * x2) % p * _inv(den_y, p) % p
    if x3 == 0 and y3 == 1:
        return AffinePoint.identity()
    return AffinePoint(x3, y3)


def scalar_mult_affine_ref(k: int, pt: AffinePoint, params: CurveParams) -> AffinePoint:
    """Double-and-add built purely on padd_ref.  Slow; small inputs only."""
    acc = AffinePoint.identity()
    base = pt
    while k:
        if k & 1:
            acc = padd_ref(acc, base, params)
        base = padd_ref(base, base, params)
        k >>= 1
    return acc


# -- projective (X:Y:Z) twisted Edwards arithmetic for the reference at scale.
# These are the standard projective formulas (no extended T coordinate, so
# the dataflow is unrelated to the optimized unit), still naive big-int mod-p.

def _proj_add(pt1, pt2, p, d):
    x1, y1, z1 = pt1
    x2, y2, z2 = pt2
    a = z1 * z2 % p
    b = a * a % p
    c = x1 * x2 % p
    dd = y1 * y2 % p
    e = d * c % p * dd % p
    f = (b - e) % p
    g = (b + e) % p
    x3 = a * f % p * ((x1 + y1) * (x2 + y2) - c - dd) % p
    y3 = a * g % p * (dd + c) % p
    z3 = f * g % p
    return x3, y3, z3


def _proj_double(pt, p):
    x1, y1, z1 = pt
    b = (x1 + y1) % p
    b = b * b % p
    c = x1 * x1 % p
    dd = y1 * y1 % p
    f = (dd - c) % p
    h = z1 * z1 % p
    j = (f - 2 * h) % p
    x3 = (b - c - dd) % p * j % p
    y3 = f * (-c - dd) % p
    z3 = f * j % p
    return x3, y3, z3


def _to_proj(pt: AffinePoint, p):
    if pt.is_identity:
        return (mpz(0), mpz(1), mpz(1))
    return (mpz(pt.x), mpz(pt.y), mpz(1))


def _to_affine(pt, p) -> AffinePoint:
    x, y, z = pt
    if z % p == 0:
        raise ArithmeticError("projective point with Z = 0")
    zi = _inv(z, p)
    ax, ay = int(x * zi % p), int(y * zi % p)
    if ax == 0 and ay == 1:
        return AffinePoint.identity()
    return AffinePoint(ax, ay)


def scalar_mult_ref(k: int, pt: AffinePoint, params: CurveParams) -> AffinePoint:
    """Left-to-right double-and-add over projective coordinates."""
    if k == 0 or pt.is_identity:
        return AffinePoint.identity()
    p, d = mpz(params.p), mpz(params.d)
    base = _to_proj(pt, p)
    acc = None
    for bit in bin(k)[2:]:
        if acc is not None:
            acc = _proj_double(acc, p)
        if bit == "1":
            acc = base if acc is None else _proj_add(acc, base, p, d)
    return _to_affine(acc, p)


def msm_ref(scalars, points, params: CurveParams) -> AffinePoint:
    """Sum of s_i * P_i, each by double-and-add, then a plain summation."""
    if len(scalars) != len(points):
        raise ValueError("scalars and points must have equal length")
    p, d = mpz(params.p), mpz(params.d)
    acc = None
    for s, pt in zip(scalars, points):
        if s >= params.r:
            raise ValueError("scalar exceeds the group order")
        if s == 0 or pt.is_identity:
            continue
        base = _to_proj(pt, p)
        term = None
        for bit in bin(s)[2:]:
            if term is not None:
                term = _proj_double(term, p)
            if bit == "1":
                term = base if term is None else _proj_add(term, base, p, d)
        acc = term if acc is None else _proj_add(acc, term, p, d)
    if acc is None:
        return AffinePoint.identity()
    return _to_affine(acc, p)


def generator(params: CurveParams | None = None) -> AffinePoint:
    params = params or bls12_377()
    return AffinePoint(params.gx, params.gy)
