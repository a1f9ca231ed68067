"""Extended-coordinate twisted Edwards point addition with lazy reduction.

A bucket point is (X, Y, T, Z) with T*Z = X*Y; stream points arrive as
(X, Y, U) with Z = 1 and U = k*T precomputed (k = 2d), which makes the
mixed and the complete adder share one multiplication dataflow:

    A = (Y1-X1)*(Y2-X2)   B = (Y1+X1)*(Y2+X2)   C = T1*U2   D = 2*Z1*Z2
    E = B-A   F = D-C   G = D+C   H = B+A
    X3 = E*F  Y3 = G*H  T3 = E*H  Z3 = F*G

Additions and subtractions never reduce; every subtraction adds the slack
constant 3M to stay nonnegative.  Ranges close as follows (proof in the
barrett module: any reduction output is below 1.5M):

    coordinates        < 1.5M      stream point coords  < M
    Y1-X1+3M           < 4.5M      Y1+X1                < 3M
    D (a doubling add) < 3M        E = B-A+3M           < 4.5M
    F = D-C+3M         < 6M        G = D+C              < 4.5M

so every multiplication operand stays below 6M, matching the loose
reduction contract, and subtraction slack 3M can never be outrun by a
coordinate (coordinates stay below 1.5M < 3M).  A multiplication site
uses the standard-range entry point only when both proven operand bounds
sit below 2M; the wider sites go through the coarse entry point.
"""

from dataclasses import dataclass

from . import oracle
from .barrett import BarrettParams, make_params, modmul, modmul_coarse, reduce_int
from .limbvec import NLIMBS, pack, unpack
from .oracle import AffinePoint
from .params import CurveParams, _edwards_to_sw, _sw_to_edwards, sw_on_curve

try:
    from gmpy2 import mpz
except ImportError:  # pragma: no cover
    mpz = int


@dataclass(frozen=True)
class PaddContext:
    curve: CurveParams
    barrett: BarrettParams
    m3_limbs: tuple
    k_limbs: tuple
    m3: int
    mul_log: list | None = None

    @property
    def modulus(self) -> int:
        return self.barrett.modulus


def make_context(curve: CurveParams | None = None, mul_log: list | None = None) -> PaddContext:
    from .params import bls12_377
    curve = curve or bls12_377()
    bp = make_params(curve.p)
    return PaddContext(curve=curve, barrett=bp,
                       m3_limbs=tuple(pack(3 * curve.p)),
                       k_limbs=tuple(pack(curve.k_coeff)),
                       m3=3 * curve.p, mul_log=mul_log)


@dataclass(frozen=True)
class ExtPoint:
    X: tuple
    Y: tuple
    T: tuple
    Z: tuple


@dataclass(frozen=True)
class InputPoint:
    X: tuple
    Y: tuple
    U: tuple


def identity_ext() -> ExtPoint:
    one = tuple(pack(1))
    zero = tuple(pack(0))
    return ExtPoint(zero, one, zero, one)


def input_from_affine(pt: AffinePoint, ctx: PaddContext) -> InputPoint:
    """(X, Y, U) with Z = 1; U = k*x*y mod M, canonical."""
    m = ctx.modulus
    u = ctx.curve.k_coeff * pt.x % m * pt.y % m
    return InputPoint(tuple(pack(pt.x % m)), tuple(pack(pt.y % m)), tuple(pack(u)))


def ext_from_affine(pt: AffinePoint, ctx: PaddContext, z: int = 1) -> ExtPoint:
    """Extended form with an arbitrary nonzero projective scale."""
    m = ctx.modulus
    assert z % m != 0
    if pt.is_identity:
        return ExtPoint(tuple(pack(0)), tuple(pack(z % m)),
                        tuple(pack(0)), tuple(pack(z % m)))
    x, y = pt.x % m, pt.y % m
    return ExtPoint(tuple(pack(x * z % m)), tuple(pack(y * z % m)),
                    tuple(pack(x * y % m * z % m)), tuple(pack(z % m)))


def _lazy_add(u, v):
    return [u[i] + v[i] for i in range(NLIMBS)]


def _lazy_sub(u, v, ctx):
    m3 = ctx.m3_limbs
    return [u[i] - v[i] + m3[i] for i in range(NLIMBS)]


def _mm(a, b, ctx, kind):
    if ctx.mul_log is not None:
        ctx.mul_log.append(kind)
    if kind == "std":
        return modmul(a, b, ctx.barrett)
    return modmul_coarse(a, b, ctx.barrett)


def mixed_padd(p1: ExtPoint, q2: InputPoint, ctx: PaddContext) -> ExtPoint:
    """P + Q for a bucket point and a canonical stream point; 7 modmuls."""
    s1 = _lazy_sub(p1.Y, p1.X, ctx)
    s2 = _lazy_sub(q2.Y, q2.X, ctx)
    a1 = _lazy_add(p1.Y, p1.X)
    a2 = _lazy_add(q2.Y, q2.X)
    va = _mm(s1, s2, ctx, "coarse")
    vb = _mm(a1, a2, ctx, "coarse")
    vc = _mm(p1.T, q2.U, ctx, "std")      # both operands below 2M
    vd = _lazy_add(p1.Z, p1.Z)
    e = _lazy_sub(vb, va, ctx)
    f = _lazy_sub(vd, vc, ctx)
    g = _lazy_add(vd, vc)
    h = _lazy_add(vb, va)
    return ExtPoint(tuple(_mm(e, f, ctx, "coarse")),
                    tuple(_mm(g, h, ctx, "coarse")),
                    tuple(_mm(e, h, ctx, "coarse")),
                    tuple(_mm(f, g, ctx, "coarse")))


def complete_padd(p1: ExtPoint, p2: ExtPoint, ctx: PaddContext) -> ExtPoint:
    """P + Q for two bucket points (doubles when P = Q); 9 modmuls."""
    u2 = _mm(list(ctx.k_limbs), p2.T, ctx, "coarse")
    zz = _mm(p1.Z, p2.Z, ctx, "std")
    s1 = _lazy_sub(p1.Y, p1.X, ctx)
    s2 = _lazy_sub(p2.Y, p2.X, ctx)
    a1 = _lazy_add(p1.Y, p1.X)
    a2 = _lazy_add(p2.Y, p2.X)
    va = _mm(s1, s2, ctx, "coarse")
    vb = _mm(a1, a2, ctx, "coarse")
    vc = _mm(p1.T, u2, ctx, "std")
    vd = _lazy_add(zz, zz)
    e = _lazy_sub(vb, va, ctx)
    f = _lazy_sub(vd, vc, ctx)
    g = _lazy_add(vd, vc)
    h = _lazy_add(vb, va)
    return ExtPoint(tuple(_mm(e, f, ctx, "coarse")),
                    tuple(_mm(g, h, ctx, "coarse")),
                    tuple(_mm(e, h, ctx, "coarse")),
                    tuple(_mm(f, g, ctx, "coarse")))


def to_affine(pt: ExtPoint, ctx: PaddContext) -> AffinePoint:
    """Canonicalize: divide by Z, fine-reduce to [0, M)."""
    m = ctx.modulus
    z = unpack(list(pt.Z)) % m
    if z == 0:
        raise ArithmeticError("degenerate point: Z = 0")
    zi = oracle.mod_inv_ref(z, m)
    x = unpack(list(pt.X)) % m * zi % m
    y = unpack(list(pt.Y)) % m * zi % m
    if x == 0 and y == 1:
        return AffinePoint.identity()
    return AffinePoint(x, y)


# -- integer-mode twins: same dataflow, same Barrett constants, on plain
# (gmpy2) integers.  Bit-identical to the unpacked limb results; used by
# the MSM engine at scale.

def identity_ext_int(ctx: PaddContext):
    return (mpz(0), mpz(1), mpz(0), mpz(1))


def input_from_affine_int(pt: AffinePoint, ctx: PaddContext):
    m = ctx.modulus
    return (mpz(pt.x % m), mpz(pt.y % m),
            mpz(ctx.curve.k_coeff * pt.x % m * pt.y % m))


def ext_from_affine_int(pt: AffinePoint, ctx: PaddContext, z: int = 1):
    m = ctx.modulus
    assert z % m != 0
    if pt.is_identity:
        return (mpz(0), mpz(z % m), mpz(0), mpz(z % m))
    x, y = pt.x % m, pt.y % m
    return (mpz(x * z % m), mpz(y * z % m), mpz(x * y % m * z % m), mpz(z % m))


def mixed_padd_int(p1, q2, ctx: PaddContext):
    x1, y1, t1, z1 = p1
    x2, y2, u2 = q2
    bp, m3 = ctx.barrett, ctx.m3
    va = reduce_int((y1 - x1 + m3) * (y2 - x2 + m3), bp)
    vb = reduce_int((y1 + x1) * (y2 + x2), bp)
    vc = reduce_int(t1 * u2, bp)
    vd = z1 + z1
    e = vb - va + m3
    f = vd - vc + m3
    g = vd + vc
    h = vb + va
    return (reduce_int(e * f, bp), reduce_int(g * h, bp),
            reduce_int(e * h, bp), reduce_int(f * g, bp))


def complete_padd_int(p1, p2, ctx: PaddContext):
    x1, y1, t1, z1 = p1
    x2, y2, t2, z2 = p2
    bp, m3 = ctx.barrett, ctx.m3
    u2 = reduce_int(ctx.curve.k_coeff * t2, bp)
    zz = reduce_int(z1 * z2, bp)
    va = reduce_int((y1 - x1 + m3) * (y2 - x2 + m3), bp)
    vb = reduce_int((y1 + x1) * (y2 + x2), bp)
    vc = reduce_int(t1 * u2, bp)
    vd = zz + zz
    e = vb - va + m3
    f = vd - vc + m3
    g = vd + vc
    h = vb + va
    return (reduce_int(e * f, bp), reduce_int(g * h, bp),
            reduce_int(e * h, bp), reduce_int(f * g, bp))


def to_affine_int(pt, ctx: PaddContext) -> AffinePoint:
    m = ctx.modulus
    x, y, _, z = (int(v) % m for v in pt)
    if z == 0:
        raise ArithmeticError("degenerate point: Z = 0")
    zi = oracle.mod_inv_ref(z, m)
    x, y = x * zi % m, y * zi % m
    if x == 0 and y == 1:
        return AffinePoint.identity()
    return AffinePoint(x, y)


def ext_to_int(pt: ExtPoint):
    return tuple(mpz(unpack(list(c))) for c in (pt.X, pt.Y, pt.T, pt.Z))


def input_to_int(pt: InputPoint):
    return tuple(mpz(unpack(list(c))) for c in (pt.X, pt.Y, pt.U))


# -- Weierstrass conversions (used for interoperability and validation).

def from_weierstrass(x: int, y: int, params: CurveParams) -> AffinePoint:
    """Map a short-Weierstrass point into the twisted Edwards curve."""
    if not sw_on_curve((x, y), params.p, params.sw_b):
        raise ValueError("point not on the Weierstrass curve")
    ex, ey = _sw_to_edwards((x, y), params.p, params.alpha, params.mont_s,
                            params.scale_c)
    return AffinePoint(ex, ey)


def to_weierstrass(pt: AffinePoint, params: CurveParams) -> tuple[int, int]:
    if pt.is_identity:
        raise ValueError("identity has no affine Weierstrass image")
    return _edwards_to_sw((pt.x, pt.y), params.p, params.alpha, params.mont_s,
                          params.scale_c)
