"""Model local problems: the Airy parametrix at -2 lambda_0 and the erfc one at lambda_0.

Airy model
----------
A(zeta) jumps on arg zeta = +-2pi/3 (rays oriented towards 0) and on the real
line (oriented left to right).  The '+' side of a ray lies on its left, which
means: the 2pi/3 ray has '+' in (0, 2pi/3); the -2pi/3 ray has '+' in
(-pi, -2pi/3); both real half-lines have '+' above.

erfc model
----------
B(xi) = [[e^{xi^2}, b(xi)], [0, e^{-xi^2}]] jumps on the imaginary axis
(oriented upwards, '+' side is Re xi < 0).
"""

from __future__ import annotations

from fractions import Fraction

from ..errors import BranchError, DomainError
from ..mpkernel import PrecisionContext, airy_pair, airy_uv, erfc_c, to_cx
from .linalg import Matrix2


def _omega(mp):
    return mp.expj(2 * mp.pi / 3)


def airy_y(zeta, ctx: PrecisionContext):
    """((y0, y0'), (y1, y1'), (y2, y2')) with y_j = w^j Ai(w^j zeta)."""
    mp = ctx.mp
    w = _omega(mp)
    a0, a0p = airy_pair(zeta, ctx)
    a1, a1p = airy_pair(w * zeta, ctx)
    a2, a2p = airy_pair(w * w * zeta, ctx)
    return (a0, a0p), (w * a1, w * w * a1p), (w * w * a2, w * a2p)


def _airy_sector(zeta, side, ctx):
    """Sector index 0..3 for (0,2pi/3), (2pi/3,pi), (-pi,-2pi/3), (-2pi/3,0)."""
    mp = ctx.mp
    if zeta == 0:
        raise DomainError("the Airy model is not evaluated at zeta = 0")
    a = mp.arg(zeta)
    eps = mp.mpf(10) ** (-(ctx.digits - 2))
    third = 2 * mp.pi / 3
    on = None
    if abs(a) <= eps:
        on = "pos"
    elif abs(a - third) <= eps:
        on = "up"
    elif abs(a + third) <= eps:
        on = "down"
    elif abs(abs(a) - mp.pi) <= eps:
        on = "neg"
    if on is not None:
        if side not in ("+", "-"):
            raise BranchError("zeta lies on a jump ray; pass side='+' or '-'")
        plus = side == "+"
        return {"pos": 0 if plus else 3, "up": 0 if plus else 1, "down": 2 if plus else 3, "neg": 1 if plus else 2}[on]
    if 0 < a < third:
        return 0
    if a > third:
        return 1
    if a < -third:
        return 2
    return 3


def airy_model(zeta, ctx: PrecisionContext, side=None) -> Matrix2:
    """The piecewise Airy matrix A(zeta)."""
    zeta = to_cx(zeta, ctx)
    sector = _airy_sector(zeta, side, ctx)
    (y0, y0p), (y1, y1p), (y2, y2p) = airy_y(zeta, ctx)
    if sector == 0:
        return Matrix2(y0, -y2, y0p, -y2p)
    if sector == 1:
        return Matrix2(-y1, -y2, -y1p, -y2p)
    if sector == 2:
        return Matrix2(-y2, y1, -y2p, y1p)
    return Matrix2(y0, y1, y0p, y1p)


def airy_jump(ray: str, mp) -> Matrix2:
    one, zero = mp.mpc(1), mp.mpc(0)
    if ray in ("up", "down"):
        return Matrix2(one, zero, one, one)
    if ray == "neg":
        return Matrix2(zero, one, -one, zero)
    if ray == "pos":
        return Matrix2(one, one, zero, one)
    raise DomainError(f"unknown Airy ray {ray!r}")


_RAY_ARG = {"pos": 0, "up": Fraction(2, 3), "down": Fraction(-2, 3), "neg": 1}


def airy_jump_residual(ray: str, r, ctx: PrecisionContext):
    """max-norm of A_+ - A_- J at distance r on the given ray."""
    mp = ctx.mp
    q = _RAY_ARG[ray]
    zeta = mp.mpf(r) * mp.expj(mp.pi * mp.mpf(q.numerator) / q.denominator)
    if ray == "neg":
        zeta = mp.mpc(-mp.mpf(r), 0)
    ap = airy_model(zeta, ctx, side="+")
    am = airy_model(zeta, ctx, side="-")
    return (ap - am @ airy_jump(ray, mp)).norm()


def airy_asymptotic_coeffs(K: int):
    """[(u_k, v_k, A_k)] for k = 0..K with A_k as exact entries in Q(i).

    A_k = (3/2)^k / 2 [[(-1)^k (u+v), i (u-v)], [(-1)^{k+1} i (u-v), u+v]];
    each entry is returned as a pair (real, imag) of Fractions.
    """
    if K < 0:
        raise DomainError("K must be non-negative")
    out = []
    for k in range(K + 1):
        u, v = airy_uv(k)
        f = Fraction(3, 2) ** k / 2
        sgn = -1 if k % 2 else 1
        a11 = (sgn * f * (u + v), Fraction(0))
        a12 = (Fraction(0), f * (u - v))
        a21 = (Fraction(0), -sgn * f * (u - v))
        a22 = (f * (u + v), Fraction(0))
        out.append((u, v, (a11, a12, a21, a22)))
    return out


def coeff_matrix(entries, mp) -> Matrix2:
    return Matrix2(*(mp.mpc(mp.mpf(re.numerator) / re.denominator, mp.mpf(im.numerator) / im.denominator) for re, im in entries))


def airy_normalized(zeta, ctx: PrecisionContext, side="-") -> Matrix2:
    """2 sqrt(pi) M^{-1} zeta^{sigma3/4} A(zeta) e^{(2/3) zeta^{3/2} sigma3}, M = [[1, i], [-1, i]].

    Tends to I + sum A_k zeta^{-3k/2} for |arg zeta| < pi.
    """
    mp = ctx.mp
    zeta = to_cx(zeta, ctx)
    i = mp.mpc(0, 1)
    M = Matrix2(mp.mpc(1), i, mp.mpc(-1), i)
    q = mp.power(zeta, mp.mpf(1) / 4)
    e = mp.exp(2 * mp.power(zeta, mp.mpf(3) / 2) / 3)
    left = M.inverse() @ Matrix2(q, mp.mpc(0), mp.mpc(0), 1 / q) @ airy_model(zeta, ctx, side=side)
    return (left @ Matrix2(e, mp.mpc(0), mp.mpc(0), 1 / e)).scale(2 * mp.sqrt(mp.pi))


def airy_remainder(zeta, K: int, ctx: PrecisionContext, side="-"):
    mp = ctx.mp
    zeta = to_cx(zeta, ctx)
    approx = Matrix2.zero(mp)
    for k, (_, _, ent) in enumerate(airy_asymptotic_coeffs(K)):
        approx = approx + coeff_matrix(ent, mp).scale(mp.power(zeta, -mp.mpf(3 * k) / 2))
    return (airy_normalized(zeta, ctx, side) - approx).norm()


def airy_remainder_slope(K: int, ctx: PrecisionContext, zetas=(7, 8, 9, 10, 11)):
    """Least-squares slope of log remainder against log zeta along arg zeta = 0."""
    mp = ctx.mp
    xs = [mp.log(mp.mpf(z)) for z in zetas]
    ys = [mp.log(airy_remainder(mp.mpf(z), K, ctx)) for z in zetas]
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    return sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / sum((x - mx) ** 2 for x in xs)


# ----------------------------------------------------------------------------
# erfc model


def erf_b(xi, s_minus1, ctx: PrecisionContext, side=None):
    """b(xi); on the imaginary axis a side is required ('+' means Re xi < 0)."""
    mp = ctx.mp
    xi = to_cx(xi, ctx)
    s = to_cx(s_minus1, ctx)
    if s == 0:
        return mp.mpc(0)
    r2 = mp.sqrt(2)
    left = mp.re(xi) < 0
    if mp.re(xi) == 0:
        if side not in ("+", "-"):
            raise BranchError("xi lies on the imaginary axis; pass side='+' or '-'")
        left = side == "+"
    e = mp.exp(xi * xi)
    if left:
        return -s * e * erfc_c(-r2 * xi, ctx) / 2
    return s * e * erfc_c(r2 * xi, ctx) / 2


def erf_model(xi, s_minus1, ctx: PrecisionContext, side=None) -> Matrix2:
    mp = ctx.mp
    xi = to_cx(xi, ctx)
    e = mp.exp(xi * xi)
    return Matrix2(e, erf_b(xi, s_minus1, ctx, side), mp.mpc(0), 1 / e)


def erf_jump_residual(y, s_minus1, ctx: PrecisionContext):
    """max-norm of B_+ - B_- [[1, -s], [0, 1]] at xi = i y."""
    mp = ctx.mp
    xi = mp.mpc(0, y)
    s = to_cx(s_minus1, ctx)
    J = Matrix2(mp.mpc(1), -s, mp.mpc(0), mp.mpc(1))
    return (erf_model(xi, s, ctx, "+") - erf_model(xi, s, ctx, "-") @ J).norm()


def erf_b0(s_minus1, ctx: PrecisionContext):
    """Leading coefficient s / (2^{3/2} sqrt pi) of xi b(xi) e^{xi^2}."""
    mp = ctx.mp
    return to_cx(s_minus1, ctx) / (mp.power(2, mp.mpf(3) / 2) * mp.sqrt(mp.pi))
