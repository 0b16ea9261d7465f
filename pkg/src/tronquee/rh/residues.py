"""Laurent data of the jump corrections and the small-norm expansion coefficients.

About -2 lambda_0 (u = lambda + 2 lambda_0) the Airy matching gives

    Delta_k = f^{-3k/2} Pinf e^{i pi/4 sigma3} A_k e^{-i pi/4 sigma3} Pinf^{-1},
    f^{3/2} = -3g/2 = 6 lambda_0 u^{3/2} (1 - u/(5 lambda_0)),

which collapses to an anti-diagonal (k odd) or diagonal (k even) Laurent
series with rational coefficients times powers of lambda_0.  Those exact
series are the source of truth; the definition above, evaluated pointwise,
feeds an independent trapezoid quadrature on circles.

About lambda_0 the erfc matching gives the simple-pole correction Delta-hat_1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ConsistencyError, DomainError
from ..mpkernel import PrecisionContext, airy_uv, pow_principal, to_cx
from .linalg import HomogeneousLaurent, LaurentMatrix2, Matrix2
from .models import airy_asymptotic_coeffs, coeff_matrix, erf_b0
from .phase import GContext, _u_roots, g_eval

DISC_FRACTION = Fraction(3, 10)
TRAPEZOID_NODES = 256
MAX_NODES = 4096


def _power(gc: GContext):
    return lambda z, q: pow_principal(z, q, gc.prec)


# ----------------------------------------------------------------------------
# exact Delta_k about -2 lambda_0


def delta_exact(k: int, top: int = 6) -> HomogeneousLaurent:
    """Delta_k as exact homogeneous Laurent data in u, through order ``top``."""
    if k < 1:
        raise DomainError("k must be >= 1")
    u, v = airy_uv(k)
    base = Fraction(3, 2) ** k / Fraction(6) ** k
    terms = {}

    def put(order, i, j, q):
        if order > top:
            return
        m = terms.setdefault(order, [[Fraction(0)] * 2 for _ in range(2)])
        m[i][j] += q

    j = 0
    while True:
        c = base * math.comb(k + j - 1, j) / Fraction(5) ** j
        if k % 2:
            o12 = -(3 * k - 1) // 2 + j
            o21 = -(3 * k + 1) // 2 + j
            if o12 > top and o21 > top:
                break
            put(o12, 0, 1, -v * c)
            put(o21, 1, 0, -u * c)
        else:
            o = -3 * k // 2 + j
            if o > top:
                break
            put(o, 0, 0, v * c)
            put(o, 1, 1, u * c)
        j += 1
    frozen = {n: tuple(tuple(row) for row in m) for n, m in terms.items()}
    return HomogeneousLaurent(Fraction(-5 * k, 2), frozen, top)


def pole_order_bound(k: int) -> int:
    """3s - 1 for k = 2s - 1, 3s for k = 2s."""
    s = (k + 1) // 2
    return 3 * s - 1 if k % 2 else 3 * s


def delta_laurent(gc: GContext, k: int, top: int = 6) -> LaurentMatrix2:
    return delta_exact(k, top).numeric(gc.lambda0, gc.mp, _power(gc))


def pinf(gc: GContext, lam, side=None) -> Matrix2:
    """(lambda + 2 lambda_0)^{sigma3/4} [[1, 1], [1, -1]] / sqrt 2, cut along u < 0."""
    mp = gc.mp
    u, su = _u_roots(gc, lam, side)
    q = mp.sqrt(su)
    r = 1 / mp.sqrt(2)
    return Matrix2(q * r, q * r, r / q, -r / q)


def delta_eval(gc: GContext, k: int, lam, side=None) -> Matrix2:
    """Delta_k(lambda) straight from the Airy coefficient A_k and Pinf."""
    mp = gc.mp
    _, _, ent = airy_asymptotic_coeffs(k)[k]
    Ak = coeff_matrix(ent, mp)
    e = mp.expj(mp.pi / 4)
    inner = Matrix2(e, mp.mpc(0), mp.mpc(0), 1 / e) @ Ak @ Matrix2(1 / e, mp.mpc(0), mp.mpc(0), e)
    P = pinf(gc, lam, side)
    f32 = -3 * g_eval(gc, lam, side) / 2
    return (P @ inner @ P.inverse()).scale(f32 ** (-k))


def _circle(center, radius, n, mp, clockwise=True):
    """Trapezoid nodes and weights for (1/2 pi i) oint F ds, offset off the real axis."""
    out = []
    sgn = -1 if clockwise else 1
    for m in range(n):
        th = 2 * mp.pi * (m + mp.mpf(1) / 2) / n
        e = mp.expj(th)
        s = center + radius * e
        # ds = i r e dth, dth = 2 pi / n
        w = sgn * radius * e / n
        out.append((s, w))
    return out


def trapezoid_nodes(gc: GContext, lam, center, radius) -> int:
    """Node count for a Cauchy integral on |s - center| = radius evaluated at lam.

    The periodic trapezoid error decays like rho^{-n} with rho the ratio of
    |lam - center| and radius (or its inverse inside), so points near the circle
    need more nodes.  TRAPEZOID_NODES is the floor, MAX_NODES the ceiling.
    Counts are powers of two: no half-offset node then lands on the cut at
    angle pi, and node sets are shared between evaluation points.
    """
    mp = gc.mp
    rho = abs(lam - center) / radius
    gap = abs(mp.log(rho))
    want = (gc.prec.digits + 10) * mp.log(10) / gap if gap else mp.inf
    n = TRAPEZOID_NODES
    while n < MAX_NODES and n < want * mp.mpf("1.1"):
        n *= 2
    return n


def contour_coefficients(F, center, radius, orders, mp, n=TRAPEZOID_NODES):
    """Laurent coefficients c_n = (1/2 pi i) oint F(s) (s - c)^{-n-1} ds (counterclockwise)."""
    nodes = _circle(center, radius, n, mp, clockwise=False)
    vals = [(s, w, F(s)) for s, w in nodes]
    out = {}
    for order in orders:
        acc = Matrix2.zero(mp)
        for s, w, v in vals:
            acc = acc + v.scale(w * (s - center) ** (-order - 1))
        out[order] = acc
    return out


def disc_radius(gc: GContext, delta=None):
    """delta |lambda_0| with delta defaulting to DISC_FRACTION."""
    mp = gc.mp
    frac = mp.mpf(DISC_FRACTION.numerator) / DISC_FRACTION.denominator if delta is None else mp.mpf(delta)
    if not 0 < frac < 1:
        raise DomainError("disc radius fraction must lie in (0, 1) so the two discs stay disjoint")
    return frac * abs(gc.lambda0)


# ----------------------------------------------------------------------------
# Z_1, Z_2


@dataclass(frozen=True)
class ZExpansion:
    z1_outside: HomogeneousLaurent  # principal part only
    z1_inside_regular: HomogeneousLaurent  # Z_1 - pp inside the disc, i.e. -regular(Delta_1)
    z2_outside: HomogeneousLaurent
    z2_integrand: HomogeneousLaurent  # Z_{1-} Delta_1 + Delta_2

    def zsup1(self, t_order: int) -> HomogeneousLaurent:
        """Coefficient of 1/lambda (the residue) of Z_j, as exact data at order -1."""
        return {1: self.z1_outside, 2: self.z2_outside}[t_order]


def z_exact(top: int = 6) -> ZExpansion:
    d1 = delta_exact(1, top)
    d2 = delta_exact(2, top)
    z1_in = -d1.regular()
    integrand = z1_in @ d1 + d2
    return ZExpansion(
        z1_outside=d1.principal(),
        z1_inside_regular=z1_in,
        z2_outside=integrand.principal(),
        z2_integrand=integrand,
    )


def _laurent_eval(data: HomogeneousLaurent, gc: GContext, lam) -> Matrix2:
    return data.numeric(gc.lambda0, gc.mp, _power(gc)).evaluate(lam, gc.mp)


def z1_eval(gc: GContext, lam, inside: bool, side=None) -> Matrix2:
    """Closed-form Z_1: pp(Delta_1) outside the disc, pp(Delta_1) - Delta_1 inside."""
    pp = _laurent_eval(delta_exact(1).principal(), gc, lam)
    if not inside:
        return pp
    return pp - delta_eval(gc, 1, lam, side)


def z2_eval(gc: GContext, lam, inside: bool, side=None) -> Matrix2:
    ze = z_exact()
    pp = _laurent_eval(ze.z2_outside, gc, lam)
    if not inside:
        return pp
    z1m = z1_eval(gc, lam, True, side)
    return pp - z1m @ delta_eval(gc, 1, lam, side) - delta_eval(gc, 2, lam, side)


def _z_jump(gc, j, s):
    if j == 1:
        return delta_eval(gc, 1, s)
    if j == 2:
        return z1_eval(gc, s, True) @ delta_eval(gc, 1, s) + delta_eval(gc, 2, s)
    raise DomainError("quadrature implemented for Z_1 and Z_2")


def _chi_jump(gc, k, s, s_minus1):
    dh = delta_hat_1_eval(gc, s, s_minus1)
    if k == 1:
        return dh
    if k == 2:
        return chi11_eval(gc, s, s_minus1, True) @ dh
    raise DomainError("quadrature implemented for chi_{1,1} and chi_{2,1}")


def _cauchy(nodes, lam, mp):
    acc = Matrix2.zero(mp)
    for s, w, F in nodes:
        acc = acc + F.scale(w / (s - lam))
    return acc


def _jump_nodes(cache, key, center, r, n, mp, F):
    """(s, w, F(s)) on the clockwise circle, memoised in ``cache`` when one is given."""
    if cache is not None and (key, n) in cache:
        return cache[(key, n)]
    nodes = [(s, w, F(s)) for s, w in _circle(center, r, n, mp, clockwise=True)]
    if cache is not None:
        cache[(key, n)] = nodes
    return nodes


def z_quadrature(gc: GContext, j: int, lam, n=None, radius=None, cache=None) -> Matrix2:
    """(1/2 pi i) oint_clockwise [jump data]/(s - lambda) ds on the disc boundary.

    For j = 2 the inner boundary value Z_{1-} uses the Z_1 closed form inside.
    ``cache`` (a dict) shares integrand values between calls on the same circle.
    """
    mp = gc.mp
    c = -2 * gc.lambda0
    r = radius if radius is not None else disc_radius(gc)
    lam = to_cx(lam, gc.prec)
    if abs(abs(lam - c) - r) < r * mp.mpf("1e-3"):
        raise DomainError("evaluation point too close to the disc boundary")
    if j not in (1, 2):
        raise DomainError("quadrature implemented for Z_1 and Z_2")
    n = trapezoid_nodes(gc, lam, c, r) if n is None else n
    nodes = _jump_nodes(cache, ("Z", j, r), c, r, n, mp, lambda s: _z_jump(gc, j, s))
    return _cauchy(nodes, lam, mp)


def z_consistency(gc: GContext, points, n=None, delta=None):
    """Largest relative closed-form/quadrature mismatch over ``points`` for Z_1 and Z_2."""
    mp = gc.mp
    c = -2 * gc.lambda0
    r = disc_radius(gc, delta)
    worst = mp.mpf(0)
    cache: dict = {}
    for lam in points:
        lam = to_cx(lam, gc.prec)
        inside = abs(lam - c) < r
        for j, closed in ((1, z1_eval), (2, z2_eval)):
            a = closed(gc, lam, inside)
            b = z_quadrature(gc, j, lam, n, radius=r, cache=cache)
            worst = max(worst, (a - b).norm() / max(a.norm(), mp.mpf(10) ** (-gc.prec.digits)))
    return worst


def z_expansion(gc: GContext, check_points=None, n=None, delta=None):
    """Closed-form Z_1, Z_2 data and the two-term Z^{(1)}(t) law, verified by quadrature.

    Returns a dict with the exact Laurent data, numeric LaurentMatrix2 objects
    about -2 lambda_0 and the matrices multiplying 1/t and 1/t^2 in Z^{(1)}(t).
    Raises ConsistencyError if quadrature disagrees with the closed forms.
    """
    mp = gc.mp
    ze = z_exact()
    if check_points is None:
        c = -2 * gc.lambda0
        r = disc_radius(gc, delta)
        check_points = [c + 3 * r * mp.expj(mp.mpf(1) / 3), c + r / 2 * mp.expj(mp.mpf(2))]
    err = z_consistency(gc, check_points, n, delta)
    tol = mp.mpf(10) ** (-(gc.prec.digits - 10))
    if err > tol:
        raise ConsistencyError(f"Z quadrature disagrees with the closed form (rel err {mp.nstr(err, 3)})")
    power = _power(gc)
    z1 = ze.z1_outside.numeric(gc.lambda0, mp, power)
    z2 = ze.z2_outside.numeric(gc.lambda0, mp, power)
    return {
        "exact": ze,
        "Z1": z1,
        "Z2": z2,
        "zsup_t1": z1.coefficient(-1, mp),
        "zsup_t2": z2.coefficient(-1, mp),
        "quadrature_error": err,
    }


# ----------------------------------------------------------------------------
# Delta-hat_1 and chi about lambda_0


def _sqrt_g_minus_g0(gc: GContext, lam):
    """Branch of (g - g0)^{1/2} that is ~ (3 lambda_0)^{1/4} (lambda - lambda_0)."""
    mp = gc.mp
    e = lam - gc.lambda0
    a = pow_principal(3 * gc.lambda0, Fraction(1, 4), gc.prec)
    ratio = (g_eval(gc, lam) - gc.g0) / (a * a * e * e)
    return a * e * mp.sqrt(ratio)


def pinf_b0_conj(gc: GContext, lam, s_minus1) -> Matrix2:
    """Pinf B_0 Pinf^{-1} = (b0/2) [[1, -u^{1/2}], [u^{-1/2}, -1]]."""
    mp = gc.mp
    b0 = erf_b0(s_minus1, gc.prec)
    su = mp.sqrt(mp.mpc(lam) + 2 * gc.lambda0)
    return Matrix2(mp.mpc(1), -su, 1 / su, mp.mpc(-1)).scale(b0 / 2)


def delta_hat_1_eval(gc: GContext, lam, s_minus1) -> Matrix2:
    return pinf_b0_conj(gc, lam, s_minus1).scale(1 / _sqrt_g_minus_g0(gc, lam))


def delta_hat_1_residue(gc: GContext, s_minus1) -> Matrix2:
    """Closed form of the simple-pole coefficient at lambda_0."""
    mp = gc.mp
    s = to_cx(s_minus1, gc.prec)
    r = pow_principal(3 * gc.lambda0, Fraction(1, 2), gc.prec)
    pref = mp.power(2, mp.mpf(-5) / 2) * s / (mp.sqrt(mp.pi) * pow_principal(3 * gc.lambda0, Fraction(1, 4), gc.prec))
    return Matrix2(mp.mpc(1), -r, 1 / r, mp.mpc(-1)).scale(pref)


def delta_hat_1_regular0(gc: GContext, s_minus1) -> Matrix2:
    """Regular part of Delta-hat_1 at lambda_0: (3l0)^{-1/4} [M'(l0) - (G1/2) M(l0)], G1 = 1/(9 l0)."""
    mp = gc.mp
    b0 = erf_b0(s_minus1, gc.prec)
    u = 3 * gc.lambda0
    su = mp.sqrt(u)
    M = Matrix2(mp.mpc(1), -su, 1 / su, mp.mpc(-1)).scale(b0 / 2)
    Mp = Matrix2(mp.mpc(0), -1 / (2 * su), -1 / (2 * su ** 3), mp.mpc(0)).scale(b0 / 2)
    G1 = 1 / (9 * gc.lambda0)
    return (Mp - M.scale(G1 / 2)).scale(1 / pow_principal(u, Fraction(1, 4), gc.prec))


def delta_hat_1(gc: GContext, s_minus1) -> LaurentMatrix2:
    return LaurentMatrix2(
        center=gc.lambda0,
        terms={-1: delta_hat_1_residue(gc, s_minus1), 0: delta_hat_1_regular0(gc, s_minus1)},
    )


def chi11_eval(gc: GContext, lam, s_minus1, inside: bool) -> Matrix2:
    D = delta_hat_1_residue(gc, s_minus1)
    out = D.scale(1 / (lam - gc.lambda0))
    if inside:
        out = out - delta_hat_1_eval(gc, lam, s_minus1)
    return out


def chi21_eval(gc: GContext, lam, s_minus1) -> Matrix2:
    """chi_{2,1} outside the disc: -R0 D / (lambda - lambda_0), R0 the regular value at lambda_0."""
    R0 = delta_hat_1_regular0(gc, s_minus1)
    D = delta_hat_1_residue(gc, s_minus1)
    return (R0 @ D).scale(-1 / (lam - gc.lambda0))


def chi_quadrature(gc: GContext, k: int, lam, s_minus1, n=None, radius=None, cache=None) -> Matrix2:
    """Clockwise trapezoid for chi_{1,1} (k = 1) or chi_{2,1} (k = 2) on the disc at lambda_0."""
    mp = gc.mp
    r = radius if radius is not None else disc_radius(gc)
    lam = to_cx(lam, gc.prec)
    if abs(abs(lam - gc.lambda0) - r) < r * mp.mpf("1e-3"):
        raise DomainError("evaluation point too close to the disc boundary")
    if k not in (1, 2):
        raise DomainError("quadrature implemented for chi_{1,1} and chi_{2,1}")
    n = trapezoid_nodes(gc, lam, gc.lambda0, r) if n is None else n
    key = ("chi", k, r, to_cx(s_minus1, gc.prec))
    nodes = _jump_nodes(cache, key, gc.lambda0, r, n, mp, lambda s: _chi_jump(gc, k, s, s_minus1))
    return _cauchy(nodes, lam, mp)


def chi_expansion(gc: GContext, s_minus1, check_points=None, n=None, delta=None):
    """chi_{1,1} and chi_{2,1} closed forms checked against quadrature, plus the chi^{(1)} law.

    chi^{(1)}_{1,1} = e^{2 t g0} t^{-1/2} (Delta-hat_1^{(-1)} + O(1/t)); the
    returned ``chi_sup_lead`` is that bracketed leading matrix.
    """
    mp = gc.mp
    r = disc_radius(gc, delta)
    if check_points is None:
        check_points = [gc.lambda0 + 3 * r * mp.expj(mp.mpf(1) / 2), gc.lambda0 + r / 3 * mp.expj(mp.mpf(-1))]
    worst = mp.mpf(0)
    floor = mp.mpf(10) ** (-gc.prec.digits)
    cache: dict = {}
    for lam in check_points:
        lam = to_cx(lam, gc.prec)
        inside = abs(lam - gc.lambda0) < r
        a = chi11_eval(gc, lam, s_minus1, inside)
        b = chi_quadrature(gc, 1, lam, s_minus1, n, radius=r, cache=cache)
        worst = max(worst, (a - b).norm() / max(a.norm(), floor))
        if not inside:
            a2 = chi21_eval(gc, lam, s_minus1)
            b2 = chi_quadrature(gc, 2, lam, s_minus1, n, radius=r, cache=cache)
            worst = max(worst, (a2 - b2).norm() / max(a2.norm(), floor))
    tol = mp.mpf(10) ** (-(gc.prec.digits - 10))
    if worst > tol:
        raise ConsistencyError(f"chi quadrature disagrees with the closed form (rel err {mp.nstr(worst, 3)})")
    D = delta_hat_1_residue(gc, s_minus1)
    return {
        "delta_hat_1": delta_hat_1(gc, s_minus1),
        "chi11_residue": D,
        "chi21_residue": (delta_hat_1_regular0(gc, s_minus1) @ D).scale(-1),
        "chi_sup_lead": D,
        "quadrature_error": worst,
    }


# ----------------------------------------------------------------------------
# reconstruction of the transseries coefficients


def reconstruct(gc: GContext, s_minus1, verify=True, n=None, delta=None) -> dict:
    """y_{0,1}, h_{0,1} from Z^{(1)}(t) and y_{1,0}, h_{1,0} from chi^{(1)}_{1,1}.

    With Z^{(1)} = Z_a/t + Z_b/t^2 (Z_a anti-diagonal, Z_b diagonal):
      y - y_0 term:  ((Z_a)_{21}^2 + (Z_b)_{11} - (Z_b)_{22}) |x|^{-2}, normalised by lambda_0 |x|^{1/2};
      H - H_0 term:  -(Z_a)_{21} |x|^{-1}, normalised by 4 lambda_0^3 |x|^{3/2}.
    Rotating |x| to -x turns both into phi-independent numbers.  The first
    exponential level reads (D_11 - D_22) and -D_21 of D = Delta-hat_1^{(-1)}.
    """
    mp = gc.mp
    if verify:
        zx = z_expansion(gc, n=n, delta=delta)
        za, zb = zx["zsup_t1"], zx["zsup_t2"]
    else:
        power = _power(gc)
        ze = z_exact()
        za = ze.z1_outside.numeric(gc.lambda0, mp, power).coefficient(-1, mp)
        zb = ze.z2_outside.numeric(gc.lambda0, mp, power).coefficient(-1, mp)
    rot = mp.expj(5 * (gc.phi - mp.pi) / 2)
    K = za.c ** 2 + zb.a - zb.d
    y01 = K / gc.lambda0 * rot
    h01 = -za.c / (4 * gc.lambda0 ** 3) * rot
    if verify:
        D = chi_expansion(gc, s_minus1, n=n, delta=delta)["chi_sup_lead"]
    else:
        D = delta_hat_1_residue(gc, s_minus1)
    y10 = (D.a - D.d) * mp.expj((gc.phi - mp.pi) / 8)
    h10 = -D.c * mp.expj(3 * (gc.phi - mp.pi) / 8)
    return {"y01": y01, "h01": h01, "y10": y10, "h10": h10}
