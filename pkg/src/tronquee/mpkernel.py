"""Arbitrary-precision scalars, principal-branch powers and special functions.

Every routine takes an explicit :class:`PrecisionContext`.  Internally each
context owns a private ``mpmath.MPContext`` (one per thread and working
precision), so no routine reads or writes the global ``mpmath.mp`` state.

Complex scalars are plain ``mpmath`` ``mpc`` values and exact rationals are
:class:`fractions.Fraction`.

Branch rule: all fractional powers use ``Arg z`` in ``(-pi, pi]``.  Callers
that need a cut somewhere else recentre or rotate their argument first.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import DomainError, NumericOverflowError, PrecisionRangeError

Cx = mpmath.mpc
BigRational = Fraction

# Maclaurin evaluation of Ai is used for |z| <= AIRY_CAP; see airy_pair.
AIRY_CAP = 12.0
# erfc switches to the continued fraction for |z| >= ERFC_SWITCH (after
# reflection into Re z >= 0) when also |arg z| <= ERFC_CF_SECTOR.
ERFC_SWITCH = 4.0
ERFC_CF_SECTOR = math.pi / 3
# |z|^2 beyond which e^{-z^2} scaling is refused.
_EXP_LIMIT = 1.0e7

_local = threading.local()


def _mp_for(dps: int) -> mpmath.MPContext:
    cache = getattr(_local, "contexts", None)
    if cache is None:
        cache = _local.contexts = {}
    ctx = cache.get(dps)
    if ctx is None:
        ctx = mpmath.MPContext()
        ctx.dps = dps
        cache[dps] = ctx
    return ctx


@dataclass(frozen=True)
class PrecisionContext:
    """Requested significant digits plus guard digits carried internally."""

    digits: int = 60
    guard: int = 10

    def __post_init__(self):
        if int(self.digits) != self.digits or self.digits < 15:
            raise DomainError(f"digits must be an integer >= 15, got {self.digits!r}")
        if self.guard < 0:
            raise DomainError("guard must be non-negative")

    @property
    def dps(self) -> int:
        return self.digits + self.guard

    @property
    def mp(self) -> mpmath.MPContext:
        return _mp_for(self.dps)

    @property
    def tol(self):
        """10^-digits as a working-precision real."""
        return self.mp.mpf(10) ** (-self.digits)

    def raised(self, extra: int) -> "PrecisionContext":
        return PrecisionContext(self.digits + extra, self.guard)

    def working(self, extra_guard: int) -> mpmath.MPContext:
        """mpmath context with ``extra_guard`` more digits than ``dps``."""
        return _mp_for(self.dps + max(0, int(extra_guard)))


def to_cx(value, ctx: PrecisionContext):
    """Convert numbers, strings or Fractions to a working-precision mpc."""
    mp = ctx.mp
    if isinstance(value, Fraction):
        return mp.mpc(mp.mpf(value.numerator) / value.denominator)
    if isinstance(value, str):
        return mp.mpc(parse_complex(value, ctx))
    v = mp.mpc(value)
    if not (mp.isfinite(v.real) and mp.isfinite(v.imag)):
        raise NumericOverflowError(f"non-finite complex value {value!r}")
    return v


def parse_complex(text: str, ctx: PrecisionContext):
    """Parse ``"a+bi"`` style literals (``"0+1i"``, ``"-2.5"``, ``"3i"``)."""
    mp = ctx.mp
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise DomainError("empty complex literal")
    if not s.endswith("i"):
        try:
            return mp.mpc(mp.mpf(s), 0)
        except (ValueError, TypeError) as exc:
            raise DomainError(f"cannot parse complex literal {text!r}") from exc
    body = s[:-1]
    # split at the last sign that is not part of an exponent
    cut = -1
    for k in range(len(body) - 1, 0, -1):
        if body[k] in "+-" and body[k - 1] not in "eE":
            cut = k
            break
    if cut == -1:
        re_part, im_part = "0", body
    else:
        re_part, im_part = body[:cut], body[cut:]
    if im_part in ("", "+"):
        im_part = "1"
    elif im_part == "-":
        im_part = "-1"
    try:
        return mp.mpc(mp.mpf(re_part), mp.mpf(im_part))
    except (ValueError, TypeError) as exc:
        raise DomainError(f"cannot parse complex literal {text!r}") from exc


def pow_principal(z, alpha, ctx: PrecisionContext):
    """exp(alpha * (ln|z| + i Arg z)) with Arg z in (-pi, pi]."""
    mp = ctx.mp
    z = mp.mpc(z)
    if isinstance(alpha, Fraction):
        alpha = mp.mpf(alpha.numerator) / alpha.denominator
    alpha = mp.mpf(alpha)
    if z == 0:
        if alpha <= 0:
            raise DomainError("0 raised to a non-positive power")
        return mp.mpc(0)
    if z.imag == 0 and z.real > 0:
        return mp.mpc(mp.power(z.real, alpha), 0)
    return mp.exp(alpha * (mp.log(abs(z)) + 1j * mp.arg(z)))


def neg_x_power(x, alpha, ctx: PrecisionContext):
    """(-x)^alpha read as (e^{-i pi} x)^alpha with the principal branch."""
    mp = ctx.mp
    x = mp.mpc(x)
    if x == 0:
        raise DomainError("(-x)^alpha is undefined at x = 0")
    return pow_principal(-x, alpha, ctx)


def gamma_half_int(twice_arg: int, ctx: PrecisionContext):
    """Gamma(twice_arg / 2) by upward recursion from Gamma(1/2) and Gamma(1)."""
    if int(twice_arg) != twice_arg or twice_arg < 1:
        raise DomainError("twice_arg must be a positive integer")
    mp = ctx.mp
    r = gamma_half_int_ratio(twice_arg)
    value = mp.mpf(r.numerator) / r.denominator
    return value * mp.sqrt(mp.pi) if twice_arg % 2 else value


def gamma_half_int_ratio(twice_arg: int) -> Fraction:
    """Exact Gamma(twice_arg/2), divided by sqrt(pi) when the argument is half-integer."""
    value = Fraction(1)
    arg = Fraction(1, 2) if twice_arg % 2 else Fraction(1)
    while 2 * arg < twice_arg:
        value *= arg
        arg += 1
    return value


# --------------------------------------------------------------------------
# complementary error function


def _erfc_series(z, mp):
    """Maclaurin series of erf; caller supplies enough working digits."""
    z2 = z * z
    term = z
    total = z
    n = 0
    eps = mp.mpf(2) ** (-mp.prec - 10)
    while True:
        n += 1
        term = -term * z2 / n
        contrib = term / (2 * n + 1)
        total += contrib
        if abs(contrib) <= eps * abs(total) and n > abs(z2):
            break
    return 1 - 2 / mp.sqrt(mp.pi) * total


def _erfc_contfrac(z, mp, max_terms=200000):
    """Laplace continued fraction, valid for Re z > 0 (modified Lentz)."""
    tiny = mp.mpf(2) ** (-mp.prec * 2)
    eps = mp.mpf(2) ** (-mp.prec - 5)
    f = z
    c = z
    d = mp.mpc(0)
    for k in range(1, max_terms):
        a = mp.mpf(k) / 2
        d = z + a * d
        if d == 0:
            d = tiny
        c = z + a / c
        if c == 0:
            c = tiny
        d = 1 / d
        delta = c * d
        f *= delta
        if abs(delta - 1) < eps:
            return mp.exp(-z * z) / (mp.sqrt(mp.pi) * f)
    raise PrecisionRangeError(f"erfc continued fraction did not converge at z={z}")


def _erfc_guard_digits(z) -> int:
    a = abs(complex(z))
    re_z2 = (complex(z) ** 2).real
    return int((a * a + max(0.0, re_z2)) / math.log(10)) + 8


def erfc_series(z, ctx: PrecisionContext):
    """erfc by the Maclaurin series alone (any z, guard digits grow like |z|^2)."""
    z = ctx.mp.mpc(z)
    if abs(z) ** 2 > _EXP_LIMIT:
        raise NumericOverflowError("erfc series argument too large")
    mp = ctx.working(_erfc_guard_digits(z))
    return ctx.mp.mpc(_erfc_series(mp.mpc(z), mp))


def erfc_contfrac(z, ctx: PrecisionContext):
    """erfc by the continued fraction alone (requires Re z > 0)."""
    z = ctx.mp.mpc(z)
    if z.real <= 0:
        raise DomainError("continued fraction needs Re z > 0")
    if abs(z) ** 2 > _EXP_LIMIT:
        raise NumericOverflowError("e^{-z^2} scaling overflows")
    mp = ctx.working(10)
    return ctx.mp.mpc(_erfc_contfrac(mp.mpc(z), mp))


def erfc_c(z, ctx: PrecisionContext):
    """Complementary error function to ``ctx.digits`` digits.

    For Re z < 0 the reflection erfc(z) = 2 - erfc(-z) is applied.  In the
    right half plane the continued fraction is used once |z| >= ERFC_SWITCH
    and |arg z| <= ERFC_CF_SECTOR; otherwise the Maclaurin series with
    |z|^2-proportional guard digits.
    """
    mp = ctx.mp
    z = mp.mpc(z)
    if z == 0:
        return mp.mpc(1)
    if abs(z) ** 2 > _EXP_LIMIT:
        raise NumericOverflowError("erfc argument too large for e^{-z^2} scaling")
    if z.real < 0:
        return 2 - erfc_c(-z, ctx)
    if abs(z) >= ERFC_SWITCH and abs(mp.arg(z)) <= ERFC_CF_SECTOR:
        return erfc_contfrac(z, ctx)
    return erfc_series(z, ctx)


# --------------------------------------------------------------------------
# Airy function


def airy_uv(k: int) -> tuple[Fraction, Fraction]:
    """Exact Airy asymptotic coefficients (u_k, v_k).

    u_k = Gamma(3k + 1/2) / (54^k k! Gamma(k + 1/2)),  v_k = (6k+1)/(1-6k) u_k.
    """
    if k == 0:
        return Fraction(1), Fraction(1)
    ratio = Fraction(1)
    for j in range(k, 3 * k):
        ratio *= Fraction(2 * j + 1, 2)
    u = ratio / (Fraction(54) ** k * math.factorial(k))
    return u, Fraction(6 * k + 1, 1 - 6 * k) * u


def _airy_maclaurin(z, mp):
    c1 = mp.power(3, mp.mpf(-2) / 3) / mp.gamma(mp.mpf(2) / 3)
    c2 = mp.power(3, mp.mpf(-1) / 3) / mp.gamma(mp.mpf(1) / 3)
    z3 = z ** 3
    eps = mp.mpf(2) ** (-mp.prec - 10)
    # f = sum a_k z^{3k}, g = sum b_k z^{3k+1}
    a = mp.mpc(1)
    b = mp.mpc(z)
    f, g = a, b
    fp = mp.mpc(0)
    gp = mp.mpc(1)
    k = 0
    while True:
        a = a * z3 / ((3 * k + 2) * (3 * k + 3))
        b = b * z3 / ((3 * k + 3) * (3 * k + 4))
        k += 1
        f += a
        g += b
        if z != 0:
            fp += a * (3 * k) / z
            gp += b * (3 * k + 1) / z
        scale = abs(f) + abs(g) + 1
        if abs(a) + abs(b) <= eps * scale and k > 2:
            break
        if z == 0:
            break
    return c1 * f - c2 * g, c1 * fp - c2 * gp


def airy_maclaurin(z, ctx: PrecisionContext):
    """(Ai, Ai') by power series with guard digits for the |z|^{3/2} cancellation."""
    z = ctx.mp.mpc(z)
    extra = int(4 * abs(complex(z)) ** 1.5 / (3 * math.log(10))) + 8
    mp = ctx.working(extra)
    ai, aip = _airy_maclaurin(mp.mpc(z), mp)
    return ctx.mp.mpc(ai), ctx.mp.mpc(aip)


def airy_asymptotic(z, ctx: PrecisionContext):
    """(Ai, Ai') from the large-|z| expansion, certified for |arg z| <= 2pi/3.

    Raises PrecisionRangeError if optimal truncation cannot reach ``ctx.digits``.
    """
    mp = ctx.working(5)
    z = mp.mpc(z)
    if z == 0 or abs(mp.arg(z)) > 2 * mp.pi / 3 + mp.mpf(10) ** (-ctx.digits):
        raise PrecisionRangeError("Airy asymptotic expansion used only for |arg z| <= 2pi/3")
    logz = mp.log(z)
    zeta = 2 * mp.exp(mp.mpf(3) / 2 * logz) / 3
    target = mp.mpf(10) ** (-(ctx.digits + 2))
    su = mp.mpc(1)
    sv = mp.mpc(1)
    prev = mp.inf
    k = 0
    zk = mp.mpc(1)
    while True:
        k += 1
        u, v = airy_uv(k)
        zk = zk * (-zeta)
        tu = mp.mpf(u.numerator) / u.denominator / zk
        tv = mp.mpf(v.numerator) / v.denominator / zk
        size = abs(tu)
        if size > prev:
            raise PrecisionRangeError(
                f"|z|={float(abs(z)):.3g} outside the certified Airy range at {ctx.digits} digits"
            )
        su += tu
        sv += tv
        prev = size
        if size < target:
            break
    pref = mp.exp(-zeta) / (2 * mp.sqrt(mp.pi))
    q = mp.exp(logz / 4)
    return ctx.mp.mpc(pref / q * su), ctx.mp.mpc(-pref * q * sv)


def airy_pair(z, ctx: PrecisionContext, cap: float = AIRY_CAP):
    """(Ai(z), Ai'(z)).

    Maclaurin series for |z| <= ``cap``; beyond it the asymptotic expansion,
    which raises PrecisionRangeError when it cannot certify ``ctx.digits``.
    """
    z = ctx.mp.mpc(z)
    if abs(z) <= cap:
        return airy_maclaurin(z, ctx)
    return airy_asymptotic(z, ctx)
