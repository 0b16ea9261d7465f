"""mp-kernel: branches, erfc, Airy, half-integer Gamma.

mpmath's own airyai/erfc (different algorithms: hypergeometric and incomplete
gamma evaluation) serve as the external oracle for the kernel's series.
"""

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from tronquee.errors import DomainError, NumericOverflowError, PrecisionRangeError
from tronquee.mpkernel import (
    AIRY_CAP,
    ERFC_SWITCH,
    PrecisionContext,
    airy_asymptotic,
    airy_maclaurin,
    airy_pair,
    airy_uv,
    erfc_c,
    erfc_contfrac,
    erfc_series,
    gamma_half_int,
    neg_x_power,
    parse_complex,
    pow_principal,
    to_cx,
)

coord = st.floats(min_value=-6, max_value=6, allow_nan=False, allow_infinity=False)


def close(a, b, digits):
    return abs(a - b) <= mpmath.mpf(10) ** (-digits) * max(1, abs(b))


# ---------------------------------------------------------------- context


def test_context_rejects_low_precision():
    with pytest.raises(DomainError):
        PrecisionContext(10)
    with pytest.raises(DomainError):
        PrecisionContext(30, guard=-1)


def test_contexts_are_independent():
    a, b = PrecisionContext(20), PrecisionContext(80)
    assert a.mp.dps == 30 and b.mp.dps == 90
    assert a.mp.dps == 30  # building b did not disturb a


@pytest.mark.parametrize(
    "text, re, im",
    [("0+1i", 0, 1), ("-2.5", "-2.5", 0), ("3i", 0, 3), ("1-i", 1, -1), ("1e-3+2e+1i", "0.001", 20), ("-i", 0, -1)],
)
def test_parse_complex(text, re, im, ctx40):
    z = parse_complex(text, ctx40)
    assert z == ctx40.mp.mpc(re, im)


def test_parse_complex_garbage(ctx40):
    with pytest.raises(DomainError):
        parse_complex("abc", ctx40)
    with pytest.raises(DomainError):
        parse_complex("", ctx40)


def test_to_cx_rejects_nonfinite(ctx40):
    with pytest.raises(NumericOverflowError):
        to_cx(float("inf"), ctx40)


# ---------------------------------------------------------------- powers


def test_pow_principal_examples(ctx40):
    mp = ctx40.mp
    assert pow_principal(1, 0.5, ctx40) == 1
    assert close(pow_principal(1j, 0.5, ctx40), mp.sqrt(2) / 2 * mp.mpc(1, 1), 40)
    assert close(pow_principal(mp.mpc(-4, 0), 0.5, ctx40), mp.mpc(0, 2), 40)
    with pytest.raises(DomainError):
        pow_principal(0, -1, ctx40)


def test_real_positive_stays_real(ctx40):
    v = pow_principal(ctx40.mp.mpf(7), Fraction(1, 3), ctx40)
    assert v.imag == 0 and v.real > 0


def test_neg_x_power_examples(ctx40):
    mp = ctx40.mp
    assert close(neg_x_power(-8, Fraction(5, 4), ctx40), 8 * mp.root(8, 4), 40)
    assert float(abs(neg_x_power(-8, Fraction(5, 4), ctx40))) == pytest.approx(13.4543, abs=1e-4)
    assert close(neg_x_power(-1, 0.37, ctx40), 1, 40)
    assert close(neg_x_power(mp.expjpi(mp.mpf(3) / 5), 1, ctx40), mp.expjpi(-mp.mpf(2) / 5), 40)
    with pytest.raises(DomainError):
        neg_x_power(0, 1, ctx40)


@given(coord, coord, st.floats(-2, 2), st.floats(-2, 2))
def test_power_addition_off_the_cut(x, y, a, b):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    z = mp.mpc(x, y)
    if abs(z) < 1e-3 or abs(abs(mp.arg(z)) - mp.pi) < 1e-3:
        return
    lhs = pow_principal(z, a, ctx) * pow_principal(z, b, ctx)
    assert close(lhs, pow_principal(z, mp.mpf(a) + mp.mpf(b), ctx), 27)


@given(st.floats(-3, 3), st.floats(-3.1415, 3.1415))
def test_exp_log_round_trip(logr, theta):
    ctx = PrecisionContext(30)
    mp = ctx.mp
    z = mp.mpf(10) ** logr * mp.expj(theta)
    assert close(mp.exp(mp.log(z)), z, 28)


# ---------------------------------------------------------------- Gamma


def test_gamma_half_int(ctx40):
    mp = ctx40.mp
    assert close(gamma_half_int(1, ctx40), mp.sqrt(mp.pi), 40)
    assert close(gamma_half_int(7, ctx40), 15 * mp.sqrt(mp.pi) / 8, 40)
    assert gamma_half_int(4, ctx40) == 1
    with pytest.raises(DomainError):
        gamma_half_int(0, ctx40)


@given(st.integers(1, 60))
def test_gamma_half_int_matches_mpmath(n):
    ctx = PrecisionContext(30)
    assert close(gamma_half_int(n, ctx), ctx.mp.gamma(ctx.mp.mpf(n) / 2), 29)


# ---------------------------------------------------------------- erfc


def test_erfc_zero(ctx40):
    assert erfc_c(0, ctx40) == 1


def test_erfc_branches_agree_at_3(ctx40):
    assert close(erfc_series(3, ctx40), erfc_contfrac(3, ctx40), 40)


def test_erfc_switch_is_continuous(ctx40):
    mp = ctx40.mp
    for z in (ERFC_SWITCH - mp.mpf("1e-20"), ERFC_SWITCH + mp.mpf("1e-20"), mp.mpc(ERFC_SWITCH, 1)):
        assert close(erfc_series(z, ctx40), erfc_contfrac(z, ctx40), 38)


@given(coord, coord)
def test_erfc_parity(x, y):
    ctx = PrecisionContext(30)
    z = ctx.mp.mpc(x, y)
    assert abs(erfc_c(z, ctx) + erfc_c(-z, ctx) - 2) <= ctx.mp.mpf(10) ** -29 * max(1, abs(erfc_c(z, ctx)))


@given(coord, coord)
def test_erfc_against_mpmath(x, y):
    ctx = PrecisionContext(30)
    z = ctx.mp.mpc(x, y)
    assert close(erfc_c(z, ctx), ctx.mp.erfc(z), 28)


def test_erfc_overflow_guard(ctx40):
    with pytest.raises(NumericOverflowError):
        erfc_c(1e4j, ctx40)


def test_erfc_precision_monotone():
    lo, hi = PrecisionContext(30), PrecisionContext(40)
    z = "1.3+2.1i"
    assert abs(erfc_c(to_cx(z, lo), lo) - erfc_c(to_cx(z, hi), hi)) < hi.mp.mpf(10) ** -30


# ---------------------------------------------------------------- Airy


def test_airy_origin_normalisation(ctx40):
    mp = ctx40.mp
    ai, aip = airy_pair(0, ctx40)
    assert close(3 * ai * mp.gamma(mp.mpf(2) / 3) * mp.cbrt(9), 3, 39)
    assert close(-3 * aip * mp.gamma(mp.mpf(1) / 3) * mp.cbrt(3), 3, 39)


def test_airy_connection_identity(ctx40):
    mp = ctx40.mp
    w = mp.expj(2 * mp.pi / 3)
    z = mp.mpc(1, 1)
    s = airy_pair(z, ctx40)[0] + w * airy_pair(w * z, ctx40)[0] + w * w * airy_pair(w * w * z, ctx40)[0]
    assert abs(s) <= mp.mpf(10) ** -40


def test_airy_finite_difference(ctx40):
    mp = ctx40.mp
    z = mp.mpf("0.7")
    errs = []
    for h in (mp.mpf("1e-2"), mp.mpf("5e-3")):
        d2 = (airy_pair(z + h, ctx40)[0] - 2 * airy_pair(z, ctx40)[0] + airy_pair(z - h, ctx40)[0]) / h**2
        errs.append(abs(d2 - z * airy_pair(z, ctx40)[0]))
    assert errs[0] / errs[1] == pytest.approx(4, rel=1e-2)


@given(coord, coord)
def test_airy_against_mpmath(x, y):
    ctx = PrecisionContext(30)
    z = ctx.mp.mpc(x, y) * 1.4  # stays inside the Maclaurin cap
    ai, aip = airy_pair(z, ctx)
    assert close(ai, ctx.mp.airyai(z), 28)
    assert close(aip, ctx.mp.airyai(z, derivative=1), 28)


def test_airy_cap_switchover():
    # at |z| = 12 optimal truncation of the asymptotic series reaches ~1e-24,
    # so both branches can only be compared at modest precision
    ctx = PrecisionContext(20)
    mp = ctx.mp
    for r in (AIRY_CAP - mp.mpf("1e-10"), AIRY_CAP + mp.mpf("1e-10")):
        for th in (0, 1, -2):
            z = r * mp.expj(th)
            a, b = airy_maclaurin(z, ctx), airy_asymptotic(z, ctx)
            assert close(a[0], b[0], 19) and close(a[1], b[1], 19)
            assert close(airy_pair(z, ctx)[0], a[0], 19)


def test_airy_range_error():
    ctx = PrecisionContext(60)
    with pytest.raises(PrecisionRangeError):
        airy_pair(13, ctx)
    with pytest.raises(PrecisionRangeError):
        airy_asymptotic(-20, ctx)


def test_airy_uv():
    assert airy_uv(0) == (1, 1)
    assert airy_uv(1) == (Fraction(5, 72), Fraction(-7, 72))
    u2, v2 = airy_uv(2)
    assert u2 == Fraction(385, 10368) and v2 == Fraction(13, -11) * u2
