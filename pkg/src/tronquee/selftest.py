"""Fast invariant suite behind ``tronquee selftest``.

Each check returns (passed, detail).  Checks run at modest precision so the
whole table finishes in well under a minute.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ComputationError
from .mpkernel import PrecisionContext


def _exact_coefficients(ctx):
    from .coeffs import hamiltonian_coeffs, level0_coeffs

    y = level0_coeffs(4)
    h = hamiltonian_coeffs(y)
    ok = (y[0].q, y[1].q, y[1].half_power, h[0].q, h[1].to_field().b) == (1, Fraction(-1, 8), 1, 1, Fraction(1, 32))
    return ok, f"y01 = {y[1]}, h01 = {h[1]}"


def _series_identities(ctx):
    from .coeffs import hamiltonian_coeffs, hamiltonian_identity_residual, level0_coeffs, ode_residual

    y = level0_coeffs(12)
    h = hamiltonian_coeffs(y)
    r1 = ode_residual(y)
    r2 = hamiltonian_identity_residual(y, h)
    # terms through s^{1 - 5N/2} are fixed by the recursion
    guaranteed = [e for e in r1 if e >= 1 - Fraction(5 * 12, 2)]
    return not guaranteed and not r2, f"{len(r1)} residual terms beyond truncation, H identity {len(r2)} terms"


def _action(ctx):
    from .coeffs import level1_indicial, paper_action_squared

    A, p, a_sq = level1_indicial(ctx)
    return a_sq == paper_action_squared() and p == Fraction(-1, 8), f"A = {ctx.mp.nstr(A, 12)}"


def _ratio(ctx):
    from .coeffs import level0_coeffs, ratio_diagnostic, ratio_limit

    r = ratio_diagnostic(level0_coeffs(102), 100, ctx)[99]
    lim = ratio_limit(ctx)
    dev = abs(r - lim) / lim
    return dev <= 0.01, f"relative deviation {ctx.mp.nstr(dev, 3)} at n = 100"


def _borel(ctx):
    from .borel import level0_borel_model, nearest_singularity
    from .coeffs import action

    c = PrecisionContext(80)
    m = level0_borel_model(60, 24, 24, c)
    z = nearest_singularity(m, c)
    err = abs(z - action(c)) / action(c)
    return err < 1e-2, f"sqrt(sigma*) relative error {c.mp.nstr(err, 3)} ([24/24], N = 60)"


def _z5(ctx):
    from .taylor import local_taylor, z5_symmetry_check

    disk = local_taylor(ctx.mp.mpc(-1.5, 0.3), ctx.mp.mpc(0.4, -0.2), ctx.mp.mpc(0.1, 0.7), 30, ctx)
    r = z5_symmetry_check(disk, ctx)
    return r <= ctx.mp.mpf(10) ** (-(ctx.digits - 5)), f"residual {ctx.mp.nstr(r, 3)}"


def _laurent_vs_taylor(ctx):
    from .taylor import double_pole_data, integrate_ray

    mp = ctx.mp
    a = mp.mpc(-2, 0.5)
    x0, x1 = a + mp.mpf("0.4"), a + mp.mpc(0, "0.4")
    y0, yp0 = double_pole_data(a, mp.mpf("0.3"), x0, ctx)
    y1, yp1 = double_pole_data(a, mp.mpf("0.3"), x1, ctx)
    # integrate a quarter circle away from the pole via an intermediate point
    mid = a + mp.mpf("0.4") * mp.expj(mp.pi / 4)
    ym, ypm = integrate_ray(x0, mid, y0, yp0, ctx)
    yt, ypt = integrate_ray(mid, x1, ym, ypm, ctx)
    err = max(abs(yt - y1), abs(ypt - yp1)) / max(abs(y1), 1)
    return err < mp.mpf(10) ** (-(ctx.digits // 2)), f"relative mismatch {mp.nstr(err, 3)}"


def _stokes(ctx):
    from .rh.stokes import jump_factorization_check, stokes_closure

    mp = ctx.mp
    d = stokes_closure(0, 1j, ctx)
    d2 = stokes_closure(0, mp.mpc("0.3", "0.2"), ctx)
    r = jump_factorization_check(d2, ctx)
    ok = abs(d[2] - 1j) < ctx.tol and abs(d[-1]) < ctx.tol and r <= ctx.tol * 10
    return ok, f"factorisation residual {mp.nstr(r, 3)}"


def _parametrices(ctx):
    from .rh.models import airy_jump_residual, erf_jump_residual

    mp = ctx.mp
    worst = max(
        [airy_jump_residual(ray, r, ctx) for ray in ("pos", "up", "down", "neg") for r in (0.5, 2, 6)]
        + [erf_jump_residual(y, 1j, ctx) for y in (-3, -0.5, 1, 4)]
    )
    return worst <= mp.mpf(10) ** (-(ctx.digits - 8)), f"max jump residual {mp.nstr(worst, 3)}"


def _gcontext(ctx):
    from .rh.phase import make_gcontext

    mp = ctx.mp
    for phi in (3 * mp.pi / 5, 4 * mp.pi / 5, mp.pi):
        make_gcontext(phi, ctx)
    return True, "g(-2 l0) = 0, g(l0) = g0 and 2 g0 = -A (-x)^{5/4} at three angles"


def _delta_structure(ctx):
    from .rh.residues import delta_exact, pole_order_bound

    ok = True
    for k in range(1, 5):
        d = delta_exact(k)
        anti = all(m[0][0] == 0 and m[1][1] == 0 for m in d.terms.values())
        diag = all(m[0][1] == 0 and m[1][0] == 0 for m in d.terms.values())
        ok &= (anti if k % 2 else diag) and -d.low == pole_order_bound(k)
    return ok, "parity and pole orders for k <= 4"


def _residues(ctx):
    from .rh.phase import make_gcontext
    from .rh.residues import chi_expansion, z_expansion

    gc = make_gcontext(ctx.mp.pi, ctx)
    zx = z_expansion(gc)
    cx = chi_expansion(gc, 1j)
    worst = max(zx["quadrature_error"], cx["quadrature_error"])
    return worst <= ctx.mp.mpf(10) ** (-(ctx.digits - 10)), f"quadrature vs closed form {ctx.mp.nstr(worst, 3)}"


def _reconstruct(ctx):
    from .coeffs import amplitude_from_stokes
    from .rh.phase import make_gcontext
    from .rh.residues import reconstruct

    mp = ctx.mp
    gc = make_gcontext(4 * mp.pi / 5, ctx)
    r = reconstruct(gc, 1j, verify=False)
    amp = amplitude_from_stokes(1j, ctx)
    ref = {"y01": -mp.sqrt(6) / 48, "h01": mp.sqrt(6) / 32, "y10": amp.y10, "h10": amp.h10}
    worst = max(abs(r[k] - ref[k]) / abs(ref[k]) for k in ref)
    return worst <= mp.mpf(10) ** (-(ctx.digits - 5)), f"max relative error {mp.nstr(worst, 3)}"


CHECKS = [
    ("exact coefficients", _exact_coefficients),
    ("series identities", _series_identities),
    ("action", _action),
    ("resurgence ratio", _ratio),
    ("Borel singularity", _borel),
    ("Z5 symmetry", _z5),
    ("Laurent vs Taylor", _laurent_vs_taylor),
    ("Stokes closure", _stokes),
    ("parametrix jumps", _parametrices),
    ("g-function identities", _gcontext),
    ("Delta_k structure", _delta_structure),
    ("residue quadrature", _residues),
    ("reconstruction", _reconstruct),
]


def run_selftest(digits: int = 40):
    """[(name, passed, detail)] for every check; errors count as failures."""
    ctx = PrecisionContext(digits)
    out = []
    for name, fn in CHECKS:
        try:
            ok, detail = fn(ctx)
        except ComputationError as exc:
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append((name, bool(ok), detail))
    return out
