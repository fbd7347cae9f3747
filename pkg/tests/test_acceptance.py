"""Acceptance gate: ten end-to-end criteria, one printed verdict line each.

Run with `pytest -s tests/test_acceptance.py` to see the verdict lines.
"""

import math
import random
import time
from fractions import Fraction

import sympy as sp

from diffreg.algebra import (
    PositionFunction,
    RadialTerm,
    eval_momentum,
    position_term,
)
from diffreg.coeffs import Coefficient, GAMMA_E, LN2, ONE, PI, sphere_area
from diffreg.fourier import (
    cs_derivative,
    fourier_base,
    fourier_formal,
    inverse_fourier_base,
)
from diffreg.numeric import (
    finite_diff_lnM,
    gauss_flux_numeric,
    hankel_numeric,
    truncated_ft_numeric,
)
from diffreg.operators import DiffOperator, apply_operator, laplacian_radial
from diffreg.quotient import Character, IdealElement, diagram_audit
from diffreg.regulate import find_representation, log_of_ratio, mass_shift
from diffreg.surface import leading_divergence, surface_expansion


def verdict(num: int, name: str, ok: bool, detail: str = ""):
    mark = "PASS" if ok else "FAIL"
    line = f"[{mark}] criterion {num:2d}: {name}"
    if detail:
        line += f" ({detail})"
    print(line)
    assert ok, line


PHI4_TARGET = position_term(4, 1, Fraction(-4))


def test_criterion_01_sphere_factor():
    t0 = time.perf_counter()
    ok = (
        sphere_area(2) == 2 * PI
        and sphere_area(3) == 4 * PI
        and sphere_area(4) == 2 * PI * PI
    )
    elapsed = time.perf_counter() - t0
    verdict(1, "sphere factor 2pi, 4pi, 2pi^2 exact", ok and elapsed < 1e-3,
            f"{elapsed * 1e6:.0f} us")


def test_criterion_02_diffreg_point():
    t0 = time.perf_counter()
    rep = find_representation(PHI4_TARGET)
    elapsed = time.perf_counter() - t0
    want_seed = (RadialTerm(Coefficient.rational(Fraction(-1, 4)), Fraction(-2), 1),)
    ok = (
        rep.L == DiffOperator.box(1)
        and rep.g.radial == want_seed
        and apply_operator(rep.L, rep.g).radial == PHI4_TARGET.radial
        and elapsed < 1.0
    )
    verdict(2, "regulate r^-4 -> (box, -1/4 log(r^2 M^2)/r^2), exact round trip",
            ok, f"{elapsed * 1e3:.1f} ms")


def test_criterion_03_transform_fidelity():
    t0 = time.perf_counter()
    cases = [
        position_term(4, 1, Fraction(-2), 0),
        position_term(4, 1, Fraction(-2), 1),
    ]
    worst = 0.0
    for f in cases:
        F = fourier_base(f)
        for p in (0.5, 1.0, 2.0):
            sym = eval_momentum(F, p, 1.0)
            num, _ = hankel_numeric(f, p, 4)
            worst = max(worst, abs(num - sym) / abs(sym))
    elapsed = time.perf_counter() - t0
    # pin the closed forms as well
    F0 = fourier_base(cases[0])
    F1 = fourier_base(cases[1])
    forms_ok = (
        {(t.ppow, t.logpow): t.coeff for t in F0.terms}
        == {(Fraction(-2), 0): 4 * PI * PI}
        and {(t.ppow, t.logpow): t.coeff for t in F1.terms}
        == {
            (Fraction(-2), 1): -4 * PI * PI,
            (Fraction(-2), 0): -4 * PI * PI * (2 * GAMMA_E - 2 * LN2),
        }
    )
    verdict(3, "fourier_base(r^-2), fourier_base(r^-2 log) match oracle to 1e-5",
            forms_ok and worst <= 1e-5 and elapsed < 10.0,
            f"worst rel err {worst:.2e}, {elapsed:.2f} s")


def test_criterion_04_defect_identity():
    t0 = time.perf_counter()
    rep = find_representation(PHI4_TARGET)
    se = surface_expansion(rep.L, rep.g)
    p, M = 1.0, 1.0
    formal = eval_momentum(fourier_formal(rep), p, M)
    eps_grid = (0.2, 0.1, 0.05, 0.02)
    defects = []
    for eps in eps_grid:
        trunc, _ = truncated_ft_numeric(PHI4_TARGET, p, 4, M, eps)
        defects.append(abs(trunc - (formal + se.eval_at(eps, p, M))))
    # calibrate C on the coarsest point, check the rest predictively
    C = defects[0] / (eps_grid[0] ** 2 * abs(math.log(eps_grid[0]))) * 1.5
    bounds = [max(1e-3, C * e * e * abs(math.log(e))) for e in eps_grid]
    ok = all(d <= b for d, b in zip(defects, bounds)) and all(
        d2 < d1 for d1, d2 in zip(defects, defects[1:])
    )
    elapsed = time.perf_counter() - t0
    verdict(4, "defect <= max(1e-3, C eps^2 |ln eps|), shrinking monotonically",
            ok and elapsed < 60.0,
            "defects " + ", ".join(f"{d:.1e}" for d in defects))


def test_criterion_05_divergence_slope():
    t0 = time.perf_counter()
    rep = find_representation(PHI4_TARGET)
    se = surface_expansion(rep.L, rep.g)
    lead = leading_divergence(se)
    lead_ok = lead is not None and lead.log_pow == 1 and lead.value.local_poly == (
        (-2 * PI * PI, 0),
    )
    p, M = 0.1, 1.0
    eps_grid = (0.1, 0.05, 0.025)
    xs = [math.log(e) for e in eps_grid]
    ys = [truncated_ft_numeric(PHI4_TARGET, p, 4, M, e)[0] for e in eps_grid]
    xm, ym = sum(xs) / len(xs), sum(ys) / len(ys)
    slope = sum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sum(
        (x - xm) ** 2 for x in xs
    )
    rel = abs(slope - (-2 * math.pi ** 2)) / (2 * math.pi ** 2)
    elapsed = time.perf_counter() - t0
    verdict(5, "leading surface term -2pi^2 log(eps M); measured slope matches to 1e-3",
            lead_ok and rel <= 1e-3 and elapsed < 30.0,
            f"slope {slope:.6f}, rel err {rel:.1e}")


def test_criterion_06_callan_symanzik():
    t0 = time.perf_counter()
    rep = find_representation(PHI4_TARGET)
    F = fourier_formal(rep)
    mdm = cs_derivative(F)  # d/dlog M^2; M d/dM is twice this
    sym_ok = mdm.terms == () and mdm.local_poly == ((PI * PI, 0),)
    p, M = 1.0, 1.0
    num = finite_diff_lnM(lambda pp, MM: eval_momentum(F, pp, MM), p, M)
    rel = abs(num - 2 * math.pi ** 2) / (2 * math.pi ** 2)
    elapsed = time.perf_counter() - t0
    verdict(6, "M d/dM fourier_formal = 2pi^2 exactly; finite difference to 1e-6",
            sym_ok and rel <= 1e-6 and elapsed < 1.0,
            f"finite diff rel err {rel:.1e}")


def test_criterion_07_mass_path():
    rep = find_representation(PHI4_TARGET)
    ok = True
    details = []
    for label, lam in (("1/2", Fraction(1, 2)), ("2", Fraction(2)), ("e", "e")):
        ln_lambda = log_of_ratio(lam)
        ms = mass_shift(rep, ln_lambda)
        expect = ((2 * PI * PI * ln_lambda, 0),)
        this_ok = (
            ms.momentum_shift.terms == ()  # p-independent
            and ms.momentum_shift.local_poly == expect
        )
        ok = ok and this_ok
        details.append(f"lambda={label}: {'ok' if this_ok else 'bad'}")
    verdict(7, "mass path: shift is p-independent and equals 2pi^2 ln(lambda) exactly",
            ok, "; ".join(details))


def test_criterion_08_homeomorphism():
    rng = random.Random(8128)
    ok = True
    for _ in range(100):
        terms = [
            RadialTerm(
                Coefficient.rational(
                    Fraction(rng.randint(-40, 40) or 1, rng.randint(1, 9))
                ),
                Fraction(rng.randint(-3, -1)),
                rng.randint(0, 2),
            )
            for _ in range(rng.randint(1, 4))
        ]
        f = PositionFunction.build(4, terms)
        if f.is_zero():
            continue
        if inverse_fourier_base(fourier_base(f)) != f:
            ok = False
            break
    verdict(8, "inverse_fourier_base o fourier_base = id on 100 random safe functions",
            ok)


def test_criterion_09_quotient_audit():
    ch = Character(1.0, 4)
    b = position_term(4, 1, Fraction(-2))
    zero_a = diagram_audit(IdealElement(PositionFunction.build(4), b), ch)
    a = position_term(4, 1, Fraction(-1))
    base = diagram_audit(IdealElement(a, b), ch)
    from diffreg.algebra import scale

    scaled = diagram_audit(IdealElement(scale(7, a), b), ch)
    bilinear_rel = abs(scaled.residual - 7.0 * base.residual) / max(
        abs(7.0 * base.residual), 1e-300
    )
    headline = diagram_audit(IdealElement(b, b), ch)
    ok = (
        zero_a.residual == 0.0
        and bilinear_rel <= 1e-9
        and math.isfinite(headline.residual)
        and headline.route_ab == "regulated"
    )
    verdict(9, "audit: exact 0 for a=0, bilinear to 1e-9, (r^-2, r^-2) report produced",
            ok, f"headline residual {headline.residual:.3e}")


def test_criterion_10_operator_oracle():
    rng = random.Random(1009)
    r, M = sp.symbols("r M", positive=True)
    ok = True
    for _ in range(200):
        n = rng.choice((2, 3, 4, 6))
        a = Fraction(rng.randint(-6, 6))
        k = rng.randint(0, 3)
        out = laplacian_radial(n, [RadialTerm(ONE, a, k)])
        f = r ** int(a) * sp.log(r ** 2 * M ** 2) ** k
        brute = sp.expand(sp.diff(f, r, 2) + (n - 1) / r * sp.diff(f, r))
        got = sp.Integer(0)
        for t in out:
            q = t.coeff.rational_value()
            got += (
                sp.Rational(q.numerator, q.denominator)
                * r ** int(t.rpow)
                * sp.log(r ** 2 * M ** 2) ** t.logpow
            )
        if sp.simplify(brute - got) != 0:
            ok = False
            break
    flux_ok = True
    for radius in (0.5, 1.0, 2.0, 5.0):
        got = gauss_flux_numeric(position_term(4, 1, Fraction(-2)), radius, 4)
        if abs(got - (-4 * math.pi ** 2)) > 1e-12 * 4 * math.pi ** 2:
            flux_ok = False
    verdict(10, "recurrence = brute-force differentiation (200 cases); flux -4pi^2 to 1e-12",
            ok and flux_ok)
