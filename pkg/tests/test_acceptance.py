"""Acceptance gate: one test per criterion, each reporting a single PASS/FAIL line."""
import cmath
import math

import numpy as np
import pytest

import oracles
from bakerfe.applications import (
    BiggyParams,
    Example2Data,
    example2_solve,
    example2_tuple,
    example3_construct,
    grid_pairs,
)
from bakerfe.elliptic import PoleError, degenerate_lattice, lattice_from_invariants, wp_value
from bakerfe.identify import f_coefficients, f_coefficients_direct, gauge_f, identify
from bakerfe.jacobi import jacobi_sncndn, phijacs_residual
from bakerfe.jets import Jet
from bakerfe.phi import (
    INFINITY,
    PhiParams,
    addition_residual,
    homogeneity_residual,
    phi,
    three_term_residual,
    translation_residual,
    wp_difference_residual,
    zeta_sum_residual,
)
from bakerfe.symmetry import (
    act,
    canonical_tuple,
    centered_tuple,
    jacobi_dn_tuple,
    max_functional_residual,
    random_element,
    validate,
)

# gauge consistency of every accepted run in this module, for criterion 4
ACCEPTED_GAUGE = []


@pytest.fixture
def report(record_property):
    def out(n, ok, detail):
        line = f"AC{n} {'PASS' if ok else 'FAIL'} {detail}"
        print(line)
        record_property("acceptance", line)
        assert ok, line
    return out


def _note(R):
    if R.accepted:
        ACCEPTED_GAUGE.append(max(abs(f1 - f2) / (1 + abs(f1)) for _, f1, f2 in R.gauge_samples))
    return R


def _shift_error(got, want):
    a = max(abs(got[0] - want[0]) / (1 + abs(want[0])), abs(got[1] - want[1]) / (1 + abs(want[1])))
    b = max(abs(got[0] - want[1]) / (1 + abs(want[1])), abs(got[1] - want[0]) / (1 + abs(want[0])))
    return min(a, b)


def test_ac1_jacobi_identification(report):
    worst = {"g": 0.0, "wp": 0.0, "lam": 0.0}
    for m in (0.25, 0.5, 0.8):
        R = _note(identify(jacobi_dn_tuple(m), 0.0))
        g2 = 4.0 / 3.0 * (1 - m + m * m)
        g3 = 4.0 / 27.0 * (m - 2) * (2 * m - 1) * (m + 1)
        # g3 vanishes at m = 1/2, where the error is taken as absolute
        worst["g"] = max(worst["g"], abs(R.g2 - g2) / abs(g2), abs(R.g3 - g3) / (abs(g3) or 1.0))
        worst["wp"] = max(worst["wp"], abs(R.wp_nu[0] - (2 * m - 1) / 3), abs(R.wp_nu[1] - (-1 - m) / 3))
        worst["lam"] = max(worst["lam"], *(abs(v) for v in R.lambdas))
    ok = worst["g"] <= 1e-7 and worst["wp"] <= 1e-7 and worst["lam"] <= 1e-8
    report(1, ok, f"invariants rel {worst['g']:.2e}, wp(nu) {worst['wp']:.2e}, lambdas {worst['lam']:.2e}")


def test_ac2_laurent_oracle(report):
    rng = np.random.default_rng(2)
    worst_fft = worst_div = 0.0
    for _ in range(200):
        c = rng.uniform(-1, 1, 9) + 1j * rng.uniform(-1, 1, 9)
        c[1] = rng.uniform(0.5, 1.5) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        h = np.polynomial.Polynomial(c)
        dh = h.deriv()
        h0, d0 = h(0), dh(0)

        def G(x):
            return d0 * dh(x) / (h(x) - h0) ** 2 - 1 / x ** 2

        t = oracles.taylor_coefficients(G, radius=0.1)
        want = np.array([t[0], t[1], 2 * t[2]])
        F = np.array(f_coefficients(Jet(0.0, c)))
        D = np.array(f_coefficients_direct(Jet(0.0, c)))
        worst_fft = max(worst_fft, np.max(np.abs(F - want)))
        worst_div = max(worst_div, np.max(np.abs(F - D)))
    fixed = np.array(f_coefficients(Jet(0.0, [0, 1, 0, 1, 0, 0, 0, 0, 0])))
    fixed_err = np.max(np.abs(fixed - np.array([1, 0, -6])))
    ok = worst_fft <= 1e-9 and worst_div <= 1e-9 and fixed_err <= 1e-12
    report(2, ok, f"vs contour oracle {worst_fft:.2e}, vs series division {worst_div:.2e}, x+x^3 {fixed_err:.2e}")


def test_ac3_round_trip(report):
    rng = np.random.default_rng(2024)
    worst = {"g": 0.0, "wp": 0.0, "rec": 0.0}
    rejected = 0
    for _ in range(50):
        g2 = rng.uniform(0.5, 3.0)
        g3 = rng.uniform(-0.9, 0.9) * math.sqrt(g2 ** 3 / 27)
        L = lattice_from_invariants(g2, g3)
        a, b, c, d = rng.uniform(0.1, 0.9, 4)
        nu1 = 2 * a * L.omega + 2 * b * L.omega_p
        nu2 = 2 * c * L.omega + 2 * d * L.omega_p
        g = random_element(int(rng.integers(1 << 30)), 0.5)
        R = _note(identify(act(g, centered_tuple(L, nu1, nu2))))
        rejected += not R.accepted
        worst["g"] = max(worst["g"], abs(R.g2 - g2) / abs(g2), abs(R.g3 - g3) / abs(g3))
        worst["wp"] = max(worst["wp"], _shift_error(R.wp_nu, (wp_value(nu1, L), wp_value(nu2, L))))
        worst["rec"] = max(worst["rec"], *(R.residuals[k] for k in ("phi1", "pair1", "pair2")))
    ok = worst["g"] <= 1e-6 and worst["wp"] <= 1e-6 and worst["rec"] <= 1e-8 and rejected == 0
    report(3, ok, f"invariants rel {worst['g']:.2e}, wp(nu) {worst['wp']:.2e}, "
                  f"reconstruction {worst['rec']:.2e}, rejected {rejected}/50")


def test_ac5_identity_suite(report):
    lattices = {"(1,0)": lattice_from_invariants(1.0, 0.0), "(1.3,0.4)": lattice_from_invariants(1.3, 0.4),
                "one-period c=1/3": degenerate_lattice(1.0)}
    worst, skipped = {}, 0
    for label, L in lattices.items():
        nu = 0.7
        P = PhiParams(nu, L)
        checks = {
            "zetas": lambda x, y: zeta_sum_residual(x, y, 0.5 * (x - y) + 0.17j, L),
            "wps": lambda x, y: wp_difference_residual(x, y, L),
            "addn": lambda x, y: addition_residual(x, y, P),
            "three-term": lambda x, y: three_term_residual(x, y, 0.4, 0.2 + 0.9j, L),
            "translation": lambda x, y: translation_residual(x + 0.3 * y, 0.3, nu, L),
            "homogeneity": lambda x, y: homogeneity_residual(x + 0.3 * y, nu, L),
            "phiJacs": lambda x, y: phijacs_residual(x + 0.3 * y, L),
        }
        pts = grid_pairs(5, min(0.9, 0.3 * L.shortest_period))
        for name, fn in checks.items():
            for x, y in pts:
                try:
                    r = fn(x, y)
                except (PoleError, ZeroDivisionError, ValueError):
                    skipped += 1
                    continue
                worst[name] = max(worst.get(name, 0.0), r)
    top = max(worst.values())
    ok = top <= 1e-9 and len(worst) == 7 and skipped <= 3 * 7 * 25 // 10
    report(5, ok, f"max residual {top:.2e} over 7 identities x 3 lattices, {skipped} pole-adjacent points skipped")


def test_ac6_sum_of_products(report):
    sol = example2_solve(Example2Data(0.0, 1.0, 1.0, 1.0, -1.0, 1.0), grid=7)
    r2 = math.sqrt(2)
    values = max(abs(sol.N2 - 2), abs(cmath.sinh(sol.nu1) + 1), abs(sol.lambda1 - r2), abs(sol.lambda2 - r2))
    R = _note(identify(example2_tuple(sol), 0.0))
    k2 = abs(complex(R.lattice.kappa) ** 2 - 1) if R.lattice.kappa is not None else math.inf
    ok = values <= 1e-10 and sol.residual <= 1e-9 and R.nu[1] is INFINITY and k2 <= 1e-6
    report(6, ok, f"worked values {values:.2e}, 7x7 residual {sol.residual:.2e}, "
                  f"nu2 infinite {R.nu[1] is INFINITY}, kappa^2 {k2:.2e}")


def test_ac7_seven_function(report):
    L = lattice_from_invariants(1.0, 0.0)
    worst8 = worst_inter = 0.0
    for mu in ((1.1, 0.5, 0.35), (0.9 + 0.3j, 0.2 - 0.1j, 0.4 + 0.2j), (1.4, -0.3, 0.6j)):
        S = example3_construct(BiggyParams(*mu, L))
        worst8 = max(worst8, S.residuals["eq8"])
        worst_inter = max(worst_inter, S.residuals["inter1"])
    ok = worst8 <= 1e-9 and worst_inter <= 1e-9
    report(7, ok, f"main equation {worst8:.2e}, antisymmetrized form {worst_inter:.2e}")


def test_ac8_group_invariance(report):
    L = lattice_from_invariants(1.0, 0.0)
    base = canonical_tuple(L, 0.7, 0.4 + 0.9j)
    pts = grid_pairs(5, 0.8)
    R0 = identify(base)
    res = drift = 0.0
    invalid = 0
    for seed in range(50):
        g = random_element(seed, 0.5)
        invalid += bool(validate(g))
        s = act(g, base)
        res = max(res, max_functional_residual(s, pts))
        R = _note(identify(s))
        drift = max(drift, abs(R.g2 - R0.g2) / abs(R0.g2), abs(R.g3 - R0.g3) / (1 + abs(R0.g3)))
    ok = res <= 1e-8 and drift <= 1e-6 and invalid == 0
    report(8, ok, f"functional residual {res:.2e}, invariant drift {drift:.2e}")


def test_ac4_gauge_consistency(report):
    # runs after the identification criteria above and reuses their results
    R = _note(identify(jacobi_dn_tuple(0.5), 0.0))
    s = jacobi_dn_tuple(0.5)
    worst_sn = 0.0
    for x in (0.3, 0.5, 0.7 + 0.2j, -0.4 + 0.1j, 0.9 - 0.3j):
        sn = jacobi_sncndn(x, 0.5)[0]
        for k in (1, 2):
            worst_sn = max(worst_sn, abs(gauge_f(s, k, 0.0, x, R) * sn ** 2 - 1))
    worst = max(ACCEPTED_GAUGE)
    ok = worst <= 1e-8 and worst_sn <= 1e-8
    report(4, ok, f"max |f1-f2|/(1+|f1|) {worst:.2e} over {len(ACCEPTED_GAUGE)} accepted runs, "
                  f"dn gauge f*sn^2-1 {worst_sn:.2e}")


def test_ac9_degeneration(report):
    c = 1.0 / 3.0
    near = lattice_from_invariants(12 * c * c, -8 * c ** 3 + 1e-12, force_generic=True)
    exact = degenerate_lattice(math.sqrt(3 * c))
    worst = 0.0
    for x in (0.3, 0.5 + 0.2j, -0.7 + 0.1j, 0.1 + 0.9j, 1.2 - 0.3j):
        a, b = phi(x, PhiParams(0.6, near)), phi(x, PhiParams(0.6, exact))
        worst = max(worst, abs(a - b) / (1 + abs(b)))
    ok = near.degeneracy == "generic" and worst <= 1e-6
    report(9, ok, f"theta path vs closed hyperbolic form {worst:.2e} at 5 points")
