import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bakerfe.elliptic import PoleError, degenerate_lattice, lattice_from_invariants, sigma, wp_value, zeta_fn
from bakerfe.jacobi import jacobi_sncndn, lattice_from_m
from bakerfe.phi import (
    INFINITY,
    PhiParams,
    addition_residual,
    homogeneity_residual,
    phi,
    phi_jet,
    phi_log_derivative,
    phi_prime,
    small_nu_limit_residual,
    three_term_residual,
    translation_residual,
    wp_difference_residual,
    zeta_sum_residual,
)

SQUARE = lattice_from_invariants(1.0, 0.0)
RHOMBIC = lattice_from_invariants(1.3, 0.4)
HYPER = degenerate_lattice(1.0)
RATIONAL = lattice_from_invariants(0.0, 0.0)

points = st.complex_numbers(max_magnitude=0.9, allow_nan=False, allow_infinity=False).filter(lambda z: abs(z) > 0.05)


class TestPhi:
    def test_residue(self):
        x = 1e-5
        assert abs(x * phi(x, PhiParams(0.7, SQUARE)) - 1) <= 1e-4

    def test_infinite_shift(self):
        assert phi(1.0, PhiParams(INFINITY, HYPER)) == pytest.approx(0.850918128239321545, rel=1e-13)

    def test_infinity_needs_one_period(self):
        with pytest.raises(ValueError):
            PhiParams(INFINITY, SQUARE)

    def test_lattice_nu_rejected(self):
        with pytest.raises(PoleError):
            PhiParams(2 * SQUARE.omega, SQUARE)

    def test_inverse_sn(self):
        jp = lattice_from_m(0.5)
        sn, _, _ = jacobi_sncndn(0.6, 0.5)
        assert abs(phi(0.6, PhiParams(1j * jp.K_prime, jp.lattice)) - 1 / sn) <= 1e-9

    def test_zero_is_a_value(self):
        assert phi(0.7, PhiParams(0.7, SQUARE)) == 0

    def test_pole(self):
        with pytest.raises(PoleError):
            phi(0.0, PhiParams(0.7, SQUARE))

    def test_generic_formula(self):
        x, nu = 0.3 + 0.1j, 0.8 - 0.2j
        want = sigma(nu - x, RHOMBIC) / (sigma(nu, RHOMBIC) * sigma(x, RHOMBIC)) * cmath.exp(zeta_fn(nu, RHOMBIC) * x)
        assert phi(x, PhiParams(nu, RHOMBIC)) == pytest.approx(want, rel=1e-14)

    def test_one_period_formula(self):
        x, nu = 0.4, 0.9
        want = (1 / math.tanh(x) - 1 / math.tanh(nu)) * math.exp(x / math.tanh(nu))
        assert phi(x, PhiParams(nu, HYPER)) == pytest.approx(want, rel=1e-13)

    def test_rational_formula(self):
        assert phi(0.5, PhiParams(2.0, RATIONAL)) == pytest.approx((2 - 0.5) * math.exp(0.25))

    def test_periodicity_in_nu(self):
        # Phi(x; nu + 2 omega) = Phi(x; nu): the shift is only defined modulo the lattice
        x, nu = 0.3 + 0.2j, 0.6 + 0.1j
        a = phi(x, PhiParams(nu, RHOMBIC))
        b = phi(x, PhiParams(nu + 2 * RHOMBIC.omega_p, RHOMBIC))
        assert abs(a - b) <= 1e-12 * (1 + abs(a))


class TestLogDerivative:
    def test_laurent(self):
        x = 1e-4
        assert abs(phi_log_derivative(x, PhiParams(0.7, SQUARE)) + 1 / x) <= 10

    def test_matches_jet(self):
        P = PhiParams(0.7, SQUARE)
        j = phi_jet(0.4, P, 6)
        assert abs(j[1] / j[0] - phi_log_derivative(0.4, P)) <= 1e-9

    def test_infinite(self):
        assert phi_log_derivative(0.8, PhiParams(INFINITY, HYPER)) == pytest.approx(-1 / math.tanh(0.8), rel=1e-10)

    def test_one_period(self):
        P = PhiParams(0.9 + 0.2j, HYPER)
        x = 0.35
        h = 1e-6
        fd = (phi(x + h, P) - phi(x - h, P)) / (2 * h) / phi(x, P)
        assert abs(phi_log_derivative(x, P) - fd) <= 1e-7


class TestJet:
    @pytest.mark.parametrize("L", [SQUARE, RHOMBIC, HYPER, RATIONAL], ids=["square", "rhombic", "hyper", "rational"])
    def test_displaced_evaluation(self, L):
        P = PhiParams(0.7 + 0.2j, L)
        j = phi_jet(0.3, P, 8)
        for d in (1e-3, -1e-3, 1e-3j):
            assert abs(j.evaluate(0.3 + d) - phi(0.3 + d, P)) <= 1e-8 * (1 + abs(phi(0.3 + d, P)))

    def test_constant_and_first(self):
        P = PhiParams(0.7, SQUARE)
        j = phi_jet(0.45, P, 5)
        assert j[0] == phi(0.45, P)
        assert j[1] == pytest.approx(phi(0.45, P) * phi_log_derivative(0.45, P), rel=1e-12)

    def test_half_period_shift(self):
        P = PhiParams(SQUARE.omega, SQUARE)
        j = phi_jet(0.3, P, 6)
        # relative to 1 + |Phi|; the pole at 0 limits the series radius to 0.3
        assert abs(j.evaluate(0.31) - phi(0.31, P)) <= 1e-10 * (1 + abs(phi(0.31, P)))

    def test_at_zero_of_phi(self):
        P = PhiParams(0.7, SQUARE)
        j = phi_jet(0.7, P, 6)
        assert j[0] == 0
        assert abs(j.evaluate(0.705) - phi(0.705, P)) <= 1e-10
        assert phi_prime(0.7, P) == pytest.approx(j[1])

    def test_infinite_jet(self):
        P = PhiParams(INFINITY, HYPER)
        j = phi_jet(0.5, P, 6)
        assert j.evaluate(0.51) == pytest.approx(1 / math.sinh(0.51), rel=1e-10)


class TestIdentities:
    @pytest.mark.parametrize("L", [SQUARE, RHOMBIC, HYPER], ids=["square", "rhombic", "hyper"])
    def test_addition(self, L):
        P = PhiParams(0.7 if L is not HYPER else 0.5, L)
        rng = np.random.default_rng(3)
        for x, y in (rng.uniform(-0.8, 0.8, (20, 2)) + 1j * rng.uniform(-0.8, 0.8, (20, 2))):
            assert addition_residual(x, y, P) <= 1e-9

    def test_addition_degenerate_denominator(self):
        with pytest.raises(ValueError):
            addition_residual(0.3, -0.3, PhiParams(0.7, SQUARE))

    def test_three_term(self):
        rng = np.random.default_rng(4)
        for x, y in rng.uniform(-0.8, 0.8, (20, 2)) + 0.1j:
            assert three_term_residual(x, y, 0.4, 0.2 + 0.9j, SQUARE) <= 1e-9

    def test_three_term_equal_shifts(self):
        assert three_term_residual(0.3, 0.45, 0.6, 0.6, SQUARE) <= 1e-9

    def test_three_term_swap(self):
        a = three_term_residual(0.3, 0.45, 0.4, 0.2 + 0.9j, SQUARE)
        b = three_term_residual(0.3, 0.45, 0.2 + 0.9j, 0.4, SQUARE)
        assert a <= 1e-9 and b <= 1e-9

    def test_translation(self):
        assert translation_residual(0.25, 0.3, 0.8, SQUARE) <= 1e-9
        assert translation_residual(0.25, 0.3, 0.8, HYPER) <= 1e-9

    def test_translation_at_origin_limit(self):
        assert translation_residual(1e-6, 0.3, 0.8, SQUARE) <= 1e-6

    @settings(max_examples=40, deadline=None)
    @given(points, points, points)
    def test_zeta_sum(self, x, y, z):
        assume_regular = min(abs(x + y), abs(y + z), abs(z + x), abs(x + y + z))
        if assume_regular < 0.05:
            return
        assert zeta_sum_residual(x, y, z, RHOMBIC) <= 1e-9

    @settings(max_examples=40, deadline=None)
    @given(points, points)
    def test_wp_difference(self, x, y):
        if abs(x - y) < 0.05 or abs(x + y) < 0.05:
            return
        assert wp_difference_residual(x, y, SQUARE) <= 1e-9

    @pytest.mark.parametrize("L", [SQUARE, RHOMBIC, HYPER], ids=["square", "rhombic", "hyper"])
    def test_homogeneity(self, L):
        assert homogeneity_residual(0.3 + 0.1j, 0.7, L, t=2.0) <= 1e-10

    def test_calfun_form(self):
        # A = Phi, B = wp: A(x+y)(B x - B y) = A(x)A'(y) - A(y)A'(x)
        P = PhiParams(0.7, SQUARE)
        x, y = 0.31 + 0.05j, -0.52 + 0.2j
        lhs = phi(x + y, P) * (wp_value(x, SQUARE) - wp_value(y, SQUARE))
        rhs = phi(x, P) * phi_prime(y, P) - phi(y, P) * phi_prime(x, P)
        assert abs(lhs - rhs) <= 1e-9 * (1 + abs(lhs))

    def test_small_nu_limit_linear(self):
        x, y = 0.4 + 0.1j, -0.3 + 0.25j
        e2 = small_nu_limit_residual(x, y, 1e-2, SQUARE)
        e3 = small_nu_limit_residual(x, y, 1e-3, SQUARE)
        assert e3 <= e2 / 5
        assert e3 <= 1e-2


def test_degenerate_consistency():
    # theta path forced on a lattice 1e-12 away from the one-period limit
    c = 1.0 / 3.0
    g2 = 12 * c * c
    g3 = -math.sqrt((g2 ** 3 - 1e-12) / 27.0)
    near = lattice_from_invariants(g2, g3, force_generic=True)
    exact = degenerate_lattice(1.0)
    for x in (0.3, 0.5 + 0.2j, -0.7 + 0.1j):
        a = phi(x, PhiParams(0.6, near))
        b = phi(x, PhiParams(0.6, exact))
        assert abs(a - b) <= 1e-6 * (1 + abs(b))
