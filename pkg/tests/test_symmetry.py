import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bakerfe.applications import grid_pairs
from bakerfe.elliptic import lattice_from_invariants
from bakerfe.identify import identify
from bakerfe.jets import Jet
from bakerfe.symmetry import (
    DegenerateDeterminantError,
    GroupElement,
    act,
    canonical_tuple,
    centered_tuple,
    compose,
    functional_residual,
    identity_element,
    jacobi_cn_tuple,
    jacobi_dn_tuple,
    jacobi_sn_tuple,
    max_functional_residual,
    random_element,
    validate,
)

SQUARE = lattice_from_invariants(1.0, 0.0)
GRID = grid_pairs(5, 0.8)


@pytest.fixture(scope="module")
def canonical():
    return canonical_tuple(SQUARE, 0.7, 0.4 + 0.9j)


class TestValidate:
    def test_identity(self):
        assert validate(identity_element()) == []

    def test_determinant_ratio(self):
        g = GroupElement(c=2.0, U=np.diag([2.0, 1.0]), V=np.eye(2))
        assert validate(g) == []

    def test_lambda_sum(self):
        assert "lambda sum" in validate(GroupElement(lam=1.0))

    def test_det_relation(self):
        assert "det U = c det V" in validate(GroupElement(c=1.0, U=np.diag([3.0, 1.0])))

    def test_random_elements_valid(self):
        for seed in range(100):
            assert validate(random_element(seed, 1.0)) == []

    def test_seed_42_exact(self):
        g = random_element(42, 0.5)
        assert abs(np.linalg.det(g.U) - g.c * np.linalg.det(g.V)) <= 1e-15 * abs(np.linalg.det(g.U))

    def test_deterministic(self):
        a, b = random_element(9, 0.5), random_element(9, 0.5)
        assert a.c == b.c and a.invert == b.invert
        assert np.array_equal(a.U, b.U) and np.array_equal(a.V, b.V)


class TestAct:
    def test_identity_action(self, canonical):
        s = act(identity_element(), canonical)
        for x in (0.3 + 0.1j, -0.5 + 0.2j):
            assert np.allclose(s.values(x), canonical.values(x), rtol=1e-14, atol=0)

    def test_inversion_involution(self, canonical):
        inv = GroupElement(invert=True)
        s = act(inv, act(inv, canonical))
        for x in (0.3 + 0.1j, -0.5 + 0.2j):
            assert np.allclose(s.values(x), canonical.values(x), rtol=1e-12, atol=0)

    def test_canonical_residual(self, canonical):
        assert max_functional_residual(canonical, GRID) <= 1e-9

    @pytest.mark.parametrize("maker", [jacobi_dn_tuple, jacobi_cn_tuple, jacobi_sn_tuple])
    def test_jacobi_tuples(self, maker):
        assert max_functional_residual(maker(0.5), GRID) <= 1e-9

    def test_random_elements_preserve_equation(self, canonical):
        for seed in range(12):
            s = act(random_element(seed, 0.5), canonical)
            assert max_functional_residual(s, GRID) <= 1e-9

    def test_gauge_zero_raises(self, canonical):
        def vanishing(x0, order):
            return Jet.variable(x0, order) - x0

        s = act(GroupElement(gauge=vanishing), canonical)
        with pytest.raises(ZeroDivisionError):
            s.jet(2, 0.3, 3)

    def test_degenerate_pair_flagged(self, canonical):
        with pytest.raises(DegenerateDeterminantError):
            functional_residual(canonical, 0.4, 0.4)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_composition_closure(a, b):
    ga = random_element(a, 0.7, with_gauge=False, allow_invert=False)
    gb = random_element(b, 0.7, with_gauge=False, allow_invert=False)
    assert validate(compose(ga, gb), tol=1e-10) == []


def test_compose_rejects_gauge():
    with pytest.raises(ValueError):
        compose(random_element(1, 0.5), identity_element())


def test_inversion_swaps_shifts():
    L = lattice_from_invariants(2.0, -0.3)
    s = centered_tuple(L, 0.6, 0.45 + 0.3j)
    a = identify(s, 0.0)
    b = identify(act(GroupElement(invert=True), s), 0.0)
    assert abs(a.wp_nu[0] - b.wp_nu[1]) <= 1e-6 * (1 + abs(a.wp_nu[0]))
    assert abs(a.wp_nu[1] - b.wp_nu[0]) <= 1e-6 * (1 + abs(a.wp_nu[1]))


def test_oracles_deterministic(canonical):
    a = canonical.jet(3, 0.21 + 0.1j, 6).coefficients
    b = canonical.jet(3, 0.21 + 0.1j, 6).coefficients
    assert np.array_equal(a, b)
