"""The function Phi(x; nu) = sigma(nu - x) / (sigma(nu) sigma(x)) * exp(zeta(nu) x).

Phi has a simple pole of residue 1 at the lattice points and a zero at
``x = nu``. Besides evaluation and jets, this module carries residual checks
for the classical identities Phi and the sigma function satisfy; each residual
is relative to ``1 + |terms|`` because Phi grows exponentially.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Union

from .elliptic import (
    GENERIC,
    ONE_PERIOD,
    POLE_RADIUS,
    RATIONAL,
    Lattice,
    PoleError,
    lattice_distance,
    sigma,
    sigma_jet,
    wp,
    wp_value,
    zeta_fn,
    zeta_jet,
)
from .jets import Jet

__all__ = [
    "INFINITY",
    "PhiParams",
    "phi",
    "phi_log_derivative",
    "phi_prime",
    "phi_jet",
    "addition_residual",
    "three_term_residual",
    "translation_residual",
    "zeta_sum_residual",
    "wp_difference_residual",
    "homogeneity_residual",
    "small_nu_limit_residual",
]


class _Infinity:
    """Marker for the infinite shift allowed on one-period lattices."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Shift = Union[complex, _Infinity]


@dataclass(frozen=True)
class PhiParams:
    nu: Shift
    lattice: Lattice

    def __post_init__(self):
        if self.nu is INFINITY:
            if self.lattice.degeneracy != ONE_PERIOD:
                raise ValueError("nu = INFINITY is only meaningful on a one-period lattice")
            return
        nu = complex(self.nu)
        object.__setattr__(self, "nu", nu)
        if lattice_distance(nu, self.lattice) < POLE_RADIUS:
            raise PoleError("nu may not be a lattice point")

    @property
    def kappa(self):
        return self.lattice.kappa

    @property
    def is_infinite(self) -> bool:
        return self.nu is INFINITY


def _coth(z):
    return 1.0 / cmath.tanh(z)


def _regular_x(x: complex, lat: Lattice) -> complex:
    x = complex(x)
    if lattice_distance(x, lat) < POLE_RADIUS:
        raise PoleError("Phi has a pole at lattice points")
    return x


def phi(x: complex, P: PhiParams) -> complex:
    lat = P.lattice
    x = _regular_x(x, lat)
    if P.is_infinite:
        k = lat.kappa
        return k / cmath.sinh(k * x)
    nu = P.nu
    if lattice_distance(nu - x, lat) < POLE_RADIUS:
        return 0j
    if lat.degeneracy == RATIONAL:
        return (1.0 / x - 1.0 / nu) * cmath.exp(x / nu)
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        ck = _coth(k * nu)
        return k * (_coth(k * x) - ck) * cmath.exp(x * k * ck)
    return sigma(nu - x, lat) / (sigma(nu, lat) * sigma(x, lat)) * cmath.exp(zeta_fn(nu, lat) * x)


def phi_log_derivative(x: complex, P: PhiParams) -> complex:
    """d/dx ln Phi(x; nu)."""
    lat = P.lattice
    x = _regular_x(x, lat)
    if P.is_infinite:
        k = lat.kappa
        return -k * _coth(k * x)
    nu = P.nu
    if lattice_distance(nu - x, lat) < POLE_RADIUS:
        raise PoleError("log-derivative of Phi is singular at its zero")
    if lat.degeneracy == RATIONAL:
        return 1.0 / nu - 1.0 / x - 1.0 / (nu - x)
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        return -k * (_coth(k * (nu - x)) + _coth(k * x) - _coth(k * nu))
    return zeta_fn(nu, lat) - zeta_fn(x, lat) - zeta_fn(nu - x, lat)


def phi_prime(x: complex, P: PhiParams) -> complex:
    val = phi(x, P)
    if val == 0:
        return phi_jet(x, P, 1)[1]
    return val * phi_log_derivative(x, P)


def phi_jet(x0: complex, P: PhiParams, order: int) -> Jet:
    """Jet of Phi(.; nu) at ``x0`` built from closed forms or zeta jets."""
    lat = P.lattice
    x0 = _regular_x(x0, lat)
    if order == 0:
        return Jet(x0, [phi(x0, P)])
    X = Jet.variable(x0, order)
    if P.is_infinite:
        k = lat.kappa
        return k / (X * k).sinh()
    nu = P.nu
    if lat.degeneracy == RATIONAL:
        return (1.0 / X - 1.0 / nu) * (X / nu).exp()
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        ck = _coth(k * nu)
        kx = X * k
        return (kx.cosh() / kx.sinh() - ck) * k * (X * (k * ck)).exp()
    val = phi(x0, P)
    if val == 0:
        # at a zero the log-derivative is singular; use the sigma quotient directly
        num = sigma_jet(nu - x0, lat, order).reflect().rebase(x0)
        return num * (X * zeta_fn(nu, lat)).exp() / (sigma_jet(x0, lat, order) * sigma(nu, lat))
    # (ln Phi)' = zeta(nu) - zeta(x) - zeta(nu - x)
    zx = zeta_jet(x0, lat, order - 1)
    znx = zeta_jet(nu - x0, lat, order - 1).reflect().rebase(x0)
    log_deriv = zeta_fn(nu, lat) - zx - znx
    return log_deriv.integrate(0.0).exp() * val


# ---------------------------------------------------------------------------
# identity residuals


def addition_residual(x: complex, y: complex, P: PhiParams) -> float:
    """Phi(x+y) (wp x - wp y) against the Wronskian-type determinant."""
    lat = P.lattice
    dwp = wp_value(x, lat) - wp_value(y, lat)
    if abs(dwp) < 1e-12:
        raise ValueError("degenerate denominator: wp(x) = wp(y)")
    lhs = phi(x + y, P) * dwp
    rhs = phi(x, P) * phi_prime(y, P) - phi(y, P) * phi_prime(x, P)
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def three_term_residual(x: complex, y: complex, nu1: complex, nu2: complex, L: Lattice) -> float:
    P1, P2, P12 = PhiParams(nu1, L), PhiParams(nu2, L), PhiParams(complex(nu1) + complex(nu2), L)
    c = wp_value(nu2, L) - wp_value(nu1, L)
    gamma = zeta_fn(nu1, L) + zeta_fn(nu2, L) - zeta_fn(complex(nu1) + complex(nu2), L)
    s = x + y
    lhs = c * cmath.exp(gamma * s) * phi(s, P12)
    t1 = phi(s, P1) * phi(x, P2) * phi(y, P2)
    t2 = phi(s, P2) * phi(x, P1) * phi(y, P1)
    return abs(lhs - (t1 - t2)) / (1.0 + abs(lhs) + abs(t1) + abs(t2))


def translation_residual(x: complex, alpha: complex, nu: complex, L: Lattice) -> float:
    x, alpha, nu = complex(x), complex(alpha), complex(nu)
    lhs = phi(x + alpha, PhiParams(nu, L))
    expo = zeta_fn(alpha - nu, L) + zeta_fn(nu, L) - zeta_fn(alpha, L)
    rhs = (-cmath.exp(expo * x) * phi(alpha, PhiParams(nu, L))
           * phi(x, PhiParams(nu - alpha, L)) / phi(-x, PhiParams(alpha, L)))
    return abs(lhs - rhs) / (1.0 + abs(lhs) + abs(rhs))


def zeta_sum_residual(x: complex, y: complex, z: complex, L: Lattice) -> float:
    """zeta(x)+zeta(y)+zeta(z)-zeta(x+y+z) against the sigma quotient."""
    lhs = zeta_fn(x, L) + zeta_fn(y, L) + zeta_fn(z, L) - zeta_fn(x + y + z, L)
    rhs = (sigma(x + y, L) * sigma(y + z, L) * sigma(z + x, L)
           / (sigma(x, L) * sigma(y, L) * sigma(z, L) * sigma(x + y + z, L)))
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def wp_difference_residual(x: complex, y: complex, L: Lattice) -> float:
    lhs = wp_value(x, L) - wp_value(y, L)
    rhs = sigma(y - x, L) * sigma(y + x, L) / (sigma(y, L) ** 2 * sigma(x, L) ** 2)
    return abs(lhs - rhs) / (1.0 + abs(lhs))


def homogeneity_residual(x: complex, nu: complex, L: Lattice, t: float = 2.0) -> float:
    """Worst relative misfit of the scaling laws of sigma, zeta, wp and Phi."""
    Lt = L.scaled(t)
    x = complex(x)
    pairs = [
        (sigma(t * x, Lt), t * sigma(x, L)),
        (zeta_fn(t * x, Lt), zeta_fn(x, L) / t),
        (wp_value(t * x, Lt), wp_value(x, L) / t ** 2),
        (phi(t * x, PhiParams(t * nu, Lt)), phi(x, PhiParams(nu, L)) / t),
    ]
    return max(abs(a - b) / (1.0 + abs(b)) for a, b in pairs)


def small_nu_limit_residual(x: complex, y: complex, nu2: complex, L: Lattice) -> float:
    """Misfit of the twisted determinant against wp(x) - wp(y) at finite ``nu2``.

    The pair ``(e^{-zeta(nu2) x} Phi(x; nu2), -nu2 e^{-zeta(nu2) x} Phi'(x; nu2))``
    has a determinant tending to wp(x) - wp(y) as nu2 -> 0.
    """
    P = PhiParams(nu2, L)
    z2 = zeta_fn(nu2, L)

    def pair(u):
        e = cmath.exp(-z2 * u)
        return e * phi(u, P), -nu2 * e * phi_prime(u, P)

    a4, a5 = pair(x)
    b4, b5 = pair(y)
    det = a4 * b5 - b4 * a5
    target = wp_value(x, L) - wp_value(y, L)
    return abs(det - target) / (1.0 + abs(target))
