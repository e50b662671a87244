"""Worked applications: Jacobi addition theorems, the sum-of-products equation
phi1(x+y) = phi4(x) phi5(y) + phi4(y) phi5(x), and the seven-function equation

    Psi1(x+y) = Psi2(x+y) phi2(x) phi3(y) + Psi3(x+y) phi4(x) phi5(y).
"""

from __future__ import annotations

import cmath
import itertools
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .elliptic import (
    Lattice,
    PoleError,
    degenerate_lattice,
    lattice_distance,
    wp_value,
    zeta_fn,
)
from .identify import IdentificationResult, identify
from .jacobi import lattice_from_m
from .jets import Jet
from .phi import PhiParams, phi, three_term_residual
from .symmetry import (
    SolutionTuple,
    jacobi_cn_tuple,
    jacobi_dn_tuple,
    jacobi_sn_tuple,
    max_functional_residual,
)

__all__ = [
    "grid_pairs",
    "example1_report",
    "Example2Data",
    "Example2Solution",
    "example2_solve",
    "example2_tuple",
    "BiggyParams",
    "Example3System",
    "example3_construct",
]


def grid_pairs(n: int, radius: float = 0.9, offset: complex = 0.0) -> list[tuple[complex, complex]]:
    """``n x n`` grid of ``(x, y)`` pairs on two slightly skewed lines."""
    xs = offset + np.linspace(-radius, radius, n) + 0.13j
    ys = offset + np.linspace(-radius, radius, n) * (0.8 + 0.3j) - 0.07
    return [(complex(x), complex(y)) for x, y in itertools.product(xs, ys)]


# ---------------------------------------------------------------------------
# Jacobi addition theorems


def example1_report(m: float, x0: complex | None = 0.0, grid: int = 5) -> dict:
    """Identify the dn and cn addition theorems and check the sn (Cayley) form.

    The sn form corresponds to a shift at a lattice point and is not generic;
    it is verified through Phi^2(x; iK') - Phi^2(y; iK') = wp(x) - wp(y) and its
    own functional residual.
    """
    if not (0.0 < m < 1.0):
        raise ValueError("example 1 needs 0 < m < 1")
    jp = lattice_from_m(m)
    L = jp.lattice
    report = {"m": m, "K": jp.K, "K_prime": jp.K_prime,
              "expected": {"g2": 4.0 / 3.0 * (1 - m + m * m),
                           "g3": 4.0 / 27.0 * (m - 2) * (2 * m - 1) * (m + 1),
                           "roots": ((2 - m) / 3.0, (2 * m - 1) / 3.0, (-1 - m) / 3.0)}}
    pts = grid_pairs(grid, 0.8)
    for name, tup in (("dn", jacobi_dn_tuple(m)), ("cn", jacobi_cn_tuple(m))):
        R = identify(tup, x0)
        report[name] = {"result": R, "functional_residual": max_functional_residual(tup, pts)}
    sn = jacobi_sn_tuple(m)
    P = PhiParams(1j * jp.K_prime, L)
    worst = 0.0
    for x, y in pts:
        if abs(x) < 1e-3 or abs(y) < 1e-3:
            continue
        lhs = phi(x, P) ** 2 - phi(y, P) ** 2
        rhs = wp_value(x, L) - wp_value(y, L)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    report["sn"] = {"limit_residual": worst, "functional_residual": max_functional_residual(sn, pts)}
    return report


# ---------------------------------------------------------------------------
# phi1(x+y) = phi4(x) phi5(y) + phi4(y) phi5(x)


@dataclass(frozen=True)
class Example2Data:
    x0: complex
    phi4_0: complex
    phi4p_0: complex
    phi5_0: complex
    phi5p_0: complex
    kappa: complex = 1.0

    @property
    def N2(self) -> complex:
        return self.phi4p_0 / self.phi4_0 - self.phi5p_0 / self.phi5_0


@dataclass
class Example2Solution:
    data: Example2Data
    N2: complex
    nu1: complex
    lambda1: complex
    lambda2: complex
    exponent: complex
    phi1_2x0: complex
    phi1: Callable
    phi4: Callable
    phi5: Callable
    residual: float = 0.0
    exponent_checks: tuple = ()
    ratio_residual: float = 0.0


def _coth(z):
    return 1.0 / cmath.tanh(z)


def example2_solve(d: Example2Data, phi1_2x0: complex | None = None, grid: int = 7) -> Example2Solution:
    """Closed-form solution from the values and slopes of phi4, phi5 at ``x0``.

    ``phi1_2x0`` defaults to ``2 phi4(x0) phi5(x0)``, the value the equation forces.
    """
    k = complex(d.kappa)
    if k == 0:
        raise ValueError("kappa must be nonzero")
    if d.phi4_0 == 0 or d.phi5_0 == 0:
        raise ValueError("non-generic: phi4(x0) and phi5(x0) must be nonzero")
    N2 = d.N2
    if abs(N2) <= 1e-14 * (1 + abs(d.phi4p_0 / d.phi4_0)):
        raise ValueError("non-generic: N2 = 0")
    r4, r5 = d.phi4p_0 / d.phi4_0, d.phi5p_0 / d.phi5_0
    # sign convention N2 = -2 kappa / sinh(kappa nu1)
    nu1 = cmath.asinh(-2.0 * k / N2) / k
    lam2 = -r5 - N2 / 2.0 - k * _coth(k * nu1)
    lam1 = lam2 - 0.5 * (r4 + r5)
    expo = lam2 - lam1 + k * _coth(k * nu1)
    half = k * nu1 / 2.0
    checks = (r4 - N2 / 2.0 + k * _coth(k * nu1), r4 + k * _coth(half),
              r5 + N2 / 2.0 + k * _coth(k * nu1), r5 + k * cmath.tanh(half))
    if phi1_2x0 is None:
        phi1_2x0 = 2.0 * d.phi4_0 * d.phi5_0
    x0 = complex(d.x0)
    a4 = r4 + k * _coth(half)
    a5 = r5 + k * cmath.tanh(half)

    def f1(X):
        x = X - 2 * x0
        return cmath.exp(expo * x) * cmath.sinh(k * (nu1 - x)) / cmath.sinh(k * nu1) * phi1_2x0

    def f4(X):
        x = X - x0
        return cmath.sinh(k * (nu1 / 2 - x)) / cmath.sinh(half) * cmath.exp(a4 * x) * d.phi4_0

    def f5(X):
        x = X - x0
        return cmath.cosh(k * (nu1 / 2 - x)) / cmath.cosh(half) * cmath.exp(a5 * x) * d.phi5_0

    sol = Example2Solution(d, N2, nu1, lam1, lam2, expo, complex(phi1_2x0), f1, f4, f5,
                           exponent_checks=checks)
    worst = 0.0
    for x, y in grid_pairs(grid, 0.9, x0):
        lhs = f1(x + y)
        rhs = f4(x) * f5(y) + f4(y) * f5(x)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
    sol.residual = worst
    worst = 0.0
    for x in np.linspace(-0.7, 0.7, 7) + 0.05j:
        ratio = f4(x + x0) * d.phi5_0 / (f5(x + x0) * d.phi4_0)
        target = _coth(half) * cmath.tanh(k * (nu1 / 2 - x))
        worst = max(worst, abs(ratio - target) / (1 + abs(target)))
    sol.ratio_residual = worst
    return sol


def example2_tuple(sol: Example2Solution) -> SolutionTuple:
    """The closed form as a tuple ``(phi1, phi4^2, phi5^2, phi4, phi5)`` of jet oracles."""
    d = sol.data
    k = complex(d.kappa)
    x0 = complex(d.x0)
    half = k * sol.nu1 / 2.0
    a4 = d.phi4p_0 / d.phi4_0 + k * _coth(half)
    a5 = d.phi5p_0 / d.phi5_0 + k * cmath.tanh(half)

    def j1(X0, order):
        x = Jet.variable(X0, order) - 2 * x0
        return (x * sol.exponent).exp() * ((x * -1.0 + sol.nu1) * k).sinh() * (sol.phi1_2x0 / cmath.sinh(k * sol.nu1))

    def j4(X0, order):
        x = Jet.variable(X0, order) - x0
        return ((x * -1.0 + sol.nu1 / 2) * k).sinh() * (x * a4).exp() * (d.phi4_0 / cmath.sinh(half))

    def j5(X0, order):
        x = Jet.variable(X0, order) - x0
        return ((x * -1.0 + sol.nu1 / 2) * k).cosh() * (x * a5).exp() * (d.phi5_0 / cmath.cosh(half))

    def sq(f):
        def out(X0, order):
            v = f(X0, order)
            return v * v
        return out

    return SolutionTuple((j1, sq(j4), sq(j5), j4, j5), label="sum-of-products",
                         meta={"kappa": k, "nu1": sol.nu1})


# ---------------------------------------------------------------------------
# seven-function equation


@dataclass(frozen=True)
class BiggyParams:
    mu1: complex
    mu2: complex
    mu3: complex
    lattice: Lattice

    @property
    def alpha(self) -> complex:
        return complex(self.mu1 - self.mu2 - self.mu3)

    @property
    def nu1(self) -> complex:
        return complex(self.mu1 - self.mu3)

    @property
    def nu2(self) -> complex:
        return complex(self.mu1 - self.mu2)

    @property
    def c(self) -> complex:
        return wp_value(self.nu2, self.lattice) - wp_value(self.nu1, self.lattice)

    @property
    def gamma(self) -> complex:
        L = self.lattice
        return zeta_fn(self.nu1, L) + zeta_fn(self.nu2, L) - zeta_fn(self.nu1 + self.nu2, L)


@dataclass
class Example3System:
    params: BiggyParams
    psi: tuple
    phis: tuple
    c1: complex
    lambda1: complex
    c2: complex
    lambda2: complex
    residuals: dict = field(default_factory=dict)

    def psi_ratios(self, x: complex) -> tuple[complex, complex]:
        """(Psi1/Psi2, Psi3/Psi2) at ``x``."""
        p1, p2, p3 = (f(x) for f in self.psi)
        return p1 / p2, p3 / p2


def example3_construct(p: BiggyParams, grid: int = 5) -> Example3System:
    L = p.lattice
    alpha, nu1, nu2 = p.alpha, p.nu1, p.nu2
    checks = {"alpha": alpha, "nu1": nu1, "nu2": nu2, "nu1+nu2": nu1 + nu2,
              "mu1": p.mu1, "mu2": p.mu2, "mu3": p.mu3}
    for name, val in checks.items():
        if lattice_distance(val, L) < 1e-8:
            raise ValueError(f"lattice-point collision: {name}")

    def P(nu):
        return PhiParams(nu, L)

    def A(nu):
        return -phi(alpha, P(nu))

    def beta(nu):
        return zeta_fn(alpha - nu, L) + zeta_fn(nu, L) - zeta_fn(alpha, L)

    c, gamma = p.c, p.gamma
    A1, A2, A12 = A(nu1), A(nu2), A(nu1 + nu2)
    b1, b2, b12 = beta(nu1), beta(nu2), beta(nu1 + nu2)
    Pm1, Pm2, Pm3, Pa = P(p.mu1), P(p.mu2), P(p.mu3), P(alpha)
    Pn1, Pn2 = P(nu1), P(nu2)
    k1 = c * A12 * cmath.exp(gamma * alpha)

    def psi1(s):
        return k1 * cmath.exp((gamma + b12) * s) * phi(s, Pm1)

    def psi2(s):
        return A1 * A2 * cmath.exp(b1 * s) * phi(s, Pm2)

    def psi3(s):
        return -A1 * A2 * cmath.exp(b2 * s) * phi(s, Pm3)

    def phi2(x):
        return cmath.exp(b2 * x) * phi(x, Pm3) / phi(-x, Pa)

    def phi3(y):
        return phi(y, Pn2)

    def phi4(x):
        return cmath.exp(b1 * x) * phi(x, Pm2) / phi(-x, Pa)

    def phi5(y):
        return phi(y, Pn1)

    system = Example3System(p, (psi1, psi2, psi3), (phi2, phi3, phi4, phi5),
                            c1=k1 / (A1 * A2), lambda1=gamma + b12 - b1, c2=-1.0 + 0j, lambda2=b2 - b1)

    pts = grid_pairs(grid, 0.6)
    w8 = w_inter = w_three = w_ratio = 0.0
    for x, y in pts:
        try:
            s = x + y
            lhs = psi1(s)
            t2 = psi2(s) * phi2(x) * phi3(y)
            t3 = psi3(s) * phi4(x) * phi5(y)
            w8 = max(w8, abs(lhs - t2 - t3) / (1 + abs(lhs) + abs(t2) + abs(t3)))
            den = phi4(x) * phi5(y) - phi4(y) * phi5(x)
            num = phi2(x) * phi3(y) - phi2(y) * phi3(x)
            r = psi3(s) / psi2(s)
            w_inter = max(w_inter, abs(r * den + num) / (1 + abs(r * den)))
            w_three = max(w_three, three_term_residual(x, y, nu1, nu2, L))
            q1, q3 = system.psi_ratios(s)
            e1 = system.c1 * cmath.exp(system.lambda1 * s) * phi(s, Pm1) / phi(s, Pm2)
            e3 = system.c2 * cmath.exp(system.lambda2 * s) * phi(s, Pm3) / phi(s, Pm2)
            w_ratio = max(w_ratio, abs(q1 - e1) / (1 + abs(q1)), abs(q3 - e3) / (1 + abs(q3)))
        except (PoleError, ZeroDivisionError):
            continue
    system.residuals = {"eq8": w8, "inter1": w_inter, "three_term": w_three, "ratios": w_ratio}
    return system
