"""Solution tuples of the determinant-ratio equation and the group acting on them.

The equation is

    phi1(x + y) * det[[phi4(x), phi4(y)], [phi5(x), phi5(y)]]
        = det[[phi2(x), phi2(y)], [phi3(x), phi3(y)]].

A tuple holds five oracles ``(point, order) -> Jet``. Group elements combine
exponential twists, GL2 mixing of the two pairs, the inversion
``phi1 -> 1/phi1`` with a pair swap, and a common gauge factor on both pairs.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .elliptic import Lattice, PoleError, sigma, sigma_jet, zeta_fn
from .jacobi import jacobi_jets
from .jets import Jet
from .phi import PhiParams, phi_jet

__all__ = [
    "Oracle",
    "SolutionTuple",
    "GroupElement",
    "DegenerateDeterminantError",
    "identity_element",
    "validate",
    "act",
    "compose",
    "functional_residual",
    "max_functional_residual",
    "random_element",
    "canonical_tuple",
    "centered_tuple",
    "jacobi_dn_tuple",
    "jacobi_cn_tuple",
    "jacobi_sn_tuple",
    "exponential_orbit_tuple",
    "exp_linear_gauge",
]

Oracle = Callable[[complex, int], Jet]


class DegenerateDeterminantError(ValueError):
    """The right-hand determinant vanishes at the queried pair of points."""


@dataclass(frozen=True)
class SolutionTuple:
    phis: tuple
    label: str = ""
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if len(self.phis) != 5:
            raise ValueError("a solution tuple has exactly five functions")

    def jet(self, i: int, x0: complex, order: int) -> Jet:
        """Jet of phi_i (1-based) at ``x0``."""
        return self.phis[i - 1](complex(x0), order)

    def value(self, i: int, x: complex) -> complex:
        return self.jet(i, x, 0).value

    def values(self, x: complex) -> list[complex]:
        return [self.value(i, x) for i in range(1, 6)]


@dataclass(frozen=True)
class GroupElement:
    c: complex = 1.0
    lam: complex = 0.0
    lam_p: complex = 0.0
    lam_pp: complex = 0.0
    U: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    V: np.ndarray = field(default_factory=lambda: np.eye(2, dtype=complex))
    gauge: Optional[Oracle] = None
    invert: bool = False

    def __post_init__(self):
        object.__setattr__(self, "U", np.asarray(self.U, dtype=complex).reshape(2, 2))
        object.__setattr__(self, "V", np.asarray(self.V, dtype=complex).reshape(2, 2))


def identity_element() -> GroupElement:
    return GroupElement()


def validate(g: GroupElement, tol: float = 1e-12) -> list[str]:
    """Return the list of violated constraints (empty when valid)."""
    problems = []
    if abs(g.lam + g.lam_p + g.lam_pp) > tol * (1 + abs(g.lam) + abs(g.lam_p) + abs(g.lam_pp)):
        problems.append("lambda sum")
    du, dv = np.linalg.det(g.U), np.linalg.det(g.V)
    if du == 0:
        problems.append("det U zero")
    if dv == 0:
        problems.append("det V zero")
    if g.c == 0:
        problems.append("c zero")
    if abs(du - g.c * dv) > tol * (1 + abs(du)):
        problems.append("det U = c det V")
    return problems


def _twist(oracle: Oracle, rate: complex, scale: complex = 1.0) -> Oracle:
    def out(x0, order):
        j = oracle(x0, order)
        if rate == 0:
            return j * scale
        return j * (Jet.variable(x0, order) * rate).exp() * scale
    return out


def _mix(matrix: np.ndarray, a: Oracle, b: Oracle, row: int) -> Oracle:
    u, v = matrix[row]

    def out(x0, order):
        return a(x0, order) * u + b(x0, order) * v
    return out


def _times(oracle: Oracle, gauge: Oracle) -> Oracle:
    def out(x0, order):
        f = gauge(x0, order)
        if f.value == 0:
            raise ZeroDivisionError("gauge factor vanishes at the queried point")
        return oracle(x0, order) * f
    return out


def _inverse(oracle: Oracle) -> Oracle:
    def out(x0, order):
        return 1.0 / oracle(x0, order)
    return out


def act(g: GroupElement, s: SolutionTuple) -> SolutionTuple:
    """Apply ``g``: inversion first, then twists and mixing, then the gauge."""
    p1, p2, p3, p4, p5 = s.phis
    if g.invert:
        p1, p2, p3, p4, p5 = _inverse(p1), p4, p5, p2, p3
    q1 = _twist(p1, g.lam, g.c)
    t2, t3 = _twist(p2, -g.lam_p), _twist(p3, -g.lam_p)
    t4, t5 = _twist(p4, g.lam_pp), _twist(p5, g.lam_pp)
    q2, q3 = _mix(g.U, t2, t3, 0), _mix(g.U, t2, t3, 1)
    q4, q5 = _mix(g.V, t4, t5, 0), _mix(g.V, t4, t5, 1)
    if g.gauge is not None:
        q2, q3, q4, q5 = (_times(q, g.gauge) for q in (q2, q3, q4, q5))
    return SolutionTuple((q1, q2, q3, q4, q5), label=f"g.{s.label}", meta=dict(s.meta))


def compose(a: GroupElement, b: GroupElement) -> GroupElement:
    """Element acting as ``a`` after ``b``; only twist/mix elements compose here."""
    if a.invert or b.invert or a.gauge is not None or b.gauge is not None:
        raise ValueError("compose handles twist/mix elements only")
    return GroupElement(a.c * b.c, a.lam + b.lam, a.lam_p + b.lam_p, a.lam_pp + b.lam_pp,
                        a.U @ b.U, a.V @ b.V)


def functional_residual(s: SolutionTuple, x: complex, y: complex) -> float:
    x, y = complex(x), complex(y)
    vx, vy = s.values(x), s.values(y)
    den = vx[3] * vy[4] - vy[3] * vx[4]
    num = vx[1] * vy[2] - vy[1] * vx[2]
    if abs(den) <= 1e-13 * (1 + abs(vx[3] * vy[4]) + abs(vy[3] * vx[4])):
        raise DegenerateDeterminantError("denominator determinant vanishes")
    lhs = s.value(1, x + y) * den
    return abs(lhs - num) / (1.0 + abs(lhs))


def max_functional_residual(s: SolutionTuple, points: Sequence[tuple[complex, complex]]) -> float:
    """Largest residual over the pairs.

    Pairs with a vanishing denominator or a singular function value are
    skipped; at least one pair must survive.
    """
    worst, used = 0.0, 0
    for x, y in points:
        try:
            r = functional_residual(s, x, y)
        except (DegenerateDeterminantError, PoleError, ZeroDivisionError):
            continue
        worst = max(worst, r)
        used += 1
    if used == 0:
        raise DegenerateDeterminantError("no usable point pairs")
    return worst


# ---------------------------------------------------------------------------
# random elements


def exp_linear_gauge(a: complex, b: complex) -> Oracle:
    """Gauge ``f(x) = e^{a x} (1 + b x)``."""
    def out(x0, order):
        X = Jet.variable(x0, order)
        return (X * a).exp() * (X * b + 1.0)
    return out


def random_element(seed: int, magnitude_bound: float, working_radius: float = 2.0,
                   with_gauge: bool = True, allow_invert: bool = True) -> GroupElement:
    """Reproducible element satisfying the constraints exactly.

    The gauge zero at ``-1/b`` is kept outside twice the working radius.
    """
    rng = np.random.default_rng(seed)

    def cplx(size=None):
        return magnitude_bound * (rng.uniform(-1, 1, size) + 1j * rng.uniform(-1, 1, size))

    def matrix():
        while True:
            m = np.eye(2, dtype=complex) + cplx((2, 2))
            if abs(np.linalg.det(m)) >= 0.1:
                return m

    U, V = matrix(), matrix()
    lam, lam_p = cplx(), cplx()
    lam_pp = -lam - lam_p
    c = np.linalg.det(U) / np.linalg.det(V)
    gauge = None
    if with_gauge:
        a = cplx()
        b = cplx()
        if abs(b) * 2.0 * working_radius >= 1.0:
            b = b / (abs(b) * 2.0 * working_radius) * 0.9
        gauge = exp_linear_gauge(a, b)
    invert = bool(rng.integers(0, 2)) if allow_invert else False
    return GroupElement(complex(c), complex(lam), complex(lam_p), complex(lam_pp), U, V, gauge, invert)


# ---------------------------------------------------------------------------
# tuples


def _phi_pair(P: PhiParams) -> tuple[Oracle, Oracle]:
    def first(x0, order):
        return phi_jet(x0, P, order)

    def second(x0, order):
        return phi_jet(x0, P, order + 1).derivative()
    return first, second


def _ratio(a: Oracle, b: Oracle) -> Oracle:
    def out(x0, order):
        return a(x0, order) / b(x0, order)
    return out


def canonical_tuple(L: Lattice, nu1, nu2) -> SolutionTuple:
    """phi1 = Phi(.; nu1)/Phi(.; nu2) with the pairs (Phi, Phi') for nu1 and nu2."""
    P1, P2 = PhiParams(nu1, L), PhiParams(nu2, L)
    a, b = _phi_pair(P1)
    c, d = _phi_pair(P2)
    return SolutionTuple((_ratio(a, c), a, b, c, d), label="canonical",
                         meta={"lattice": L, "nu": (P1.nu, P2.nu)})


def _entire_part(nu: complex, L: Lattice) -> Oracle:
    """Jets of E(x) = sigma(nu - x) e^{zeta(nu) x} / sigma(nu) = sigma(x) Phi(x; nu)."""
    znu = zeta_fn(nu, L)
    snu = sigma(nu, L)

    def out(x0, order):
        s = sigma_jet(nu - x0, L, order).reflect().rebase(x0)
        return s * (Jet.variable(x0, order) * znu).exp() / snu
    return out


def centered_tuple(L: Lattice, nu1: complex, nu2: complex, x0: complex = 0.0) -> SolutionTuple:
    """Canonical tuple translated to ``x0`` with the pairs gauged by sigma^2.

    With ``E = sigma * Phi`` the pairs ``sigma^2 (Phi, Phi')`` become
    ``(sigma E, sigma E' - sigma' E)``, entire functions, so ``x0`` is a
    regular point and identification there returns ``nu1, nu2`` themselves.
    """
    x0 = complex(x0)
    nu1, nu2 = complex(nu1), complex(nu2)
    E1, E2 = _entire_part(nu1, L), _entire_part(nu2, L)

    def pair(E):
        def u(X0, order):
            a = X0 - x0
            return (sigma_jet(a, L, order) * E(a, order)).rebase(X0)

        def v(X0, order):
            a = X0 - x0
            s = sigma_jet(a, L, order + 1)
            e = E(a, order + 1)
            return (s.truncate(order) * e.derivative() - s.derivative() * e.truncate(order)).rebase(X0)
        return u, v

    def first(X0, order):
        a = X0 - 2 * x0
        return (E1(a, order) / E2(a, order)).rebase(X0)

    u1, v1 = pair(E1)
    u2, v2 = pair(E2)
    return SolutionTuple((first, u1, v1, u2, v2), label="centered",
                         meta={"lattice": L, "nu": (nu1, nu2), "x0": x0})


def _jac(m: float, which: int, derivative: bool = False, scale: complex = 1.0) -> Oracle:
    def out(x0, order):
        jets = jacobi_jets(x0, m, order + 1)
        j = jets[which]
        j = j.derivative() if derivative else j.truncate(order)
        return j * scale
    return out


def jacobi_dn_tuple(m: float) -> SolutionTuple:
    """dn(x+y) = det[cn', cn] / det[sn', sn]."""
    return SolutionTuple((_jac(m, 2), _jac(m, 1, True), _jac(m, 1), _jac(m, 0, True), _jac(m, 0)),
                         label="jacobi-dn", meta={"m": m})


def jacobi_cn_tuple(m: float) -> SolutionTuple:
    """cn(x+y) = det[dn'/m, dn] / det[sn', sn]; the 1/m is carried by the first pair."""
    return SolutionTuple((_jac(m, 1), _jac(m, 2, True, 1.0 / m), _jac(m, 2), _jac(m, 0, True), _jac(m, 0)),
                         label="jacobi-cn", meta={"m": m})


def jacobi_sn_tuple(m: float) -> SolutionTuple:
    """sn(x+y) = det[1, sn^2] / det[sn', sn] (not generic at any point with sn' sn = 0)."""
    def one(x0, order):
        return Jet.constant(x0, 1.0, order)

    def sn2(x0, order):
        s = jacobi_jets(x0, m, order)[0]
        return s * s
    return SolutionTuple((_jac(m, 0), one, sn2, _jac(m, 0, True), _jac(m, 0)),
                         label="jacobi-sn", meta={"m": m})


def exponential_orbit_tuple(L: Lattice, nu: complex, rate: complex) -> SolutionTuple:
    """Tuple with phi1 = e^{rate x}: equal shifts in both pairs, one pair twisted."""
    base = centered_tuple(L, nu, nu)
    _, u, v, _, _ = base.phis

    def first(x0, order):
        return (Jet.variable(x0, order) * rate).exp()
    return SolutionTuple((first, _twist(u, rate), _twist(v, rate), u, v), label="exponential",
                         meta={"lattice": L, "nu": (complex(nu), complex(nu)), "rate": rate})
