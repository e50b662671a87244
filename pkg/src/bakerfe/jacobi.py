"""Jacobi elliptic functions in the parameter convention sn(x|m).

Real arguments use the descending Landen (AGM) scheme; complex arguments are
assembled from real-argument values at ``m`` and ``1 - m`` with the
imaginary-argument addition formulas. ``m = 1`` uses the hyperbolic limit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from . import elliptic
from .elliptic import Lattice, lattice_from_invariants
from .jets import Jet
from .phi import INFINITY, PhiParams, phi

__all__ = [
    "JacobiParams",
    "agm",
    "complete_K",
    "jacobi_sncndn",
    "jacobi_jets",
    "jacobi_invariants",
    "jacobi_roots",
    "lattice_from_m",
    "phijacs_residual",
]


def agm(a: float, b: float) -> float:
    if not (a > 0 and b > 0):
        raise ValueError("agm needs positive arguments")
    return elliptic.agm(a, b).real


def complete_K(m: float) -> float:
    if not (0.0 <= m < 1.0):
        raise ValueError("complete_K needs 0 <= m < 1")
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - m)))


def jacobi_invariants(m: float) -> tuple[float, float]:
    g2 = 4.0 / 3.0 * (1.0 - m + m * m)
    g3 = 4.0 / 27.0 * (m - 2.0) * (2.0 * m - 1.0) * (m + 1.0)
    return g2, g3


def jacobi_roots(m: float) -> tuple[float, float, float]:
    return (2.0 - m) / 3.0, (2.0 * m - 1.0) / 3.0, (-1.0 - m) / 3.0


def _sncndn_real(u: float, m: float) -> tuple[float, float, float]:
    if m == 0.0:
        return math.sin(u), math.cos(u), 1.0
    if m == 1.0:
        return math.tanh(u), 1.0 / math.cosh(u), 1.0 / math.cosh(u)
    a = [1.0]
    c = [math.sqrt(m)]
    b = math.sqrt(1.0 - m)
    while abs(c[-1]) > 1e-16 and len(a) < 40:
        an, bn = a[-1], b
        a.append(0.5 * (an + bn))
        c.append(0.5 * (an - bn))
        b = math.sqrt(an * bn)
    n = len(a) - 1
    ph = 2.0 ** n * a[n] * u
    for k in range(n, 0, -1):
        ph = 0.5 * (ph + math.asin(c[k] / a[k] * math.sin(ph)))
    sn, cn = math.sin(ph), math.cos(ph)
    dn = math.sqrt(max(0.0, 1.0 - m * sn * sn))
    return sn, cn, dn


def jacobi_sncndn(x: complex, m: float) -> tuple[complex, complex, complex]:
    """Return ``(sn, cn, dn)`` at complex ``x`` for ``0 <= m <= 1``."""
    if not (0.0 <= m <= 1.0):
        raise ValueError("jacobi_sncndn needs 0 <= m <= 1")
    x = complex(x)
    if m == 1.0:
        sech = 1.0 / cmath.cosh(x)
        return cmath.tanh(x), sech, sech
    if m == 0.0:
        return cmath.sin(x), cmath.cos(x), 1.0 + 0j
    s, c, d = _sncndn_real(x.real, m)
    if x.imag == 0.0:
        return complex(s), complex(c), complex(d)
    s1, c1, d1 = _sncndn_real(x.imag, 1.0 - m)
    den = c1 * c1 + m * s * s * s1 * s1
    if abs(den) < 1e-14:
        raise elliptic.PoleError("sn, cn, dn have a pole here")
    sn = complex(s * d1, c * d * s1 * c1) / den
    cn = complex(c * c1, -s * d * s1 * d1) / den
    dn = complex(d * c1 * d1, -m * s * c * s1) / den
    return sn, cn, dn


def jacobi_jets(x0: complex, m: float, order: int) -> tuple[Jet, Jet, Jet]:
    """Jets of sn, cn, dn at ``x0`` from sn' = cn dn, cn' = -sn dn, dn' = -m sn cn."""
    s0, c0, d0 = jacobi_sncndn(x0, m)
    s = np.zeros(order + 1, dtype=complex)
    c = np.zeros(order + 1, dtype=complex)
    d = np.zeros(order + 1, dtype=complex)
    s[0], c[0], d[0] = s0, c0, d0
    for k in range(order):
        cd = np.dot(c[: k + 1], d[k::-1])
        sd = np.dot(s[: k + 1], d[k::-1])
        sc = np.dot(s[: k + 1], c[k::-1])
        s[k + 1] = cd / (k + 1)
        c[k + 1] = -sd / (k + 1)
        d[k + 1] = -m * sc / (k + 1)
    return Jet(x0, s), Jet(x0, c), Jet(x0, d)


@dataclass(frozen=True)
class JacobiParams:
    m: float
    K: float
    K_prime: float
    lattice: Lattice


def lattice_from_m(m: float) -> JacobiParams:
    """Weierstrass data with ``omega = K(m)``, ``omega' = i K'(m)``.

    ``m = 1`` is accepted and gives the one-period lattice with ``kappa = 1``.
    """
    if not (0.0 < m <= 1.0):
        raise ValueError("lattice_from_m needs 0 < m <= 1")
    g2, g3 = jacobi_invariants(m)
    lat = lattice_from_invariants(g2, g3)
    if m == 1.0:
        return JacobiParams(m, math.inf, math.pi / 2.0, lat)
    return JacobiParams(m, complete_K(m), complete_K(1.0 - m), lat)


def phijacs_residual(x: complex, L: Lattice) -> float:
    """Phi at the three half periods against cn/sn, dn/sn and 1/sn.

    Lattices with real roots are scaled onto the Jacobi lattice with
    ``t = sqrt(e1 - e3)`` and ``m = (e2 - e3)/(e1 - e3)``. Without real roots
    the equivalent squared statement Phi(x; w)^2 = wp(x) - wp(w) is checked.
    """
    x = complex(x)
    roots = L.roots
    real_roots = all(abs(e.imag) <= 1e-14 * (1 + abs(e)) for e in roots)
    if L.degeneracy == elliptic.RATIONAL:
        raise ValueError("the rational lattice has no half periods")
    if L.degeneracy == elliptic.ONE_PERIOD:
        if not (L.kappa.imag == 0 and L.kappa.real > 0):
            raise ValueError("phi/Jacobi comparison needs real kappa")
        t = L.kappa.real
        sn, cn, dn = jacobi_sncndn(t * x, 1.0)
        checks = [
            (phi(x, PhiParams(L.omega_p, L)), t / sn),
            (phi(x, PhiParams(INFINITY, L)), t * cn / sn),
            (phi(x, PhiParams(INFINITY, L)), t * dn / sn),
        ]
    elif real_roots:
        e1, e2, e3 = (e.real for e in roots)
        t = math.sqrt(e1 - e3)
        m = (e2 - e3) / (e1 - e3)
        sn, cn, dn = jacobi_sncndn(t * x, m)
        checks = [
            (phi(x, PhiParams(L.omega_p, L)), t / sn),
            (phi(x, PhiParams(L.omega + L.omega_p, L)), t * dn / sn),
            (phi(x, PhiParams(L.omega, L)), t * cn / sn),
        ]
    else:
        w = elliptic.wp_value(x, L)
        checks = [(phi(x, PhiParams(h, L)) ** 2, w - e) for h, e in zip(L.half_periods, roots)]
    return max(abs(a - b) / (1.0 + abs(b)) for a, b in checks)
