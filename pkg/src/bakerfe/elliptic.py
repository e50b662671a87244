"""Weierstrass sigma, zeta and wp on a period lattice.

Generic lattices are evaluated through Jacobi theta series in the nome
``q = exp(i pi omega'/omega)`` after reducing the argument into the period
parallelogram centred at the origin; quasi-periodicity of ``sigma`` and
``zeta`` is restored from the reduction offsets. Very close to the origin the
Laurent series is used instead. Degenerate lattices (discriminant zero) use
the closed hyperbolic/trigonometric forms, and ``g2 = g3 = 0`` the rational
ones.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .jets import Jet

__all__ = [
    "GENERIC",
    "ONE_PERIOD",
    "RATIONAL",
    "Lattice",
    "PoleError",
    "UnsupportedLatticeError",
    "InversionError",
    "agm",
    "carlson_rf",
    "laurent_coefficients",
    "lattice_from_invariants",
    "lattice_from_periods",
    "degenerate_lattice",
    "wp",
    "wp_value",
    "wp_prime",
    "zeta_fn",
    "sigma",
    "wp_jet",
    "zeta_jet",
    "sigma_jet",
    "wp_inverse",
    "reduce",
    "lattice_distance",
]

GENERIC = "generic"
ONE_PERIOD = "one_period"
RATIONAL = "rational"

POLE_RADIUS = 1e-12
_LAURENT_TERMS = 18


class PoleError(ArithmeticError):
    """Argument sits on (or within ``POLE_RADIUS`` of) a lattice point."""


class UnsupportedLatticeError(ValueError):
    pass


class InversionError(ArithmeticError):
    pass


def agm(a: complex, b: complex, tol: float = 1e-15) -> complex:
    """Arithmetic-geometric mean, principal square roots throughout."""
    a, b = complex(a), complex(b)
    for _ in range(64):
        if abs(a - b) <= tol * abs(a):
            break
        a, b = 0.5 * (a + b), cmath.sqrt(a * b)
    return 0.5 * (a + b)


def carlson_rf(x: complex, y: complex, z: complex, rtol: float = 1e-16) -> complex:
    """Carlson's symmetric integral R_F by the duplication theorem."""
    x, y, z = complex(x), complex(y), complex(z)
    a0 = (x + y + z) / 3.0
    a = a0
    big_q = (3.0 * rtol) ** (-1.0 / 6.0) * max(abs(a0 - x), abs(a0 - y), abs(a0 - z))
    scale = 1.0  # 4^-n
    for _ in range(100):
        if big_q * scale < abs(a):
            break
        sx, sy, sz = cmath.sqrt(x), cmath.sqrt(y), cmath.sqrt(z)
        lam = sx * sy + sy * sz + sz * sx
        x, y, z = 0.25 * (x + lam), 0.25 * (y + lam), 0.25 * (z + lam)
        a = 0.25 * (a + lam)
        scale *= 0.25
    # (a - x) equals (a0 - x0) / 4^n; using the iterates avoids tracking x0
    dx = (a - x) / a
    dy = (a - y) / a
    dz = -dx - dy
    e2 = dx * dy - dz * dz
    e3 = dx * dy * dz
    series = 1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0
    return series / cmath.sqrt(a)


def laurent_coefficients(g2: complex, g3: complex, n: int) -> list[complex]:
    """Coefficients ``c_2 .. c_n`` of wp(z) = 1/z^2 + sum c_l z^(2l-2).

    Index ``l`` of the returned list holds ``c_l``; entries 0 and 1 are zero.
    """
    c = [0j] * (max(n, 3) + 1)
    c[2] = complex(g2) / 20.0
    c[3] = complex(g3) / 28.0
    for k in range(4, n + 1):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * s / ((2 * k + 1) * (k - 3))
    return c[: n + 1]


@dataclass(frozen=True)
class Lattice:
    """Elliptic data for one lattice.

    ``omega``/``omega_p`` are the half periods (``omega`` is ``None`` when that
    period is infinite, both are ``None`` in the rational case). ``e1, e2, e3``
    are ``wp(omega), wp(omega + omega'), wp(omega')`` for generic lattices and
    ordered decreasingly for real invariants with positive discriminant.
    """

    g2: complex
    g3: complex
    e1: complex
    e2: complex
    e3: complex
    degeneracy: str
    omega: Optional[complex] = None
    omega_p: Optional[complex] = None
    eta: Optional[complex] = None
    eta_p: Optional[complex] = None
    q: Optional[complex] = None
    kappa: Optional[complex] = None

    @property
    def c2(self) -> complex:
        return self.g2 / 20.0

    @property
    def c3(self) -> complex:
        return self.g3 / 28.0

    @property
    def discriminant(self) -> complex:
        return self.g2 ** 3 - 27.0 * self.g3 ** 2

    @property
    def tau(self) -> Optional[complex]:
        if self.degeneracy != GENERIC:
            return None
        return self.omega_p / self.omega

    @property
    def roots(self) -> tuple[complex, complex, complex]:
        return (self.e1, self.e2, self.e3)

    @property
    def half_periods(self) -> tuple:
        if self.degeneracy != GENERIC:
            return (self.omega_p,) if self.omega_p is not None else ()
        return (self.omega, self.omega + self.omega_p, self.omega_p)

    def scaled(self, t: complex) -> "Lattice":
        """Lattice with periods multiplied by ``t``: ``g2 -> t^-4 g2``, ``g3 -> t^-6 g3``."""
        if self.degeneracy == GENERIC:
            return lattice_from_periods(t * self.omega, t * self.omega_p)
        if self.degeneracy == ONE_PERIOD:
            return degenerate_lattice(self.kappa / t)
        return degenerate_lattice(0.0)

    # Laurent data is cheap but used on hot paths; cache on first use.
    @property
    def laurent(self) -> list[complex]:
        cached = self.__dict__.get("_laurent")
        if cached is None:
            cached = laurent_coefficients(self.g2, self.g3, _LAURENT_TERMS)
            object.__setattr__(self, "_laurent", cached)
        return cached

    @property
    def shortest_period(self) -> float:
        cached = self.__dict__.get("_shortest")
        if cached is None:
            if self.degeneracy == GENERIC:
                cand = [abs(2 * m * self.omega + 2 * n * self.omega_p)
                        for m in range(-2, 3) for n in range(-2, 3) if (m, n) != (0, 0)]
                cached = min(cand)
            elif self.degeneracy == ONE_PERIOD:
                cached = abs(2 * self.omega_p)
            else:
                cached = math.inf
            object.__setattr__(self, "_shortest", cached)
        return cached


# ---------------------------------------------------------------------------
# theta series


def _theta_terms(tau: complex, tol: float = 1e-24) -> int:
    im = tau.imag
    n = 1
    while True:
        h = n + 0.5
        if math.exp(-math.pi * im * (h * h - h)) * (2 * n + 1) ** 3 < tol or n > 200:
            return n + 1
        n += 1


def _theta_constants(tau: complex):
    n_terms = _theta_terms(tau)
    n = np.arange(n_terms)
    h = n + 0.5
    qh = np.exp(1j * math.pi * tau * h * h)
    qn = np.exp(1j * math.pi * tau * (n[1:] ** 2))
    sign = (-1.0) ** n
    th2 = 2.0 * qh.sum()
    th3 = 1.0 + 2.0 * qn.sum()
    th4 = 1.0 + 2.0 * (sign[1:] * qn).sum()
    odd = 2 * n + 1
    d1 = 2.0 * (sign * odd * qh).sum()
    d3 = -2.0 * (sign * odd ** 3 * qh).sum()
    return complex(th2), complex(th3), complex(th4), complex(d1), complex(d3)


def _theta1_with_derivatives(v: complex, tau: complex):
    n_terms = _theta_terms(tau)
    n = np.arange(n_terms)
    h = n + 0.5
    w = ((-1.0) ** n) * np.exp(1j * math.pi * tau * h * h)
    odd = 2 * n + 1
    s = np.sin(odd * v)
    c = np.cos(odd * v)
    t0 = 2.0 * (w * s).sum()
    t1 = 2.0 * (w * odd * c).sum()
    t2 = -2.0 * (w * odd ** 2 * s).sum()
    t3 = -2.0 * (w * odd ** 3 * c).sum()
    return complex(t0), complex(t1), complex(t2), complex(t3)


# ---------------------------------------------------------------------------
# constructors


def _real_cubic_roots(g2: float, g3: float) -> tuple[float, float, float]:
    # 4x^3 - g2 x - g3 = 0 with three real roots
    r = math.sqrt(g2 / 12.0)
    arg = (g3 / 4.0) / (2.0 * r ** 3) if r > 0 else 0.0
    arg = max(-1.0, min(1.0, arg))
    theta = math.acos(arg)
    roots = [2.0 * r * math.cos((theta - 2.0 * math.pi * k) / 3.0) for k in range(3)]

    def polish(x):
        for _ in range(3):
            f = 4 * x ** 3 - g2 * x - g3
            d = 12 * x ** 2 - g2
            if d == 0:
                break
            step = f / d
            if abs(step) > 1e-6 * (1 + abs(x)):
                break
            x -= step
        return x

    e = sorted((polish(x) for x in roots), reverse=True)
    shift = sum(e) / 3.0
    return tuple(x - shift for x in e)


def _eta_from_theta(omega: complex, tau: complex) -> complex:
    _, _, _, d1, d3 = _theta_constants(tau)
    return -(math.pi ** 2) / (12.0 * omega) * d3 / d1


def _generic_lattice(g2, g3, e1, e2, e3, omega, omega_p) -> Lattice:
    tau = omega_p / omega
    if tau.imag <= 1e-12:
        raise UnsupportedLatticeError("degenerate period ratio: Im(omega'/omega) must be > 0")
    eta = _eta_from_theta(omega, tau)
    # Legendre relation: eta omega' - eta' omega = i pi / 2
    eta_p = (eta * omega_p - 0.5j * math.pi) / omega
    q = cmath.exp(1j * math.pi * tau)
    return Lattice(complex(g2), complex(g3), complex(e1), complex(e2), complex(e3), GENERIC,
                   complex(omega), complex(omega_p), complex(eta), complex(eta_p), q, None)


def degenerate_lattice(kappa: complex) -> Lattice:
    """One-period lattice with ``wp = kappa^2/3 + kappa^2/sinh^2(kappa z)``.

    ``kappa = 0`` gives the rational lattice ``g2 = g3 = 0``. Imaginary
    ``kappa`` gives the trigonometric degeneration.
    """
    kappa = complex(kappa)
    if kappa == 0:
        return Lattice(0j, 0j, 0j, 0j, 0j, RATIONAL)
    c = kappa * kappa / 3.0
    g2, g3 = 12.0 * c * c, -8.0 * c ** 3
    if c.imag == 0 and c.real < 0:
        e1, e2, e3 = -2.0 * c, c, c
    else:
        e1, e2, e3 = c, c, -2.0 * c
    omega_p = 0.5j * math.pi / kappa
    return Lattice(g2, g3, e1, e2, e3, ONE_PERIOD, None, omega_p, None, None, None, kappa)


def lattice_from_invariants(g2: complex, g3: complex, degeneracy_tol: float = 1e-10,
                            force_generic: bool = False) -> Lattice:
    """Build a lattice from real invariants.

    Positive discriminant gives a rectangular lattice (real ``omega``,
    imaginary ``omega'``), negative discriminant a rhombic one.
    ``force_generic`` keeps the theta path even when the discriminant is below
    the degeneracy threshold (only meaningful while it stays positive).
    """
    g2c, g3c = complex(g2), complex(g3)
    if abs(g2c.imag) > 0 or abs(g3c.imag) > 0:
        raise UnsupportedLatticeError("unsupported lattice class: complex invariants")
    g2r, g3r = g2c.real, g3c.real
    delta = g2r ** 3 - 27.0 * g3r ** 2
    scale = max(abs(g2r) ** 3, g3r ** 2)
    if g2r == 0 and g3r == 0:
        return degenerate_lattice(0.0)
    if abs(delta) <= degeneracy_tol * scale and not force_generic:
        c = -1.5 * g3r / g2r
        lat = degenerate_lattice(cmath.sqrt(3.0 * c))
        # keep the caller's invariants; the closed forms only depend on kappa
        return replace(lat, g2=complex(g2r), g3=complex(g3r))
    if delta < 0:
        return _rhombic_lattice(g2r, g3r)
    e1, e2, e3 = _real_cubic_roots(g2r, g3r)
    a = math.sqrt(e1 - e3)
    omega = math.pi / (2.0 * agm(a, math.sqrt(max(e1 - e2, 0.0))).real)
    omega_p = 1j * math.pi / (2.0 * agm(a, math.sqrt(max(e2 - e3, 0.0))).real)
    return _generic_lattice(g2r, g3r, e1, e2, e3, omega, omega_p)


def _reduce_period_pair(omega: complex, omega_p: complex) -> tuple[complex, complex]:
    """Move ``omega'/omega`` into the standard fundamental domain."""
    if (omega_p / omega).imag < 0:
        omega_p = -omega_p
    for _ in range(100):
        tau = omega_p / omega
        n = round(tau.real)
        if n:
            omega_p = omega_p - n * omega
            continue
        if abs(tau) < 1.0 - 1e-14:
            omega, omega_p = omega_p, -omega
            continue
        break
    return omega, omega_p


def _rhombic_lattice(g2: float, g3: float) -> Lattice:
    # one real root and a conjugate pair; half periods come from
    # R_F(e_i - e_1, e_i - e_2, e_i - e_3) = wp^{-1}(e_i)
    roots = np.roots([4.0, 0.0, -g2, -g3])
    halves = [carlson_rf(*(r - roots)) for r in roots]
    scale = max(abs(g2), abs(g3) ** (2.0 / 3.0))
    for i in range(3):
        for j in range(3):
            if i == j or abs((halves[j] / halves[i]).imag) < 1e-9:
                continue
            om, om_p = _reduce_period_pair(halves[i], halves[j])
            lat = lattice_from_periods(om, om_p)
            if abs(lat.g2 - g2) + abs(lat.g3 - g3) <= 1e-9 * scale:
                return replace(lat, g2=complex(g2), g3=complex(g3))
    raise UnsupportedLatticeError("could not determine periods for negative discriminant")


def lattice_from_periods(omega: complex, omega_p: complex) -> Lattice:
    omega, omega_p = complex(omega), complex(omega_p)
    if omega == 0:
        raise UnsupportedLatticeError("zero half period")
    tau = omega_p / omega
    if tau.imag <= 1e-12:
        raise UnsupportedLatticeError("degenerate period ratio: Im(omega'/omega) must be > 0")
    th2, th3, th4, _, _ = _theta_constants(tau)
    k = (math.pi / (2.0 * omega)) ** 2
    e1 = k * (th3 ** 4 + th4 ** 4) / 3.0
    e2 = k * (th2 ** 4 - th4 ** 4) / 3.0
    e3 = -k * (th2 ** 4 + th3 ** 4) / 3.0
    g2 = 2.0 * (e1 * e1 + e2 * e2 + e3 * e3)
    g3 = 4.0 * e1 * e2 * e3
    return _generic_lattice(g2, g3, e1, e2, e3, omega, omega_p)


# ---------------------------------------------------------------------------
# argument reduction


def _coordinates(z: complex, lat: Lattice) -> tuple[float, float]:
    """Real coordinates ``(s, t)`` with ``z = 2 s omega + 2 t omega'``."""
    a, b = 2 * lat.omega, 2 * lat.omega_p
    det = a.real * b.imag - a.imag * b.real
    s = (z.real * b.imag - z.imag * b.real) / det
    t = (a.real * z.imag - a.imag * z.real) / det
    return s, t


def reduce(z: complex, lat: Lattice) -> tuple[complex, int, int]:
    """Reduce ``z`` to ``z_r = z - 2 m omega - 2 n omega'`` near the origin."""
    z = complex(z)
    if lat.degeneracy == GENERIC:
        s, t = _coordinates(z, lat)
        m, n = round(s), round(t)
        return z - 2 * m * lat.omega - 2 * n * lat.omega_p, m, n
    if lat.degeneracy == ONE_PERIOD:
        p = 2 * lat.omega_p
        n = round((z / p).real)
        return z - n * p, 0, n
    return z, 0, 0


def lattice_distance(z: complex, lat: Lattice) -> float:
    """Distance from ``z`` to the nearest lattice point."""
    zr, _, _ = reduce(z, lat)
    if lat.degeneracy == GENERIC:
        best = abs(zr)
        for m in (-1, 0, 1):
            for n in (-1, 0, 1):
                best = min(best, abs(zr - 2 * m * lat.omega - 2 * n * lat.omega_p))
        return best
    if lat.degeneracy == ONE_PERIOD:
        p = 2 * lat.omega_p
        return min(abs(zr), abs(zr - p), abs(zr + p))
    return abs(zr)


def _check_pole(zr: complex, what: str):
    if abs(zr) < POLE_RADIUS:
        raise PoleError(f"{what} has a pole at a lattice point")


# ---------------------------------------------------------------------------
# evaluation


def _use_laurent(zr: complex, lat: Lattice) -> bool:
    return abs(zr) < 0.1 * lat.shortest_period


def _laurent_wp(z: complex, lat: Lattice):
    c = lat.laurent
    p = 1.0 / z ** 2
    dp = -2.0 / z ** 3
    for l in range(2, len(c)):
        p += c[l] * z ** (2 * l - 2)
        dp += c[l] * (2 * l - 2) * z ** (2 * l - 3)
    return p, dp


def _laurent_zeta(z: complex, lat: Lattice) -> complex:
    c = lat.laurent
    out = 1.0 / z
    for l in range(2, len(c)):
        out -= c[l] * z ** (2 * l - 1) / (2 * l - 1)
    return out


def _laurent_log_sigma_over_z(z: complex, lat: Lattice) -> complex:
    c = lat.laurent
    out = 0j
    for l in range(2, len(c)):
        out -= c[l] * z ** (2 * l) / ((2 * l - 1) * (2 * l))
    return out


def _theta_parts(zr: complex, lat: Lattice):
    q2 = math.pi / (2.0 * lat.omega)
    v = q2 * zr
    t0, t1, t2, t3 = _theta1_with_derivatives(v, lat.tau)
    return q2, t0, t1, t2, t3


def wp(z: complex, lat: Lattice) -> tuple[complex, complex]:
    """Return ``(wp(z), wp'(z))``."""
    zr, _, _ = reduce(z, lat)
    _check_pole(zr, "wp")
    if lat.degeneracy == RATIONAL:
        return 1.0 / zr ** 2, -2.0 / zr ** 3
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        s, c = cmath.sinh(k * zr), cmath.cosh(k * zr)
        return k * k / 3.0 + k * k / (s * s), -2.0 * k ** 3 * c / s ** 3
    if _use_laurent(zr, lat):
        return _laurent_wp(zr, lat)
    q2, t0, t1, t2, t3 = _theta_parts(zr, lat)
    r1, r2, r3 = t1 / t0, t2 / t0, t3 / t0
    p = -lat.eta / lat.omega + q2 * q2 * (r1 * r1 - r2)
    dp = q2 ** 3 * (3.0 * r1 * r2 - 2.0 * r1 ** 3 - r3)
    return complex(p), complex(dp)


def wp_value(z: complex, lat: Lattice) -> complex:
    return wp(z, lat)[0]


def wp_prime(z: complex, lat: Lattice) -> complex:
    return wp(z, lat)[1]


def zeta_fn(z: complex, lat: Lattice) -> complex:
    zr, m, n = reduce(z, lat)
    _check_pole(zr, "zeta")
    if lat.degeneracy == RATIONAL:
        return 1.0 / zr
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        # zeta = kappa coth(kappa z) - kappa^2 z / 3 is not periodic in z: undo reduction
        return k / cmath.tanh(k * zr) - k * k * complex(z) / 3.0
    shift = 2 * m * lat.eta + 2 * n * lat.eta_p
    if _use_laurent(zr, lat):
        return _laurent_zeta(zr, lat) + shift
    q2, t0, t1, _, _ = _theta_parts(zr, lat)
    return complex(lat.eta * zr / lat.omega + q2 * t1 / t0 + shift)


def sigma(z: complex, lat: Lattice) -> complex:
    z = complex(z)
    if lat.degeneracy == RATIONAL:
        return z
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        return cmath.sinh(k * z) / k * cmath.exp(-k * k * z * z / 6.0)
    zr, m, n = reduce(z, lat)
    if _use_laurent(zr, lat):
        base = zr * cmath.exp(_laurent_log_sigma_over_z(zr, lat))
    else:
        q2, t0, _, _, _ = _theta_parts(zr, lat)
        _, _, _, d1, _ = _theta_constants(lat.tau)
        base = cmath.exp(lat.eta * zr * zr / (2.0 * lat.omega)) * t0 / (q2 * d1)
    if m == 0 and n == 0:
        return complex(base)
    w = m * lat.omega + n * lat.omega_p
    ew = m * lat.eta + n * lat.eta_p
    sign = -1.0 if (m + n + m * n) % 2 else 1.0
    return complex(sign * cmath.exp(2.0 * ew * (zr + w)) * base)


# ---------------------------------------------------------------------------
# jets


def _wp_jet_from_values(z0: complex, p0: complex, p1: complex, g2: complex, order: int) -> Jet:
    # wp'' = 6 wp^2 - g2/2, so (j+2)(j+1) a_{j+2} = 6 sum a_i a_{j-i} - (g2/2) [j == 0]
    a = np.zeros(order + 1, dtype=complex)
    a[0] = p0
    if order >= 1:
        a[1] = p1
    for j in range(0, order - 1):
        s = 6.0 * np.dot(a[: j + 1], a[j::-1])
        if j == 0:
            s -= 0.5 * g2
        a[j + 2] = s / ((j + 2) * (j + 1))
    return Jet(z0, a)


def wp_jet(z0: complex, lat: Lattice, order: int) -> Jet:
    p0, p1 = wp(z0, lat)
    return _wp_jet_from_values(z0, p0, p1, lat.g2, order)


def zeta_jet(z0: complex, lat: Lattice, order: int) -> Jet:
    """Jet of zeta at ``z0``: its value plus the antiderivative of ``-wp``."""
    if order == 0:
        return Jet(z0, [zeta_fn(z0, lat)])
    return (-wp_jet(z0, lat, order - 1)).integrate(zeta_fn(z0, lat))


def _sigma_jet_at_zero(lat: Lattice, order: int) -> Jet:
    # sigma(z) = z exp(-sum c_l z^(2l) / ((2l-1) 2l))
    c = laurent_coefficients(lat.g2, lat.g3, max(order // 2 + 1, 3))
    e = np.zeros(order + 1, dtype=complex)
    for l in range(2, len(c)):
        if 2 * l <= order:
            e[2 * l] = -c[l] / ((2 * l - 1) * (2 * l))
    ex = Jet(0.0, e).exp()
    out = np.zeros(order + 1, dtype=complex)
    out[1:] = ex.coefficients[:order]
    return Jet(0.0, out)


def sigma_jet(z0: complex, lat: Lattice, order: int) -> Jet:
    """Jet of sigma at ``z0``, valid everywhere including at lattice points."""
    z0 = complex(z0)
    X = Jet.variable(z0, order)
    if lat.degeneracy == RATIONAL:
        return X
    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        return (X * k).sinh() / k * (X * X * (-k * k / 6.0)).exp()
    zr, m, n = reduce(z0, lat)
    if abs(zr) < POLE_RADIUS:
        base = _sigma_jet_at_zero(lat, order).rebase(z0)
    elif order == 0:
        base = Jet(z0, [sigma(zr, lat)])
    else:
        log_part = zeta_jet(zr, lat, order - 1).integrate(0.0).rebase(z0)
        base = log_part.exp() * sigma(zr, lat)
    if m == 0 and n == 0:
        return base
    # sigma(zr + 2w) = (-1)^{m+n+mn} exp(2 eta_w (zr + w)) sigma(zr)
    w = m * lat.omega + n * lat.omega_p
    ew = m * lat.eta + n * lat.eta_p
    sign = -1.0 if (m + n + m * n) % 2 else 1.0
    shift = ((X - z0 + zr + w) * (2.0 * ew)).exp()
    return base * shift * sign


# ---------------------------------------------------------------------------
# inversion


def _canonical_half_cell(z: complex, lat: Lattice) -> complex:
    """Representative of ``{z, -z}`` (mod lattice) with ``t <= 1/2``, coordinates in ``[0, 1)``."""
    if lat.degeneracy == ONE_PERIOD:
        # only one real coordinate along the finite period
        p = 2 * lat.omega_p
        cands = []
        for w in (z, -z):
            t = (w / p).real
            frac = t - math.floor(t + 1e-9)
            cands.append((frac > 0.5 + 1e-9, w + (frac - t) * p))
        cands.sort(key=lambda c: c[0])
        return cands[0][1]
    cands = []
    for w in (z, -z):
        s, t = _coordinates(w, lat)
        s -= math.floor(s + 1e-9)
        t -= math.floor(t + 1e-9)
        s = 0.0 if abs(s) < 1e-9 else s
        t = 0.0 if abs(t) < 1e-9 else t
        cands.append(((t > 0.5 + 1e-9, t, s > 0.5 + 1e-9), 2 * s * lat.omega + 2 * t * lat.omega_p))
    cands.sort(key=lambda c: c[0])
    return cands[0][1]


def _centred(z: complex, lat: Lattice) -> complex:
    zr, _, _ = reduce(z, lat)
    return zr


def wp_inverse(p: complex, lat: Lattice, wp_prime_target: complex, *,
               zero_tol: float = 1e-8) -> complex:
    """Solve ``wp(nu) = p`` with the branch fixed by ``wp'(nu) ~ wp_prime_target``.

    Generic and one-period lattices only (rational inversion is trivial and
    handled here too). When the target derivative is numerically zero the
    half-period representative with ``Im(nu) >= 0`` is returned.
    """
    p = complex(p)
    target = complex(wp_prime_target)
    scale = 1.0 + abs(p) ** 1.5
    half_case = abs(target) <= zero_tol * scale

    if lat.degeneracy == RATIONAL:
        if p == 0:
            raise InversionError("wp(nu) = 0 has no finite solution on the rational lattice")
        nu = 1.0 / cmath.sqrt(p)
        if abs(-2.0 / nu ** 3 + target) < abs(-2.0 / nu ** 3 - target):
            nu = -nu
        return nu

    if lat.degeneracy == ONE_PERIOD:
        k = lat.kappa
        d = p - k * k / 3.0
        if d == 0:
            raise InversionError("wp(nu) = kappa^2/3 is attained only at infinity")
        nu = cmath.asinh(k / cmath.sqrt(d)) / k
        if not half_case:
            dp = wp_prime(nu, lat)
            if abs(dp + target) < abs(dp - target):
                nu = -nu
            return _centred(nu, lat)
        return _canonical_half_cell(nu, lat)

    seed = carlson_rf(p - lat.e1, p - lat.e2, p - lat.e3)
    starts = [seed, -seed, seed + lat.omega, seed + lat.omega_p]
    for s in (0.25, 0.5, 0.75):
        for t in (0.25, 0.5, 0.75):
            starts.append(2 * s * lat.omega + 2 * t * lat.omega_p)

    nu = None
    for z in starts:
        z = _centred(z, lat) if lattice_distance(z, lat) > 1e-8 else z + 0.1 * lat.omega
        converged = False
        for _ in range(64):
            try:
                val, der = wp(z, lat)
            except PoleError:
                break
            res = val - p
            if abs(res) <= 1e-15 * scale:
                converged = True
                break
            if der == 0:
                break
            step = res / der
            z = z - step
            if abs(step) <= 1e-16 * (1.0 + abs(z)):
                converged = abs(wp_value(z, lat) - p) <= 1e-10 * scale
                break
        else:
            converged = abs(wp_value(z, lat) - p) <= 1e-10 * scale
        if converged:
            nu = z
            break
    if nu is None:
        raise InversionError(f"no convergence solving wp(nu) = {p}")

    if half_case:
        # snap to the nearest true half period when one matches
        best = None
        for w in lat.half_periods:
            dist = abs(wp_value(w, lat) - p)
            if best is None or dist < best[0]:
                best = (dist, w)
        if best is not None and best[0] <= 1e-7 * scale:
            return complex(best[1])
        return _canonical_half_cell(nu, lat)
    dp = wp_prime(nu, lat)
    if abs(dp + target) < abs(dp - target):
        nu = -nu
    return _centred(nu, lat)
