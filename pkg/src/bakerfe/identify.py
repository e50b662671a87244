"""Recover elliptic parameters from the local jets of a solution tuple.

Given a tuple satisfying the determinant-ratio equation and a generic point
``x0``, each pair ``(phi_{2k}, phi_{2k+1})`` yields a twist ``lambda_k`` and the
low Laurent data ``F_0, F_1, F_2`` of

    h'(0) h'(x) / (h(x) - h(0))^2 - 1/x^2,   h = phi_{2k}(x + x0) / phi_{2k+1}(x + x0).

From these come ``g2, g3`` (identical for both pairs), ``wp(nu_k) = -F_0`` and
``wp'(nu_k) = F_1``. The remaining freedom is a gauge ``f(x)`` shared by both
pairs; everything is checked by reconstructing the tuple from the canonical
functions.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .elliptic import (
    GENERIC,
    ONE_PERIOD,
    RATIONAL,
    InversionError,
    Lattice,
    PoleError,
    UnsupportedLatticeError,
    lattice_distance,
    lattice_from_invariants,
    wp,
    wp_inverse,
    wp_value,
)
from .jets import Jet
from .phi import INFINITY, PhiParams, phi, phi_log_derivative
from .symmetry import SolutionTuple

__all__ = [
    "CANDIDATE_POINTS",
    "IdentificationError",
    "IdentificationResult",
    "check_generic",
    "lambda_at",
    "normalized_ratio",
    "f_coefficients",
    "f_coefficients_direct",
    "invariants_from_F",
    "nu_from_F",
    "gauge_f",
    "identify",
]

# off-axis points first after the origin: real-axis shifts tend to sit near poles and zeros
CANDIDATE_POINTS = (0.0, 0.3 + 0.2j, 0.5 - 0.3j, -0.35 + 0.25j, 0.1, 0.23, 0.37)
PAIRS = {1: (2, 3), 2: (4, 5)}


class IdentificationError(ValueError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


def _pair_jets(s: SolutionTuple, k: int, x0: complex, order: int) -> tuple[Jet, Jet]:
    a, b = PAIRS[k]
    return s.jet(a, x0, order), s.jet(b, x0, order)


def check_generic(s: SolutionTuple, x0: complex, order: int = 2) -> Optional[str]:
    """Return ``None`` when ``x0`` is generic, else a short reason."""
    x0 = complex(x0)
    try:
        for i in (2, 3, 4, 5):
            j = s.jet(i, x0, order)
            if not np.all(np.isfinite(j.coefficients)):
                return "regularity"
        v1 = s.jet(1, 2 * x0, 0).value
        if not np.isfinite(v1):
            return "regularity"
    except (PoleError, ZeroDivisionError, ValueError, OverflowError):
        return "regularity"
    for k in (1, 2):
        A, B = _pair_jets(s, k, x0, 1)
        w = A[0] * B[1] - A[1] * B[0]
        norm = math.hypot(abs(A[0]), abs(A[1])) * math.hypot(abs(B[0]), abs(B[1]))
        if abs(w) <= 1e-10 * norm or norm == 0:
            return f"Wronskian k={k} zero"
    return None


def lambda_at(s: SolutionTuple, k: int, x0: complex) -> complex:
    A, B = _pair_jets(s, k, x0, 2)
    a0, a1, a2 = A[0], A[1], 2 * A[2]
    b0, b1, b2 = B[0], B[1], 2 * B[2]
    den = b0 * a1 - a0 * b1
    if abs(den) <= 1e-14 * (1 + abs(b0 * a1) + abs(a0 * b1)):
        raise IdentificationError("generic", f"Wronskian k={k} zero")
    return -0.5 * (b0 * a2 - a0 * b2) / den


def normalized_ratio(A: Jet, B: Jet) -> Jet:
    """Jet of h for the pair normalised to ``(x + ..., 1 + ...)`` at its base point.

    The cross-ratio-type quantity built from ``h`` is unchanged by Moebius maps,
    and this normalisation keeps ``h`` regular even when ``B`` vanishes there.
    """
    a0, a1, b0, b1 = A[0], A[1], B[0], B[1]
    det = a1 * b0 - a0 * b1
    top = (A * b0 - B * a0) / det
    bottom = (B * a1 - A * b1) / det
    return top / bottom


def _h_coefficients(h: Jet) -> list[complex]:
    if h.order < 5:
        raise ValueError("need a jet of order >= 5")
    c = h.coefficients
    if abs(c[1]) == 0:
        raise IdentificationError("generic", "h'(x0) vanishes")
    return [complex(c[j + 1] / c[1]) for j in range(0, 5)]


def f_coefficients(h: Jet) -> tuple[complex, complex, complex]:
    """``(F0, F1, F2)`` from the Toeplitz determinants of the scaled jet of ``h``."""
    hh = _h_coefficients(h)
    h1, h2, h3, h4 = hh[1], hh[2], hh[3], hh[4]
    m2 = np.array([[h1, 1], [h2, h1]])
    m3 = np.array([[h1, 1, 0], [h2, h1, 1], [h3, h2, h1]])
    m4 = np.array([[h1, 1, 0, 0], [h2, h1, 1, 0], [h3, h2, h1, 1], [h4, h3, h2, h1]])
    return (complex(-np.linalg.det(m2)), complex(2 * np.linalg.det(m3)),
            complex(-6 * np.linalg.det(m4)))


def f_coefficients_direct(h: Jet) -> tuple[complex, complex, complex]:
    """Same data read off h'(0) h'(x) / (h(x) - h(0))^2 - 1/x^2 by jet division."""
    if h.order < 5:
        raise ValueError("need a jet of order >= 5")
    g = (h - h.value).divide_by_offset(1)  # (h - h0)/x
    q = h.derivative().truncate(g.order) * h[1] / (g * g)
    # q = 1 + 0 x + x^2 (F(x) - 1/x^2); F_l = l! q_{l+2}
    return tuple(complex(math.factorial(l) * q[l + 2]) for l in range(3))


def invariants_from_F(F0: complex, F1: complex, F2: complex) -> tuple[complex, complex]:
    g2 = 5.0 / 3.0 * (F2 + 6.0 * F0 * F0)
    g3 = 6.0 * F0 ** 3 - F1 * F1 + 5.0 / 3.0 * F0 * F2
    return g2, g3


def nu_from_F(F0: complex, F1: complex, L: Lattice, infinity_tol: float = 1e-7):
    """Shift with wp(nu) = -F0 and wp'(nu) = F1, or INFINITY at the one-period limit value."""
    p = -complex(F0)
    if L.degeneracy == ONE_PERIOD:
        limit = L.kappa ** 2 / 3.0
        if abs(p - limit) <= infinity_tol * (1.0 + abs(limit)):
            return INFINITY
    try:
        return wp_inverse(p, L, F1)
    except InversionError as exc:
        raise IdentificationError("inversion", str(exc)) from exc


def _wp_at(nu, L: Lattice) -> complex:
    if nu is INFINITY:
        return L.kappa ** 2 / 3.0
    return wp_value(nu, L)


def _first_pair_dets(A_x: Jet, B_x: Jet, A0: Jet, B0: Jet):
    """``det[phi(x+x0), phi'(x0)]`` and ``det[phi(x+x0), phi(x0)]`` (pair as rows)."""
    d_prime = A_x.value * B0[1] - A0[1] * B_x.value
    d_plain = A_x.value * B0.value - A0.value * B_x.value
    return d_prime, d_plain


def gauge_f(s: SolutionTuple, k: int, x0: complex, x: complex, R: "IdentificationResult") -> complex:
    """Gauge ``f(x) = e^{-lambda_k x} Phi(x; nu_k) W0 / det[phi(x+x0), phi(x0)]``.

    ``W0 = det[[phi_a'(x0), phi_a(x0)], [phi_b'(x0), phi_b(x0)]]``; with the
    tuple in canonical form the pairs are ``(Phi, Phi')`` times ``1/f``, so that
    ``x^2 f(x) -> 1`` at the origin.
    """
    x0, x = complex(x0), complex(x)
    lam = R.lambdas[k - 1]
    P = PhiParams(R.nu[k - 1], R.lattice)
    A0, B0 = _pair_jets(s, k, x0, 1)
    Ax, Bx = _pair_jets(s, k, x + x0, 0)
    w0 = A0[1] * B0[0] - A0[0] * B0[1]
    den = Ax.value * B0[0] - A0[0] * Bx.value
    if abs(den) <= 1e-300:
        raise ZeroDivisionError("vanishing denominator determinant")
    return cmath.exp(-lam * x) * phi(x, P) * w0 / den


@dataclass
class IdentificationResult:
    x0: complex
    lambdas: tuple
    F: tuple
    invariants_k: tuple
    g2: complex
    g3: complex
    lattice: Lattice
    nu: tuple
    wp_nu: tuple
    degeneracy: str
    gauge_samples: list = field(default_factory=list)
    residuals: dict = field(default_factory=dict)
    k_consistency: dict = field(default_factory=dict)
    accepted: bool = True
    notes: list = field(default_factory=list)

    @property
    def kappa(self):
        return self.lattice.kappa

    def to_dict(self) -> dict:
        """Plain-python structure; complex numbers become ``[re, im]``."""
        def cj(z):
            if z is INFINITY:
                return "infinity"
            if z is None:
                return None
            z = complex(z)
            return [z.real, z.imag]

        out = {
            "x0": cj(self.x0),
            "lambda1": cj(self.lambdas[0]),
            "lambda2": cj(self.lambdas[1]),
            "F": [[cj(v) for v in triple] for triple in self.F],
            "invariants_k": [[cj(v) for v in pair] for pair in self.invariants_k],
            "g2": cj(self.g2),
            "g3": cj(self.g3),
            "degeneracy": self.degeneracy,
            "nu1": cj(self.nu[0]),
            "nu2": cj(self.nu[1]),
            "wp_nu1": cj(self.wp_nu[0]),
            "wp_nu2": cj(self.wp_nu[1]),
            "gauge_samples": [[cj(x), cj(f1), cj(f2)] for x, f1, f2 in self.gauge_samples],
            "k_consistency": {k: float(v) for k, v in self.k_consistency.items()},
            "accepted": self.accepted,
        }
        if self.lattice.degeneracy == ONE_PERIOD:
            out["kappa"] = cj(self.lattice.kappa)
        return out


def _realify(z: complex, rel: float = 1e-9) -> complex:
    z = complex(z)
    if abs(z.imag) <= rel * (1.0 + abs(z)):
        return complex(z.real, 0.0)
    return z


_SAMPLE_DIRECTIONS = (0.31 + 0.17j, -0.27 + 0.22j, 0.45 - 0.12j, -0.38 - 0.29j, 0.18 + 0.41j,
                      0.52 + 0.05j, -0.11 - 0.47j, 0.36 + 0.36j, -0.49 + 0.08j, 0.07 - 0.33j,
                      0.24 - 0.44j, -0.2 + 0.5j)


def _sample_points(L: Lattice, nus: Sequence, count: int, x0: complex) -> list[complex]:
    """Deterministic points away from lattice points and from the shifts."""
    scale = min(1.0, 0.5 * L.shortest_period) if math.isfinite(L.shortest_period) else 1.0
    out = []
    for d in _SAMPLE_DIRECTIONS:
        x = d * scale
        if lattice_distance(x, L) < 0.1 * scale:
            continue
        if any(nu is not INFINITY and lattice_distance(x - nu, L) < 0.1 * scale for nu in nus):
            continue
        out.append(x)
        if len(out) == count:
            break
    return out


def identify(s: SolutionTuple, x0: Optional[complex] = None, tol: float = 1e-8, order: int = 8,
             consistency_tol: float = 1e-6, degeneracy_tol: float = 1e-9,
             gauge_points: int = 5, reconstruction_points: int = 7) -> IdentificationResult:
    """Run the full identification, raising :class:`IdentificationError` on failure."""
    if order < 6:
        raise ValueError("jet order must be at least 6")
    if x0 is None:
        reasons = []
        for cand in CANDIDATE_POINTS:
            why = check_generic(s, cand)
            if why is None:
                x0 = cand
                break
            reasons.append(f"{cand}: {why}")
        else:
            raise IdentificationError("generic", "no generic point among candidates (" + "; ".join(reasons) + ")")
    else:
        why = check_generic(s, x0)
        if why is not None:
            raise IdentificationError("generic", f"x0={x0}: {why}")
    x0 = complex(x0)

    lambdas, Fs, invs = [], [], []
    for k in (1, 2):
        lambdas.append(lambda_at(s, k, x0))
        A, B = _pair_jets(s, k, x0, order)
        h = normalized_ratio(A, B)
        F = f_coefficients(h)
        Fs.append(F)
        invs.append(invariants_from_F(*F))

    (g2a, g3a), (g2b, g3b) = invs
    d2, d3 = abs(g2a - g2b), abs(g3a - g3b)
    g2 = 0.5 * (g2a + g2b)
    g3 = 0.5 * (g3a + g3b)
    k_cons = {"g2": d2, "g3": d3}
    if d2 > consistency_tol * (1 + abs(g2)) or d3 > consistency_tol * (1 + abs(g3)):
        raise IdentificationError("k-consistency", f"pairs disagree on invariants: |dg2|={d2:.3g}, |dg3|={d3:.3g}")

    # imaginary parts below the identification accuracy are noise
    g2r, g3r = _realify(g2, consistency_tol), _realify(g3, consistency_tol)
    scale = max(abs(g2r), abs(g3r) ** (2.0 / 3.0), 1e-300)
    if abs(g2r) <= 1e-9 and abs(g3r) <= 1e-9:
        g2r, g3r = 0j, 0j
    try:
        L = lattice_from_invariants(g2r, g3r, degeneracy_tol=degeneracy_tol)
    except UnsupportedLatticeError as exc:
        raise IdentificationError("lattice", str(exc)) from exc

    nus = tuple(nu_from_F(F[0], F[1], L) for F in Fs)
    wp_nu = tuple(_wp_at(nu, L) for nu in nus)

    result = IdentificationResult(x0=x0, lambdas=tuple(lambdas), F=tuple(Fs), invariants_k=tuple(invs),
                                  g2=g2r, g3=g3r, lattice=L, nu=nus, wp_nu=wp_nu, degeneracy=L.degeneracy,
                                  k_consistency=k_cons)

    # gauge samples from both pairs
    gpts = _sample_points(L, nus, gauge_points, x0)
    worst_gauge = 0.0
    for x in gpts:
        f1 = gauge_f(s, 1, x0, x, result)
        f2 = gauge_f(s, 2, x0, x, result)
        result.gauge_samples.append((x, f1, f2))
        worst_gauge = max(worst_gauge, abs(f1 - f2) / (1 + abs(f1)))
    k_cons["gauge"] = worst_gauge

    result.residuals = _reconstruction_residuals(s, result, reconstruction_points)
    if worst_gauge > tol:
        result.accepted = False
        result.notes.append("gauge functions of the two pairs disagree")
    if max(result.residuals.values()) > tol:
        result.accepted = False
        result.notes.append("reconstruction residual above tolerance")
    return result


def _log_derivative(x: complex, nu, L: Lattice) -> complex:
    return phi_log_derivative(x, PhiParams(nu, L))


def _reconstruction_residuals(s: SolutionTuple, R: IdentificationResult, count: int) -> dict:
    L, x0 = R.lattice, R.x0
    lam1, lam2 = R.lambdas
    P1, P2 = PhiParams(R.nu[0], L), PhiParams(R.nu[1], L)
    pts = _sample_points(L, R.nu, count, x0)
    out = {}

    # phi1(x + 2 x0) = phi1(2 x0) e^{(lam2 - lam1) x} Phi(x; nu1)/Phi(x; nu2)
    base = s.value(1, 2 * x0)
    worst = 0.0
    for x in pts:
        lhs = s.value(1, x + 2 * x0)
        rhs = base * cmath.exp((lam2 - lam1) * x) * phi(x, P1) / phi(x, P2)
        worst = max(worst, abs(lhs - rhs) / (1 + abs(lhs)))
    out["phi1"] = worst

    # pairs from the canonical functions with the gauge taken from the other pair
    for k in (1, 2):
        lam = R.lambdas[k - 1]
        P = (P1, P2)[k - 1]
        A0, B0 = _pair_jets(s, k, x0, 1)
        M = np.array([[A0[1], A0[0]], [B0[1], B0[0]]])
        T = np.array([[1.0, 0.0], [lam, -1.0]])
        other = 3 - k
        worst = 0.0
        for x in pts:
            f = gauge_f(s, other, x0, x, R)
            v = np.array([phi(x, P), phi(x, P) * _log_derivative(x, P.nu, L)])
            recon = cmath.exp(-lam * x) / f * (M @ T @ v)
            Ax, Bx = _pair_jets(s, k, x + x0, 0)
            actual = np.array([Ax.value, Bx.value])
            worst = max(worst, float(np.max(np.abs(recon - actual)) / (1 + np.max(np.abs(actual)))))
        out[f"pair{k}"] = worst

    # first equality: d/dy ln det at y = 0 against the log-derivative of Phi minus lambda
    worst = 0.0
    for x in pts[:3]:
        for k in (1, 2):
            A0, B0 = _pair_jets(s, k, x0, 1)
            Ax, Bx = _pair_jets(s, k, x + x0, 0)
            d_prime, d_plain = _first_pair_dets(Ax, Bx, A0, B0)
            lhs = d_prime / d_plain
            rhs = _log_derivative(x, R.nu[k - 1], L) - R.lambdas[k - 1]
            worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
    out["first_equality"] = worst

    # two-variable form: d_x d_y ln det = wp(x+y) - wp(nu - x - y) + wp'x wp'y / (wp x - wp y)^2
    if len(pts) >= 2:
        x, y = pts[0], pts[1]
        worst = 0.0
        for k in (1, 2):
            Ax, Bx = _pair_jets(s, k, x + x0, 1)
            Ay, By = _pair_jets(s, k, y + x0, 1)
            a, ap, b, bp = Ax[0], Ax[1], Bx[0], Bx[1]
            c, cp, d, dp = Ay[0], Ay[1], By[0], By[1]
            D = a * d - c * b
            Dx = ap * d - c * bp
            Dy = a * dp - cp * b
            Dxy = ap * dp - cp * bp
            lhs = (Dxy * D - Dx * Dy) / D ** 2
            nu = R.nu[k - 1]
            shifted = L.kappa ** 2 / 3.0 if nu is INFINITY else wp_value(nu - x - y, L)
            px, dpx = wp(x, L)
            py, dpy = wp(y, L)
            rhs = wp_value(x + y, L) - shifted + dpx * dpy / (px - py) ** 2
            worst = max(worst, abs(lhs - rhs) / (1 + abs(rhs)))
        out["two_variable"] = worst
    return out
