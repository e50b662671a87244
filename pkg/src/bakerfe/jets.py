"""Truncated Taylor series ("jets") at a fixed expansion point.

A :class:`Jet` of order ``N`` at ``x0`` stores ``c_0 .. c_N`` with

    f(x) = sum_j c_j (x - x0)**j + O((x - x0)**(N + 1)).

All derivative data used by the identification code flows through jets, so
nothing here ever differences numerically. Jets are immutable; every
operation returns a new jet whose order is the minimum of its operands.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Jet",
    "JetPointError",
    "multiply",
    "reciprocal",
    "exponential",
    "differentiate",
    "derivative_value",
]


class JetPointError(ValueError):
    """Raised when two jets with different expansion points are combined."""


def _as_coefficients(values: Sequence[complex]) -> np.ndarray:
    arr = np.array(values, dtype=complex).ravel()
    if arr.size == 0:
        raise ValueError("a jet needs at least one coefficient")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class Jet:
    expansion_point: complex
    coefficients: np.ndarray

    def __init__(self, expansion_point: complex, coefficients: Sequence[complex]):
        object.__setattr__(self, "expansion_point", complex(expansion_point))
        object.__setattr__(self, "coefficients", _as_coefficients(coefficients))

    # -- constructors -----------------------------------------------------
    @classmethod
    def constant(cls, x0: complex, value: complex, order: int) -> "Jet":
        c = np.zeros(order + 1, dtype=complex)
        c[0] = value
        return cls(x0, c)

    @classmethod
    def variable(cls, x0: complex, order: int) -> "Jet":
        """The identity function ``x`` expanded at ``x0``."""
        c = np.zeros(order + 1, dtype=complex)
        c[0] = x0
        if order >= 1:
            c[1] = 1.0
        return cls(x0, c)

    @classmethod
    def from_derivatives(cls, x0: complex, derivatives: Sequence[complex]) -> "Jet":
        """Build a jet from ``f(x0), f'(x0), f''(x0), ...``."""
        c = [d / math.factorial(j) for j, d in enumerate(derivatives)]
        return cls(x0, c)

    # -- basic accessors --------------------------------------------------
    @property
    def order(self) -> int:
        return self.coefficients.size - 1

    @property
    def value(self) -> complex:
        return complex(self.coefficients[0])

    def __len__(self) -> int:
        return self.coefficients.size

    def __getitem__(self, j: int) -> complex:
        return complex(self.coefficients[j])

    def __repr__(self) -> str:
        return f"Jet(x0={self.expansion_point!r}, order={self.order}, coefficients={self.coefficients!r})"

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError(f"cannot raise jet order from {self.order} to {order}")
        return Jet(self.expansion_point, self.coefficients[: order + 1])

    def evaluate(self, x: complex) -> complex:
        """Evaluate the truncated polynomial at an absolute point ``x``."""
        h = complex(x) - self.expansion_point
        return complex(np.polyval(self.coefficients[::-1], h))

    def derivative_value(self, k: int) -> complex:
        return derivative_value(self, k)

    # -- coercion ---------------------------------------------------------
    def _coerce(self, other) -> "Jet":
        if isinstance(other, Jet):
            if other.expansion_point != self.expansion_point:
                raise JetPointError(
                    f"expansion points differ: {self.expansion_point} vs {other.expansion_point}"
                )
            return other
        return Jet.constant(self.expansion_point, complex(other), self.order)

    def _pair(self, other) -> tuple[np.ndarray, np.ndarray]:
        other = self._coerce(other)
        n = min(self.order, other.order) + 1
        return self.coefficients[:n], other.coefficients[:n]

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        return Jet(self.expansion_point, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        return Jet(self.expansion_point, a - b)

    def __rsub__(self, other):
        a, b = self._pair(other)
        return Jet(self.expansion_point, b - a)

    def __neg__(self):
        return Jet(self.expansion_point, -self.coefficients)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.expansion_point, self.coefficients * complex(other))
        return multiply(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.expansion_point, self.coefficients / complex(other))
        return multiply(self, reciprocal(other))

    def __rtruediv__(self, other):
        return reciprocal(self) * complex(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = Jet.constant(self.expansion_point, 1.0, self.order)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- calculus ---------------------------------------------------------
    def exp(self) -> "Jet":
        return exponential(self)

    def log(self) -> "Jet":
        """Principal-branch logarithm; the constant term is ``log(c_0)``."""
        c0 = self.coefficients[0]
        if c0 == 0:
            raise ZeroDivisionError("log of a jet that vanishes at its expansion point")
        d = differentiate(self) * reciprocal(self.truncate(self.order - 1)) if self.order else None
        if d is None:
            return Jet(self.expansion_point, [np.log(c0)])
        return d.integrate(np.log(c0))

    def sinh(self) -> "Jet":
        e = exponential(self)
        return (e - reciprocal(e)) * 0.5

    def cosh(self) -> "Jet":
        e = exponential(self)
        return (e + reciprocal(e)) * 0.5

    def derivative(self) -> "Jet":
        return differentiate(self)

    def integrate(self, constant: complex = 0.0) -> "Jet":
        """Term-wise antiderivative; the order grows by one."""
        c = self.coefficients
        out = np.empty(c.size + 1, dtype=complex)
        out[0] = constant
        out[1:] = c / np.arange(1, c.size + 1)
        return Jet(self.expansion_point, out)

    def reflect(self) -> "Jet":
        """Jet of ``g(x) = f(2 x0 - x)``, i.e. the variable negated about ``x0``."""
        signs = (-1.0) ** np.arange(self.coefficients.size)
        return Jet(self.expansion_point, self.coefficients * signs)

    def divide_by_offset(self, power: int = 1) -> "Jet":
        """Exact division by ``(x - x0)**power``; drops the low coefficients.

        The caller asserts those coefficients vanish; their size is not
        checked because callers deal with numerically-cancelled values.
        """
        if power > self.order:
            raise ValueError("not enough coefficients to divide")
        return Jet(self.expansion_point, self.coefficients[power:])

    def rebase(self, x0: complex) -> "Jet":
        """Relabel the expansion point without changing coefficients.

        Used when a function of ``X - a`` is exposed as a function of ``X``.
        """
        return Jet(x0, self.coefficients)


def multiply(a: Jet, b: Jet) -> Jet:
    """Cauchy product, truncated to the smaller order."""
    ca, cb = a._pair(b)
    n = ca.size
    out = np.convolve(ca, cb)[:n]
    return Jet(a.expansion_point, out)


def reciprocal(a: Jet) -> Jet:
    c = a.coefficients
    if c[0] == 0:
        raise ZeroDivisionError("reciprocal of a jet with zero constant term (pole at expansion point)")
    n = c.size
    r = np.zeros(n, dtype=complex)
    r[0] = 1.0 / c[0]
    for k in range(1, n):
        r[k] = -np.dot(c[1 : k + 1], r[k - 1 :: -1][:k]) / c[0]
    return Jet(a.expansion_point, r)


def exponential(a: Jet) -> Jet:
    # b = exp(a)  =>  k b_k = sum_{j=1..k} j a_j b_{k-j}
    c = a.coefficients
    n = c.size
    b = np.zeros(n, dtype=complex)
    b[0] = np.exp(c[0])
    ja = np.arange(n) * c
    for k in range(1, n):
        b[k] = np.dot(ja[1 : k + 1], b[k - 1 :: -1][:k]) / k
    return Jet(a.expansion_point, b)


def differentiate(a: Jet) -> Jet:
    if a.order < 1:
        raise ValueError("cannot differentiate an order-0 jet")
    c = a.coefficients
    return Jet(a.expansion_point, c[1:] * np.arange(1, c.size))


def derivative_value(a: Jet, k: int) -> complex:
    """``k!`` times the ``k``-th coefficient, i.e. ``f^(k)(x0)``."""
    if k < 0 or k > a.order:
        raise ValueError(f"derivative order {k} outside jet order {a.order}")
    return complex(math.factorial(k) * a.coefficients[k])
