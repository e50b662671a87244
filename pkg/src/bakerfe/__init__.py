"""Weierstrass-function toolkit for the functional equation

    phi1(x + y) = phi2(x) phi3(y) + phi4(x) phi5(y)

with jets, the kernel Phi(x; nu), a symmetry-group layer, and an identifier
that recovers (g2, g3, nu1, nu2) and the gauge from jets at one point.
"""

from .elliptic import (
    GENERIC,
    ONE_PERIOD,
    RATIONAL,
    InversionError,
    Lattice,
    PoleError,
    UnsupportedLatticeError,
    degenerate_lattice,
    lattice_from_invariants,
    lattice_from_periods,
    reduce,
    sigma,
    sigma_jet,
    wp,
    wp_inverse,
    wp_jet,
    wp_prime,
    wp_value,
    zeta_fn,
    zeta_jet,
)
from .identify import IdentificationError, IdentificationResult, identify
from .jets import Jet
from .phi import INFINITY, PhiParams, phi, phi_jet, phi_log_derivative, phi_prime
from .symmetry import (
    GroupElement,
    SolutionTuple,
    act,
    canonical_tuple,
    centered_tuple,
    random_element,
    validate,
)

__version__ = "0.1.0"
