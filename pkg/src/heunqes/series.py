"""Frobenius series engine for the biconfluent Heun equation

    H'' + [theta/xi - alpha - 2*xi] H' + [g - (theta*alpha + 2*delta)/(2*xi)] H = 0.

The solution regular at the origin is the power series H(xi) = sum_j c_j xi^j
with the normalization c_0 = 1, the seed

    c_1 = alpha/2 + delta/theta,

and the two-term recurrence

    c_{j+2} = [2*alpha*(j+1) + theta*alpha + 2*delta] * c_{j+1} / [2*(j+2)*(j+1+theta)]
            - (g - 2*j) * c_j / [(j+2)*(j+1+theta)].

The series collapses to a degree-n polynomial exactly when g = 2n and
c_{n+1} = 0 simultaneously; that pair of conditions is the quasi-exact
solvability mechanism that quantizes the oscillator frequency (see quantize).
This module only manipulates the series; it knows nothing about physical
parameters.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import OverflowGuard

# Coefficients beyond this magnitude abort generation: the recurrence has
# quadratically growing denominators, so growth this large only happens for
# pathological parameters and would otherwise surface as silent infinities.
OVERFLOW_LIMIT = 1e250

# Largest polynomial degree the downstream root-finder is rated for in double
# precision.
MAX_DEGREE = 50


@dataclass(frozen=True)
class HeunParams:
    """Dimensionless parameter tuple (alpha, delta, theta, g) of the equation.

    theta = 2|l| + 1 is an odd positive integer; g is the spectral parameter
    that the truncation condition pins to 2n.
    """

    alpha: float
    delta: float
    theta: int
    g: float

    def __post_init__(self):
        if self.theta < 1 or self.theta % 2 == 0:
            raise ValueError(f"theta must be an odd positive integer, got {self.theta}")
        if not (math.isfinite(self.alpha) and math.isfinite(self.delta) and math.isfinite(self.g)):
            raise ValueError("HeunParams entries must be finite")


@dataclass(frozen=True)
class CoefficientSequence:
    """Series coefficients c_0..c_J generated from one HeunParams."""

    coeffs: tuple[float, ...]
    params: HeunParams

    def __len__(self) -> int:
        return len(self.coeffs)


def first_coefficient(p: HeunParams) -> float:
    """Seed coefficient c_1 = alpha/2 + delta/theta."""
    return p.alpha / 2.0 + p.delta / p.theta


def _raw_coefficients(alpha: float, delta: float, theta: int, g: float, j_max: int) -> list[float]:
    """Plain-float recurrence core shared by the public API and the root scan.

    Returns [c_0, ..., c_{j_max}]. Raises OverflowGuard the moment any
    coefficient magnitude passes OVERFLOW_LIMIT.
    """
    c = [1.0, alpha / 2.0 + delta / theta]
    for j in range(j_max - 1):
        c_next = (
            (2.0 * alpha * (j + 1) + theta * alpha + 2.0 * delta) * c[j + 1]
            / (2.0 * (j + 2) * (j + 1 + theta))
            - (g - 2.0 * j) * c[j] / ((j + 2) * (j + 1 + theta))
        )
        if abs(c_next) > OVERFLOW_LIMIT:
            raise OverflowGuard(
                f"|c_{j + 2}| = {abs(c_next):.3e} exceeds {OVERFLOW_LIMIT:.0e} "
                f"(alpha={alpha:.6g}, delta={delta:.6g}, theta={theta}, g={g:.6g})"
            )
        c.append(c_next)
    return c


def generate_coefficients(p: HeunParams, j_max: int) -> CoefficientSequence:
    """Generate c_0 .. c_{j_max} from the recurrence.

    Args:
        p: equation parameters; p.g is used as-is (set g = 2n to probe
            truncation at degree n).
        j_max: largest index to generate, >= 1.

    Raises:
        OverflowGuard: a coefficient magnitude crossed OVERFLOW_LIMIT.
    """
    if j_max < 1:
        raise ValueError(f"j_max must be >= 1, got {j_max}")
    return CoefficientSequence(tuple(_raw_coefficients(p.alpha, p.delta, p.theta, p.g, j_max)), p)


def truncation_residual(p: HeunParams, n: int) -> float:
    """c_{n+1} under g = 2n: zero exactly when the series truncates at degree n.

    The caller must have set p.g = 2n already (both truncation conditions are
    imposed together); this is checked because a mismatched g silently probes
    the wrong polynomial degree.
    """
    if n < 1:
        raise ValueError(f"polynomial degree n must be >= 1, got {n}")
    if p.g != 2.0 * n:
        raise ValueError(f"truncation at degree {n} requires g = {2 * n}, got g = {p.g}")
    return _raw_coefficients(p.alpha, p.delta, p.theta, p.g, n + 1)[n + 1]


def evaluate_H(seq: CoefficientSequence, xi):
    """Evaluate H(xi) = sum_j c_j xi^j by Horner's rule.

    Accepts a scalar or an ndarray of evaluation points.
    """
    acc = np.zeros_like(np.asarray(xi, dtype=float)) if isinstance(xi, np.ndarray) else 0.0
    for c in reversed(seq.coeffs):
        acc = acc * xi + c
    return acc


def radial_ansatz(seq: CoefficientSequence, p: HeunParams, abs_l: int, xi):
    """Unnormalized radial profile R(xi) = exp(-xi^2/2) exp(-alpha*xi/2) xi^|l| H(xi).

    The Gaussian factor comes from the harmonic term, the plain exponential
    from the linear term, and xi^|l| enforces regularity at the origin.
    Accepts a scalar or an ndarray; xi must be >= 0 for the result to be the
    physical profile.
    """
    xi = np.asarray(xi, dtype=float) if isinstance(xi, np.ndarray) else float(xi)
    return np.exp(-0.5 * xi * xi) * np.exp(-0.5 * p.alpha * xi) * xi**abs_l * evaluate_H(seq, xi)
