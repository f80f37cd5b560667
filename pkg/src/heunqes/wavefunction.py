"""Bound-state radial wavefunctions assembled from solved frequency roots.

A SpectralSolution fixes the polynomial H and the exponential envelope; this
module turns that into the physical radial profile R(rho), normalizes it
against the two-dimensional radial measure rho d(rho) (the z plane wave is
delta-normalized and excluded), and counts radial nodes. Node counting works
on the polynomial H itself, which is exact, with sampled sign changes kept as
an independent cross-check in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from . import series
from .errors import QuadratureFailure, WrongDegree

if TYPE_CHECKING:  # runtime import would be circular; quantize imports this module
    from .quantize import SpectralSolution

# Normalization quadrature: composite Simpson, doubled until the norm constant
# is stable to NORM_RTOL, starting coarse and refusing to refine forever.
NORM_RTOL = 1e-8
_SIMPSON_START = 512
_SIMPSON_MAX = 2**20


@dataclass(frozen=True)
class RadialWavefunction:
    """Normalized radial state: integral of |N*R|^2 rho d(rho) equals one."""

    solution: SpectralSolution
    norm_constant: float
    samples: tuple[tuple[float, float], ...] | None = None

    def evaluate(self, rho):
        """Normalized amplitude N*R at rho (scalar or array)."""
        return self.norm_constant * evaluate_R(self.solution, rho)

    def sample(self, n_samples: int, rho_max: float) -> list[tuple[float, float]]:
        """(rho, N*R) pairs on n_samples uniform points covering [0, rho_max]."""
        rho = np.linspace(0.0, rho_max, n_samples)
        amp = self.evaluate(rho)
        return list(zip(rho.tolist(), np.asarray(amp).tolist()))


def ground_state_polynomial(solution: SpectralSolution) -> tuple[float, float]:
    """Coefficients (1, c1) of the degree-one polynomial H for an n = 1 state.

    c1 = m*eta/(m*omega)^(3/2) + M*lambda*l/(theta*(m*omega)^(1/2)), which is
    alpha/2 + delta/theta written out in physical parameters; agreement with
    series.first_coefficient at the solved root is a tested invariant.
    """
    if solution.n != 1:
        raise WrongDegree(f"ground-state polynomial requires n = 1, got n = {solution.n}")
    prob = solution.problem
    m_omega = prob.mass * solution.omega
    c1 = prob.mass * prob.eta / m_omega**1.5 + prob.coupling / (prob.theta * m_omega**0.5)
    return 1.0, c1


def evaluate_R(solution: SpectralSolution, rho):
    """Unnormalized radial amplitude at rho >= 0 (scalar or array).

    Converts rho to the dimensionless radius xi = sqrt(m*omega)*rho and
    evaluates the full ansatz envelope times the polynomial H.
    """
    xi_scale = math.sqrt(solution.problem.mass * solution.omega)
    seq = series.CoefficientSequence(solution.coefficients, solution.heun)
    return series.radial_ansatz(seq, solution.heun, solution.problem.abs_l, xi_scale * rho)


def suggested_rho_max(solution: SpectralSolution) -> float:
    """Radius beyond which the state is numerically dead.

    The integrand of the norm peaks near xi_peak = sqrt(|l| + n); the Gaussian
    exp(-xi^2) has suppressed that peak by 1e-16 at
    xi = sqrt(xi_peak^2 + 16 ln 10), and a further factor 1.5 pads the
    polynomial prefactors.
    """
    xi_cut = math.sqrt(solution.problem.abs_l + solution.n + 16.0 * math.log(10.0))
    return 1.5 * xi_cut / math.sqrt(solution.problem.mass * solution.omega)


def _simpson_norm_sq(solution: SpectralSolution, rho_max: float, intervals: int) -> float:
    """Composite-Simpson value of the squared norm integral on [0, rho_max]."""
    rho = np.linspace(0.0, rho_max, intervals + 1)
    f = np.asarray(evaluate_R(solution, rho)) ** 2 * rho
    h = rho_max / intervals
    return float(h / 3.0 * (f[0] + f[-1] + 4.0 * f[1:-1:2].sum() + 2.0 * f[2:-1:2].sum()))


def normalize(solution: SpectralSolution, rtol: float = NORM_RTOL) -> RadialWavefunction:
    """Compute the norm constant N by adaptive composite quadrature.

    Simpson's rule on [0, rho_max] with the interval count doubled until N
    moves by less than rtol relative between refinements.

    Raises:
        QuadratureFailure: the integral is non-finite or non-positive, or the
            refinement cap is hit without convergence.
    """
    rho_max = suggested_rho_max(solution)
    previous = None
    intervals = _SIMPSON_START
    while intervals <= _SIMPSON_MAX:
        integral = _simpson_norm_sq(solution, rho_max, intervals)
        if not math.isfinite(integral) or integral <= 0.0:
            raise QuadratureFailure(
                f"norm integral evaluated to {integral!r} on [0, {rho_max:.6g}]"
            )
        norm = 1.0 / math.sqrt(integral)
        if previous is not None and abs(norm - previous) <= rtol * abs(norm):
            return RadialWavefunction(solution, norm)
        previous = norm
        intervals *= 2
    raise QuadratureFailure(
        f"norm constant did not stabilize to {rtol:g} within {_SIMPSON_MAX} intervals"
    )


def count_positive_roots(coeffs) -> int:
    """Number of strictly positive real roots of a polynomial, sign changes only.

    Scans (0, bound] on a dense uniform grid, where bound is the Cauchy root
    bound 1 + max_j |c_j / c_deg|, then sharpens every sign-change bracket by
    bisection and merges refined roots that coincide. Even-multiplicity
    (tangential) roots carry no sign change and are not counted; genuine
    bound states never produce them.
    """
    c = [float(x) for x in coeffs]
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    if len(c) == 1:
        return 0
    bound = 1.0 + max(abs(x / c[-1]) for x in c[:-1])
    xs = np.linspace(0.0, bound, max(2048, 128 * (len(c) - 1)) + 1)[1:]
    vals = np.zeros_like(xs)
    for coef in reversed(c):
        vals = vals * xs + coef
    roots: list[float] = []
    prev_x, prev_v = None, None
    for x, v in zip(xs, vals):
        if v == 0.0:
            continue  # exact grid hit: the flip (if any) survives zero removal
        if prev_v is not None and prev_v * v < 0.0:
            roots.append(_poly_bisect(c, prev_x, x, prev_v))
        prev_x, prev_v = x, v
    merged: list[float] = []
    for r in roots:
        if merged and abs(r - merged[-1]) <= 1e-9 * bound:
            continue
        merged.append(r)
    return len(merged)


def _poly_bisect(c: list[float], lo: float, hi: float, f_lo: float) -> float:
    evaluate = lambda x: math.fsum(coef * x**k for k, coef in enumerate(c))
    while (hi - lo) > 1e-13 * max(hi, 1.0):
        mid = 0.5 * (lo + hi)
        f_mid = evaluate(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return 0.5 * (lo + hi)


def count_nodes(solution: SpectralSolution) -> int:
    """Radial node count: positive real roots of the polynomial H."""
    return count_positive_roots(solution.coefficients)
