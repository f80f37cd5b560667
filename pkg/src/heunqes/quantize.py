"""Frequency quantization through quasi-exact solvability.

Separating the azimuthal and axial parts of the wave equation leaves a radial
problem that maps, after xi = sqrt(m*omega)*rho and the ansatz of
series.radial_ansatz, onto the biconfluent Heun equation with

    alpha = 2*m*eta / (m*omega)^(3/2),
    delta = M*lambda*l / (m*omega)^(1/2),
    theta = 2|l| + 1,
    g     = zeta^2/(m*omega) + alpha^2/4 - 2 - 2|l|,

where zeta^2 = 2mE - k^2 - M^2 lambda^2 / 4 collects the separation
constants. Demanding a polynomial solution imposes two conditions at once:
g = 2n and c_{n+1} = 0. The first fixes

    zeta^2 = m*omega*(2n + 2 + 2|l|) - eta^2/omega^2,

the second is satisfied only at discrete frequencies omega_{n,l}: the
potentials cannot be chosen freely, the oscillator frequency itself is
quantized. For n = 1 the condition c_2 = 0 is a cubic in omega solved in
closed form; for general n the root set of c_{n+1}(omega) is located by a
logarithmic sign scan plus bisection.

Energies follow as

    E = omega*(n + |l| + 1) - eta^2/(2*m*omega^2) + M^2 lambda^2/(8m) + k^2/(2m).
"""

import math
from dataclasses import dataclass

import numpy as np

from . import series
from .errors import NonPositiveFrequency, NoPositiveRoot, NoRootInRange, OverflowGuard, WrongDegree
from .model import PhysicalParams, validate
from .series import HeunParams
from .wavefunction import count_positive_roots

# Frequency scan: six decades each side of the characteristic scale, refined
# by bisection to this relative tolerance in omega.
SCAN_POINTS = 400
SCAN_DECADES = 6.0
BISECT_RTOL = 1e-12

# Two frequency roots closer than this (relative) are treated as one.
ROOT_MERGE_RTOL = 1e-9


@dataclass(frozen=True)
class ReducedProblem:
    """Radial problem at fixed polynomial degree n.

    Carries the validated physical parameters plus the derived quantities
    every quantization formula needs. Construct through from_params, which
    enforces l != 0, M*lambda != 0 and 1 <= n <= series.MAX_DEGREE.
    """

    physical: PhysicalParams
    n: int
    abs_l: int
    theta: int
    coupling: float  # signed product M*lambda*l

    @classmethod
    def from_params(cls, physical: PhysicalParams, n: int) -> "ReducedProblem":
        validate(physical, require_coulomb=True)
        if n != int(n) or n < 1:
            raise ValueError(f"polynomial degree n must be an integer >= 1, got {n!r}")
        if n > series.MAX_DEGREE:
            raise ValueError(f"n = {n} beyond the supported degree {series.MAX_DEGREE}")
        abs_l = abs(physical.l)
        return cls(physical, int(n), abs_l, 2 * abs_l + 1, physical.coupling)

    @property
    def mass(self) -> float:
        return self.physical.mass

    @property
    def eta(self) -> float:
        return self.physical.eta


@dataclass(frozen=True)
class SpectralSolution:
    """One quantized state: frequency root plus everything derived at it.

    residuals holds diagnostics: 'truncation' and 'truncation_next' are
    |c_{n+1}| and |c_{n+2}| relative to max_{j<=n}|c_j|; 'cubic' (n = 1 only)
    is the absolute cubic residual at omega.
    """

    n: int
    l: int
    omega: float
    energy: float
    zeta_sq: float
    coefficients: tuple[float, ...]
    node_count: int
    residuals: dict[str, float]
    problem: ReducedProblem
    heun: HeunParams

    def __post_init__(self):
        if not (self.omega > 0):
            raise ValueError(f"omega must be positive, got {self.omega}")


def _check_omega(omega: float) -> float:
    if not (math.isfinite(omega) and omega > 0):
        raise NonPositiveFrequency(f"omega must be finite and > 0, got {omega}")
    return omega


def heun_params_at(problem: ReducedProblem, omega: float) -> HeunParams:
    """Map (problem, omega) to Heun parameters with g = 2n already imposed."""
    _check_omega(omega)
    m_omega = problem.mass * omega
    alpha = 2.0 * problem.mass * problem.eta / m_omega**1.5
    delta = problem.coupling / m_omega**0.5
    return HeunParams(alpha, delta, problem.theta, 2.0 * problem.n)


def energy(problem: ReducedProblem, omega: float) -> float:
    """Energy level E_{n,l} at a (quantized) frequency omega."""
    _check_omega(omega)
    p = problem.physical
    coul_sq = (p.quad * p.lam) ** 2
    return (
        omega * (problem.n + problem.abs_l + 1)
        - p.eta**2 / (2.0 * p.mass * omega**2)
        + coul_sq / (8.0 * p.mass)
        + p.kz**2 / (2.0 * p.mass)
    )


def zeta_squared(problem: ReducedProblem, omega: float) -> float:
    """Radial eigenvalue zeta^2 = m*omega*(2n + 2 + 2|l|) - eta^2/omega^2.

    Algebraically identical to 2mE - k^2 - M^2 lambda^2/4 with E from
    energy(); the identity is exercised as a cross-check in the tests.
    """
    _check_omega(omega)
    return problem.mass * omega * (2 * problem.n + 2 + 2 * problem.abs_l) - problem.eta**2 / omega**2


def cubic_coefficients(problem: ReducedProblem) -> tuple[float, float, float]:
    """Coefficients (a2, a1, a0) of the ground-state cubic omega^3 + a2 omega^2 + a1 omega + a0.

    Obtained by clearing (m*omega)^3 out of c_2 = 0 at g = 2:

        a2 = -(M lambda l)^2 / (2 m theta)
        a1 = -eta M lambda l (1 + theta) / (m theta)
        a0 = -(2 + theta) eta^2 / (2 m)
    """
    if problem.n != 1:
        raise WrongDegree(f"the closed-form cubic exists for n = 1 only, got n = {problem.n}")
    m, eta, coup, theta = problem.mass, problem.eta, problem.coupling, problem.theta
    a2 = -(coup * coup) / (2.0 * m * theta)
    a1 = -eta * coup * (1 + theta) / (m * theta)
    a0 = -(2 + theta) * eta * eta / (2.0 * m)
    return a2, a1, a0


def _cubic_real_roots(a2: float, a1: float, a0: float) -> list[float]:
    """All real roots of omega^3 + a2 omega^2 + a1 omega + a0, multiplicity collapsed.

    Classical discriminant-classified closed form on the depressed cubic
    t^3 + p t + q (omega = t - a2/3): three real roots through the
    trigonometric form when the discriminant is positive, one through the
    radical (Cardano) form when negative, explicit repeated-root formulas on
    the boundary.
    """
    p = a1 - a2 * a2 / 3.0
    q = 2.0 * a2**3 / 27.0 - a2 * a1 / 3.0 + a0
    shift = -a2 / 3.0
    if p == 0.0 and q == 0.0:
        return [shift]  # triple root
    disc = -4.0 * p**3 - 27.0 * q * q
    if disc > 0.0:
        # three distinct real roots; clamp guards acos against rounding spill
        r = math.sqrt(-p / 3.0)
        phi = math.acos(min(1.0, max(-1.0, 3.0 * q / (2.0 * p * r))))
        return [2.0 * r * math.cos((phi - 2.0 * math.pi * k) / 3.0) + shift for k in range(3)]
    if disc < 0.0:
        half_q = -q / 2.0
        root_term = math.sqrt(q * q / 4.0 + p**3 / 27.0)
        t = _signed_cbrt(half_q + root_term) + _signed_cbrt(half_q - root_term)
        return [t + shift]
    if p == 0.0:
        return [shift]
    return [3.0 * q / p + shift, -3.0 * q / (2.0 * p) + shift]  # simple + double root


def _signed_cbrt(x: float) -> float:
    return math.copysign(abs(x) ** (1.0 / 3.0), x)


def _polish_newton(value: float, a2: float, a1: float, a0: float, steps: int = 4) -> float:
    """One round of Newton polishing on the cubic, kept only while it improves."""
    f = lambda w: ((w + a2) * w + a1) * w + a0
    fp = lambda w: (3.0 * w + 2.0 * a2) * w + a1
    best = value
    for _ in range(steps):
        slope = fp(best)
        if slope == 0.0:
            break
        trial = best - f(best) / slope
        if not math.isfinite(trial) or abs(f(trial)) >= abs(f(best)):
            break
        best = trial
    return best


def _merge_close(roots: list[float]) -> list[float]:
    out: list[float] = []
    for r in sorted(roots):
        if out and abs(r - out[-1]) <= ROOT_MERGE_RTOL * max(abs(r), abs(out[-1])):
            continue
        out.append(r)
    return out


def solve_cubic(problem: ReducedProblem) -> list["SpectralSolution"]:
    """All positive roots of the n = 1 cubic, ascending, as SpectralSolutions.

    Every positive root is a legitimate quantized frequency; nothing selects
    among them. With eta = 0 the cubic factors exactly as
    omega^2 (omega + a2): the double root at zero is unphysical and only
    -a2 = (M lambda l)^2/(2 m theta) survives, handled as a branch so that
    float cancellation in the general formulas cannot fabricate a tiny
    spurious positive root out of the exact zeros.
    """
    a2, a1, a0 = cubic_coefficients(problem)
    if problem.eta == 0.0:
        candidates = [-a2]
    else:
        candidates = [_polish_newton(w, a2, a1, a0) for w in _cubic_real_roots(a2, a1, a0)]
    roots = _merge_close([w for w in candidates if w > 0.0])
    if not roots:
        raise NoPositiveRoot(
            "cubic has no positive root; requires eta = 0 and M*lambda*l = 0, "
            "which construction of the problem excludes"
        )
    cubic_res = lambda w: abs(((w + a2) * w + a1) * w + a0)
    return [_make_solution(problem, w, cubic_residual=cubic_res(w)) for w in roots]


def _truncation_at(problem: ReducedProblem, omega: float) -> float:
    """c_{n+1}(omega), the quantity whose roots are the allowed frequencies."""
    m_omega = problem.mass * omega
    alpha = 2.0 * problem.mass * problem.eta / m_omega**1.5
    delta = problem.coupling / m_omega**0.5
    return series._raw_coefficients(alpha, delta, problem.theta, 2.0 * problem.n, problem.n + 1)[
        problem.n + 1
    ]


def _omega_char(problem: ReducedProblem) -> float:
    """Characteristic frequency scale: both closed-form limits of the cubic
    land at O(omega_char), so six decades around it bracket the physical roots."""
    return max(
        problem.coupling**2 / (2.0 * problem.mass * problem.theta),
        (problem.eta**2 / problem.mass) ** (1.0 / 3.0),
        1e-30,
    )


def _bisect(problem: ReducedProblem, lo: float, hi: float, f_lo: float) -> tuple[float, float]:
    """Shrink a sign-change bracket to BISECT_RTOL relative width."""
    while (hi - lo) > BISECT_RTOL * hi:
        mid = 0.5 * (lo + hi)
        f_mid = _truncation_at(problem, mid)
        if f_mid == 0.0:
            return mid, mid
        if f_lo * f_mid < 0.0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return lo, hi


def _polish_secant(problem: ReducedProblem, x0: float, x1: float, steps: int = 3) -> float:
    """Secant cleanup after bisection; keeps the iterate with the smallest residual."""
    f0, f1 = _truncation_at(problem, x0), _truncation_at(problem, x1)
    best_x, best_f = (x0, abs(f0)) if abs(f0) < abs(f1) else (x1, abs(f1))
    for _ in range(steps):
        if f1 == f0:
            break
        x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
        if not (math.isfinite(x2) and x2 > 0.0):
            break
        f2 = _truncation_at(problem, x2)
        x0, f0, x1, f1 = x1, f1, x2, f2
        if abs(f2) < best_f:
            best_x, best_f = x2, abs(f2)
    return best_x


def solve_frequency(problem: ReducedProblem) -> list["SpectralSolution"]:
    """All quantized frequencies found in the scan bracket, ascending.

    Scans c_{n+1}(omega) over SCAN_POINTS logarithmically spaced frequencies
    in [10^-6, 10^+6] x omega_char, bisects every sign change to BISECT_RTOL
    relative, then polishes with a few secant steps. Points where the series
    overflows (deep in the omega -> 0 tail) are skipped; a missing sign
    change in the bracket is reported, not proof of nonexistence.
    """
    w_char = _omega_char(problem)
    lo, hi = 10.0**-SCAN_DECADES * w_char, 10.0**SCAN_DECADES * w_char
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), SCAN_POINTS))
    values: list[float | None] = []
    for w in grid:
        try:
            v = _truncation_at(problem, float(w))
            values.append(v if math.isfinite(v) else None)
        except (OverflowGuard, OverflowError):
            values.append(None)
    roots = []
    for a, b, fa, fb in zip(grid, grid[1:], values, values[1:]):
        if fa is None or fb is None or not (fa * fb < 0.0):
            continue
        b_lo, b_hi = _bisect(problem, float(a), float(b), fa)
        roots.append(_polish_secant(problem, b_lo, b_hi) if b_lo < b_hi else b_lo)
    roots = _merge_close(roots)
    if not roots:
        raise NoRootInRange(
            f"no sign change of c_{problem.n + 1}(omega) over [{lo:.6g}, {hi:.6g}] "
            f"({SCAN_POINTS} log-spaced points); roots outside this bracket are not excluded"
        )
    return [_make_solution(problem, w) for w in roots]


def _make_solution(
    problem: ReducedProblem, omega: float, cubic_residual: float | None = None
) -> SpectralSolution:
    """Assemble the full solution record at a solved frequency root."""
    heun = heun_params_at(problem, omega)
    raw = series._raw_coefficients(heun.alpha, heun.delta, heun.theta, heun.g, problem.n + 2)
    poly = tuple(raw[: problem.n + 1])
    scale = max(abs(c) for c in poly)
    residuals = {
        "truncation": abs(raw[problem.n + 1]) / scale,
        "truncation_next": abs(raw[problem.n + 2]) / scale,
    }
    if cubic_residual is not None:
        residuals["cubic"] = cubic_residual
    return SpectralSolution(
        n=problem.n,
        l=problem.physical.l,
        omega=omega,
        energy=energy(problem, omega),
        zeta_sq=zeta_squared(problem, omega),
        coefficients=poly,
        node_count=count_positive_roots(poly),
        residuals=residuals,
        problem=problem,
        heun=heun,
    )
