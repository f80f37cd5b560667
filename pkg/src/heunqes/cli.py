"""Command-line front end: solve, scan, wavefunction, and verify workflows.

Output is deterministic: identical configuration produces byte-identical
bytes. Run metadata lives in `#`-prefixed header lines that echo every
effective parameter as `# key = value`, parseable by the same `key = value`
reader used for config files, so a header round-trips into a config file
reproducing the run. Data streams are CSV (comma separator, LF endings,
mandatory header row) or aligned plain-text tables; numbers are printed with
12 significant digits, switching to scientific notation below 1e-4 and at or
above 1e+6.

Exit codes: 0 success (verify: all states PASS), 1 verification failure or
internal numerical failure, 2 configuration/validation error, 3 no frequency
root found.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import (
    HeunQESError,
    NonPositiveMass,
    NoPositiveRoot,
    NoRootInRange,
    VanishingCoupling,
    ZeroAngularMomentum,
)
from .model import PhysicalParams
from .oracle import DEFAULT_GRID_N, verify_solution
from .quantize import ReducedProblem, SpectralSolution, solve_cubic, solve_frequency
from .series import MAX_DEGREE
from .wavefunction import normalize, suggested_rho_max

CONFIG_ENV_VAR = "HEUNQES_CONFIG"

_SOLVE_COLUMNS = ("n", "l", "omega", "energy", "zeta_sq", "node_count", "residual")
_SCAN_COLUMNS = (
    "n",
    "l",
    "root_index",
    "omega",
    "energy",
    "zeta_sq",
    "node_count",
    "residual",
    "status",
)
_WAVEFUNCTION_COLUMNS = ("rho", "R")


class ConfigError(Exception):
    """Unusable configuration: bad file, unknown key, or out-of-range value."""


def _parse_int_list(text: str) -> tuple[int, ...]:
    items = [piece.strip() for piece in text.split(",")]
    values = tuple(int(piece) for piece in items if piece)
    if not values:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}")
    return values


# Config-file and header key set; 'lambda' is accepted as an alias for lam.
_CONVERTERS = {
    "mass": float,
    "quad": float,
    "lam": float,
    "eta": float,
    "kz": float,
    "rho_max": float,
    "perturb_omega": float,
    "l": int,
    "n": int,
    "n_max": int,
    "samples": int,
    "jobs": int,
    "l_list": _parse_int_list,
    "grid": _parse_int_list,
    "format": str,
    "output": str,
}

_DEFAULTS = {
    "mass": 1.0,
    "quad": 1.0,
    "lam": 1.0,
    "eta": 1.0,
    "kz": 0.0,
    "l": 1,
    "n": 1,
    "n_max": 1,
    "l_list": (1,),
    "samples": 512,
    "rho_max": None,
    "grid": (),
    "perturb_omega": 1.0,
    "format": None,
    "output": None,
    "jobs": None,
}


@dataclass(frozen=True)
class RunConfig:
    """Merged effective configuration: defaults < config file < CLI flags.

    explicit records which keys were set by the file or the command line,
    letting verify distinguish single-state mode from range mode.
    """

    command: str
    mass: float
    quad: float
    lam: float
    eta: float
    kz: float
    l: int
    n: int
    n_max: int
    l_list: tuple[int, ...]
    samples: int
    rho_max: float | None
    grid: tuple[int, ...]
    perturb_omega: float
    format: str | None
    output: str | None
    jobs: int | None
    explicit: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        for key in ("mass", "quad", "lam", "eta", "kz", "perturb_omega"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigError(f"{key} must be finite, got {getattr(self, key)!r}")
        if self.rho_max is not None and not (
            math.isfinite(self.rho_max) and self.rho_max > 0.0
        ):
            raise ConfigError(f"rho-max must be positive and finite, got {self.rho_max!r}")
        if self.samples < 2:
            raise ConfigError(f"samples must be >= 2, got {self.samples}")
        if self.format not in (None, "csv", "table"):
            raise ConfigError(f"format must be 'csv' or 'table', got {self.format!r}")
        if self.jobs is not None and self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if len(self.grid) > 2:
            raise ConfigError(f"at most two --grid values (coarse, refined), got {len(self.grid)}")


def fmt12(value) -> str:
    """12-significant-digit numeric formatting with trimmed trailing zeros."""
    if isinstance(value, int):
        return str(value)
    v = float(value)
    if v == 0.0:
        return "0"
    if not math.isfinite(v):
        return repr(v)
    if abs(v) < 1e-4 or abs(v) >= 1e6:
        mantissa, _, exponent = f"{v:.11e}".partition("e")
        mantissa = mantissa.rstrip("0").rstrip(".")
        return f"{mantissa}e{int(exponent):+03d}"
    return f"{v:.12g}"


def _format_param(value) -> str:
    if isinstance(value, tuple):
        return ",".join(str(item) for item in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _header_lines(config: RunConfig, pairs: list[tuple[str, object]]) -> list[str]:
    lines = [f"# heunqes {config.command}"]
    for key, value in pairs:
        name = "lambda" if key == "lam" else key.replace("_", "-")
        lines.append(f"# {name} = {_format_param(value)}")
    return lines


def _physics_pairs(config: RunConfig) -> list[tuple[str, object]]:
    return [(key, getattr(config, key)) for key in ("mass", "quad", "lam", "eta", "kz")]


def _render(columns: tuple[str, ...], rows: list[tuple], fmt: str) -> list[str]:
    cells = [list(columns)]
    for row in rows:
        cells.append(["" if x is None else fmt12(x) if not isinstance(x, str) else x for x in row])
    if fmt == "csv":
        return [",".join(row) for row in cells]
    widths = [max(len(row[i]) for row in cells) for i in range(len(columns))]
    return ["  ".join(row[i].ljust(widths[i]) for i in range(len(columns))).rstrip() for row in cells]


def load_config(path: str) -> dict:
    """Parse a flat `key = value` config file; `#` starts a comment."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    values: dict = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw_line!r}")
        key = key.strip().replace("-", "_")
        if key == "lambda":
            key = "lam"
        converter = _CONVERTERS.get(key)
        if converter is None:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = converter(value.strip())
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def build_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, optional config file, and CLI flags into a RunConfig."""
    merged = dict(_DEFAULTS)
    explicit: set[str] = set()
    path = args.config or os.environ.get(CONFIG_ENV_VAR)
    if path:
        file_values = load_config(path)
        merged.update(file_values)
        explicit.update(file_values)
    for key in _DEFAULTS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = tuple(value) if key == "grid" else value
            explicit.add(key)
    return RunConfig(command=args.command, explicit=frozenset(explicit), **merged)


def _make_params(config: RunConfig, l: int | None = None) -> PhysicalParams:
    return PhysicalParams(
        mass=config.mass,
        quad=config.quad,
        lam=config.lam,
        eta=config.eta,
        kz=config.kz,
        l=config.l if l is None else l,
    )


def _solve_states(params: PhysicalParams, n: int) -> list[SpectralSolution]:
    """All quantized states for one (n, l) cell, ascending in omega."""
    problem = ReducedProblem.from_params(params, n)
    states = solve_cubic(problem) if n == 1 else solve_frequency(problem)
    return sorted(states, key=lambda s: s.omega)


def cmd_solve(config: RunConfig) -> tuple[int, list[str]]:
    states = _solve_states(_make_params(config), config.n)
    rows = [
        (s.n, s.l, s.omega, s.energy, s.zeta_sq, s.node_count, s.residuals["truncation"])
        for s in states
    ]
    pairs = _physics_pairs(config) + [("l", config.l), ("n", config.n)]
    lines = _header_lines(config, pairs)
    lines += _render(_SOLVE_COLUMNS, rows, config.format or "table")
    return 0, lines


def _scan_cell(task: tuple) -> list[tuple]:
    """Worker for one (n, l) scan cell; must stay module-level for pickling."""
    n, l, mass, quad, lam, eta, kz = task
    blank = (None, None, None, None, None)
    try:
        params = PhysicalParams(mass=mass, quad=quad, lam=lam, eta=eta, kz=kz, l=l)
        states = _solve_states(params, n)
    except (NoRootInRange, NoPositiveRoot):
        return [(n, l, None) + blank + ("no_root",)]
    except HeunQESError as exc:
        return [(n, l, None) + blank + (f"error:{type(exc).__name__}",)]
    return [
        (n, l, i, s.omega, s.energy, s.zeta_sq, s.node_count, s.residuals["truncation"], "ok")
        for i, s in enumerate(states)
    ]


def cmd_scan(config: RunConfig) -> tuple[int, list[str]]:
    if config.n_max < 1:
        raise ConfigError(f"n-max must be >= 1, got {config.n_max}")
    if config.n_max > MAX_DEGREE:
        raise ConfigError(f"n-max must be <= {MAX_DEGREE}, got {config.n_max}")
    if not config.l_list:
        raise ConfigError("l-list must be nonempty")
    if any(l == 0 for l in config.l_list):
        raise ZeroAngularMomentum("l must be nonzero: l-list contains 0")
    l_values = sorted(set(config.l_list))
    tasks = [
        (n, l, config.mass, config.quad, config.lam, config.eta, config.kz)
        for n in range(1, config.n_max + 1)
        for l in l_values
    ]
    jobs = config.jobs or os.cpu_count() or 1
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            per_cell = list(pool.map(_scan_cell, tasks))
    else:
        per_cell = [_scan_cell(task) for task in tasks]
    rows = [row for cell in per_cell for row in cell]
    rows.sort(key=lambda r: (r[0], r[1], r[3] if r[3] is not None else math.inf))
    pairs = _physics_pairs(config) + [("n_max", config.n_max), ("l_list", tuple(l_values))]
    lines = _header_lines(config, pairs)
    lines += _render(_SCAN_COLUMNS, rows, config.format or "csv")
    return 0, lines


def cmd_wavefunction(config: RunConfig) -> tuple[int, list[str]]:
    states = _solve_states(_make_params(config), config.n)
    state = states[0]  # lowest quantized frequency
    wavefunction = normalize(state)
    rho_max = config.rho_max if config.rho_max is not None else suggested_rho_max(state)
    rows = wavefunction.sample(config.samples, rho_max)
    pairs = _physics_pairs(config) + [
        ("l", config.l),
        ("n", config.n),
        ("samples", config.samples),
        ("rho_max", rho_max),
    ]
    lines = _header_lines(config, pairs)
    lines += _render(_WAVEFUNCTION_COLUMNS, rows, config.format or "csv")
    return 0, lines


def _verify_grids(config: RunConfig) -> tuple[int, int]:
    if len(config.grid) == 0:
        coarse, refined = DEFAULT_GRID_N, 2 * DEFAULT_GRID_N
    elif len(config.grid) == 1:
        coarse, refined = config.grid[0], 2 * config.grid[0]
    else:
        coarse, refined = config.grid
    if coarse < 100:
        raise ConfigError(f"grid must have at least 100 points, got {coarse}")
    if refined <= coarse:
        raise ConfigError(f"refined grid must exceed coarse grid, got {coarse},{refined}")
    return coarse, refined


def cmd_verify(config: RunConfig) -> tuple[int, list[str]]:
    coarse, refined = _verify_grids(config)
    if {"n_max", "l_list"} & config.explicit:
        if any(l == 0 for l in config.l_list):
            raise ZeroAngularMomentum("l must be nonzero: l-list contains 0")
        cells = [
            (n, l)
            for n in range(1, config.n_max + 1)
            for l in sorted(set(config.l_list))
        ]
    else:
        cells = [(config.n, config.l)]
    pairs = _physics_pairs(config) + [
        ("grid", (coarse, refined)),
        ("perturb_omega", config.perturb_omega),
    ]
    if config.rho_max is not None:
        pairs.append(("rho_max", config.rho_max))
    lines = _header_lines(config, pairs)
    verified = failed = 0
    for n, l in cells:
        try:
            states = _solve_states(_make_params(config, l=l), n)
        except (NoRootInRange, NoPositiveRoot):
            lines.append(f"# no frequency root for n = {n}, l = {l}")
            continue
        for i, state in enumerate(states):
            report = verify_solution(
                state,
                grid_n=coarse,
                grid_n_refined=refined,
                rho_max=config.rho_max,
                perturb_omega=config.perturb_omega,
            )
            verified += 1
            failed += 0 if report.passed else 1
            lines.append(
                f"{'PASS' if report.passed else 'FAIL'} "
                f"n={n} l={l} root={i} omega={fmt12(state.omega)} "
                f"zeta_sq={fmt12(report.zeta_claim)} oracle={fmt12(report.zeta_oracle)} "
                f"deviation={fmt12(report.deviation)} refined={fmt12(report.deviation_refined)} "
                f"ratio={fmt12(report.ratio)}"
            )
    lines.append(f"# summary: {verified - failed} passed, {failed} failed")
    if verified == 0:
        return 3, lines
    return (1 if failed else 0), lines


_HANDLERS = {
    "solve": cmd_solve,
    "scan": cmd_scan,
    "wavefunction": cmd_wavefunction,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    shared.add_argument("--mass", type=float, help="atom mass m")
    shared.add_argument("--quad", type=float, help="magnetic quadrupole magnitude M")
    shared.add_argument("--lambda", dest="lam", type=float, help="field gradient lambda")
    shared.add_argument("--eta", type=float, help="linear confinement strength eta")
    shared.add_argument("--kz", type=float, help="axial wavenumber k")
    shared.add_argument("--config", help=f"config file path (default: ${CONFIG_ENV_VAR})")
    shared.add_argument("--output", help="write output to this file instead of stdout")
    shared.add_argument("--format", choices=("csv", "table"), help="data stream format")
    shared.add_argument("--jobs", type=int, help="worker processes (default: CPU count)")

    parser = argparse.ArgumentParser(
        prog="heunqes",
        description="Quasi-exactly-solvable spectra of a trapped magnetic-quadrupole atom.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", parents=[shared], help="quantized frequencies for one (n, l)")
    solve.add_argument("--n", type=int, help="polynomial degree n >= 1")
    solve.add_argument("--l", type=int, help="angular momentum quantum number, l != 0")

    scan = sub.add_parser("scan", parents=[shared], help="sweep (n, l) cells to CSV")
    scan.add_argument("--n-max", dest="n_max", type=int, help="scan n = 1..n_max")
    scan.add_argument("--l-list", dest="l_list", type=_parse_int_list, help="e.g. 1,2,-1")

    wavefunction = sub.add_parser(
        "wavefunction", parents=[shared], help="sampled normalized radial profile"
    )
    wavefunction.add_argument("--n", type=int, help="polynomial degree n >= 1")
    wavefunction.add_argument("--l", type=int, help="angular momentum quantum number, l != 0")
    wavefunction.add_argument("--samples", type=int, help="number of radial samples")
    wavefunction.add_argument("--rho-max", dest="rho_max", type=float, help="sampling radius")

    verify = sub.add_parser(
        "verify", parents=[shared], help="cross-check states against the finite-difference oracle"
    )
    verify.add_argument("--n", type=int, help="polynomial degree n >= 1")
    verify.add_argument("--l", type=int, help="angular momentum quantum number, l != 0")
    verify.add_argument("--n-max", dest="n_max", type=int, help="verify n = 1..n_max")
    verify.add_argument("--l-list", dest="l_list", type=_parse_int_list, help="e.g. 1,2,-1")
    verify.add_argument(
        "--grid",
        action="append",
        type=int,
        help="grid points; repeat for (coarse, refined), single value doubles",
    )
    verify.add_argument("--rho-max", dest="rho_max", type=float, help="override box radius")
    verify.add_argument(
        "--perturb-omega",
        dest="perturb_omega",
        type=float,
        help="multiply the verified frequency (negative control)",
    )
    return parser


def _emit(lines: list[str], output: str | None) -> None:
    text = "\n".join(lines) + "\n"
    if output:
        with open(output, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        config = build_config(args)
        code, lines = _HANDLERS[config.command](config)
        _emit(lines, config.output)
        return code
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NonPositiveMass, ZeroAngularMomentum, VanishingCoupling, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoRootInRange, NoPositiveRoot) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except HeunQESError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
