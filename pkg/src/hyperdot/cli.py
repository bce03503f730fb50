"""``hyperdot`` command line: tables, figure data, property checks and the zero cache.

Exit codes: 0 success, 1 computational failure or violated check, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import checks
from .errors import DomainError, HyperdotError
from .measures import CSV_HEADER as TABLE_HEADER
from .measures import measure_report, thresholds
from .specfun.zeros import ZERO_TABLE, bessel_zeros, default_cache_path, neumann_zeros
from .systems import (
    QuantumNumbers,
    Space,
    SystemKind,
    SystemSpec,
    kernel_order,
    radial_profile,
)
from .uncertainty import conjugate_beta, hydrogen_closed_sum, renyi_rhs, renyi_sum, tsallis_sides

log = logging.getLogger("hyperdot")

EXIT_OK, EXIT_COMPUTE, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    """Invalid command-line configuration (exit code 2)."""


@dataclass
class RunConfig:
    command: str
    bc: str = "dirichlet"
    system: str = "dot"
    dims: list[int] = field(default_factory=list)
    n: int = 1
    l: int = 0
    alpha_min: float | None = None
    alpha_max: float | None = None
    alpha_points: int = 41
    alpha_log: bool = False
    tol: float | None = None
    out: Path | None = None
    cache: Path | None = None
    quick: bool = False
    figure: int | None = None
    zero_count: int = 20
    inject_fault: str | None = None

    @property
    def kind(self) -> SystemKind:
        return SystemKind.HYDROGEN if self.system == "hydrogen" else SystemKind(self.bc)

    def validate(self) -> None:
        lowest = 3 if self.system == "hydrogen" else 2
        bad = [d for d in self.dims if d < lowest]
        if bad:
            raise ConfigError(f"dimensions {bad} below the minimum {lowest} for {self.system}")
        if self.n < 1 or self.l < 0:
            raise ConfigError("need n >= 1 and l >= 0")
        if self.system == "hydrogen" and self.l > self.n - 1:
            raise ConfigError("hydrogen needs l <= n - 1")
        if self.tol is not None and not 0 < self.tol < 1e-2:
            raise ConfigError("tolerance must be in (0, 1e-2)")
        if self.alpha_points < 2:
            raise ConfigError("alpha grid needs at least 2 points")
        if self.alpha_log and self.alpha_min is not None and self.alpha_min <= 0:
            raise ConfigError("log spacing needs alpha-min > 0")


def parse_dims(text: str) -> list[int]:
    """``"2..10"``, ``"3,4,6"`` or a single integer."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            elif part:
                out.append(int(part))
    except ValueError as exc:
        raise ConfigError(f"cannot parse dimension list {text!r}") from exc
    if not out:
        raise ConfigError("empty dimension list")
    return out


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bc", choices=["dirichlet", "neumann"], default="dirichlet")
    common.add_argument("--system", choices=["dot", "hydrogen"], default="dot")
    common.add_argument("--dims", type=str, default=None)
    common.add_argument("--n", type=int, default=1)
    common.add_argument("--l", type=int, default=0)
    common.add_argument("--alpha-min", type=float, default=None)
    common.add_argument("--alpha-max", type=float, default=None)
    common.add_argument("--alpha-points", type=int, default=41)
    common.add_argument("--alpha-log", action="store_true", help="geometric alpha spacing")
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--out", type=Path, default=None)
    common.add_argument("--cache", type=Path, default=None,
                        help="zero cache file (default: $HYPERDOT_CACHE_DIR/zeros.txt)")
    common.add_argument("--quick", action="store_true")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="hyperdot", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("table", parents=[common], help="per-dimension measure table (CSV)")
    fig = sub.add_parser("figure", parents=[common], help="figure data (CSV)")
    fig.add_argument("number", type=int, choices=[1, 2, 3, 4])
    chk = sub.add_parser("check", parents=[common], help="run the property suites")
    chk.add_argument("--inject-fault", choices=["threshold"], default=None,
                     help=argparse.SUPPRESS)
    zer = sub.add_parser("zeros", parents=[common], help="precompute and cache zeros")
    zer.add_argument("--count", type=int, default=20, help="zeros per (d, l)")
    return p


def config_from_args(argv: list[str] | None) -> RunConfig:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):
            raise
        raise ConfigError("invalid arguments") from exc
    default_dims = {"table": "2..10", "figure": "3..6", "check": "2..6", "zeros": "2..10"}
    cfg = RunConfig(
        command=ns.command, bc=ns.bc, system=ns.system,
        dims=parse_dims(ns.dims or default_dims[ns.command]), n=ns.n, l=ns.l,
        alpha_min=ns.alpha_min, alpha_max=ns.alpha_max, alpha_points=ns.alpha_points,
        alpha_log=ns.alpha_log, tol=ns.tol, out=ns.out, cache=ns.cache, quick=ns.quick,
        figure=getattr(ns, "number", None), zero_count=getattr(ns, "count", 20),
        inject_fault=getattr(ns, "inject_fault", None),
    )
    if ns.verbose:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    if ns.command == "figure" and cfg.system == "hydrogen" and cfg.figure in (2, 3):
        cfg.dims = [d for d in cfg.dims if d >= 3]
    if ns.command == "check" and ns.dims is None and ns.quick:
        cfg.dims = [3]
    cfg.validate()
    return cfg


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text)


def _cache_path(cfg: RunConfig) -> Path:
    return cfg.cache if cfg.cache is not None else default_cache_path()


# -- commands ---------------------------------------------------------------------------

def cmd_table(cfg: RunConfig) -> int:
    if cfg.system == "hydrogen":
        kind = SystemKind.HYDROGEN
    else:
        kind = SystemKind(cfg.bc)
    qn = QuantumNumbers(cfg.n, cfg.l)
    lines = [TABLE_HEADER]
    for d in cfg.dims:
        lines.append(measure_report(SystemSpec(kind, d), qn, cfg.tol).csv_row())
        log.info("table row d=%d done", d)
    _emit("\n".join(lines) + "\n", cfg.out)
    return EXIT_OK


def _alpha_grid(cfg: RunConfig, lo: float, hi: float) -> np.ndarray:
    a = cfg.alpha_min if cfg.alpha_min is not None else lo
    b = cfg.alpha_max if cfg.alpha_max is not None else hi
    if not a < b:
        raise ConfigError("need alpha-min < alpha-max")
    if cfg.alpha_log:
        return np.geomspace(a, b, cfg.alpha_points)
    return np.linspace(a, b, cfg.alpha_points)


def _figure_waveforms(cfg: RunConfig) -> str:
    rows = ["system,d,space,x,value"]
    ranges = {
        (True, Space.POSITION): (0.0, 1.0), (True, Space.MOMENTUM): (0.0, 20.0),
        (False, Space.POSITION): (0.0, 20.0), (False, Space.MOMENTUM): (0.0, 4.0),
    }
    systems = [SystemKind(cfg.bc), SystemKind.HYDROGEN]
    for kind in systems:
        for d in cfg.dims:
            if kind is SystemKind.HYDROGEN and d < 3:
                continue
            spec = SystemSpec(kind, d)
            for space in Space:
                lo, hi = ranges[(spec.is_dot, space)]
                xs = np.linspace(lo, hi, 201)
                vals = radial_profile(spec, QuantumNumbers(), space)(xs)
                rows += [f"{kind.value},{d},{space.value},{x:.12g},{v:.12g}" for x, v in zip(xs, vals)]
    return "\n".join(rows) + "\n"


def _figure_renyi(cfg: RunConfig, kind: SystemKind) -> tuple[str, str]:
    rows = ["system,d,alpha,beta,left,offset_left,right,status"]
    side = ["system,d,alpha_th,alpha_r,divergent_at"]
    qn = QuantumNumbers(cfg.n, cfg.l)
    for d in cfg.dims:
        system = SystemSpec(kind, d)
        a_th, a_r = thresholds(system, qn)
        side.append(f"{kind.value},{d},{a_th:.12g},{a_r:.12g},"
                    + (f"{a_r:.12g}" if math.isfinite(a_r) else ""))
        grid = _alpha_grid(cfg, 0.5, 3.0 if math.isinf(a_r) else a_r)
        if grid[0] < 0.5:
            log.warning("alpha grid clipped to [0.5, ...) for d=%d", d)
        if math.isfinite(a_r) and grid[-1] >= a_r:
            log.warning("alpha grid clipped below the divergence at %.6g for d=%d", a_r, d)
        offset = (d - 3) * math.log(2.0 * math.pi)
        for a in grid:
            a = float(a)
            if a < 0.5:
                continue
            if a >= a_r:
                rows.append(f"{kind.value},{d},{a:.12g},{conjugate_beta(a):.12g},inf,inf,"
                            f"{renyi_rhs(d, a):.12g},diverged")
                continue
            beta = math.inf if a == 0.5 else conjugate_beta(a)
            if kind is SystemKind.HYDROGEN and qn.is_ground and a > 0.5:
                left = hydrogen_closed_sum(d, a)
            else:
                left = renyi_sum(system, qn, a, cfg.tol).left
            status = "finite" if math.isfinite(left) else "diverged"
            rows.append(f"{kind.value},{d},{a:.12g},{beta:.12g},{left:.12g},{left - offset:.12g},"
                        f"{renyi_rhs(d, a):.12g},{status}")
    return "\n".join(rows) + "\n", "\n".join(side) + "\n"


def _figure_tsallis(cfg: RunConfig) -> str:
    system = SystemSpec(SystemKind(cfg.bc), 3 if not cfg.dims else cfg.dims[0])
    qn = QuantumNumbers(cfg.n, cfg.l)
    rows = ["alpha,beta,t_rho,t_gamma"]
    lo = max(cfg.alpha_min if cfg.alpha_min is not None else 0.5, 0.5)
    hi = min(cfg.alpha_max if cfg.alpha_max is not None else 1.0, 1.0)
    for a in np.linspace(lo, hi, cfg.alpha_points):
        tc = tsallis_sides(system, qn, float(a), cfg.tol)
        rows.append(f"{a:.12g},{tc.beta:.12g},{tc.left:.12g},{tc.right:.12g}")
    return "\n".join(rows) + "\n"


def cmd_figure(cfg: RunConfig) -> int:
    if cfg.figure == 1:
        _emit(_figure_waveforms(cfg), cfg.out)
    elif cfg.figure in (2, 3):
        kind = SystemKind.HYDROGEN if cfg.system == "hydrogen" else (
            SystemKind.DIRICHLET if cfg.figure == 2 else SystemKind.NEUMANN)
        data, side = _figure_renyi(cfg, kind)
        _emit(data, cfg.out)
        side_path = (cfg.out.with_suffix(".thresholds.csv") if cfg.out is not None else None)
        if side_path is None:
            sys.stdout.write("# thresholds\n")
        _emit(side, side_path)
    else:
        cfg.dims = cfg.dims if cfg.dims and cfg.dims != list(range(3, 7)) else [3]
        _emit(_figure_tsallis(cfg), cfg.out)
    return EXIT_OK


def cmd_check(cfg: RunConfig) -> int:
    fault = 0.01 if cfg.inject_fault == "threshold" else 0.0
    if cfg.quick:
        base = checks.CheckScale.quick()
        scale = checks.CheckScale(tuple(cfg.dims), base.n_max, base.l_max, base.alpha_points, fault)
    else:
        scale = checks.CheckScale(tuple(cfg.dims), threshold_fault=fault)
    rows = checks.run_checks(scale)
    text = checks.CSV_HEADER + "\n" + "\n".join(r.csv_row() for r in rows) + "\n"
    _emit(text, cfg.out)
    bad = [r for r in rows if not r.ok]
    for r in bad:
        log.error("violated: %s", r.csv_row())
    sys.stderr.write(f"{len(rows)} checks, {len(bad)} violated\n")
    return EXIT_COMPUTE if bad else EXIT_OK


def cmd_zeros(cfg: RunConfig) -> int:
    path = _cache_path(cfg)
    ZERO_TABLE.load(path)
    for d in cfg.dims:
        for l in range(cfg.l + 1):
            bessel_zeros(kernel_order(d, l), cfg.zero_count)
            neumann_zeros(d, l, cfg.zero_count)
    written = ZERO_TABLE.save(path)
    sys.stderr.write(f"{'wrote' if written else 'unchanged'} {path}\n")
    return EXIT_OK


COMMANDS = {"table": cmd_table, "figure": cmd_figure, "check": cmd_check, "zeros": cmd_zeros}


def main(argv: list[str] | None = None) -> int:
    try:
        cfg = config_from_args(argv)
    except ConfigError as exc:
        sys.stderr.write(f"hyperdot: configuration error: {exc}\n")
        return EXIT_CONFIG
    if cfg.command != "zeros" and cfg.cache is not None:
        ZERO_TABLE.load(cfg.cache)
    try:
        return COMMANDS[cfg.command](cfg)
    except ConfigError as exc:
        sys.stderr.write(f"hyperdot: configuration error: {exc}\n")
        return EXIT_CONFIG
    except DomainError as exc:
        sys.stderr.write(f"hyperdot: invalid input: {exc}\n")
        return EXIT_CONFIG
    except HyperdotError as exc:
        sys.stderr.write(f"hyperdot: computation failed: {exc}\n")
        return EXIT_COMPUTE


if __name__ == "__main__":
    raise SystemExit(main())
