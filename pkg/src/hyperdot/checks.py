"""Invariant and relation suites run by ``hyperdot check``.

Each check yields a :class:`CheckRow`; a run fails when any row is violated.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import HyperdotError
from .measures import (
    empirical_threshold,
    fisher_closed,
    fisher_quadrature,
    onicescu,
    renyi,
    thresholds,
)
from .systems import QuantumNumbers, Space, SystemKind, SystemSpec, fourier_consistency, overlap
from .uncertainty import Verdict, renyi_sum, shannon_check, tsallis_sides


@dataclass(frozen=True)
class CheckRow:
    suite: str
    item: str
    value: float
    limit: float
    ok: bool

    def csv_row(self) -> str:
        status = "ok" if self.ok else "violated"
        return f"{self.suite},{self.item},{self.value:.6g},{self.limit:.3g},{status}"


CSV_HEADER = "suite,item,value,limit,status"


@dataclass(frozen=True)
class CheckScale:
    dims: tuple[int, ...] = (2, 3, 4, 5, 6)
    n_max: int = 3
    l_max: int = 1
    alpha_points: int = 20
    threshold_fault: float = 0.0   # added to the claimed threshold (negative testing)

    @classmethod
    def quick(cls) -> CheckScale:
        return cls(dims=(3,), n_max=2, l_max=0, alpha_points=5)


def _dots(dims) -> Iterator[SystemSpec]:
    for kind in (SystemKind.DIRICHLET, SystemKind.NEUMANN):
        for d in dims:
            yield SystemSpec(kind, d)


def _hydrogens(dims) -> Iterator[SystemSpec]:
    for d in dims:
        if d >= 3:
            yield SystemSpec(SystemKind.HYDROGEN, d)


def _label(system: SystemSpec, qn: QuantumNumbers | None = None, extra: str = "") -> str:
    s = f"{system.kind.value}/d={system.d}"
    if qn is not None:
        s += f"/n={qn.n}/l={qn.l}"
    return s + (f"/{extra}" if extra else "")


def check_thresholds(scale: CheckScale) -> Iterator[CheckRow]:
    for system in itertools.chain(_dots(scale.dims), _hydrogens(scale.dims)):
        claimed = thresholds(system)[0] + scale.threshold_fault
        est = empirical_threshold(system)
        err = abs(est - claimed)
        yield CheckRow("threshold", _label(system), err, 1e-4, err < 1e-4)


def check_orthonormality(scale: CheckScale) -> Iterator[CheckRow]:
    for system in itertools.chain(_dots(scale.dims), _hydrogens(scale.dims)):
        for l in range(scale.l_max + 1):
            n_lo = l + 1 if system.kind is SystemKind.HYDROGEN else 1
            ns = range(n_lo, n_lo + scale.n_max)
            for space in Space:
                worst = 0.0
                for n1, n2 in itertools.combinations_with_replacement(ns, 2):
                    v = overlap(system, QuantumNumbers(n1, l), QuantumNumbers(n2, l), space)
                    worst = max(worst, abs(v - (1.0 if n1 == n2 else 0.0)))
                yield CheckRow("orthonormality", _label(system, None, f"l={l}/{space.value}"),
                               worst, 1e-8, worst < 1e-8)


def check_fourier(scale: CheckScale) -> Iterator[CheckRow]:
    grid = np.array([0.0, 0.7, 2.5, 6.0, 13.0])
    for system in _dots(scale.dims):
        for l in range(scale.l_max + 1):
            for n in range(1, scale.n_max + 1):
                qn = QuantumNumbers(n, l)
                r = fourier_consistency(system, qn, grid)
                yield CheckRow("fourier", _label(system, qn), r, 1e-8, r < 1e-8)


def check_fisher(scale: CheckScale) -> Iterator[CheckRow]:
    for system in _dots(scale.dims):
        for l in range(scale.l_max + 1):
            for n in range(1, scale.n_max + 1):
                qn = QuantumNumbers(n, l)
                for space in Space:
                    closed = fisher_closed(system, qn, space)
                    if closed is None:
                        continue
                    quad = fisher_quadrature(system, qn, space)
                    rel = abs(quad - closed) / max(abs(closed), 1e-300) if closed else abs(quad)
                    yield CheckRow("fisher", _label(system, qn, space.value), rel, 1e-7, rel < 1e-7)


def _alpha_grid(lo: float, hi: float, points: int) -> np.ndarray:
    return np.linspace(lo, hi, points)


def check_relations(scale: CheckScale) -> Iterator[CheckRow]:
    systems = list(itertools.chain(_dots(scale.dims), _hydrogens(scale.dims)))
    for system in systems:
        for n in range(1, scale.n_max + 1):
            qn = QuantumNumbers(n, 0)
            sc = shannon_check(system, qn)
            yield CheckRow("shannon", _label(system, qn), sc.slack, 0.0,
                           sc.verdict is not Verdict.VIOLATED)
            _, a_r = thresholds(system, qn)
            hi = min(a_r, 3.0)
            grid = _alpha_grid(0.5, hi, scale.alpha_points + 1)[:-1] if a_r <= 3.0 else \
                _alpha_grid(0.5, hi, scale.alpha_points)
            for a in grid:
                rc = renyi_sum(system, qn, float(a))
                ok = rc.verdict is not Verdict.VIOLATED
                if a == 0.5:
                    if n == 1:
                        ok = ok and rc.verdict is Verdict.IDENTITY
                    else:
                        ok = ok and rc.slack > 1e-3
                yield CheckRow("renyi", _label(system, qn, f"alpha={a:.4g}"), rc.slack, 0.0, ok)
            for a in _alpha_grid(0.5, 1.0, max(scale.alpha_points // 4, 3)):
                tc = tsallis_sides(system, qn, float(a))
                ok = tc.verdict is not Verdict.VIOLATED
                if a in (0.5, 1.0) and (n == 1 or a == 1.0):
                    ok = ok and tc.verdict is Verdict.IDENTITY
                yield CheckRow("tsallis", _label(system, qn, f"alpha={a:.4g}"), tc.slack, 0.0, ok)


def check_monotonicity(scale: CheckScale) -> Iterator[CheckRow]:
    for system in itertools.chain(_dots(scale.dims), _hydrogens(scale.dims)):
        for n in range(1, scale.n_max + 1):
            qn = QuantumNumbers(n, 0)
            for space in Space:
                lo = 0.05 if space is Space.POSITION else thresholds(system, qn)[0] * 1.05
                if system.kind is SystemKind.HYDROGEN and space is Space.POSITION:
                    lo = 0.2
                vals = [renyi(system, qn, space, float(a)).value
                        for a in np.geomspace(lo, 8.0, scale.alpha_points)]
                worst = max(np.diff(vals).max(), 0.0)
                yield CheckRow("monotonicity", _label(system, qn, space.value), worst, 1e-9,
                               worst <= 1e-9)


def check_identity_chain(scale: CheckScale) -> Iterator[CheckRow]:
    for system in itertools.chain(_dots(scale.dims), _hydrogens(scale.dims)):
        qn = QuantumNumbers()
        for space in Space:
            pt = renyi(system, qn, space, 2.0)
            o = float(onicescu(system, qn, space))
            a, b = math.exp(-pt.value), 1.0 - pt.tsallis
            gap = max(abs(a - o), abs(b - o)) / o if o > 1e-300 else abs(a - o)
            yield CheckRow("identity-chain", _label(system, qn, space.value), gap, 1e-9, gap < 1e-9)


SUITES: dict[str, Callable[[CheckScale], Iterator[CheckRow]]] = {
    "threshold": check_thresholds,
    "orthonormality": check_orthonormality,
    "fourier": check_fourier,
    "fisher": check_fisher,
    "relations": check_relations,
    "monotonicity": check_monotonicity,
    "identity-chain": check_identity_chain,
}


def run_checks(scale: CheckScale, suites=None) -> list[CheckRow]:
    """Run the named suites (all by default); computational errors become violated rows."""
    rows: list[CheckRow] = []
    for name in suites or SUITES:
        try:
            rows.extend(SUITES[name](scale))
        except HyperdotError as exc:
            rows.append(CheckRow(name, f"error: {exc}".replace(",", ";"), math.nan, 0.0, False))
    return rows
