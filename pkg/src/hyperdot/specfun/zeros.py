"""Zeros of ``J_nu`` and of the hyperspherical kernel derivative.

Zeros are located by an ordered sign-change scan (consecutive zeros of these
functions are always more than two units apart, so a half-unit grid cannot
skip one), which fixes the index ``n`` unambiguously.  Asymptotic formulas
only seed the bracketed Newton polish; every returned zero passes a residual
check.
"""

from __future__ import annotations

import math
import os
import threading
from pathlib import Path
from typing import Callable

import numpy as np
from scipy import special

from ..errors import ConvergenceError, DomainError
from .bessel import _check_order, kernel_order

FUNCTION_ZERO = "function-zero"
NEUMANN_ZERO = "neumann-derivative-zero"
CACHE_HEADER = "hyperdot-zeros v1"
CACHE_ENV = "HYPERDOT_CACHE_DIR"
CACHE_FILENAME = "zeros.txt"

_SCAN_STEP = 0.5
_RESIDUAL_TOL = 1e-12


class ZeroTable:
    """Per-key arrays of the first N zeros, shared across threads.

    Readers never lock; writers replace whole arrays under a lock, keeping the
    longer array when two threads computed the same key.
    """

    def __init__(self):
        self._data: dict[tuple, np.ndarray] = {}
        self._lock = threading.Lock()

    def get(self, key: tuple, count: int) -> np.ndarray | None:
        arr = self._data.get(key)
        if arr is None or len(arr) < count:
            return None
        return arr[:count]

    def get_through(self, key: tuple, zmax: float) -> np.ndarray | None:
        arr = self._data.get(key)
        if arr is None or len(arr) == 0 or arr[-1] < zmax:
            return None
        stop = int(np.searchsorted(arr, zmax, side="left")) + 1
        return arr[:stop]

    def put(self, key: tuple, values: np.ndarray) -> None:
        values = np.array(values, dtype=float)
        values.setflags(write=False)
        with self._lock:
            old = self._data.get(key)
            if old is None or len(values) > len(old):
                self._data[key] = values

    def keys(self):
        return list(self._data)

    def clear(self) -> None:
        with self._lock:
            self._data.clear()

    def __len__(self) -> int:
        return sum(len(v) for v in self._data.values())

    # -- persistence -------------------------------------------------------
    def dumps(self) -> str:
        """Cache file text: one ``kind,label,n,value`` row per zero (17 digits)."""
        lines = [CACHE_HEADER]
        with self._lock:
            items = sorted(self._data.items(), key=lambda kv: (kv[0][0], kv[0][1:]))
        for key, values in items:
            kind = key[0]
            label = repr(float(key[1])) if kind == FUNCTION_ZERO else f"{key[1]}:{key[2]}"
            for n, value in enumerate(values, start=1):
                lines.append(f"{kind},{label},{n},{value:.17g}")
        return "\n".join(lines) + "\n"

    def save(self, path: str | os.PathLike) -> bool:
        """Write atomically; returns False (file untouched) when the content is unchanged."""
        text = self.dumps()
        path = Path(path)
        try:
            if path.read_text() == text:
                return False
        except OSError:
            pass
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(path.suffix + ".tmp")
        tmp.write_text(text)
        tmp.replace(path)
        return True

    def load(self, path: str | os.PathLike) -> bool:
        """Merge a cache file; returns False (and loads nothing) if it is unusable."""
        try:
            text = Path(path).read_text()
        except OSError:
            return False
        rows = text.splitlines()
        if not rows or rows[0].strip() != CACHE_HEADER:
            return False
        parsed: dict[tuple, list[tuple[int, float]]] = {}
        try:
            for row in rows[1:]:
                if not row.strip():
                    continue
                kind, label, n, value = row.split(",")
                if kind == FUNCTION_ZERO:
                    key = (kind, float(label))
                elif kind == NEUMANN_ZERO:
                    d, l = label.split(":")
                    key = (kind, int(d), int(l))
                else:
                    return False
                parsed.setdefault(key, []).append((int(n), float(value)))
        except ValueError:
            return False
        for key, items in parsed.items():
            items.sort()
            if [n for n, _ in items] != list(range(1, len(items) + 1)):
                return False
            values = np.array([v for _, v in items])
            if np.any(np.diff(values) <= 0) or not np.all(np.isfinite(values)):
                return False
            self.put(key, values)
        return True


ZERO_TABLE = ZeroTable()


def default_cache_path() -> Path:
    root = os.environ.get(CACHE_ENV) or Path.home() / ".cache" / "hyperdot"
    return Path(root) / CACHE_FILENAME


# -- root polishing ----------------------------------------------------------

def _polish(f: Callable, fprime: Callable, a: np.ndarray, b: np.ndarray,
            guess: np.ndarray) -> np.ndarray:
    """Safeguarded Newton inside sign-change brackets ``[a, b]`` (vectorized)."""
    fa = f(a)
    x = np.where((guess > a) & (guess < b), guess, 0.5 * (a + b))
    for _ in range(200):
        fx = f(x)
        same = np.sign(fx) == np.sign(fa)
        a = np.where(same, x, a)
        fa = np.where(same, fx, fa)
        b = np.where(same, b, x)
        with np.errstate(divide="ignore", invalid="ignore"):
            step = fx / fprime(x)
        xn = x - step
        bad = ~np.isfinite(xn) | (xn <= a) | (xn >= b)
        xn = np.where(bad, 0.5 * (a + b), xn)
        done = (np.abs(xn - x) <= 4 * np.finfo(float).eps * np.abs(x)) | (fx == 0)
        x = np.where(fx == 0, x, xn)
        if np.all(done):
            break
    else:
        raise ConvergenceError("zero polishing did not converge")
    return x


def _verify(f, fprime, roots: np.ndarray, what: str) -> None:
    scale = np.maximum(1.0, np.abs(fprime(roots)) * roots)
    resid = np.abs(f(roots))
    if np.any(resid >= _RESIDUAL_TOL * scale):
        worst = int(np.argmax(resid / scale))
        raise ConvergenceError(
            f"{what}: residual {resid[worst]:.3e} at z={roots[worst]!r} exceeds tolerance")
    if np.any(np.diff(roots) <= 0):
        raise ConvergenceError(f"{what}: zeros are not strictly increasing")


def _scan(f, fprime, start: float, count: int | None = None, zmax: float | None = None,
          guesser: Callable[[np.ndarray], np.ndarray] | None = None,
          what: str = "zeros") -> np.ndarray:
    """First ``count`` zeros of ``f`` above ``start`` (or all through ``zmax``)."""
    lo_list, hi_list = [], []
    x0 = float(start)
    f0 = float(f(np.array([x0]))[0])
    if f0 == 0.0:
        # start is never a zero for the callers here; nudge to stay safe
        x0 = math.nextafter(x0, math.inf)
        f0 = float(f(np.array([x0]))[0])
    s0 = np.sign(f0)
    if s0 == 0:
        raise ConvergenceError(f"{what}: cannot determine sign at scan start")

    def enough() -> bool:
        if count is not None:
            return len(lo_list) >= count
        return bool(hi_list) and hi_list[-1] >= zmax

    chunk = 512
    while not enough():
        xs = x0 + _SCAN_STEP * np.arange(1, chunk + 1)
        fs = f(xs)
        signs = np.sign(fs)
        prev = s0
        # an exact zero on a grid point counts as a sign change at that point
        lefts = np.concatenate(([x0], xs[:-1]))
        for i in range(len(xs)):
            si = signs[i]
            if si == 0:
                si = -prev
            if si != prev:
                lo_list.append(lefts[i])
                hi_list.append(xs[i])
                prev = si
                if enough():
                    break
        x0, s0 = float(xs[-1]), prev
        if np.sign(fs[-1]) != 0:
            s0 = np.sign(fs[-1])
        chunk = min(chunk * 2, 1 << 16)
    a = np.array(lo_list)
    b = np.array(hi_list)
    guess = guesser(np.arange(1, len(a) + 1)) if guesser else 0.5 * (a + b)
    roots = _polish(f, fprime, a, b, guess)
    _verify(f, fprime, roots, what)
    return roots


# -- Bessel zeros -------------------------------------------------------------

def _mcmahon(nu: float, k: np.ndarray) -> np.ndarray:
    mu = 4.0 * nu * nu
    beta = (k + 0.5 * nu - 0.25) * np.pi
    e = 8.0 * beta
    return (beta - (mu - 1) / e - 4 * (mu - 1) * (7 * mu - 31) / (3 * e**3)
            - 32 * (mu - 1) * (83 * mu**2 - 982 * mu + 3779) / (15 * e**5))


def _bessel_guess(nu: float, k: np.ndarray) -> np.ndarray:
    guess = _mcmahon(nu, k.astype(float))
    if nu > 20:
        first = nu + 1.8557571 * nu ** (1 / 3) + 1.033150 * nu ** (-1 / 3)
        guess = np.where(k == 1, first, guess)
    return guess


def _bessel_funcs(nu: float):
    def f(z):
        return special.jv(nu, z)

    def fp(z):
        return (nu / z) * special.jv(nu, z) - special.jv(nu + 1.0, z)
    return f, fp


def _compute_bessel_zeros(nu: float, count=None, zmax=None) -> np.ndarray:
    f, fp = _bessel_funcs(nu)
    return _scan(f, fp, start=nu, count=count, zmax=zmax,
                 guesser=lambda k: _bessel_guess(nu, k), what=f"zeros of J_{nu}")


def bessel_zeros(nu: float, count: int, table: ZeroTable = ZERO_TABLE) -> np.ndarray:
    """First ``count`` positive zeros ``j_{nu,1..count}``."""
    nu = _check_order(nu)
    if count < 1:
        raise DomainError("count must be >= 1")
    key = (FUNCTION_ZERO, nu)
    hit = table.get(key, count)
    if hit is not None:
        return hit
    est = max(count, 16)
    roots = _compute_bessel_zeros(nu, count=est)
    table.put(key, roots)
    return roots[:count]


def bessel_zeros_through(nu: float, zmax: float, table: ZeroTable = ZERO_TABLE) -> np.ndarray:
    """Zeros of ``J_nu`` up to and including the first one ``>= zmax``."""
    nu = _check_order(nu)
    key = (FUNCTION_ZERO, nu)
    hit = table.get_through(key, zmax)
    if hit is not None:
        return hit
    roots = _compute_bessel_zeros(nu, zmax=zmax)
    table.put(key, roots)
    return roots


def bessel_zero(nu: float, n: int, table: ZeroTable = ZERO_TABLE) -> float:
    """``j_{nu,n}``, the n-th positive zero of ``J_nu``."""
    if n < 1:
        raise DomainError(f"zero index must be >= 1, got {n}")
    return float(bessel_zeros(nu, n, table)[n - 1])


# -- Neumann (kernel-derivative) zeros ---------------------------------------

def _neumann_funcs(d: int, l: int):
    nu = kernel_order(d, l)
    d1 = d / 2.0 - 1.0

    def f(z):
        return l * special.jv(nu, z) - z * special.jv(nu + 1.0, z)

    def fp(z):
        return (l * nu / z - z) * special.jv(nu, z) + d1 * special.jv(nu + 1.0, z)
    return f, fp


def _compute_neumann_zeros(d: int, l: int, count=None, zmax=None) -> np.ndarray:
    f, fp = _neumann_funcs(d, l)
    start = math.sqrt(l * (l + d - 2))
    return _scan(f, fp, start=start, count=count, zmax=zmax,
                 what=f"Neumann zeros (d={d}, l={l})")


def neumann_zeros(d: int, l: int, count: int, table: ZeroTable = ZERO_TABLE) -> np.ndarray:
    """First ``count`` zeros ``a_{l,n}^{(d)}`` of the kernel derivative.

    For ``l = 0`` the list starts with the trivial zero 0.
    """
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    if l < 0 or count < 1:
        raise DomainError("need l >= 0 and count >= 1")
    if l == 0:
        if count == 1:
            return np.zeros(1)
        return np.concatenate(([0.0], bessel_zeros(d / 2.0, count - 1, table)))
    key = (NEUMANN_ZERO, int(d), int(l))
    hit = table.get(key, count)
    if hit is not None:
        return hit
    roots = _compute_neumann_zeros(d, l, count=max(count, 16))
    table.put(key, roots)
    return roots[:count]


def neumann_zeros_through(d: int, l: int, zmax: float, table: ZeroTable = ZERO_TABLE) -> np.ndarray:
    """Nonzero Neumann zeros up to and including the first one ``>= zmax``."""
    if l == 0:
        return bessel_zeros_through(d / 2.0, zmax, table)
    key = (NEUMANN_ZERO, int(d), int(l))
    hit = table.get_through(key, zmax)
    if hit is not None:
        return hit
    roots = _compute_neumann_zeros(d, l, zmax=zmax)
    table.put(key, roots)
    return roots


def neumann_zero(d: int, l: int, n: int, table: ZeroTable = ZERO_TABLE) -> float:
    """``a_{l,n}^{(d)}``: root of ``l J_nu(z) = z J_{nu+1}(z)``, ``nu = l + d/2 - 1``."""
    if n < 1:
        raise DomainError(f"zero index must be >= 1, got {n}")
    return float(neumann_zeros(d, l, n, table)[n - 1])
