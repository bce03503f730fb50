"""Classical orthogonal polynomials and Gamma-family functions."""

from __future__ import annotations

import numpy as np
from scipy import special

from ..errors import DomainError


def gegenbauer(n: int, lam: float, x):
    """Gegenbauer polynomial ``C_n^lam(x)`` by forward three-term recurrence.

    ``(k+1) C_{k+1} = 2 (k + lam) x C_k - (k + 2 lam - 1) C_{k-1}``.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if lam <= 0:
        raise DomainError(f"lambda must be > 0, got {lam}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = 2.0 * lam * x
    for k in range(1, n):
        prev, cur = cur, (2.0 * (k + lam) * x * cur - (k + 2.0 * lam - 1.0) * prev) / (k + 1)
    return cur if x.ndim else float(cur)


def laguerre(n: int, eta: float, x):
    """Generalized Laguerre polynomial ``L_n^eta(x)`` by forward recurrence.

    ``(k+1) L_{k+1} = (2k + 1 + eta - x) L_k - (k + eta) L_{k-1}``.
    """
    if n < 0:
        raise DomainError(f"degree must be >= 0, got {n}")
    if eta <= -1:
        raise DomainError(f"eta must be > -1, got {eta}")
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if n == 0:
        return prev if x.ndim else float(prev)
    cur = eta + 1.0 - x
    for k in range(1, n):
        prev, cur = cur, ((2 * k + 1 + eta - x) * cur - (k + eta) * prev) / (k + 1)
    return cur if x.ndim else float(cur)


def _positive(x):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise DomainError("argument must be finite and > 0")
    return arr


def ln_gamma(x):
    """``ln Gamma(x)`` for ``x > 0``."""
    arr = _positive(x)
    out = special.gammaln(arr)
    return out if arr.ndim else float(out)


def digamma(x):
    """``psi(x) = Gamma'(x)/Gamma(x)`` for ``x > 0``."""
    arr = _positive(x)
    out = special.psi(arr)
    return out if arr.ndim else float(out)
