"""Real-order Bessel functions of the first kind and the hyperspherical kernel.

Values of ``J_nu`` come from ``scipy.special.jv`` (AMOS).  Where ``J_nu(z)``
drops below ~1e-250 (small ``z`` against a large order) the ascending series is
summed in the log domain instead, so high-dimensional wavefunctions stay
representable.

The kernel used throughout is ``K_l^{(d)}(z) = J_nu(z) / z**(d/2 - 1)`` with
``nu = l + d/2 - 1``.  It is the hyperspherical Bessel function without its
constant prefactor; every normalized quantity depends on it only.
"""

from __future__ import annotations

import numpy as np
from scipy import special

from ..errors import DomainError

# below this radius the kernel is summed from its ascending series
KERNEL_SERIES_RADIUS = 1.0
_UNDERFLOW = 1e-250
_SERIES_TERMS = 60


def _as_array(z):
    arr = np.asarray(z, dtype=float)
    return arr, arr.ndim == 0


def _out(arr, scalar):
    return float(arr) if scalar else arr


def _check_order(nu: float) -> float:
    nu = float(nu)
    if not np.isfinite(nu) or nu < 0:
        raise DomainError(f"Bessel order must be finite and >= 0, got {nu}")
    return nu


def _check_arg(z: np.ndarray, strictly_positive: bool = False) -> None:
    if not np.all(np.isfinite(z)):
        raise DomainError("Bessel argument must be finite")
    if strictly_positive and np.any(z <= 0):
        raise DomainError("Bessel argument must be > 0")
    if np.any(z < 0):
        raise DomainError("Bessel argument must be >= 0")


def kernel_order(d: int, l: int) -> float:
    """Bessel order ``l + d/2 - 1`` of the d-dimensional radial kernel."""
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    if l < 0:
        raise DomainError(f"orbital index must be >= 0, got {l}")
    return l + d / 2.0 - 1.0


def _series_sum(nu: float, z: np.ndarray) -> np.ndarray:
    """``sum_k (-z^2/4)^k / (k! (nu+1)_k)``, the normalized ascending series."""
    q = -0.25 * z * z
    term = np.ones_like(z)
    total = np.ones_like(z)
    for k in range(1, _SERIES_TERMS):
        term = term * q / (k * (nu + k))
        total = total + term
        if np.all(np.abs(term) <= 1e-17 * np.abs(total)):
            break
    return total


def bessel_j(nu: float, z):
    """``J_nu(z)`` for real ``nu >= 0`` and ``z >= 0``."""
    nu = _check_order(nu)
    arr, scalar = _as_array(z)
    _check_arg(arr)
    return _out(special.jv(nu, arr), scalar)


def log_abs_bessel_j(nu: float, z):
    """Return ``(sign, log|J_nu(z)|)``; robust where ``J_nu`` underflows."""
    nu = _check_order(nu)
    arr, scalar = _as_array(z)
    _check_arg(arr)
    val = special.jv(nu, arr)
    sign = np.sign(val)
    with np.errstate(divide="ignore"):
        logabs = np.log(np.abs(val))
    tiny = (np.abs(val) < _UNDERFLOW) & (arr > 0) & (arr < max(nu, 1.0))
    if np.any(tiny):
        zt = arr[tiny]
        s = _series_sum(nu, zt)
        logabs[tiny] = nu * np.log(zt / 2.0) - special.gammaln(nu + 1.0) + np.log(np.abs(s))
        sign[tiny] = np.sign(s)
    if scalar:
        return float(sign), float(logabs)
    return sign, logabs


def bessel_j_deriv(nu: float, z):
    """``dJ_nu/dz``.  Undefined at ``z = 0`` for ``nu < 1``."""
    nu = _check_order(nu)
    arr, scalar = _as_array(z)
    _check_arg(arr)
    if nu >= 1.0:
        out = 0.5 * (special.jv(nu - 1.0, arr) - special.jv(nu + 1.0, arr))
    else:
        if np.any(arr == 0):
            raise DomainError("J_nu'(0) is undefined for nu < 1")
        out = (nu / arr) * special.jv(nu, arr) - special.jv(nu + 1.0, arr)
    return _out(out, scalar)


def bessel_j_derivatives(nu: float, z):
    """``(J, J', J'', J''')`` at ``z > 0``, higher orders from Bessel's equation."""
    nu = _check_order(nu)
    arr, scalar = _as_array(z)
    _check_arg(arr, strictly_positive=True)
    j0 = special.jv(nu, arr)
    j1 = (nu / arr) * j0 - special.jv(nu + 1.0, arr)
    c = 1.0 - (nu / arr) ** 2
    j2 = -j1 / arr - c * j0
    j3 = -j2 / arr + j1 / arr**2 - c * j1 - 2.0 * nu**2 / arr**3 * j0
    if scalar:
        return float(j0), float(j1), float(j2), float(j3)
    return j0, j1, j2, j3


def hankel_modulus_sq(nu: float, z):
    """``J_nu(z)**2 + Y_nu(z)**2``, the non-oscillating squared amplitude."""
    nu = _check_order(nu)
    arr, scalar = _as_array(z)
    _check_arg(arr, strictly_positive=True)
    return _out(special.jv(nu, arr) ** 2 + special.yv(nu, arr) ** 2, scalar)


def radial_kernel(d: int, l: int, z):
    """``J_nu(z) / z**(d/2-1)`` with the removable ``z -> 0`` limit built in."""
    nu = kernel_order(d, l)
    d1 = d / 2.0 - 1.0
    arr, scalar = _as_array(z)
    _check_arg(arr)
    out = np.empty_like(arr)
    small = arr < KERNEL_SERIES_RADIUS
    if np.any(small):
        zs = arr[small]
        lead = np.exp(-d1 * np.log(2.0) - special.gammaln(nu + 1.0))
        out[small] = lead * (zs / 2.0) ** l * _series_sum(nu, zs)
    big = ~small
    if np.any(big):
        zb = arr[big]
        out[big] = special.jv(nu, zb) / zb**d1
    return _out(out, scalar)


def log_abs_radial_kernel(d: int, l: int, z):
    """``(sign, log|K_l^{(d)}(z)|)`` of the kernel, valid for any dimension."""
    nu = kernel_order(d, l)
    d1 = d / 2.0 - 1.0
    arr, scalar = _as_array(z)
    _check_arg(arr)
    sign = np.zeros_like(arr)
    logabs = np.full_like(arr, -np.inf)
    small = arr < KERNEL_SERIES_RADIUS
    if np.any(small):
        zs = arr[small]
        s = _series_sum(nu, zs)
        with np.errstate(divide="ignore"):
            lg = l * np.log(zs / 2.0) if l > 0 else np.zeros_like(zs)
        logabs[small] = lg - d1 * np.log(2.0) - special.gammaln(nu + 1.0) + np.log(np.abs(s))
        sign[small] = np.where(np.isfinite(logabs[small]), np.sign(s), 0.0)
    big = ~small
    if np.any(big):
        zb = arr[big]
        sb, lb = log_abs_bessel_j(nu, zb)
        sign[big] = sb
        logabs[big] = lb - d1 * np.log(zb)
    if scalar:
        return float(sign), float(logabs)
    return sign, logabs


def radial_kernel_deriv(d: int, l: int, z):
    """Derivative of :func:`radial_kernel` via ``K_l' = -K_{l+1} + (l/z) K_l``."""
    kernel_order(d, l)
    arr, scalar = _as_array(z)
    _check_arg(arr, strictly_positive=True)
    out = -radial_kernel(d, l + 1, arr)
    if l > 0:
        out = out + (l / arr) * radial_kernel(d, l, arr)
    return _out(out, scalar)
