"""Normalized radial wavefunctions and energies of hyperspherical dots and d-dimensional hydrogen.

Everything is dimensionless: dot coordinates are ``r/a`` and ``k a``, hydrogen
coordinates ``r/r0`` and ``k r0``.  Profiles are evaluated in the log domain
(``sign, log|value|``) so that high-dimensional states neither overflow nor
underflow; :meth:`RadialProfile.physical` restores units.
"""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import special

from .errors import DomainError, WrongKindError
from .specfun import (
    bessel_zero,
    bessel_zeros,
    bessel_zeros_through,
    gegenbauer,
    kernel_order,
    laguerre,
    log_abs_radial_kernel,
    neumann_zero,
    neumann_zeros_through,
)

# Taylor patch radius around removable singularities, relative to the point
PATCH_RADIUS = 1e-4
# Semi-infinite momentum integrals are split at the first oscillation zero past this
MIN_CUT = 600.0

_LN2 = math.log(2.0)


class SystemKind(str, enum.Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"
    HYDROGEN = "hydrogen"


class Space(str, enum.Enum):
    POSITION = "position"
    MOMENTUM = "momentum"


@dataclass(frozen=True)
class SystemSpec:
    """Physical system: kind, dimensionality and characteristic length."""

    kind: SystemKind
    d: int
    length: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", SystemKind(self.kind))
        if int(self.d) != self.d:
            raise DomainError(f"dimension must be an integer, got {self.d}")
        lowest = 3 if self.kind is SystemKind.HYDROGEN else 2
        if self.d < lowest:
            raise DomainError(f"{self.kind.value} requires d >= {lowest}, got d={self.d}")
        if not (self.length > 0 and math.isfinite(self.length)):
            raise DomainError(f"length must be positive and finite, got {self.length}")

    @property
    def is_dot(self) -> bool:
        return self.kind is not SystemKind.HYDROGEN

    def with_length(self, length: float) -> SystemSpec:
        return SystemSpec(self.kind, self.d, length)


@dataclass(frozen=True)
class QuantumNumbers:
    """Radial index ``n >= 1`` and orbital index ``l >= 0``; ``m`` is always 0."""

    n: int = 1
    l: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"n must be >= 1, got {self.n}")
        if self.l < 0:
            raise DomainError(f"l must be >= 0, got {self.l}")

    @property
    def m(self) -> int:
        return 0

    @property
    def is_ground(self) -> bool:
        return self.n == 1 and self.l == 0


@dataclass(frozen=True)
class Oscillation:
    """Structure of a momentum profile that oscillates out to infinity.

    ``value(z)**2 = exp(log_envelope(z)) * cos(theta(z))**2`` exactly, where the
    phase advances by ``pi`` between consecutive zeros returned by
    ``zeros_through``.  For large ``z`` the envelope behaves as
    ``exp(log_a_inf) * z**-decay``.
    """

    zeros_through: Callable[[float], np.ndarray]
    log_envelope: Callable[[np.ndarray], np.ndarray]
    log_a_inf: float
    decay: float


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Normalized radial function: ``int value(x)**2 x**(d-1) dx = 1`` over ``[0, support)``.

    Attributes:
        system, qn, space: what the profile describes.
        support: 1.0 for dot positions, ``inf`` otherwise.
        log_eval: vectorized ``x -> (sign, log|value|)``.
        nodes: interior zeros of the profile (panel boundaries).
        singular_points: removable singularities handled by a Taylor patch.
        oscillation: tail structure for oscillating dot momentum profiles.
        decay: ``s`` with ``value**2 ~ z**-s`` at infinity (``inf`` when faster).
        log_a_inf: log of the coefficient of that power law, when algebraic.
        cut_hint: where a semi-infinite integration may switch to its tail.
    """

    system: SystemSpec
    qn: QuantumNumbers
    space: Space
    support: float
    log_eval: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]
    nodes: np.ndarray = field(default_factory=lambda: np.zeros(0))
    singular_points: tuple[float, ...] = ()
    oscillation: Oscillation | None = None
    decay: float = math.inf
    log_a_inf: float | None = None
    cut_hint: float | None = None
    deriv_eval: Callable[[np.ndarray], np.ndarray] | None = None

    @property
    def d(self) -> int:
        return self.system.d

    @property
    def weight_exponent(self) -> int:
        return self.system.d - 1

    @property
    def is_compact(self) -> bool:
        return math.isfinite(self.support)

    def log_abs(self, x):
        arr = np.asarray(x, dtype=float)
        if np.any(arr < 0) or np.any(arr > self.support):
            raise DomainError("profile evaluated outside its support")
        s, lg = self.log_eval(np.atleast_1d(arr))
        if arr.ndim == 0:
            return float(s[0]), float(lg[0])
        return s, lg

    def __call__(self, x):
        s, lg = self.log_abs(x)
        with np.errstate(over="ignore"):
            return s * np.exp(lg)

    def derivative(self, x):
        """d value / dx (analytic where available, otherwise a central difference)."""
        arr = np.asarray(x, dtype=float)
        if self.deriv_eval is not None:
            out = self.deriv_eval(np.atleast_1d(arr))
        else:
            xs = np.atleast_1d(arr)
            h = 1e-6 * np.maximum(1.0, xs)
            lo = np.maximum(xs - h, 0.0)
            hi = xs + h if not self.is_compact else np.minimum(xs + h, self.support)
            out = (self(hi) - self(lo)) / (hi - lo)
        return float(out[0]) if arr.ndim == 0 else out

    def physical(self, x):
        """Value in physical units at physical coordinate ``x`` (``r`` or ``k``)."""
        length = self.system.length
        d = self.system.d
        if self.space is Space.POSITION:
            return length ** (-d / 2.0) * self(np.asarray(x, dtype=float) / length)
        return length ** (d / 2.0) * self(np.asarray(x, dtype=float) * length)

    def breakpoints(self, upto: float) -> np.ndarray:
        """Sorted panel boundaries inside ``(0, upto)``: zeros and removable points."""
        pts = [np.asarray(self.nodes, dtype=float), np.asarray(self.singular_points, dtype=float)]
        if self.oscillation is not None:
            pts.append(self.oscillation.zeros_through(upto))
        allp = np.unique(np.concatenate(pts)) if pts else np.zeros(0)
        return allp[(allp > 0) & (allp < upto)]

    def tail_cut(self, minimum: float | None = None) -> float:
        """Start of the analytic tail: an oscillation zero at or beyond ``minimum``."""
        if self.is_compact:
            return self.support
        if self.oscillation is None:
            return float(max(self.cut_hint or 1.0, minimum or 0.0))
        lowest = max(minimum or 0.0, self.cut_hint or 0.0)
        zs = self.oscillation.zeros_through(lowest)
        return float(zs[-1])

    def log_max(self) -> tuple[float, float]:
        """Location and ``log|value|`` of the global maximum of ``|value|``."""
        from scipy.optimize import minimize_scalar

        hi = self.support if self.is_compact else self._search_extent()
        grid = np.linspace(0.0, hi, 4001)
        _, lg = self.log_eval(grid)
        i = int(np.argmax(lg))
        lo_b, hi_b = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
        if i == 0 and self.qn.l == 0:
            # l = 0 profiles peaking at the origin are flat there; the grid point is exact
            x0, best = 0.0, lg[0]
        else:
            res = minimize_scalar(lambda t: -self.log_eval(np.array([t]))[1][0],
                                  bounds=(lo_b, hi_b), method="bounded",
                                  options={"xatol": 1e-12 * max(1.0, hi_b)})
            x0, best = (float(res.x), -float(res.fun)) if -res.fun >= lg[i] else (grid[i], lg[i])
        return float(x0), float(best)

    def _search_extent(self) -> float:
        if self.system.kind is SystemKind.HYDROGEN:
            return float(self.cut_hint)
        pts = self.singular_points or (1.0,)
        return float(3.0 * max(pts) + 10.0)


# -- helpers --------------------------------------------------------------------

def _log_add(s1, l1, s2, l2):
    """Vectorized ``s1 e^l1 + s2 e^l2`` in (sign, log) form."""
    top = np.maximum(l1, l2)
    finite = np.isfinite(top)
    safe = np.where(finite, top, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        tot = s1 * np.exp(l1 - safe) + s2 * np.exp(l2 - safe)
    with np.errstate(divide="ignore"):
        lg = np.where(finite, safe + np.log(np.abs(tot)), -np.inf)
    return np.sign(tot) * finite, lg


def _bessel_derivs4(nu: float, z: float) -> tuple[float, float, float, float, float]:
    """``J, J', J'', J''', J''''`` at ``z > 0`` from Bessel's equation."""
    j0 = special.jv(nu, z)
    j1 = (nu / z) * j0 - special.jv(nu + 1.0, z)
    c = 1.0 - (nu / z) ** 2
    n2 = nu * nu
    j2 = -j1 / z - c * j0
    j3 = -j2 / z + j1 / z**2 - c * j1 - 2.0 * n2 * j0 / z**3
    j4 = (-j3 / z + 2.0 * j2 / z**2 - 2.0 * j1 / z**3 - 4.0 * n2 * j1 / z**3
          - c * j2 + 6.0 * n2 * j0 / z**4)
    return float(j0), float(j1), float(j2), float(j3), float(j4)


def _patched_ratio(q, z0, numer_log, taylor, d1):
    """``N(q) q**-d1 / (z0**2 - q**2)`` as (sign, log), Taylor-patched near ``z0``.

    ``numer_log`` returns (sign, log|N q**-d1|); ``taylor`` holds ``(N', N'', N''')``
    at the removable point ``z0``, where ``N(z0) = 0``.
    """
    sn, ln_ = numer_log(q)
    den = z0 * z0 - q * q
    with np.errstate(divide="ignore", invalid="ignore"):
        sign = sn * np.sign(den)
        logv = ln_ - np.log(np.abs(den))
    near = np.abs(q - z0) < PATCH_RADIUS * z0
    if np.any(near):
        dlt = q[near] - z0
        n1, n2, n3 = taylor
        val = -(n1 + n2 * dlt / 2.0 + n3 * dlt * dlt / 6.0) / (2.0 * z0 + dlt)
        sign[near] = np.sign(val)
        logv[near] = np.log(np.abs(val)) - d1 * np.log(q[near])
    return sign, logv


def _check_dot(spec: SystemSpec) -> None:
    if not spec.is_dot:
        raise WrongKindError("operation requires a Dirichlet or Neumann dot")


def _cut_hint(nu: float, z0: float) -> float:
    return max(MIN_CUT, 25.0 * nu + 100.0, 4.0 * z0)


# -- energies ---------------------------------------------------------------------

def dot_energy(spec: SystemSpec, qn: QuantumNumbers) -> float:
    """Dimensionless energy ``2 m a^2 E / hbar^2``: the squared Dirichlet or Neumann zero."""
    _check_dot(spec)
    nu = kernel_order(spec.d, qn.l)
    if spec.kind is SystemKind.DIRICHLET:
        return bessel_zero(nu, qn.n) ** 2
    return neumann_zero(spec.d, qn.l, qn.n) ** 2


def angular_density_l0(d: int) -> float:
    """``|Y_0|^2 = Gamma(d/2) / (2 pi^(d/2))``, the inverse unit-sphere area."""
    return math.exp(-log_sphere_area(d))


def log_sphere_area(d: int) -> float:
    """``ln Omega_{d-1}``, the log of the unit (d-1)-sphere area ``2 pi^(d/2)/Gamma(d/2)``."""
    if d < 2:
        raise DomainError(f"dimension must be >= 2, got {d}")
    return _LN2 + 0.5 * d * math.log(math.pi) - special.gammaln(d / 2.0)


def log_ball_volume(d: int) -> float:
    """``ln V_d`` of the unit d-ball."""
    return log_sphere_area(d) - math.log(d)


# -- dot profiles -----------------------------------------------------------------

def dot_position_radial(spec: SystemSpec, qn: QuantumNumbers) -> RadialProfile:
    """Normalized position radial function on ``x = r/a in [0, 1]``."""
    _check_dot(spec)
    d, l = spec.d, qn.l
    nu = kernel_order(d, l)
    d1 = d / 2.0 - 1.0

    if spec.kind is SystemKind.NEUMANN and qn.is_ground:
        logc = 0.5 * math.log(d)

        def log_eval(x):
            return np.ones_like(x), np.full_like(x, logc)

        def deriv(x):
            return np.zeros_like(x)
        return RadialProfile(spec, qn, Space.POSITION, 1.0, log_eval, deriv_eval=deriv)

    if spec.kind is SystemKind.DIRICHLET:
        k = bessel_zero(nu, qn.n)
        # sqrt(2) k^d1 K(kx) / |J_{nu+1}(k)|
        logc = 0.5 * _LN2 + d1 * math.log(k) - math.log(abs(special.jv(nu + 1.0, k)))
        inner = bessel_zeros(nu, qn.n)[:-1]
    else:
        k = neumann_zero(d, l, qn.n)
        big_l = l * (l + d - 2)
        logc = (0.5 * _LN2 + math.log(k) - 0.5 * math.log(k * k - big_l)
                - math.log(abs(special.jv(nu, k))) + d1 * math.log(k))
        zs = bessel_zeros_through(nu, k)
        inner = zs[zs < k]
    nodes = inner / k

    def log_eval(x):
        s, lg = log_abs_radial_kernel(d, l, k * x)
        return s, lg + logc

    def deriv(x):
        # d/dx [C K_l(kx)] = C k (-K_{l+1}(kx) + l/(kx) K_l(kx))
        s1, l1 = log_abs_radial_kernel(d, l + 1, k * x)
        out = -s1 * np.exp(l1 + logc + math.log(k))
        if l > 0:
            pos = x > 0
            s0, l0 = log_abs_radial_kernel(d, l, k * x[pos])
            out[pos] += s0 * np.exp(l0 + logc) * l / x[pos]
        return out

    return RadialProfile(spec, qn, Space.POSITION, 1.0, log_eval, nodes=nodes, deriv_eval=deriv)


def dot_momentum_radial(spec: SystemSpec, qn: QuantumNumbers) -> RadialProfile:
    """Normalized momentum radial function of ``z = k a`` on ``[0, inf)``."""
    _check_dot(spec)
    d, l = spec.d, qn.l
    nu = kernel_order(d, l)
    d1 = d / 2.0 - 1.0

    if spec.kind is SystemKind.NEUMANN and qn.is_ground:
        # sqrt(d) J_{d/2}(z) / z^{d/2}: the (d+2)-dimensional l=0 kernel
        logc = 0.5 * math.log(d)
        mu = d / 2.0

        def log_eval(z):
            s, lg = log_abs_radial_kernel(d + 2, 0, z)
            return s, lg + logc

        def log_env(z):
            return (math.log(d) + np.log(special.jv(mu, z) ** 2 + special.yv(mu, z) ** 2)
                    - d * np.log(z))

        osc = Oscillation(lambda zmax: bessel_zeros_through(mu, zmax), log_env,
                          math.log(2.0 * d / math.pi), d + 1.0)
        return RadialProfile(spec, qn, Space.MOMENTUM, math.inf, log_eval, oscillation=osc,
                             decay=d + 1.0, log_a_inf=osc.log_a_inf,
                             cut_hint=_cut_hint(mu, 1.0))

    if spec.kind is SystemKind.DIRICHLET:
        z0 = bessel_zero(nu, qn.n)
        sgn = 1.0 if special.jv(nu + 1.0, z0) > 0 else -1.0
        logc = 0.5 * _LN2 + math.log(z0)
        _, j1, j2, j3, _ = _bessel_derivs4(nu, z0)
        taylor = (j1, j2, j3)

        def numer_log(q):
            # J_nu(q)/q^d1 is the kernel; the q^-d1 factor is folded in there
            return log_abs_radial_kernel(d, l, q)

        def log_env(z):
            return (math.log(2.0 * z0 * z0)
                    + np.log(special.jv(nu, z) ** 2 + special.yv(nu, z) ** 2)
                    - 2.0 * np.log(np.abs(z0 * z0 - z * z)) - 2.0 * d1 * np.log(z))

        zeros_fn = (lambda zmax: bessel_zeros_through(nu, zmax))
        log_a_inf = math.log(4.0 * z0 * z0 / math.pi)
        decay = d + 3.0
    else:
        z0 = neumann_zero(d, l, qn.n)
        big_l = l * (l + d - 2)
        sgn = 1.0 if special.jv(nu, z0) > 0 else -1.0
        logc = 0.5 * _LN2 + math.log(z0) - 0.5 * math.log(z0 * z0 - big_l)
        jj = _bessel_derivs4(nu, z0)
        taylor = ((1 - d1) * jj[1] + z0 * jj[2],
                  (2 - d1) * jj[2] + z0 * jj[3],
                  (3 - d1) * jj[3] + z0 * jj[4])

        def numer_log(q):
            # g(q)/q^d1 = l K_l(q) - q K_{l+1}(q)
            s2, l2 = log_abs_radial_kernel(d, l + 1, q)
            with np.errstate(divide="ignore"):
                l2 = l2 + np.log(q)
            if l == 0:
                return -s2, l2
            s1, l1 = log_abs_radial_kernel(d, l, q)
            return _log_add(s1, l1 + math.log(l), -s2, l2)

        def log_env(z):
            w2 = ((l * special.jv(nu, z) - z * special.jv(nu + 1.0, z)) ** 2
                  + (l * special.yv(nu, z) - z * special.yv(nu + 1.0, z)) ** 2)
            return (2.0 * logc + np.log(w2) - 2.0 * np.log(np.abs(z0 * z0 - z * z))
                    - 2.0 * d1 * np.log(z))

        zeros_fn = (lambda zmax: neumann_zeros_through(d, l, zmax))
        log_a_inf = 2.0 * logc + math.log(2.0 / math.pi)
        decay = d + 1.0

    def log_eval(q):
        s, lg = _patched_ratio(q, z0, numer_log, taylor, d1)
        return sgn * s, lg + logc

    osc = Oscillation(zeros_fn, log_env, log_a_inf, decay)
    return RadialProfile(spec, qn, Space.MOMENTUM, math.inf, log_eval,
                         singular_points=(z0,), oscillation=osc, decay=decay,
                         log_a_inf=log_a_inf, cut_hint=_cut_hint(nu, z0))


# -- hydrogen ---------------------------------------------------------------------

def _check_hydrogen(spec: SystemSpec, qn: QuantumNumbers) -> float:
    if spec.kind is not SystemKind.HYDROGEN:
        raise WrongKindError("operation requires a hydrogen-like system")
    if qn.l > qn.n - 1:
        raise DomainError(f"hydrogen requires l <= n-1, got n={qn.n}, l={qn.l}")
    return 0.5 * (qn.n + (spec.d - 3) / 2.0)


def _log_poly(vals):
    with np.errstate(divide="ignore"):
        return np.sign(vals), np.log(np.abs(vals))


def hydrogen_position_radial(spec: SystemSpec, qn: QuantumNumbers) -> RadialProfile:
    """Normalized hydrogen position radial function of ``x = r/r0``."""
    lam = _check_hydrogen(spec, qn)
    d, n, l = spec.d, qn.n, qn.l
    deg, eta = n - l - 1, 2 * l + d - 2
    logc = (-0.5 * d * math.log(lam)
            + 0.5 * (special.gammaln(deg + 1) - math.log(4 * lam) - special.gammaln(n + l + d - 2)))

    def log_eval(x):
        y = x / lam
        s, lp = _log_poly(laguerre(deg, eta, y))
        with np.errstate(divide="ignore"):
            lg = logc - 0.5 * y + (l * np.log(y) if l > 0 else 0.0) + lp
        return s, lg

    def deriv(x):
        y = x / lam
        lag = laguerre(deg, eta, y)
        dlag = -laguerre(deg - 1, eta + 1, y) if deg > 0 else np.zeros_like(y)
        pw = y**l
        dpw = l * y ** (l - 1) if l > 0 else np.zeros_like(y)
        val = np.exp(logc - 0.5 * y) * (-0.5 * pw * lag + dpw * lag + pw * dlag)
        return val / lam

    if deg > 0:
        nodes = special.roots_genlaguerre(deg, eta)[0] * lam
    else:
        nodes = np.zeros(0)
    hint = (float(nodes[-1]) if len(nodes) else 0.0) + 2.0 * lam * (l + d) + 10.0 * lam
    return RadialProfile(spec, qn, Space.POSITION, math.inf, log_eval, nodes=nodes,
                         cut_hint=hint, deriv_eval=deriv)


def hydrogen_momentum_radial(spec: SystemSpec, qn: QuantumNumbers) -> RadialProfile:
    """Normalized hydrogen momentum radial function of ``z = k r0``."""
    lam = _check_hydrogen(spec, qn)
    d, n, l = spec.d, qn.n, qn.l
    deg, glam = n - l - 1, l + (d - 1) / 2.0
    logc = (0.5 * d * math.log(2 * lam) + (2 * l + d) * _LN2
            + 0.5 * (math.log(lam) + special.gammaln(deg + 1) - math.log(math.pi)
                     - special.gammaln(n + l + d - 2))
            + special.gammaln(glam))
    expo = l + (d + 1) / 2.0

    def log_eval(z):
        w = 2.0 * lam * z
        w2 = w * w
        y = (1.0 - w2) / (1.0 + w2)
        s, lp = _log_poly(gegenbauer(deg, glam, y))
        with np.errstate(divide="ignore"):
            lg = logc + (l * np.log(w) if l > 0 else 0.0) - expo * np.log1p(w2) + lp
        return s, lg

    if deg > 0:
        ys = special.roots_gegenbauer(deg, glam)[0]
        nodes = np.sort(np.sqrt((1.0 - ys) / (1.0 + ys)) / (2.0 * lam))
    else:
        nodes = np.zeros(0)
    decay = 2.0 * (l + d + 1)
    big = 1e8
    _, lg_big = log_eval(np.array([big]))
    log_a_inf = 2.0 * float(lg_big[0]) + decay * math.log(big)
    hint = ((float(nodes[-1]) if len(nodes) else 0.0) + 20.0 / (2.0 * lam))
    return RadialProfile(spec, qn, Space.MOMENTUM, math.inf, log_eval, nodes=nodes,
                         decay=decay, log_a_inf=log_a_inf, cut_hint=hint)


def radial_profile(spec: SystemSpec, qn: QuantumNumbers, space: Space | str) -> RadialProfile:
    """Dispatch to the profile constructor for the system kind and space."""
    space = Space(space)
    if spec.kind is SystemKind.HYDROGEN:
        if space is Space.POSITION:
            return hydrogen_position_radial(spec, qn)
        return hydrogen_momentum_radial(spec, qn)
    if space is Space.POSITION:
        return dot_position_radial(spec, qn)
    return dot_momentum_radial(spec, qn)


# -- checks and output ------------------------------------------------------------

def fourier_consistency(spec: SystemSpec, qn: QuantumNumbers, grid) -> float:
    """Max deviation between the analytic momentum profile and a direct transform.

    The transform ``int_0^1 R(x) K_l(z x) x^(d-1) dx`` uses the constant-free
    kernel.  It equals the momentum profile up to the conventional phase
    ``(-i)^l``, so the comparison allows one global sign.
    """
    from .quadrature import IntegrandSpec, integrate_finite

    _check_dot(spec)
    pos = dot_position_radial(spec, qn)
    mom = dot_momentum_radial(spec, qn)
    d, l = spec.d, qn.l
    nu = kernel_order(d, l)
    zs = np.atleast_1d(np.asarray(grid, dtype=float))
    direct = []
    for z in zs:
        pts = list(pos.nodes)
        if z > 0:
            kz = bessel_zeros_through(nu, z)
            pts += list(kz[kz < z] / z)
        pts = np.unique(np.array(pts, dtype=float))

        def f(x, z=z):
            return pos(x) * _kernel_plain(d, l, z * x) * x ** (d - 1)
        res = integrate_finite(IntegrandSpec(f, 0.0, 1.0, points=pts, mode="plain"),
                               tol_rel=1e-13)
        direct.append(float(res.value))
    direct = np.array(direct)
    target = mom(zs)
    return float(min(np.max(np.abs(direct - target)), np.max(np.abs(direct + target))))


def _kernel_plain(d, l, z):
    s, lg = log_abs_radial_kernel(d, l, z)
    return s * np.exp(lg)


def profile_csv(profile: RadialProfile, xs) -> str:
    """``x,value`` rows with 12 significant digits."""
    xs = np.asarray(xs, dtype=float)
    vals = profile(xs)
    buf = io.StringIO()
    buf.write("x,value\n")
    for x, v in zip(xs, vals):
        buf.write(f"{x:.12g},{v:.12g}\n")
    return buf.getvalue()


def overlap(spec: SystemSpec, qn1: QuantumNumbers, qn2: QuantumNumbers, space: Space | str,
            tol: float = 1e-12) -> float:
    """``int value_1 value_2 x^(d-1) dx`` for two states of the same system.

    Momentum profiles of dots with equal ``l`` share their oscillating factor,
    so the product's tail is one ``cos^2`` term with envelope
    ``sqrt(E_1 E_2)``.
    """
    from .quadrature import IntegrandSpec, TailTerm, integrate_profile, power_means

    space = Space(space)
    p1, p2 = radial_profile(spec, qn1, space), radial_profile(spec, qn2, space)
    we = p1.weight_exponent

    def func(x):
        s1, l1 = p1.log_eval(x)
        s2, l2 = p2.log_eval(x)
        with np.errstate(divide="ignore"):
            lw = np.where(x > 0, we * np.log(np.where(x > 0, x, 1.0)), 0.0 if we == 0 else -np.inf)
        return s1 * s2, l1 + l2 + lw

    if p1.is_compact:
        pts = np.concatenate([p1.nodes, p2.nodes])
        spec_i = IntegrandSpec(func, 0.0, 1.0, points=pts, mode="log")
        return float(integrate_profile(spec_i, tol).value)

    lowest = max(p1.cut_hint or 0.0, p2.cut_hint or 0.0)
    o1, o2 = p1.oscillation, p2.oscillation
    if o1 is not None and o2 is not None:
        if qn1.l != qn2.l:
            raise DomainError("oscillating overlap needs equal l")
        cut = p1.tail_cut(lowest)
        probe = np.array([cut * (1.0 + 1e-3)])
        sign = int(func(probe)[0][0]) or 1
        hbar, m2 = power_means(1.0)

        def log_env(z):
            return 0.5 * (o1.log_envelope(z) + o2.log_envelope(z)) + we * np.log(z)
        term = TailTerm(log_env, sign, hbar, m2, 0.5 * (o1.decay + o2.decay) - we,
                        0.5 * (o1.log_a_inf + o2.log_a_inf))
    else:
        cut = max(p1.tail_cut(lowest), p2.tail_cut(lowest))
        sign = int(func(np.array([cut]))[0][0]) or 1
        power = log_c0 = None
        if math.isfinite(p1.decay) and p1.log_a_inf is not None and p2.log_a_inf is not None:
            power = 0.5 * (p1.decay + p2.decay) - we
            log_c0 = 0.5 * (p1.log_a_inf + p2.log_a_inf)

        def log_env(z):
            return func(z)[1]
        term = TailTerm(log_env, sign, 1.0, 0.0, power, log_c0)
    pts = np.concatenate([p1.breakpoints(cut), p2.breakpoints(cut)])
    spec_i = IntegrandSpec(func, 0.0, math.inf, points=pts, mode="log", cut=cut, tail=(term,))
    return float(integrate_profile(spec_i, tol).value)
