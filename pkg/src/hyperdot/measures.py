"""Position and momentum information measures of single states.

All integrals are done on the dimensionless profiles; the characteristic
length of the :class:`~hyperdot.systems.SystemSpec` is applied afterwards
through the exact scaling laws (``S -> S +- d ln L``, ``I -> I L^-+2``,
``O -> O L^-+d``).  For ``l = 0`` the angular part is the constant
``1/Omega`` and is folded in analytically; for ``l > 0`` radial-only values
are returned and flagged.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivergenceError, DomainError, WrongKindError
from .quadrature import (
    DEFAULT_TOL,
    IntegrandSpec,
    TailTerm,
    expectation_moment,
    integrate_finite,
    integrate_profile,
    log_power_means,
    power_means,
    profile_integrand,
)
from .specfun.logreal import LogReal
from .systems import (
    QuantumNumbers,
    RadialProfile,
    Space,
    SystemKind,
    SystemSpec,
    dot_energy,
    log_ball_volume,
    log_sphere_area,
    radial_profile,
)

SHANNON_SWITCH = 1e-6   # |alpha - 1| below this uses the expansion about Shannon


class Status(str, enum.Enum):
    FINITE = "finite"
    DIVERGED = "diverged"
    BELOW_THRESHOLD = "below-threshold"


@dataclass(frozen=True)
class RenyiPoint:
    """Rényi entropy of one component at one parameter value."""

    alpha: float
    space: Space
    value: float
    status: Status = Status.FINITE
    radial_only: bool = False

    @property
    def finite(self) -> bool:
        return self.status is Status.FINITE

    @property
    def tsallis(self) -> float:
        """Tsallis entropy ``(1 - exp((1-alpha) R)) / (alpha - 1)`` from this point."""
        if not self.finite:
            return math.nan
        a = self.alpha
        if a == 1.0:
            return self.value
        if math.isinf(a):
            return 0.0 if self.value >= 0 else math.inf
        x = (1.0 - a) * self.value
        if x > 700:
            return math.copysign(math.inf, -1.0 / (a - 1.0))
        return -math.expm1(x) / (a - 1.0)


def default_tol(d: int) -> float:
    if d <= 10:
        return DEFAULT_TOL
    if d <= 50:
        return 1e-9
    return 1e-7


@lru_cache(maxsize=512)
def _cached_profile(kind: SystemKind, d: int, n: int, l: int, space: Space) -> RadialProfile:
    return radial_profile(SystemSpec(kind, d), QuantumNumbers(n, l), space)


def profile_for(system: SystemSpec, qn: QuantumNumbers, space: Space | str) -> RadialProfile:
    """Dimensionless profile (cached; independent of the system length)."""
    return _cached_profile(system.kind, system.d, qn.n, qn.l, Space(space))


def _angular(qn: QuantumNumbers, d: int) -> float:
    """``ln Omega`` for l = 0, else 0 (radial-only)."""
    return log_sphere_area(d) if qn.l == 0 else 0.0


def _length_sign(space: Space) -> int:
    return 1 if space is Space.POSITION else -1


# -- thresholds ----------------------------------------------------------------------

def thresholds(system: SystemSpec, qn: QuantumNumbers | None = None) -> tuple[float, float]:
    """``(alpha_TH, alpha_R)``: existence threshold of momentum Rényi/Tsallis entropies
    and the upper edge of the Rényi uncertainty relation (``inf`` if none)."""
    d = system.d
    if system.kind is SystemKind.DIRICHLET:
        return d / (d + 3.0), (d / (d - 3.0) if d > 3 else math.inf)
    if system.kind is SystemKind.NEUMANN:
        return d / (d + 1.0), d / (d - 1.0)
    l = qn.l if qn is not None else 0
    return 0.5 * d / (d + l + 1.0), math.inf


def partial_power_integral(profile: RadialProfile, alpha: float, upto: float,
                           lo: float = 0.0, tol: float = 1e-11) -> float:
    """``int_lo^upto |value|^(2 alpha) x^(d-1) dx`` with no tail model."""
    spec = profile_integrand(profile, 2.0 * alpha, cut=upto)
    edges = profile.breakpoints(upto)
    spec = IntegrandSpec(spec.func, lo, upto, points=edges, mode="log")
    return float(integrate_finite(spec, tol_rel=tol).value)


def cutoff_trend(system: SystemSpec, qn: QuantumNumbers, alpha: float,
                 cuts=(1e2, 1e3, 1e4, 1e5)) -> list[float]:
    """Truncated momentum integrals of ``gamma^alpha`` at increasing cutoffs."""
    prof = profile_for(system, qn, Space.MOMENTUM)
    out, acc, lo = [], 0.0, 0.0
    for z in cuts:
        acc += partial_power_integral(prof, alpha, z, lo)
        out.append(acc)
        lo = z
    return out


def empirical_threshold(system: SystemSpec, qn: QuantumNumbers | None = None,
                        z: float = 2000.0) -> float:
    """Existence threshold ``d / s`` with ``s`` fitted from the momentum density's decay.

    Two adjacent windows ``[a, b]``, ``[b, c]`` with ``c/b = b/a ~ 2`` (snapped to
    zeros of the oscillating factor) are integrated and the power law
    ``x^k`` whose window integrals have the same ratio is solved for.
    """
    from scipy.optimize import brentq

    qn = qn or QuantumNumbers()
    prof = profile_for(system, qn, Space.MOMENTUM)
    if prof.oscillation is not None:
        zs = prof.oscillation.zeros_through(4.5 * z)
        pick = lambda t: float(zs[np.searchsorted(zs, t)])  # noqa: E731
        a, b, c = pick(z), pick(2 * z), pick(4 * z)
    else:
        a, b, c = z, 2 * z, 4 * z
    w1 = partial_power_integral(prof, 1.0, b, a)
    w2 = partial_power_integral(prof, 1.0, c, b)
    ratio = w2 / w1

    def gap(k):
        if abs(k) < 1e-12:
            return math.log(c / b) / math.log(b / a) - ratio
        return (c**k - b**k) / (b**k - a**k) - ratio
    k = brentq(gap, -40.0, -1e-9, xtol=1e-14)
    s = system.d - k
    return system.d / s


# -- log-type functionals ------------------------------------------------------------

def _xlog_spec(profile: RadialProfile, power: int, tol_cut: float | None = None) -> IntegrandSpec:
    """``int R^2 (ln R^2)^power x^(d-1) dx`` as an integrand spec (power 1 or 2)."""
    we = profile.weight_exponent

    def func(x):
        s, lg = profile.log_eval(x)
        live = (s != 0) & np.isfinite(lg)
        l2 = np.where(live, 2.0 * lg, 0.0)
        with np.errstate(divide="ignore"):
            out_l = np.where(live, l2 + power * np.log(np.abs(l2)), -np.inf)
            lw = np.where(x > 0, we * np.log(np.where(x > 0, x, 1.0)), 0.0 if we == 0 else -np.inf)
        sign = np.where(live, np.sign(l2) ** power, 0.0)
        return sign, out_l + lw

    if profile.is_compact:
        return IntegrandSpec(func, 0.0, profile.support, points=profile.nodes, mode="log")

    z_cut = profile.tail_cut(tol_cut)
    osc = profile.oscillation
    terms: list[TailTerm] = []
    if osc is not None:
        log_tilde = float(osc.log_envelope(np.array([z_cut]))[0])
        if log_tilde >= 0:
            raise DomainError("envelope not small at the tail cut; raise the cut")
        p_env = osc.decay - we

        def env(z):
            return osc.log_envelope(z) + we * np.log(z)

        def env_log(z, k):
            return env(z) + k * np.log(np.abs(osc.log_envelope(z)))

        sg_tilde = -1  # ln E~ < 0 beyond the cut
        m_c2 = power_means(1.0)
        m_c2l = log_power_means(1)
        if power == 1:
            # E c^2 (ln E~ + ln c^2)
            terms.append(TailTerm(lambda z: env_log(z, 1), sg_tilde, *m_c2))
            terms.append(TailTerm(env, 1, *m_c2l, power=p_env, log_c0=osc.log_a_inf))
        else:
            # E c^2 (ln^2 E~ + 2 ln E~ ln c^2 + ln^2 c^2)
            terms.append(TailTerm(lambda z: env_log(z, 2), 1, *m_c2))
            terms.append(TailTerm(lambda z: env_log(z, 1) + math.log(2.0), sg_tilde, *m_c2l))
            terms.append(TailTerm(env, 1, *log_power_means(2), power=p_env, log_c0=osc.log_a_inf))
    else:
        s_cut, l_cut = func(np.array([z_cut]))
        sign_tail = int(s_cut[0]) if s_cut[0] != 0 else 1

        def env(z):
            _, lg = func(z)
            return lg
        terms.append(TailTerm(env, sign_tail))
    return IntegrandSpec(func, 0.0, math.inf, points=profile.breakpoints(z_cut), mode="log",
                         cut=z_cut, tail=tuple(terms))


def radial_integral(profile: RadialProfile, kind: str, alpha: float = 1.0,
                    tol: float | None = None, cut: float | None = None) -> LogReal:
    """Radial integrals used by the measures.

    ``kind`` is ``"power"`` (``int |R|^(2 alpha) x^(d-1)``), ``"xlogx"``
    (``int R^2 ln R^2 x^(d-1)``) or ``"xlog2x"`` (``int R^2 ln^2 R^2 x^(d-1)``).
    """
    tol = default_tol(profile.d) if tol is None else tol
    if kind == "power":
        spec = profile_integrand(profile, 2.0 * alpha, tol=tol, cut=cut)
    elif kind == "xlogx":
        spec = _xlog_spec(profile, 1, cut)
    elif kind == "xlog2x":
        spec = _xlog_spec(profile, 2, cut)
    else:
        raise DomainError(f"unknown radial integral {kind!r}")
    return integrate_profile(spec, tol).value


# -- Shannon ---------------------------------------------------------------------------

def shannon(system: SystemSpec, qn: QuantumNumbers, space: Space | str,
            tol: float | None = None) -> float:
    """Shannon entropy ``-int rho ln rho`` of one component."""
    space = Space(space)
    prof = profile_for(system, qn, space)
    radial = -float(radial_integral(prof, "xlogx", tol=tol))
    value = radial + _angular(qn, system.d)
    return value + _length_sign(space) * system.d * math.log(system.length)


def _log_variance(system, qn, space, tol) -> float:
    prof = profile_for(system, qn, space)
    m1 = float(radial_integral(prof, "xlogx", tol=tol))
    m2 = float(radial_integral(prof, "xlog2x", tol=tol))
    return m2 - m1 * m1


# -- Rényi / Tsallis ---------------------------------------------------------------------

def renyi(system: SystemSpec, qn: QuantumNumbers, space: Space | str, alpha: float,
          tol: float | None = None, cut: float | None = None) -> RenyiPoint:
    """Rényi entropy ``ln(int rho^alpha) / (1 - alpha)`` with its limits."""
    space = Space(space)
    d = system.d
    radial_only = qn.l != 0
    shift = _length_sign(space) * d * math.log(system.length)
    if not alpha >= 0 or math.isnan(alpha):
        raise DomainError(f"Rényi parameter must be >= 0, got {alpha}")
    a_th, _ = thresholds(system, qn)
    if space is Space.MOMENTUM and alpha <= a_th:
        return RenyiPoint(alpha, space, math.nan, Status.BELOW_THRESHOLD, radial_only)
    prof = profile_for(system, qn, space)
    ang = _angular(qn, d)
    if alpha == 0.0:
        if not prof.is_compact:
            return RenyiPoint(alpha, space, math.inf, Status.DIVERGED, radial_only)
        # volume of the support
        val = log_ball_volume(d) if qn.l == 0 else -math.log(d)
        return RenyiPoint(alpha, space, val + shift, Status.FINITE, radial_only)
    if math.isinf(alpha):
        _, lmax = prof.log_max()
        return RenyiPoint(alpha, space, ang - 2.0 * lmax + shift, Status.FINITE, radial_only)
    if abs(alpha - 1.0) < SHANNON_SWITCH:
        s = shannon(system, qn, space, tol)
        if alpha != 1.0:
            s -= 0.5 * (alpha - 1.0) * _log_variance(system, qn, space, tol)
        return RenyiPoint(alpha, space, s, Status.FINITE, radial_only)
    try:
        # R = ln W / (1 - alpha): W only needs relative accuracy tol |1 - alpha|
        base = default_tol(d) if tol is None else tol
        w_tol = min(max(base, base * abs(1.0 - alpha)), 1e-6)
        w = radial_integral(prof, "power", alpha, tol=w_tol, cut=cut)
    except DivergenceError:
        return RenyiPoint(alpha, space, math.inf, Status.DIVERGED, radial_only)
    val = ang + w.log / (1.0 - alpha)
    return RenyiPoint(alpha, space, val + shift, Status.FINITE, radial_only)


def tsallis(system: SystemSpec, qn: QuantumNumbers, space: Space | str, alpha: float,
            tol: float | None = None) -> tuple[float, RenyiPoint]:
    """Tsallis entropy computed from the Rényi value; ``nan`` unless the point is finite."""
    pt = renyi(system, qn, space, alpha, tol)
    return pt.tsallis, pt


# -- Onicescu ----------------------------------------------------------------------------

def onicescu(system: SystemSpec, qn: QuantumNumbers, space: Space | str,
             tol: float | None = None) -> LogReal:
    """Onicescu energy ``int rho^2`` as an extended-range value."""
    space = Space(space)
    prof = profile_for(system, qn, space)
    w = radial_integral(prof, "power", 2.0, tol=tol)
    log_o = w.log - _angular(qn, system.d) - _length_sign(space) * system.d * math.log(system.length)
    return LogReal.from_log(log_o)


# -- Fisher -------------------------------------------------------------------------------

def fisher_quadrature(system: SystemSpec, qn: QuantumNumbers, space: Space | str,
                      tol: float | None = None) -> float:
    """Fisher information from the generic central-potential expressions (m = 0).

    Position: ``4 [int R'^2 x^(d-1) dx + l(l+d-2) <x^-2>]``; momentum ``4 <x^2>``.
    """
    space = Space(space)
    d, l = system.d, qn.l
    tol = default_tol(d) if tol is None else tol
    pos = profile_for(system, qn, Space.POSITION)
    if space is Space.MOMENTUM:
        return 4.0 * expectation_moment(pos, 2, tol) * system.length**2

    def f(x):
        return pos.derivative(x) ** 2 * x ** (d - 1)

    if pos.is_compact:
        grad = float(integrate_finite(IntegrandSpec(f, 0.0, 1.0, points=pos.nodes, mode="plain"),
                                      tol_rel=tol).value)
    else:
        z_cut = pos.tail_cut()

        def env(z):
            with np.errstate(divide="ignore"):
                return np.log(f(z))
        spec = IntegrandSpec(f, 0.0, math.inf, points=pos.nodes, mode="plain", cut=z_cut,
                             tail=(TailTerm(env),))
        grad = float(integrate_profile(spec, tol).value)
    cent = 0.0
    if l > 0:
        cent = l * (l + d - 2) * expectation_moment(pos, -2, tol)
    return 4.0 * (grad + cent) / system.length**2


def fisher_closed(system: SystemSpec, qn: QuantumNumbers, space: Space | str) -> float | None:
    """Closed-form Fisher information when one is known, else ``None``."""
    space = Space(space)
    d, n, l = system.d, qn.n, qn.l
    L = system.length
    if not system.is_dot:
        return None
    if space is Space.POSITION:
        # proportional to the energy for every dot state
        return 4.0 * dot_energy(system, qn) / L**2
    if l != 0:
        return None
    if system.kind is SystemKind.NEUMANN and n == 1:
        return fisher_closed_asymptotics("neumann_ground_momentum", d=d) * L**2
    if d == 4 and (system.kind is SystemKind.DIRICHLET or n >= 2):
        return fisher_closed_asymptotics("four_dim_momentum") * L**2
    if d == 3 and system.kind is SystemKind.DIRICHLET:
        return fisher_closed_asymptotics("dirichlet_3d_momentum", n=n) * L**2
    return None


def fisher_closed_asymptotics(case: str, n: float | None = None, d: float | None = None) -> float:
    """Named closed forms of dimensionless momentum Fisher information.

    Cases:
        ``dirichlet_3d_momentum``: ``(2/3)(2 n^2 pi^2 - 3)/(n^2 pi^2)``.
        ``dirichlet_3d_momentum_large_n``: ``4/3 - 2/(n^2 pi^2)`` (``n = inf`` gives 4/3).
        ``four_dim_momentum``: ``4/3`` for every 4D l=0 state except the Neumann ground.
        ``neumann_ground_momentum``: ``4 d/(d+2)``.
        ``neumann_ground_momentum_large_d``: ``4 (1 - 2/d)`` (``d = inf`` gives 4).
    """
    if case == "dirichlet_3d_momentum":
        x = n * n * math.pi**2
        return (2.0 / 3.0) * (2.0 * x - 3.0) / x
    if case == "dirichlet_3d_momentum_large_n":
        return 4.0 / 3.0 - (0.0 if math.isinf(n) else 2.0 / (n * n * math.pi**2))
    if case == "four_dim_momentum":
        return 4.0 / 3.0
    if case == "neumann_ground_momentum":
        return 4.0 * d / (d + 2.0)
    if case == "neumann_ground_momentum_large_d":
        return 4.0 * (1.0 - (0.0 if math.isinf(d) else 2.0 / d))
    raise DomainError(f"unknown closed-form case {case!r}")


def fisher(system: SystemSpec, qn: QuantumNumbers, space: Space | str,
           tol: float | None = None) -> float:
    """Fisher information: the closed form where one exists, quadrature otherwise."""
    closed = fisher_closed(system, qn, space)
    if closed is not None:
        return closed
    return fisher_quadrature(system, qn, space, tol)


# -- reports ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class MeasureReport:
    """Shannon, Fisher and Onicescu values of one state in both spaces."""

    system: SystemSpec
    qn: QuantumNumbers
    s_rho: float
    s_gamma: float
    i_rho: float
    i_gamma: float
    o_rho: LogReal
    o_gamma: LogReal
    radial_only: bool = False

    @property
    def shannon_sum(self) -> float:
        return self.s_rho + self.s_gamma

    @property
    def shannon_bound(self) -> float:
        return self.system.d * (1.0 + math.log(math.pi))

    @property
    def bound_slack(self) -> float:
        return self.shannon_sum - self.shannon_bound

    @property
    def fisher_product(self) -> float:
        return self.i_rho * self.i_gamma

    @property
    def onicescu_product(self) -> LogReal:
        return self.o_rho * self.o_gamma

    def columns(self) -> list[tuple[str, float | LogReal]]:
        return [
            ("S_rho", self.s_rho), ("S_gamma", self.s_gamma), ("S_sum", self.shannon_sum),
            ("bound", self.shannon_bound), ("I_rho", self.i_rho), ("I_gamma", self.i_gamma),
            ("I_product", self.fisher_product), ("O_rho", self.o_rho),
            ("O_gamma", self.o_gamma), ("O_product", self.onicescu_product),
        ]

    def csv_row(self, digits: int = 5) -> str:
        return ",".join([str(self.system.d)] + [format_table_value(v, digits) for _, v in self.columns()])


CSV_HEADER = "d,S_rho,S_gamma,S_sum,bound,I_rho,I_gamma,I_product,O_rho,O_gamma,O_product"


def format_table_value(v: float | LogReal, digits: int = 5) -> str:
    """``digits`` significant digits, plain for ``0.1 <= |v| < 1000``, else ``0.xxxxxE+nn``."""
    if isinstance(v, LogReal):
        lr = v
    else:
        v = float(v)
        if v == 0.0:
            return "0"
        if not math.isfinite(v):
            return str(v)
        lr = LogReal.from_float(v)
    if lr.sign == 0:
        return "0"
    if -1.0 <= lr.log10 < 3.0:
        text = f"{float(lr):#.{digits}g}"
        if "e" not in text:
            return text.rstrip(".")
    return lr.format_e(digits)


def measure_report(system: SystemSpec, qn: QuantumNumbers | None = None,
                   tol: float | None = None) -> MeasureReport:
    """Compute the full per-state record."""
    qn = qn or QuantumNumbers()
    return MeasureReport(
        system, qn,
        shannon(system, qn, Space.POSITION, tol), shannon(system, qn, Space.MOMENTUM, tol),
        fisher(system, qn, Space.POSITION, tol), fisher(system, qn, Space.MOMENTUM, tol),
        onicescu(system, qn, Space.POSITION, tol), onicescu(system, qn, Space.MOMENTUM, tol),
        radial_only=qn.l != 0,
    )


# -- complexities -----------------------------------------------------------------------------

@dataclass(frozen=True)
class Complexity:
    cso: LogReal           # e^S O
    fisher_shannon: float  # e^(2S/d) I / (2 pi e)
    renyi_diseq: LogReal | None   # e^R(alpha) O


def complexity(report: MeasureReport, space: Space | str = Space.POSITION,
               alpha: float | None = None, tol: float | None = None) -> Complexity:
    """Composite measures built from one component of a report."""
    space = Space(space)
    d = report.system.d
    if space is Space.POSITION:
        s, i, o = report.s_rho, report.i_rho, report.o_rho
    else:
        s, i, o = report.s_gamma, report.i_gamma, report.o_gamma
    cso = LogReal.from_log(s) * o
    fs = math.exp(2.0 * s / d) * i / (2.0 * math.pi * math.e)
    rd = None
    if alpha is not None:
        pt = renyi(report.system, report.qn, space, alpha, tol)
        if pt.finite:
            rd = LogReal.from_log(pt.value) * o
    return Complexity(cso, fs, rd)


def require_dot(system: SystemSpec) -> None:
    if not system.is_dot:
        raise WrongKindError("operation requires a dot system")
