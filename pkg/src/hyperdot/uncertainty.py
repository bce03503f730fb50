"""Entropic uncertainty relations and the closed-form hydrogen ground state.

Rényi and Tsallis relations pair a position parameter ``alpha`` with the
momentum parameter ``beta = alpha / (2 alpha - 1)`` so that
``1/alpha + 1/beta = 2``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from scipy import optimize
from scipy.special import gammaln

from .errors import ConvergenceError, DomainError
from .measures import renyi, shannon, thresholds
from .systems import QuantumNumbers, Space, SystemKind, SystemSpec, log_sphere_area

IDENTITY_TOL = 1e-6


class RelationKind(str, enum.Enum):
    SHANNON = "shannon"
    RENYI = "renyi"
    TSALLIS = "tsallis"


class Verdict(str, enum.Enum):
    IDENTITY = "identity"
    STRICT = "strict"
    VIOLATED = "violated"


@dataclass(frozen=True)
class RelationCheck:
    """Left and right sides of one uncertainty relation and how they compare."""

    kind: RelationKind
    system: SystemSpec
    qn: QuantumNumbers
    alpha: float
    beta: float
    left: float
    right: float
    tol: float = IDENTITY_TOL

    @property
    def slack(self) -> float:
        if math.isinf(self.left) and self.left > 0:
            return math.inf
        return self.left - self.right

    @property
    def verdict(self) -> Verdict:
        s = self.slack
        if abs(s) < self.tol:
            return Verdict.IDENTITY
        return Verdict.STRICT if s > 0 else Verdict.VIOLATED

    def csv_row(self) -> str:
        vals = [self.kind.value, str(self.system.d), self.system.kind.value, str(self.qn.n),
                str(self.qn.l)] + [f"{v:.12g}" for v in (self.alpha, self.beta, self.left,
                                                         self.right, self.slack)]
        return ",".join(vals + [self.verdict.value])


CSV_HEADER = "kind,d,system,n,l,alpha,beta,left,right,slack,verdict"


def conjugate_beta(alpha: float) -> float:
    """``alpha / (2 alpha - 1)``; ``inf`` at the boundary is not allowed."""
    if not alpha > 0.5:
        raise DomainError(f"conjugate parameter needs alpha > 1/2, got {alpha}")
    if math.isinf(alpha):
        return 0.5
    return alpha / (2.0 * alpha - 1.0)


def _beta(alpha: float) -> float:
    return math.inf if alpha == 0.5 else conjugate_beta(alpha)


# -- Shannon ---------------------------------------------------------------------------

def shannon_check(system: SystemSpec, qn: QuantumNumbers | None = None,
                  tol: float | None = None) -> RelationCheck:
    qn = qn or QuantumNumbers()
    left = shannon(system, qn, Space.POSITION, tol) + shannon(system, qn, Space.MOMENTUM, tol)
    right = system.d * (1.0 + math.log(math.pi))
    return RelationCheck(RelationKind.SHANNON, system, qn, 1.0, 1.0, left, right)


# -- Rényi --------------------------------------------------------------------------------

def renyi_rhs(d: int, alpha: float) -> float:
    """``-(d/2)[ln(alpha/pi)/(1-alpha) + ln(beta/pi)/(1-beta)]``.

    With ``u = 2 alpha - 1`` this equals ``d[ln pi - ln alpha + u ln u / (u - 1)]``,
    which is regular at ``alpha = 1`` (value ``d(1 + ln pi)``) and at
    ``alpha = 1/2`` (value ``d ln 2 pi``).
    """
    if not alpha >= 0.5:
        raise DomainError(f"Rényi relation needs alpha >= 1/2, got {alpha}")
    if math.isinf(alpha):
        return d * (math.log(math.pi) + math.log(2.0))  # both ends mirror each other
    u = 2.0 * alpha - 1.0
    if u == 0.0:
        mix = 0.0
    else:
        w = u - 1.0
        mix = u if w == 0.0 else u * math.log1p(w) / w
    return d * (math.log(math.pi) - math.log(alpha) + mix)


def near_half_expansion(d: int, alpha: float) -> float:
    """Two-term expansion of :func:`renyi_rhs` about ``alpha = 1/2``."""
    u = 2.0 * alpha - 1.0
    if u < 0:
        raise DomainError("expansion is one-sided: alpha >= 1/2")
    corr = 0.0 if u == 0.0 else (1.0 + math.log(u)) * u
    return d * (math.log(2.0 * math.pi) - corr)


def renyi_sum(system: SystemSpec, qn: QuantumNumbers | None, alpha: float,
              tol: float | None = None) -> RelationCheck:
    """``R_rho(alpha) + R_gamma(beta)`` against its lower bound, ``alpha`` in ``[1/2, alpha_R)``."""
    qn = qn or QuantumNumbers()
    _, a_r = thresholds(system, qn)
    if not (0.5 <= alpha < a_r):
        raise DomainError(f"alpha={alpha} outside the Rényi relation window [0.5, {a_r})")
    beta = _beta(alpha)
    right = renyi_rhs(system.d, alpha)
    if alpha == 1.0:
        left = shannon(system, qn, Space.POSITION, tol) + shannon(system, qn, Space.MOMENTUM, tol)
    else:
        p = renyi(system, qn, Space.POSITION, alpha, tol)
        m = renyi(system, qn, Space.MOMENTUM, beta, tol)
        left = p.value + m.value if (p.finite and m.finite) else math.inf
    return RelationCheck(RelationKind.RENYI, system, qn, alpha, beta, left, right)


# -- Tsallis ---------------------------------------------------------------------------

def _log_t(point_value: float, a: float, d: int) -> float:
    """``ln[(a/pi)^(d/(4a)) (int rho^a)^(1/(2a))]`` from the Rényi value."""
    if math.isinf(a):
        return -0.5 * point_value
    return d / (4.0 * a) * math.log(a / math.pi) + (1.0 - a) * point_value / (2.0 * a)


def tsallis_sides(system: SystemSpec, qn: QuantumNumbers | None, alpha: float,
                  tol: float | None = None) -> RelationCheck:
    """Position and momentum sides ``t_rho(alpha) >= t_gamma(beta)`` for ``alpha`` in ``[1/2, 1]``."""
    qn = qn or QuantumNumbers()
    if not 0.5 <= alpha <= 1.0:
        raise DomainError(f"Tsallis relation holds for alpha in [1/2, 1], got {alpha}")
    d = system.d
    beta = _beta(alpha)
    if alpha == 1.0:
        left = right = math.pi ** (-d / 4.0)
    else:
        p = renyi(system, qn, Space.POSITION, alpha, tol)
        m = renyi(system, qn, Space.MOMENTUM, beta, tol)
        left = math.exp(_log_t(p.value, alpha, d))
        right = math.exp(_log_t(m.value, beta, d))
    return RelationCheck(RelationKind.TSALLIS, system, qn, alpha, beta, left, right,
                         tol=1e-8 * max(abs(left), 1e-300))


# -- hydrogen ground state ----------------------------------------------------------------

def _hydrogen_lambda(d: int) -> float:
    return 0.5 * (1.0 + (d - 3) / 2.0)


def _renyi_position_closed(d: int, a: float) -> float:
    lam = _hydrogen_lambda(d)
    return (d * math.log(lam) + log_sphere_area(d) + gammaln(d) - d / (1.0 - a) * math.log(a)
            + a / (1.0 - a) * math.log((d - 1) / (4.0 * lam)))


def _renyi_momentum_closed(d: int, a: float) -> float:
    lam = _hydrogen_lambda(d)
    arg = a * (d + 1) - d / 2.0
    if arg <= 0:
        raise DomainError(f"momentum Rényi entropy undefined for alpha <= {d / (2.0 * (d + 1))}")
    c = math.log(lam) + 2.0 * gammaln((d - 1) / 2.0) - math.log(math.pi) - gammaln(d - 1)
    return (-d * math.log(lam) + log_sphere_area(d) + (3 * d * a - d - 1) / (1.0 - a) * math.log(2.0)
            + a / (1.0 - a) * c
            + (gammaln(arg) + gammaln(d / 2.0) - gammaln(a * (d + 1))) / (1.0 - a))


_CLOSED_STEP = 1e-4


def hydrogen_renyi_closed(d: int, alpha: float, component: Space | str) -> float:
    """Ground-state hydrogen Rényi entropy in ``r0`` units from its Gamma-function form.

    At ``alpha = 1`` the expression is a removable 0/0; within ``1e-5`` of it the
    symmetric average at ``1 +- 1e-4`` is returned (error ``~1e-8``).
    """
    space = Space(component)
    if d < 3:
        raise DomainError("hydrogen needs d >= 3")
    if not alpha > 0:
        raise DomainError(f"alpha must be > 0, got {alpha}")
    f = _renyi_position_closed if space is Space.POSITION else _renyi_momentum_closed
    if math.isinf(alpha):
        raise DomainError("use a large finite alpha for the closed form")
    if abs(alpha - 1.0) < 1e-5:
        return 0.5 * (f(d, 1.0 - _CLOSED_STEP) + f(d, 1.0 + _CLOSED_STEP))
    return f(d, alpha)


def hydrogen_closed_sum(d: int, alpha: float) -> float:
    """``R_rho(alpha) + R_gamma(alpha/(2 alpha - 1))`` from the closed forms."""
    return (hydrogen_renyi_closed(d, alpha, Space.POSITION)
            + hydrogen_renyi_closed(d, conjugate_beta(alpha), Space.MOMENTUM))


def hydrogen_momentum_pole(d: int) -> float:
    """Parameter at which ``Gamma(alpha(d+1) - d/2)`` hits its first pole."""
    return d / (2.0 * (d + 1.0))


def hydrogen_alpha_max(d: int, h: float = 1e-4) -> float:
    """Location of the maximum of the closed-form hydrogen Rényi sum (secant on its slope)."""
    def slope(a):
        return (hydrogen_closed_sum(d, a + h) - hydrogen_closed_sum(d, a - h)) / (2.0 * h)

    lo, hi = 1.01, 2.0
    if not slope(lo) > 0 > slope(hi):
        raise ConvergenceError(f"no sign change of the slope on [{lo}, {hi}] for d={d}")
    # start the secant from a bisected bracket so it cannot wander out of [lo, hi]
    for _ in range(6):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if slope(mid) > 0 else (lo, mid)
    try:
        root = optimize.newton(slope, lo, x1=hi, tol=1e-9, maxiter=60)
    except RuntimeError as exc:
        raise ConvergenceError(str(exc)) from exc
    if not 1.01 <= root <= 2.0:
        raise ConvergenceError(f"secant left the bracket (root {root})")
    return float(root)


def hydrogen_sum_asymptote(d: int) -> float:
    """Large-alpha limit of the closed-form hydrogen Rényi sum."""
    return (2.0 * log_sphere_area(d) + 0.5 * math.log(math.pi) + gammaln(d) - math.log(2.0)
            - gammaln((d + 1) / 2.0) + gammaln(d / 2.0))


def hydrogen_system(d: int) -> SystemSpec:
    return SystemSpec(SystemKind.HYDROGEN, d)
