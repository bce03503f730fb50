"""Adaptive panel quadrature with log-domain accumulation and analytic oscillatory tails.

Each panel is integrated with a tanh-sinh rule at two nested step sizes; the
difference between them is the panel error estimate, and panels failing it
are bisected.  Integrands either return plain values or ``(sign, log|f|)``
pairs, which lets densities of order 1e-600 be summed without underflow.

Semi-infinite integrals are split at a zero ``Z`` of the oscillating factor.
Beyond ``Z`` the integrand is ``E(z) H(theta(z))`` with a smooth envelope
``E`` and a pi-periodic ``H``; integrating by parts twice gives

    int_Z^inf E H dz  =  mean(H) int_Z^inf E dz  -  m2 E'(Z)  +  O(E'' ),

where ``m2`` is the mean of the second zero-mean antiderivative of
``H - mean(H)``.  The envelope integral is done after the substitution
``z = Z / t``; when ``E ~ c0 z^-p`` with ``p`` close to 1 the pure power part
is integrated exactly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate as sp_integrate
from scipy import special

from .errors import DivergenceError, DomainError, ToleranceError
from .specfun.logreal import LogReal, log_sum

DEFAULT_TOL = 1e-10
_T_MAX = 3.25           # tanh-sinh abscissae run over |t| <= _T_MAX
_H_FINE = 1.0 / 16.0
_MAX_ROUNDS = 40
_MAX_PANELS = 200_000
_TAIL_REMAINDER_LIMIT = 1e6   # beyond this z the envelope equals its power law
_PEAK_POWER = 40.0          # integrands |f|^p with p above this get a breakpoint at the peak


# -- data types -----------------------------------------------------------------

@dataclass(frozen=True)
class TailTerm:
    """One oscillatory (or plain) contribution ``sign * int_Z^inf E(z) H dz``.

    Attributes:
        log_envelope: ``z -> log E(z)`` (vectorized, ``E > 0``).
        sign: overall sign of the term.
        mean: average of ``H`` over a period (1 for non-oscillating tails).
        m2: second-antiderivative mean of ``H`` (0 for non-oscillating tails).
        power: ``p`` in ``E ~ c0 z^-p``, enables exact integration of the power part.
        log_c0: ``log c0`` for that power law.
    """

    log_envelope: Callable[[np.ndarray], np.ndarray]
    sign: int = 1
    mean: float = 1.0
    m2: float = 0.0
    power: float | None = None
    log_c0: float | None = None


@dataclass(frozen=True)
class IntegrandSpec:
    """Integrand plus the structure the integrator needs.

    ``func`` returns plain values (``mode="plain"``) or a ``(sign, log)`` pair
    (``mode="log"``).  ``points`` are interior panel boundaries (zeros,
    removable singularities).  For ``hi = inf`` the finite part stops at
    ``cut`` and ``tail`` terms supply the rest; ``decay`` is the exponent of
    the integrand's algebraic decay and must exceed 1.
    """

    func: Callable
    lo: float
    hi: float
    points: np.ndarray = field(default_factory=lambda: np.zeros(0))
    mode: str = "log"
    cut: float | None = None
    tail: tuple[TailTerm, ...] = ()
    decay: float | None = None

    def __post_init__(self):
        if self.mode not in ("log", "plain"):
            raise DomainError(f"unknown accumulation mode {self.mode!r}")
        if not self.lo < self.hi:
            raise DomainError("need lo < hi")
        pts = np.unique(np.asarray(self.points, dtype=float))
        upper = self.cut if math.isinf(self.hi) else self.hi
        if upper is not None:
            pts = pts[(pts > self.lo) & (pts < upper)]
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class QuadratureResult:
    value: LogReal
    abs_error: LogReal
    rel_error: float
    panels: int
    tail_fraction: float = 0.0

    def __float__(self) -> float:
        return float(self.value)


# -- tanh-sinh panel rule ----------------------------------------------------------

@lru_cache(maxsize=None)
def _rule():
    k = np.arange(-int(math.ceil(_T_MAX / _H_FINE)), int(math.ceil(_T_MAX / _H_FINE)) + 1)
    t = k * _H_FINE
    s = 0.5 * math.pi * np.sinh(t)
    # fraction of the panel from the left / right end, accurate near both ends
    frac_left = special.expit(2.0 * s)
    frac_right = special.expit(-2.0 * s)
    w = _H_FINE * 0.25 * math.pi * np.cosh(t) / np.cosh(s) ** 2   # per unit panel width
    coarse = (k % 2) == 0
    return t, frac_left, frac_right, w, coarse


def _nodes(a: np.ndarray, b: np.ndarray):
    t, fl, fr, w, coarse = _rule()
    width = (b - a)[:, None]
    x = np.where(t < 0, a[:, None] + width * fl, b[:, None] - width * fr)
    x = np.clip(x, a[:, None], b[:, None])
    return x, width * w, coarse


def _eval_panels(spec_func, mode: str, a: np.ndarray, b: np.ndarray):
    """Fine and coarse panel sums as (sign, log) arrays plus log error."""
    x, w, coarse = _nodes(a, b)
    flat = x.ravel()
    if mode == "plain":
        vals = np.asarray(spec_func(flat), dtype=float).reshape(x.shape)
        if not np.all(np.isfinite(vals)):
            raise DomainError("integrand returned non-finite values")
        fine = (vals * w).sum(axis=1)
        crs = 2.0 * (vals[:, coarse] * w[:, coarse]).sum(axis=1)
        err = np.abs(fine - crs)
        with np.errstate(divide="ignore"):
            return np.sign(fine), np.log(np.abs(fine)), np.log(err), np.log(np.abs(vals * w).sum(axis=1))
    sg, lg = spec_func(flat)
    sg = np.asarray(sg, dtype=float).reshape(x.shape)
    lg = np.asarray(lg, dtype=float).reshape(x.shape)
    if np.any(np.isnan(lg)) or np.any(lg == np.inf):
        raise DomainError("integrand returned non-finite log values")
    live = (sg != 0) & (lg > -np.inf)
    with np.errstate(divide="ignore"):
        lw = np.where(live, lg + np.log(w), -np.inf)
    top = np.max(lw, axis=1)
    finite = np.isfinite(top)
    ref = np.where(finite, top, 0.0)
    terms = np.where(live, sg * np.exp(lw - ref[:, None]), 0.0)
    fine = terms.sum(axis=1)
    crs = 2.0 * terms[:, coarse].sum(axis=1)
    l1 = np.abs(terms).sum(axis=1)
    with np.errstate(divide="ignore"):
        lf = np.where(finite, ref + np.log(np.abs(fine)), -np.inf)
        le = np.where(finite, ref + np.log(np.abs(fine - crs)), -np.inf)
        ll1 = np.where(finite, ref + np.log(l1), -np.inf)
    return np.sign(fine) * finite, lf, le, ll1


def _adaptive(func, mode: str, edges: np.ndarray, tol: float, log_scale_floor: float = -math.inf):
    """Integrate over consecutive ``edges``; returns (value, abs error, panel count, converged).

    The error budget is ``tol`` times the L1 norm of the integrand, or times
    ``exp(log_scale_floor)`` when that is larger (used when the integral is a
    small correction to a known quantity).
    """
    done_s, done_l, done_e, done_a = [], [], [], []
    a, b = edges[:-1].copy(), edges[1:].copy()
    converged = False
    for rnd in range(_MAX_ROUNDS):
        s, lv, le, la = _eval_panels(func, mode, a, b)
        abs_scale = log_sum(np.ones(len(la) + sum(len(x) for x in done_a)),
                            np.concatenate([la] + done_a))
        log_scale = max(abs_scale.log if abs_scale.sign else -math.inf, log_scale_floor)
        budget = math.log(tol) + log_scale
        n_total = len(a) + sum(len(x) for x in done_a)
        # a panel passes if its error fits its share of the budget, or it cannot be split
        share = budget - math.log(max(n_total, 1))
        narrow = (b - a) <= 1e-13 * np.maximum(np.abs(a), np.abs(b))
        keep = (le <= share) | (le == -np.inf) | narrow
        last = rnd == _MAX_ROUNDS - 1 or n_total > _MAX_PANELS
        if last:
            keep = np.ones_like(keep)
        done_s.append(s[keep]); done_l.append(lv[keep]); done_e.append(le[keep]); done_a.append(la[keep])
        if np.all(keep):
            converged = not last or bool(np.all((le <= share) | (le == -np.inf) | narrow))
            break
        a_bad, b_bad = a[~keep], b[~keep]
        mid = 0.5 * (a_bad + b_bad)
        a = np.concatenate([a_bad, mid])
        b = np.concatenate([mid, b_bad])
    value = log_sum(np.concatenate(done_s), np.concatenate(done_l))
    errs = np.concatenate(done_e)
    err = log_sum(np.ones_like(errs), errs)
    panels = sum(len(x) for x in done_s)
    return value, err, panels, converged


def _result(value: LogReal, err: LogReal, panels: int, tail_fraction: float = 0.0) -> QuadratureResult:
    if value.sign == 0:
        rel = 0.0 if err.sign == 0 else math.inf
    else:
        rel = math.exp(err.log - value.log) if err.sign else 0.0
    return QuadratureResult(value, err, rel, panels, tail_fraction)


# -- public integrators ------------------------------------------------------------

def integrate_finite(spec: IntegrandSpec, lo: float | None = None, hi: float | None = None,
                     tol_rel: float = DEFAULT_TOL) -> QuadratureResult:
    """Integrate over a finite interval split at ``spec.points``."""
    lo = spec.lo if lo is None else lo
    hi = spec.hi if hi is None else hi
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise DomainError("integrate_finite needs finite lo < hi")
    pts = spec.points[(spec.points > lo) & (spec.points < hi)]
    edges = np.concatenate(([lo], pts, [hi]))
    value, err, panels, ok = _adaptive(spec.func, spec.mode, edges, tol_rel)
    res = _result(value, err, panels)
    if not ok:
        raise ToleranceError(f"tolerance {tol_rel:g} not met (estimate {res.rel_error:.2e})", res)
    return res


def _envelope_integral(term: TailTerm, cut: float, log_e_cut: float, tol: float) -> float:
    """``int_cut^inf E dz / (cut * E(cut))`` via ``z = cut / t``."""
    p, log_c0 = term.power, term.log_c0
    split = p is not None and log_c0 is not None
    c0n = math.exp(log_c0 - p * math.log(cut) - log_e_cut) if split else 0.0
    t_min = cut / _TAIL_REMAINDER_LIMIT if split else 0.0

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        ok = t > t_min
        tt = t[ok]
        with np.errstate(over="ignore", under="ignore", divide="ignore"):
            u = np.exp(term.log_envelope(cut / tt) - log_e_cut) / tt**2
            if split:
                u = u - c0n * tt ** (p - 2.0)
        out[ok] = np.where(np.isfinite(u), u, 0.0)
        return out

    edges = np.array([0.0, 0.25, 0.5, 1.0])
    # with the split, only the remainder is integrated; its error counts against the total
    floor = math.log(c0n / (p - 1.0)) if split and c0n > 0 and p > 1.0 else -math.inf
    val, _, _, ok = _adaptive(f, "plain", edges, max(tol, 1e-13), floor)
    if not ok:
        raise ToleranceError("tail envelope integral did not converge", None)
    total = float(val)
    if split:
        total += c0n / (p - 1.0)
    return total


def tail_value(term: TailTerm, cut: float, tol: float = DEFAULT_TOL) -> LogReal:
    """Evaluate one :class:`TailTerm` from ``cut`` to infinity."""
    if term.power is not None and term.power <= 1.0:
        raise DivergenceError(f"tail decays as z^-{term.power:g}; integral diverges")
    log_e = float(term.log_envelope(np.array([cut]))[0])
    if log_e == -math.inf:
        return LogReal.zero()
    jn = _envelope_integral(term, cut, log_e, tol)
    h = 1e-4 * cut
    le = term.log_envelope(np.array([cut - h, cut + h]))
    dlog = (le[1] - le[0]) / (2.0 * h)
    scaled = term.mean * cut * jn - term.m2 * dlog
    return LogReal.from_float(term.sign * scaled) * LogReal.from_log(log_e)


def integrate_semi_infinite(spec: IntegrandSpec, tol_rel: float = DEFAULT_TOL) -> QuadratureResult:
    """Integrate over ``[lo, inf)``: panels up to ``spec.cut`` plus analytic tail terms."""
    if spec.decay is not None and spec.decay <= 1.0:
        raise DivergenceError(f"integrand decays as z^-{spec.decay:g} (need > 1); integral diverges")
    if not math.isinf(spec.hi) or spec.cut is None or not spec.cut > spec.lo:
        raise DomainError("semi-infinite integration needs hi = inf and a cut > lo")
    edges = np.concatenate(([spec.lo], spec.points, [spec.cut]))
    value, err, panels, ok = _adaptive(spec.func, spec.mode, edges, tol_rel)
    tails = []
    for t in spec.tail:
        # steep power tails are bounded by ~ cut E(cut) / (p - 1); skip those far below tol
        if t.power is not None and t.power > 2.0 and value.sign:
            log_e = float(t.log_envelope(np.array([spec.cut]))[0])
            bound = log_e + math.log(spec.cut) - math.log(t.power - 1.0)
            if bound < value.log + math.log(tol_rel) - math.log(1e3):
                continue
        tails.append(tail_value(t, spec.cut, tol_rel))
    tail_total = LogReal.zero()
    for t in tails:
        tail_total = tail_total + t
    total = value + tail_total
    mag = sum(math.exp(x.log - max(value.log, tail_total.log)) for x in (value, tail_total) if x.sign)
    frac = (math.exp(tail_total.log - max(value.log, tail_total.log)) / mag) if tail_total.sign else 0.0
    res = _result(total, err, panels, min(max(frac, 0.0), 1.0))
    if not ok:
        raise ToleranceError(f"tolerance {tol_rel:g} not met (estimate {res.rel_error:.2e})", res)
    return res


# -- oscillation means ---------------------------------------------------------------

def _second_mean(h: Callable[[float], float], hbar: float) -> float:
    """``(1/(2 pi)) int_0^pi s^2 (h(s) - hbar) ds`` for ``h`` symmetric about ``pi/2``."""
    with warnings.catch_warnings():
        # quad flags roundoff near its floor; the value is still good to ~1e-14
        warnings.simplefilter("ignore", sp_integrate.IntegrationWarning)
        val, _ = sp_integrate.quad(lambda s: s * s * (h(s) - hbar), 0.0, math.pi,
                                   epsabs=1e-15, epsrel=1e-13, limit=200)
    return val / (2.0 * math.pi)


@lru_cache(maxsize=256)
def power_means(alpha: float) -> tuple[float, float]:
    """Mean and ``m2`` constant of ``|sin s|^(2 alpha)``."""
    hbar = math.exp(special.gammaln(alpha + 0.5) - special.gammaln(alpha + 1.0)) / math.sqrt(math.pi)
    return hbar, _second_mean(lambda s: abs(math.sin(s)) ** (2.0 * alpha), hbar)


@lru_cache(maxsize=8)
def log_power_means(power: int) -> tuple[float, float]:
    """Mean and ``m2`` constant of ``sin^2 s * (ln sin^2 s)^power``."""
    def h(s):
        c = math.sin(s) ** 2
        return c * math.log(c) ** power if c > 0 else 0.0
    hbar, _ = sp_integrate.quad(h, 0.0, math.pi, epsabs=1e-15, epsrel=1e-13, limit=200)
    hbar /= math.pi
    return hbar, _second_mean(h, hbar)


# -- moments ------------------------------------------------------------------------

def profile_integrand(profile, power: float, weight_shift: float = 0.0, tol: float = DEFAULT_TOL,
                      cut: float | None = None) -> IntegrandSpec:
    """``|value|^power x^(d-1+weight_shift)`` in log form, with tails for infinite support."""
    we = profile.weight_exponent + weight_shift

    def func(x):
        s, lg = profile.log_eval(x)
        with np.errstate(divide="ignore", invalid="ignore"):
            lw = np.where(x > 0, we * np.log(np.where(x > 0, x, 1.0)), 0.0 if we == 0 else -math.inf)
        return np.abs(s), power * lg + lw

    extra = np.zeros(0)
    if power > _PEAK_POWER:
        # high powers turn the integrand into a needle at the profile maximum
        x_peak = profile.log_max()[0]
        if x_peak > 0:
            extra = np.array([x_peak])
    if profile.is_compact:
        return IntegrandSpec(func, 0.0, profile.support,
                             points=np.concatenate([profile.nodes, extra]), mode="log")
    z_cut = profile.tail_cut(cut)
    alpha = power / 2.0
    decay = alpha * profile.decay - we if math.isfinite(profile.decay) else None
    osc = profile.oscillation
    if osc is not None:
        hbar, m2 = power_means(alpha)

        def log_env(z):
            return alpha * osc.log_envelope(z) + we * np.log(z)
        term = TailTerm(log_env, 1, hbar, m2, decay, alpha * osc.log_a_inf)
    else:
        def log_env(z):
            return power * profile.log_eval(z)[1] + we * np.log(z)
        log_c0 = alpha * profile.log_a_inf if profile.log_a_inf is not None else None
        term = TailTerm(log_env, 1, 1.0, 0.0, decay, log_c0)
    pts = np.concatenate([profile.breakpoints(z_cut), extra])
    return IntegrandSpec(func, 0.0, math.inf, points=pts, mode="log",
                         cut=z_cut, tail=(term,), decay=decay)


def integrate_profile(spec: IntegrandSpec, tol: float = DEFAULT_TOL) -> QuadratureResult:
    if math.isinf(spec.hi):
        return integrate_semi_infinite(spec, tol)
    return integrate_finite(spec, tol_rel=tol)


def expectation_moment(profile, s: float, tol: float = DEFAULT_TOL) -> float:
    """``int value(x)^2 x^(d-1+s) dx`` over the profile's support."""
    lead = profile.qn.l
    if s <= -(profile.d + 2 * lead):
        raise DivergenceError(f"moment s={s} diverges at the origin")
    if not profile.is_compact and math.isfinite(profile.decay):
        if profile.decay - (profile.d - 1 + s) <= 1.0:
            raise DivergenceError(f"moment s={s} diverges at infinity")
    spec = profile_integrand(profile, 2.0, weight_shift=s, tol=tol)
    return float(integrate_profile(spec, tol).value)
