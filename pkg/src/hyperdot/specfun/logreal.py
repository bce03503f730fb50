"""Signed extended-range reals stored as (sign, natural log of magnitude).

Ground-state measures of high-dimensional dots span roughly 1e-650 to 1e+300,
far outside the float64 range, so products and sums of such quantities are
carried in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

# ln 2 split so that e * _LN2_HI is exact for |e| < 2**11
_LN2_HI = 6.93147180369123816490e-01
_LN2_LO = 1.90821492927058770002e-10
_LN10 = math.log(10.0)


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


@dataclass(frozen=True)
class LogReal:
    """Extended-range real ``sign * exp(logmag + lo)``.

    ``lo`` is a low-order correction to ``logmag`` (at most an ulp of it) that
    keeps float round trips exact to rounding; most callers can ignore it.
    """

    sign: int
    logmag: float
    lo: float = 0.0

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or +1, got {self.sign!r}")
        if self.sign != 0 and math.isnan(self.logmag):
            raise ValueError("logmag is NaN")

    # -- construction ------------------------------------------------------
    @classmethod
    def zero(cls) -> LogReal:
        return cls(0, -math.inf)

    @classmethod
    def from_log(cls, logmag: float, sign: int = 1) -> LogReal:
        if sign == 0 or logmag == -math.inf:
            return cls.zero()
        return cls(int(sign), float(logmag))

    @classmethod
    def from_float(cls, x: float) -> LogReal:
        x = float(x)
        if x == 0.0:
            return cls.zero()
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r}")
        m, e = math.frexp(abs(x))
        hi, err = _two_sum(math.log(m), e * _LN2_HI)
        return cls(1 if x > 0 else -1, hi, err + e * _LN2_LO)

    # -- conversion --------------------------------------------------------
    @property
    def log(self) -> float:
        """Natural log of the magnitude (``-inf`` for zero)."""
        if self.sign == 0:
            return -math.inf
        return self.logmag + self.lo

    @property
    def log10(self) -> float:
        return self.log / _LN10

    def __float__(self) -> float:
        if self.sign == 0:
            return 0.0
        if self.logmag == math.inf:
            return self.sign * math.inf
        e = round(self.logmag / _LN2_HI)
        r = (self.logmag - e * _LN2_HI) - e * _LN2_LO + self.lo
        try:
            return self.sign * math.ldexp(math.exp(r), e)
        except OverflowError:
            return self.sign * math.inf

    def __bool__(self) -> bool:
        return self.sign != 0

    # -- arithmetic --------------------------------------------------------
    def __neg__(self) -> LogReal:
        return LogReal(-self.sign, self.logmag, self.lo)

    def __abs__(self) -> LogReal:
        return LogReal(abs(self.sign), self.logmag, self.lo)

    def __mul__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if self.sign == 0 or other.sign == 0:
            return LogReal.zero()
        hi, err = _two_sum(self.logmag, other.logmag)
        return LogReal(self.sign * other.sign, hi, err + self.lo + other.lo)

    __rmul__ = __mul__

    def __truediv__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.sign == 0:
            raise ZeroDivisionError("LogReal division by zero")
        return self * LogReal(other.sign, -other.logmag, -other.lo)

    def __rtruediv__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, p: float) -> LogReal:
        if self.sign < 0:
            raise ValueError("real power of a negative LogReal")
        if self.sign == 0:
            if p <= 0:
                raise ZeroDivisionError("0 ** non-positive power")
            return LogReal.zero()
        return LogReal.from_log(p * self.log)

    def __add__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        if other.sign == 0:
            return self
        if self.sign == 0:
            return other
        a, b = (self, other) if self.log >= other.log else (other, self)
        diff = (b.logmag - a.logmag) + (b.lo - a.lo)
        ratio = math.exp(diff)
        if a.sign == b.sign:
            shift = math.log1p(ratio)
        else:
            if ratio >= 1.0:
                return LogReal.zero()
            shift = math.log1p(-ratio)
        hi, err = _two_sum(a.logmag, shift)
        return LogReal(a.sign, hi, err + a.lo)

    __radd__ = __add__

    def __sub__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> LogReal:
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __lt__(self, other) -> bool:
        return (self - _coerce(other)).sign < 0

    def __le__(self, other) -> bool:
        return (self - _coerce(other)).sign <= 0

    def __gt__(self, other) -> bool:
        return (self - _coerce(other)).sign > 0

    def __ge__(self, other) -> bool:
        return (self - _coerce(other)).sign >= 0

    # -- formatting --------------------------------------------------------
    def format_e(self, digits: int = 5) -> str:
        """Mantissa/exponent text with a mantissa in [0.1, 1), e.g. ``0.17688E-20``."""
        if self.sign == 0:
            return "0." + "0" * digits + "E+0"
        lg = self.log10
        exp10 = math.floor(lg) + 1
        mant = round(10.0 ** (lg - exp10), digits)
        if mant >= 1.0:
            mant = round(mant / 10.0, digits)
            exp10 += 1
        text = f"{mant:.{digits}f}E{exp10:+d}"
        return ("-" if self.sign < 0 else "") + text

    def __repr__(self) -> str:
        return f"LogReal({self.format_e(12)})"


def _coerce(x) -> LogReal:
    if isinstance(x, LogReal):
        return x
    if isinstance(x, (int, float, np.floating, np.integer)):
        return LogReal.from_float(float(x))
    return NotImplemented


def log_sum(signs: Iterable[float] | np.ndarray, logs: Iterable[float] | np.ndarray,
            weights: np.ndarray | None = None) -> LogReal:
    """Sum ``sum_i w_i * s_i * exp(l_i)`` without leaving the log domain.

    Weights must be non-negative and finite.
    """
    signs = np.asarray(signs, dtype=float)
    logs = np.asarray(logs, dtype=float)
    if weights is not None:
        weights = np.asarray(weights, dtype=float)
        with np.errstate(divide="ignore"):
            logs = logs + np.log(weights)
    live = (signs != 0) & (logs > -np.inf)
    if not np.any(live):
        return LogReal.zero()
    s, lg = signs[live], logs[live]
    top = float(np.max(lg))
    if top == math.inf:
        raise OverflowError("infinite term in log_sum")
    total = math.fsum(s * np.exp(lg - top))
    if total == 0.0:
        return LogReal.zero()
    return LogReal.from_log(top + math.log(abs(total)), 1 if total > 0 else -1)


def sum_logreals(values: Iterable[LogReal]) -> LogReal:
    """Sum LogReals by factoring out the largest magnitude once."""
    vals = [v for v in values if v.sign != 0]
    if not vals:
        return LogReal.zero()
    return log_sum([v.sign for v in vals], [v.log for v in vals])
