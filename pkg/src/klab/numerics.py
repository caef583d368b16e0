"""Working precision, error types and small tail-bound helpers shared by all modules.

Every numerical routine in the package runs inside ``at_working_precision`` so
that the decimal precision used by mpmath is controlled by one global setting.
"""
from __future__ import annotations

import contextlib
import functools
from fractions import Fraction
from typing import NamedTuple

import mpmath as mp

PRECISION_DPS = {"double": 16, "extended": 32, "high": 60}

_state = {"level": "extended"}


class DomainError(ValueError):
    """Argument outside the domain where a formula is defined."""


class TruncationError(ArithmeticError):
    """A requested tolerance cannot be met with the available number of terms."""

    def __init__(self, message: str, required: int | None = None):
        super().__init__(message)
        self.required = required


class Approx(NamedTuple):
    """A computed value together with a bound (or estimate) of its error."""

    value: object
    error: object


def set_precision(level: str) -> None:
    if level not in PRECISION_DPS:
        raise ValueError(f"unknown precision level {level!r}; choose from {sorted(PRECISION_DPS)}")
    _state["level"] = level


def get_precision() -> str:
    return _state["level"]


def working_dps() -> int:
    return PRECISION_DPS[_state["level"]]


@contextlib.contextmanager
def precision(level: str):
    old = get_precision()
    set_precision(level)
    try:
        yield
    finally:
        set_precision(old)


def at_working_precision(func):
    """Run ``func`` with mpmath set to the configured working precision."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        with mp.workdps(working_dps()):
            return func(*args, **kwargs)

    return wrapper


def to_mpf(v) -> mp.mpf:
    if isinstance(v, Fraction):
        return mp.mpf(v.numerator) / v.denominator
    return mp.mpf(v)


def to_mpc(v) -> mp.mpc:
    if isinstance(v, Fraction):
        return mp.mpc(to_mpf(v))
    return mp.mpc(v)


def log_power_tail(a, start) -> mp.mpf:
    """Integral of (1 + log t) * t**(-a) over [start, inf), for a > 1 and start >= 1.

    When (a - 1)(1 + log t) > 1 on the range the integrand is decreasing, so this
    dominates the corresponding sum over integers n > start.
    """
    a = mp.mpf(a)
    start = mp.mpf(start)
    if a <= 1:
        raise DomainError("log_power_tail needs exponent a > 1")
    head = start ** (1 - a) / (a - 1)
    return head * (1 + mp.log(start)) + head / (a - 1)


def power_exp_tail(c, p, rate, start) -> mp.mpf:
    """Bound for sum_{n > start} c * n**p * exp(-rate * n), with rate > 0 and start >= 1."""
    c, p, rate, start = mp.mpf(c), mp.mpf(p), mp.mpf(rate), mp.mpf(start)
    if c == 0:
        return mp.mpf(0)
    if p <= 0:
        return c * start**p * mp.exp(-rate * (start + 1)) / (-mp.expm1(-rate))
    # integral of the unimodal summand plus its largest value on the range
    integral = mp.gammainc(p + 1, rate * start) / rate ** (p + 1)
    peak_at = max(start, p / rate)
    peak = peak_at**p * mp.exp(-rate * peak_at)
    return c * (integral + peak)


def required_terms(tail_fn, tol, start: int) -> int:
    """Smallest N >= start with tail_fn(N) <= tol, for a decreasing tail_fn."""
    n = max(start, 1)
    while tail_fn(n) > tol:
        n *= 2
        if n > 10**7:
            raise TruncationError("tolerance cannot be met with fewer than 10^7 terms")
    lo, hi = n // 2, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_fn(mid) > tol:
            lo = mid
        else:
            hi = mid
    return hi


def fmt(x, digits: int = 17) -> str:
    """Deterministic decimal rendering of a real number (17 significant digits)."""
    if isinstance(x, Fraction):
        return str(x)
    return mp.nstr(mp.mpf(x), digits, min_fixed=-6, max_fixed=18)
