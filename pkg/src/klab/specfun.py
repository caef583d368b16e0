"""Incomplete gamma Gamma(0, x), the K-Bessel integral, Whittaker functions W_s and W*,
and finite-difference operators on the upper half-plane.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .arithlib import euler_gamma, harmonic
from .numerics import Approx, DomainError, at_working_precision, to_mpf
from .qseries import HalfPlanePoint, e

SERIES_CUTOFF = mp.mpf("1.2")


@at_working_precision
def exp_int_e1(x) -> mp.mpf:
    """Gamma(0, x) = E_1(x) = int_x^inf e^-t / t dt for x > 0.

    Power series below x = 1.2, modified Lentz continued fraction above.
    """
    x = to_mpf(x)
    if x <= 0:
        raise DomainError(f"exp_int_e1 needs x > 0, got {x}")
    eps = mp.mp.eps
    if x < SERIES_CUTOFF:
        with mp.extradps(10):
            x = +x
            total = -euler_gamma() - mp.log(x)
            term = mp.mpf(1)
            k = 1
            while True:
                term *= x / k
                add = term / k if k % 2 else -term / k
                total += add
                if abs(add) < eps * abs(total):
                    break
                k += 1
        return +total
    # e^-x / (x + 1 - 1^2 / (x + 3 - 2^2 / (x + 5 - ...)))
    tiny = mp.mpf(10) ** (-2 * mp.mp.dps)
    b = x + 1
    c = 1 / tiny
    d = 1 / b
    h = d
    i = 1
    while True:
        an = -mp.mpf(i) ** 2
        b += 2
        d = 1 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1) < eps:
            break
        i += 1
        if i > 100000:
            raise ArithmeticError("continued fraction for E1 did not converge")
    return h * mp.exp(-x)


@at_working_precision
def kbessel(s, y) -> mp.mpf:
    """K_{s-1/2}(2 pi y) from the integral over t in [1, inf) of (t^2-1)^(s-1) e^{-2 pi t y}.

    Substituting t = 1 + v/(2 pi y) puts the exponential on a unit scale, and the
    algebraic endpoint singularity at v = 0 (s < 1) is absorbed by tanh-sinh.
    """
    s, y = to_mpf(s), to_mpf(y)
    if s <= 0:
        raise DomainError(f"kbessel integral representation needs s > 0, got {s}")
    if y <= 0:
        raise DomainError(f"kbessel needs y > 0, got {y}")
    a = 2 * mp.pi * y
    with mp.extradps(10):
        def integrand(v):
            u = v / a
            return (u * (u + 2)) ** (s - 1) * mp.exp(-v)

        inner = mp.quad(integrand, [0, 1, 10, mp.inf]) / a
        value = mp.sqrt(mp.pi) / mp.gamma(s) * (mp.pi * y) ** (s - mp.mpf(1) / 2) * inner * mp.exp(-a)
    return +value


@at_working_precision
def kbessel_s_derivative_at_1(y) -> mp.mpf:
    """d/ds K_{s-1/2}(2 pi y) at s = 1, in closed form Gamma(0, 4 pi y) e^{2 pi y} / (2 sqrt y)."""
    y = to_mpf(y)
    if y <= 0:
        raise DomainError(f"y must be positive, got {y}")
    return exp_int_e1(4 * mp.pi * y) * mp.exp(2 * mp.pi * y) / (2 * mp.sqrt(y))


@at_working_precision
def whittaker_w(s, n: int, z: HalfPlanePoint) -> mp.mpc:
    """W_s(nz) = 2 |n|^{1/2} y^{1/2} K_{s-1/2}(2 pi |n| y) e(nx)."""
    if n == 0:
        raise DomainError("whittaker_w is defined for n != 0")
    m = abs(n)
    y = z.im
    return 2 * mp.sqrt(m * y) * kbessel(s, m * y) * e(n * z.re)


@at_working_precision
def whittaker_star(n: int, z: HalfPlanePoint) -> mp.mpc:
    """W*(nz) = Gamma(0, 4 pi n y) e^{4 pi n y} e(nz), the s-derivative of W_s(nz) at s = 1."""
    if n < 1:
        raise DomainError("whittaker_star needs n >= 1")
    y = z.im
    ny = n * y
    return exp_int_e1(4 * mp.pi * ny) * mp.exp(2 * mp.pi * ny) * e(n * z.re)


@at_working_precision
def harmonic_integral(n: int) -> mp.mpf:
    """Quadrature of int_0^inf y^n log(y) e^{-y} dy."""
    if n < 0:
        raise DomainError("harmonic_integral needs n >= 0")
    with mp.extradps(10):
        f = lambda t: t**n * mp.log(t) * mp.exp(-t)
        value = mp.quad(f, [0, 1, n + 1, 4 * (n + 1), mp.inf])
    return +value


@at_working_precision
def harmonic_integral_closed_form(n: int) -> mp.mpf:
    h = harmonic(n)
    return mp.factorial(n) * (mp.mpf(h.numerator) / h.denominator - euler_gamma())


# -- finite differences ------------------------------------------------------


@dataclass(frozen=True)
class FDConfig:
    """Finite-difference settings.  ``step`` is relative: the stencil width is step * y."""

    step: float = 1e-3
    richardson_levels: int = 3

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError("FD step must be positive")
        if not 1 <= self.richardson_levels <= 4:
            raise ValueError("richardson_levels must be in 1..4")


DEFAULT_FD = FDConfig()


def _value(v):
    return v.value if isinstance(v, Approx) else v


def _richardson(estimates: list) -> Approx:
    """Extrapolate O(h^2) estimates at h, h/2, h/4, ...; error from the last two columns."""
    table = [list(estimates)]
    for j in range(1, len(estimates)):
        prev = table[-1]
        factor = mp.mpf(4) ** j - 1
        table.append([prev[i + 1] + (prev[i + 1] - prev[i]) / factor for i in range(len(prev) - 1)])
    best = table[-1][-1]
    if len(estimates) == 1:
        return Approx(best, mp.inf)
    return Approx(best, abs(best - table[-2][-1]))


def _check_stencil(z: HalfPlanePoint, h) -> None:
    if not z.im - h > 0:
        raise DomainError("finite-difference stencil leaves the upper half-plane")


def _sampler(fn, z: HalfPlanePoint):
    x, y = z.re, z.im
    f = lambda dx, dy: mp.mpc(_value(fn(HalfPlanePoint(x + dx, y + dy))))
    return f


@at_working_precision
def fd_laplacian(fn, z: HalfPlanePoint, cfg: FDConfig = DEFAULT_FD) -> Approx:
    """-y^2 (f_xx + f_yy) by the 5-point stencil with Richardson extrapolation."""
    y = z.im
    h0 = mp.mpf(cfg.step) * y
    _check_stencil(z, h0)
    f = _sampler(fn, z)
    center = f(0, 0)
    estimates = []
    for level in range(cfg.richardson_levels):
        h = h0 / 2**level
        lap = (f(h, 0) + f(-h, 0) + f(0, h) + f(0, -h) - 4 * center) / h**2
        estimates.append(-y**2 * lap)
    return _richardson(estimates)


def _wirtinger(fn, z, cfg, sign) -> Approx:
    y = z.im
    h0 = mp.mpf(cfg.step) * y
    _check_stencil(z, h0)
    f = _sampler(fn, z)
    estimates = []
    for level in range(cfg.richardson_levels):
        h = h0 / 2**level
        dx = (f(h, 0) - f(-h, 0)) / (2 * h)
        dy = (f(0, h) - f(0, -h)) / (2 * h)
        estimates.append((dx + sign * 1j * dy) / 2)
    return _richardson(estimates)


@at_working_precision
def fd_dz(fn, z: HalfPlanePoint, cfg: FDConfig = DEFAULT_FD) -> Approx:
    """d/dz = (d/dx - i d/dy) / 2 by central differences."""
    return _wirtinger(fn, z, cfg, -1)


@at_working_precision
def fd_dzbar(fn, z: HalfPlanePoint, cfg: FDConfig = DEFAULT_FD) -> Approx:
    """d/dzbar = (d/dx + i d/dy) / 2 by central differences."""
    return _wirtinger(fn, z, cfg, 1)


@at_working_precision
def fd_derivative(fn, t, step=mp.mpf("1e-4"), levels: int = 3) -> Approx:
    """Central-difference derivative of a real-parameter function with Richardson extrapolation."""
    t = to_mpf(t)
    step = to_mpf(step)
    estimates = []
    for level in range(levels):
        h = step / 2**level
        estimates.append((_value(fn(t + h)) - _value(fn(t - h))) / (2 * h))
    return _richardson(estimates)
