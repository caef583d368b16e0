"""Arithmetic functions, constants and the Fuchsian group descriptor."""
from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .numerics import DomainError, at_working_precision

# 80 digits each; parsed at whatever precision is active.
EULER_GAMMA_DIGITS = (
    "0.57721566490153286060651209008240243104215933593992359880576723488486772677766467"
)
PI_DIGITS = (
    "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899"
)


def euler_gamma() -> mp.mpf:
    return mp.mpf(EULER_GAMMA_DIGITS)


def pi() -> mp.mpf:
    return mp.mpf(PI_DIGITS)


@dataclass(frozen=True)
class Constants:
    euler_gamma: mp.mpf
    pi: mp.mpf


@at_working_precision
def constants() -> Constants:
    return Constants(euler_gamma(), pi())


@functools.lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization by trial division, as ((p, e), ...) with p ascending."""
    if n <= 0:
        raise DomainError(f"factorize needs n >= 1, got {n}")
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def prime_divisors(n: int) -> list[int]:
    return [p for p, _ in factorize(n)]


def divisors(n: int) -> list[int]:
    if n <= 0:
        raise DomainError(f"divisors needs n >= 1, got {n}")
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factorize(n))


@functools.lru_cache(maxsize=65536)
def sigma(l: int, n: int) -> int:
    """Divisor power sum: sum of d**l over the positive divisors d of n."""
    if n <= 0:
        raise DomainError(f"sigma needs n >= 1, got {n}")
    if l < 0:
        raise DomainError(f"sigma needs l >= 0, got {l}")
    # multiplicative: product of geometric sums over prime powers
    total = 1
    for p, e in factorize(n):
        total *= sum(p ** (l * j) for j in range(e + 1))
    return total


def mobius(n: int) -> int:
    if n <= 0:
        raise DomainError(f"mobius needs n >= 1, got {n}")
    fac = factorize(n)
    if any(e > 1 for _, e in fac):
        return 0
    return -1 if len(fac) % 2 else 1


@functools.lru_cache(maxsize=1024)
def harmonic(n: int) -> Fraction:
    """H_n = 1 + 1/2 + ... + 1/n as an exact rational, with H_0 = 0."""
    if n < 0:
        raise DomainError(f"harmonic needs n >= 0, got {n}")
    if n == 0:
        return Fraction(0)
    return harmonic(n - 1) + Fraction(1, n)


def _check_squarefree_level(N: int) -> None:
    if N <= 0 or not is_squarefree(N):
        raise DomainError(f"level must be a positive square-free integer, got {N}")


@at_working_precision
def incomplete_zeta(N: int, s) -> mp.mpf:
    """Euler product over the primes dividing N: prod (1 - p**-s)**-1."""
    _check_squarefree_level(N)
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("incomplete_zeta needs s > 0")
    out = mp.mpf(1)
    for p in prime_divisors(N):
        out /= 1 - mp.mpf(p) ** (-s)
    return out


@at_working_precision
def incomplete_zeta_logderiv(N: int, s) -> mp.mpf:
    """d/ds log zeta_N(s) = -sum_{p|N} log(p) p**-s / (1 - p**-s)."""
    _check_squarefree_level(N)
    s = mp.mpf(s)
    if s <= 0:
        raise DomainError("incomplete_zeta_logderiv needs s > 0")
    out = mp.mpf(0)
    for p in prime_divisors(N):
        ps = mp.mpf(p) ** (-s)
        out -= mp.log(p) * ps / (1 - ps)
    return out


@dataclass(frozen=True)
class GroupSpec:
    """PSL2(Z) (kind='full_modular', level 1) or Gamma_0(N) with N square-free."""

    kind: str
    level: int = 1

    def __post_init__(self):
        if self.kind == "full_modular":
            if self.level != 1:
                raise DomainError("full_modular group has level 1")
        elif self.kind == "gamma0":
            _check_squarefree_level(self.level)
        else:
            raise DomainError(f"unknown group kind {self.kind!r}")

    @classmethod
    def full_modular(cls) -> "GroupSpec":
        return cls("full_modular", 1)

    @classmethod
    def gamma0(cls, N: int) -> "GroupSpec":
        return cls("gamma0", N)

    @property
    def index(self) -> Fraction:
        """Index in PSL2(Z): N * prod_{p|N} (1 + 1/p)."""
        out = Fraction(self.level)
        for p in prime_divisors(self.level) if self.level > 1 else []:
            out *= 1 + Fraction(1, p)
        return out

    @property
    @at_working_precision
    def volume(self) -> mp.mpf:
        idx = self.index
        return pi() / 3 * idx.numerator / idx.denominator

    def to_json(self) -> dict:
        return {"kind": self.kind, "level": self.level}
