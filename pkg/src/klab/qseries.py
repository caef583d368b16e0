"""Truncated q-expansions: exact or extended-precision coefficients a_0..a_N.

Exact series hold ints / Fractions.  Products of exact series go through
Kronecker substitution (pack the coefficients into one big integer, multiply
once, unpack), which keeps Delta**2 to a few thousand terms cheap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath as mp

from .arithlib import sigma
from .numerics import (
    Approx,
    DomainError,
    at_working_precision,
    power_exp_tail,
    to_mpc,
    to_mpf,
)

EXACT = "exact"
FLOATING = "floating"

G12_CONSTANT = Fraction(691, 65520)  # -B_12 / 24


def _normalize_exact(c):
    if isinstance(c, bool) or not isinstance(c, (int, Fraction)):
        raise TypeError(f"exact coefficients must be int or Fraction, got {type(c).__name__}")
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


@dataclass(frozen=True)
class HalfPlanePoint:
    """z = x + iy in the upper half-plane; x and y kept as given, converted on use."""

    x: object
    y: object

    def __post_init__(self):
        if not to_mpf(self.y) > 0:
            raise DomainError(f"point must lie in the upper half-plane, got y={self.y}")

    @classmethod
    def from_complex(cls, z) -> "HalfPlanePoint":
        z = mp.mpc(z)
        return cls(z.real, z.imag)

    @property
    def re(self) -> mp.mpf:
        return to_mpf(self.x)

    @property
    def im(self) -> mp.mpf:
        return to_mpf(self.y)

    @property
    def z(self) -> mp.mpc:
        return mp.mpc(self.re, self.im)

    def shifted(self, dx=0, dy=0) -> "HalfPlanePoint":
        return HalfPlanePoint(self.re + dx, self.im + dy)


def _num(c):
    return to_mpc(c) if isinstance(c, (mp.mpc, complex)) else to_mpf(c)


def e(z) -> mp.mpc:
    """e(z) = exp(2 pi i z)."""
    return mp.expjpi(2 * mp.mpc(z))


@dataclass(frozen=True)
class QExpansion:
    coeffs: tuple
    weight: int | None = None
    kind: str = EXACT

    def __post_init__(self):
        if not self.coeffs:
            raise ValueError("a q-expansion needs at least the constant coefficient")
        if self.kind == EXACT:
            object.__setattr__(self, "coeffs", tuple(_normalize_exact(c) for c in self.coeffs))
        elif self.kind == FLOATING:
            object.__setattr__(self, "coeffs", tuple(self.coeffs))
        else:
            raise ValueError(f"unknown coefficient kind {self.kind!r}")

    @classmethod
    def exact(cls, coeffs: Sequence, weight: int | None = None) -> "QExpansion":
        return cls(tuple(coeffs), weight, EXACT)

    @classmethod
    def floating(cls, coeffs: Sequence, weight: int | None = None) -> "QExpansion":
        return cls(tuple(coeffs), weight, FLOATING)

    @property
    def truncation_order(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("q-expansion index must be non-negative")
        if n > self.truncation_order:
            raise IndexError(
                f"coefficient {n} is beyond the truncation order {self.truncation_order}"
            )
        return self.coeffs[n]

    def is_cuspidal(self) -> bool:
        return self.coeffs[0] == 0

    def truncate(self, N: int) -> "QExpansion":
        if N > self.truncation_order:
            raise ValueError(f"cannot extend truncation {self.truncation_order} to {N}")
        return QExpansion(self.coeffs[: N + 1], self.weight, self.kind)

    @at_working_precision
    def to_floating(self) -> "QExpansion":
        if self.kind == FLOATING:
            return self
        return QExpansion([to_mpf(c) for c in self.coeffs], self.weight, FLOATING)

    def _binary(self, other, op) -> "QExpansion":
        if not isinstance(other, QExpansion):
            return NotImplemented
        if other.kind != self.kind:
            raise TypeError("cannot combine exact and floating q-expansions")
        n = min(len(self), len(other))
        weight = self.weight if self.weight == other.weight else None
        return QExpansion([op(a, b) for a, b in zip(self.coeffs[:n], other.coeffs[:n])], weight, self.kind)

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __neg__(self):
        return QExpansion([-c for c in self.coeffs], self.weight, self.kind)

    def scale(self, c) -> "QExpansion":
        if self.kind == EXACT:
            return QExpansion([c * a for a in self.coeffs], self.weight, EXACT)
        c = to_mpf(c)
        return QExpansion([c * a for a in self.coeffs], self.weight, FLOATING)

    def __mul__(self, other):
        if isinstance(other, QExpansion):
            return qexp_mul(self, other)
        if isinstance(other, (int, Fraction)) or self.kind == FLOATING:
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, QExpansion):
            return NotImplemented
        return self.__mul__(other)

    def to_json(self) -> dict:
        if self.kind == EXACT:
            cs = [str(c) for c in self.coeffs]
        else:
            cs = [mp.nstr(c, mp.mp.dps) if not isinstance(c, mp.mpc) else str(c) for c in self.coeffs]
        return {
            "truncation_order": self.truncation_order,
            "weight": self.weight,
            "kind": self.kind,
            "coeffs": cs,
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QExpansion":
        kind = obj["kind"]
        if kind == EXACT:
            cs = [Fraction(c) for c in obj["coeffs"]]
        else:
            cs = [mp.mpf(c) for c in obj["coeffs"]]
        q = cls(tuple(cs), obj.get("weight"), kind)
        if q.truncation_order != obj["truncation_order"]:
            raise ValueError("truncation_order does not match the number of coefficients")
        return q


def _pack(cs: list[int], nbytes: int, half: int) -> int:
    # digits c + half are non-negative; subtract the all-half word afterwards
    raw = b"".join((c + half).to_bytes(nbytes, "little") for c in cs)
    return int.from_bytes(raw, "little") - _repeated(half, nbytes, len(cs))


def _repeated(digit: int, nbytes: int, count: int) -> int:
    return int.from_bytes(digit.to_bytes(nbytes, "little") * count, "little")


def _kronecker_mul(a: list[int], b: list[int], n: int) -> list[int]:
    """First n coefficients of the product of two integer polynomials."""
    a, b = a[:n], b[:n]
    ma = max((abs(c) for c in a), default=0)
    mb = max((abs(c) for c in b), default=0)
    if ma == 0 or mb == 0:
        return [0] * n
    bound = ma * mb * min(len(a), len(b))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    half = 1 << (8 * nbytes - 1)
    count = len(a) + len(b) - 1
    prod = _pack(a, nbytes, half) * _pack(b, nbytes, half) + _repeated(half, nbytes, count)
    raw = prod.to_bytes(nbytes * count, "little")
    out = [
        int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little") - half
        for i in range(min(n, count))
    ]
    return out + [0] * (n - len(out))


def _common_denominator(cs) -> int:
    den = 1
    for c in cs:
        if isinstance(c, Fraction):
            den = den * c.denominator // math.gcd(den, c.denominator)
    return den


def qexp_mul(a: QExpansion, b: QExpansion) -> QExpansion:
    """Cauchy product truncated at the smaller of the two truncation orders."""
    if a.kind != b.kind:
        raise TypeError("qexp_mul needs two exact or two floating q-expansions")
    n = min(len(a), len(b))
    weight = a.weight + b.weight if a.weight is not None and b.weight is not None else None
    if a.kind == EXACT:
        da, db = _common_denominator(a.coeffs[:n]), _common_denominator(b.coeffs[:n])
        ia = [int(c * da) for c in a.coeffs[:n]]
        ib = [int(c * db) for c in b.coeffs[:n]]
        prod = _kronecker_mul(ia, ib, n)
        den = da * db
        return QExpansion([Fraction(c, den) if den != 1 else c for c in prod], weight, EXACT)
    return _float_mul(a, b, n, weight)


@at_working_precision
def _float_mul(a, b, n, weight):
    ac = [_num(c) for c in a.coeffs[:n]]
    bc = [_num(c) for c in b.coeffs[:n]]
    out = [mp.fsum(ac[i] * bc[k - i] for i in range(k + 1)) for k in range(n)]
    return QExpansion(out, weight, FLOATING)


def qexp_pow(a: QExpansion, k: int) -> QExpansion:
    if k < 0:
        raise DomainError("only non-negative powers are supported")
    one = [1] + [0] * a.truncation_order
    result = QExpansion(one, 0 if a.weight is not None else None, a.kind)
    base = a
    while k:
        if k & 1:
            result = qexp_mul(result, base)
        k >>= 1
        if k:
            base = qexp_mul(base, base)
    return result


def euler_product(N: int) -> QExpansion:
    """prod_{n>=1} (1 - q^n) to order N, via the pentagonal number theorem."""
    if N < 0:
        raise DomainError("truncation order must be non-negative")
    c = [0] * (N + 1)
    k = 0
    while True:
        sign = -1 if k % 2 else 1
        g1 = k * (3 * k - 1) // 2
        g2 = k * (3 * k + 1) // 2
        if g1 > N:
            break
        c[g1] += sign
        if k and g2 <= N:
            c[g2] += sign
        k += 1
    return QExpansion.exact(c)


def delta_qexp(N: int) -> QExpansion:
    """Delta = q prod (1 - q^n)^24 to order N; coefficient n is tau(n)."""
    if N < 1:
        raise DomainError("delta_qexp needs N >= 1")
    p24 = qexp_pow(euler_product(N - 1), 24)
    return QExpansion.exact([0, *p24.coeffs], weight=12)


def g12_qexp(N: int) -> QExpansion:
    """G_12 = 691/65520 + sum sigma_11(n) q^n to order N."""
    if N < 0:
        raise DomainError("g12_qexp needs N >= 0")
    return QExpansion.exact([G12_CONSTANT] + [sigma(11, n) for n in range(1, N + 1)], weight=12)


def s24_basis(N: int) -> tuple[QExpansion, QExpansion]:
    """(Delta^2, Delta*G_12) to order N: a basis of weight-24 cusp forms for PSL2(Z)."""
    if N < 2:
        raise DomainError("s24_basis needs N >= 2")
    d = delta_qexp(N)
    return qexp_mul(d, d), qexp_mul(d, g12_qexp(N))


def f_antiderivative(a: QExpansion) -> QExpansion:
    """F = sum a_n / n q^n for a cuspidal series; 2 pi i dF/dz = f."""
    if a.coeffs[0] != 0:
        raise DomainError("f_antiderivative needs a zero constant term")
    if a.kind == EXACT:
        cs = [0] + [Fraction(c) / n for n, c in enumerate(a.coeffs[1:], 1)]
        return QExpansion(cs, None, EXACT)
    return _float_antiderivative(a)


@at_working_precision
def _float_antiderivative(a):
    return QExpansion([mp.mpf(0)] + [c / n for n, c in enumerate(a.coeffs[1:], 1)], None, FLOATING)


def renormalize_weight(a: QExpansion, target_weight: int = 2) -> QExpansion:
    """Divide a_n by n**((k - target)/2): rescales growth n^(k/2) to n^(target/2).

    Used to build test data with the growth of a weight-2 cusp form from a
    higher-weight one.  The exponent must be an integer.
    """
    if a.weight is None:
        raise DomainError("renormalize_weight needs a weight tag")
    shift, odd = divmod(a.weight - target_weight, 2)
    if odd:
        raise DomainError("weight difference must be even")
    if a.kind == EXACT:
        cs = [a.coeffs[0]] + [Fraction(c, n**shift) for n, c in enumerate(a.coeffs[1:], 1)]
        return QExpansion(cs, target_weight, EXACT)
    cs = [a.coeffs[0]] + [c / mp.mpf(n) ** shift for n, c in enumerate(a.coeffs[1:], 1)]
    return QExpansion(cs, target_weight, FLOATING)


@at_working_precision
def coefficient_growth(a: QExpansion) -> tuple[mp.mpf, mp.mpf]:
    """Fit (c, p) with |a_n| <= c n^p for 1 <= n <= N.

    With a weight tag, p = k/2 + 1 for cusp forms (Hecke-type growth) and
    p = k - 1 otherwise (Eisenstein-type growth).  Without one, p comes from a
    log-log regression over the last quarter of the nonzero coefficients.
    c is the largest observed ratio times a 1.5 safety factor.
    """
    mags = [(n, abs(_num(c))) for n, c in enumerate(a.coeffs) if n]
    mags = [(n, m) for n, m in mags if m != 0]
    if not mags:
        return mp.mpf(0), mp.mpf(0)
    if a.weight is not None:
        p = mp.mpf(a.weight) / 2 + 1 if a.is_cuspidal() else mp.mpf(a.weight - 1)
    else:
        tail = mags[-max(2, len(mags) // 4):]
        if len(tail) < 2 or tail[0][0] == tail[-1][0]:
            p = mp.mpf(0)
        else:
            xs = [mp.log(n) for n, _ in tail]
            ys = [mp.log(m) for _, m in tail]
            xm, ym = mp.fsum(xs) / len(xs), mp.fsum(ys) / len(ys)
            sxx = mp.fsum((x - xm) ** 2 for x in xs)
            p = max(mp.mpf(0), mp.fsum((x - xm) * (y - ym) for x, y in zip(xs, ys)) / sxx)
    c = max(m / mp.mpf(n) ** p for n, m in mags) * mp.mpf("1.5")
    return c, p


@at_working_precision
def qexp_eval(a: QExpansion, z: HalfPlanePoint) -> Approx:
    """Sum_{n<=N} a_n e(nz), with a bound on the neglected terms n > N."""
    x, y = z.re, z.im
    rate = 2 * mp.pi * y
    terms = []
    for n, c in enumerate(a.coeffs):
        if c == 0:
            continue
        cv = _num(c)
        terms.append(cv * mp.expjpi(2 * n * x) * mp.exp(-rate * n))
    value = mp.fsum(terms) if terms else mp.mpc(0)
    c, p = coefficient_growth(a)
    tail = power_exp_tail(c, p, rate, a.truncation_order)
    return Approx(mp.mpc(value), tail)
