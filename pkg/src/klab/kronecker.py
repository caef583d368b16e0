"""First-order Kronecker limit function K_1 for PSL2(Z) and Gamma_0(N), N square-free.

K_1(z) = y + K - log(y)/V + sum_{n != 0} k(n) e(n z)   (e(n zbar) for n < 0)

Also: the non-holomorphic piece A(z) built from W*, partial sums of the
convolution Dirichlet series L^{++}_m and L^-_m in their region of absolute
convergence, and assembly of K_2 from caller-supplied coefficients b_m.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import mpmath as mp

from .arithlib import (
    GroupSpec,
    divisors,
    euler_gamma,
    incomplete_zeta,
    incomplete_zeta_logderiv,
    mobius,
    sigma,
)
from .numerics import (
    Approx,
    DomainError,
    TruncationError,
    at_working_precision,
    fmt,
    log_power_tail,
    power_exp_tail,
    required_terms,
    to_mpf,
)
from .qseries import HalfPlanePoint, QExpansion, coefficient_growth, e, f_antiderivative, qexp_eval
from .specfun import whittaker_star

Y_FLOOR = mp.mpf("0.05")
_SHAPE_TOL = mp.mpf("1e-14")


@dataclass(frozen=True)
class KroneckerLimit:
    """Fourier data of K_1.

    ``k_table[n - 1]`` is k(n) for 1 <= n <= n_max; k(-n) = k(n) for the groups here.
    ``k_bound_scale`` is a constant B with |k(n)| <= B (1 + log n) for every n >= 1.
    """

    group: GroupSpec
    k_table: tuple
    constant_K: mp.mpf
    y_coeff: mp.mpf
    logy_coeff: mp.mpf
    k_bound_scale: mp.mpf
    volume: mp.mpf = field(repr=False)

    def __post_init__(self):
        with mp.workdps(max(mp.mp.dps, 20)):
            if abs(self.y_coeff - 1) > _SHAPE_TOL:
                raise ArithmeticError(f"coefficient of y is {self.y_coeff}, expected 1")
            if abs(self.logy_coeff + 1 / self.volume) > _SHAPE_TOL:
                raise ArithmeticError(f"coefficient of log y is {self.logy_coeff}, expected -1/V")

    @property
    def n_max(self) -> int:
        return len(self.k_table)

    def k(self, n: int) -> mp.mpf:
        n = abs(n)
        if n == 0:
            raise DomainError("k(0) is not a Fourier coefficient; use k_zero(m)")
        if n > self.n_max:
            raise TruncationError(f"k({n}) requested but the table stops at {self.n_max}", n)
        return self.k_table[n - 1]

    @at_working_precision
    def k_zero(self, m: int) -> mp.mpf:
        """K + (gamma + log 4 pi m) / V, the value playing the role of k(0) in L^+_m."""
        return self.constant_K + (euler_gamma() + mp.log(4 * mp.pi * m)) / self.volume

    def to_json(self, additive_constant=None) -> dict:
        return {
            "group": self.group.to_json(),
            "K": fmt(self.constant_K),
            "V": fmt(self.volume),
            "k": {str(n): fmt(v) for n, v in enumerate(self.k_table, 1)},
            "gamma0_constant": None if additive_constant is None else fmt(additive_constant),
        }


@dataclass(frozen=True)
class K2Coefficients:
    """Coefficients b_m (m >= 1) of e(mz) and b_{-m} of e(-m zbar) in K_2.

    b_plus[m - 1] = -L^+_m(1), b_minus[m - 1] = -L^-_m(1).  Their values come from
    an analytic continuation that this package does not perform, so they are
    supplied by the caller.
    """

    b_plus: tuple
    b_minus: tuple
    source: str = "user_supplied"
    errors: tuple | None = None

    def __post_init__(self):
        if len(self.b_plus) != len(self.b_minus):
            raise ValueError("b_plus and b_minus must have the same length")
        if self.source not in ("user_supplied", "extrapolated"):
            raise ValueError(f"unknown source {self.source!r}")
        if self.source == "extrapolated" and (self.errors is None or len(self.errors) != len(self.b_plus)):
            raise ValueError("extrapolated coefficients need one error entry per m")

    @classmethod
    def zeros(cls, M: int) -> "K2Coefficients":
        return cls((0,) * M, (0,) * M)


@at_working_precision
def k1_full_modular(N_max: int) -> KroneckerLimit:
    """k(n) = (6/pi) sigma(n)/n, K = (3/pi)(gamma - log 4 pi), V = pi/3."""
    if N_max < 1:
        raise DomainError("N_max must be >= 1")
    group = GroupSpec.full_modular()
    V = group.volume
    six_pi = 6 / mp.pi
    table = tuple(six_pi * sigma(1, n) / n for n in range(1, N_max + 1))
    K = 3 / mp.pi * (euler_gamma() - mp.log(4 * mp.pi))
    # sigma(n)/n <= H_n <= 1 + log n
    return KroneckerLimit(group, table, K, mp.mpf(1), -1 / V, six_pi, V)


def _pullback_weights(N: int):
    """c_d(1) = zeta_N(2) mu(d) / (dN) and c_d'(1) for d | N."""
    z2 = incomplete_zeta(N, 2)
    dlog = 2 * incomplete_zeta_logderiv(N, 2)
    out = []
    for d in divisors(N):
        c = z2 * mobius(d) / (d * N)
        out.append((d, c, c * (dlog - mp.log(d * N))))
    return out


@at_working_precision
def k1_gamma0_squarefree(N: int, N_max: int) -> tuple[KroneckerLimit, mp.mpf]:
    """K_1 for Gamma_0(N) from E_N(z, s) = zeta_N(2s) sum_{d|N} mu(d) (dN)^{-s} E(Nz/d, s).

    With c_d(s) the weights above, the constant Laurent term at s = 1 is
    sum_d c_d(1) K_1(Nz/d) + (1/V) sum_d c_d'(1).  The first part is returned as a
    KroneckerLimit; the second, z-independent scalar is returned separately.
    """
    group = GroupSpec.gamma0(N)
    if N_max < 1:
        raise DomainError("N_max must be >= 1")
    base = k1_full_modular(N_max)
    V = base.volume
    weights = _pullback_weights(N)

    y_coeff = mp.fsum(c * mp.mpf(N) / d for d, c, _ in weights)
    logy_coeff = -mp.fsum(c for _, c, _ in weights) / V
    constant = mp.fsum(c * (base.constant_K - mp.log(mp.mpf(N) / d) / V) for d, c, _ in weights)
    additive = mp.fsum(dc for _, _, dc in weights) / V

    table = []
    for n in range(1, N_max + 1):
        # K_1(Nz/d) contributes at frequency n when (N/d) | n, with k(n d / N)
        terms = [c * base.k(n * d // N) for d, c, _ in weights if n % (N // d) == 0]
        table.append(mp.fsum(terms) if terms else mp.mpf(0))
    bound_scale = mp.fsum(abs(c) for _, c, _ in weights) * base.k_bound_scale

    limit = KroneckerLimit(group, tuple(table), constant, y_coeff, logy_coeff, bound_scale, group.volume)
    return limit, additive


@at_working_precision
def gamma0_prime_coefficients(p: int, N_max: int) -> list:
    """k_p(n) = [p | n] p/(p^2-1) k(n/p) - k(n)/(p^2-1), from (p K_1(pz) - K_1(z))/(p^2-1)."""
    base = k1_full_modular(N_max)
    p2 = mp.mpf(p) ** 2 - 1
    out = []
    for n in range(1, N_max + 1):
        v = -base.k(n) / p2
        if n % p == 0:
            v += p * base.k(n // p) / p2
        out.append(v)
    return out


def _k_tail(k1: KroneckerLimit, y, N: int) -> mp.mpf:
    """2 sum_{n > N} |k(n)| e^{-2 pi n y}, using |k(n)| <= B (1 + log n).

    log n <= log N + (n - N)/N turns the sum into two geometric series.
    """
    r = mp.exp(-2 * mp.pi * y)
    head = r ** (N + 1) / (1 - r)
    return 2 * k1.k_bound_scale * (head * (1 + mp.log(N)) + head / (N * (1 - r)))


def _check_y(z: HalfPlanePoint) -> None:
    if z.im < Y_FLOOR:
        raise DomainError(f"evaluation needs y >= {mp.nstr(Y_FLOOR, 3)}; got y = {mp.nstr(z.im, 8)}")


@at_working_precision
def k1_eval(k1: KroneckerLimit, z: HalfPlanePoint, tol=None) -> Approx:
    """Fourier-side K_1(z) with a bound on the omitted frequencies |n| > n_max."""
    _check_y(z)
    x, y = z.re, z.im
    rate = 2 * mp.pi * y
    terms = [k1.y_coeff * y, k1.constant_K, k1.logy_coeff * mp.log(y)]
    for n, kn in enumerate(k1.k_table, 1):
        # e(nz) + e(-n zbar) = 2 cos(2 pi n x) e^{-2 pi n y}
        terms.append(2 * kn * mp.cospi(2 * n * x) * mp.exp(-rate * n))
    tail = _k_tail(k1, y, k1.n_max)
    if tol is not None and tail > tol:
        need = required_terms(lambda N: _k_tail(k1, y, N), to_mpf(tol), k1.n_max)
        raise TruncationError(
            f"tail bound {mp.nstr(tail, 3)} exceeds tol at y = {mp.nstr(y, 6)}; need N_max >= {need}",
            need,
        )
    return Approx(mp.fsum(terms), tail)


@at_working_precision
def k1_dzbar(k1: KroneckerLimit, z: HalfPlanePoint) -> mp.mpc:
    """d/dzbar K_1(z) term by term: i/2 + i logy_coeff/(2y) - 2 pi i sum n k(n) e(-n zbar)."""
    _check_y(z)
    y = z.im
    zbar = mp.conj(z.z)
    s = mp.fsum(n * kn * e(-n * zbar) for n, kn in enumerate(k1.k_table, 1))
    return 1j * k1.y_coeff / 2 + 1j * k1.logy_coeff / (2 * y) - 2j * mp.pi * s


@at_working_precision
def k1_closed_form(z: HalfPlanePoint, delta: QExpansion) -> Approx:
    """-(1/4 pi) log(y^12 |Delta(z)|^2) + (3/pi)(gamma - log 4 pi) for PSL2(Z).

    ``delta`` is the q-expansion of Delta; its evaluation tail bound is carried
    through the logarithm.
    """
    y = z.im
    dv, derr = qexp_eval(delta, z)
    mod = abs(dv)
    if derr >= mod:
        raise TruncationError("Delta truncation too short for this point")
    value = -(12 * mp.log(y) + 2 * mp.log(mod)) / (4 * mp.pi) + 3 / mp.pi * (
        euler_gamma() - mp.log(4 * mp.pi)
    )
    # |log|D + eps| - log|D|| <= eps / (|D| - eps)
    err = 2 * derr / (mod - derr) / (4 * mp.pi)
    return Approx(value, err)


def _cusp_check(f: QExpansion) -> None:
    if not f.is_cuspidal():
        raise DomainError("f must be cuspidal (zero constant term)")


@at_working_precision
def a_func_eval(f: QExpansion, V, z: HalfPlanePoint) -> Approx:
    """A(z) = -(1/V) sum_n (a_n/n) W*(nz), with a tail bound.

    |W*(nz)| <= e^{-2 pi n y} / (4 pi n y) since Gamma(0, x) < e^{-x}/x.
    """
    _cusp_check(f)
    _check_y(z)
    V = to_mpf(V)
    y = z.im
    terms = []
    for n in range(1, f.truncation_order + 1):
        a = f[n]
        if a != 0:
            terms.append(to_mpf(a) / n * whittaker_star(n, z))
    value = -mp.fsum(terms) / V if terms else mp.mpc(0)
    c, p = coefficient_growth(f)
    # |a_n / n| |W*(nz)| <= c n^{p-2} e^{-2 pi n y} / (4 pi y)
    tail = power_exp_tail(c / (4 * mp.pi * y), p - 2, 2 * mp.pi * y, f.truncation_order) / V
    return Approx(mp.mpc(value), tail)


def _check_l_args(f: QExpansion, k1: KroneckerLimit, m: int, s, N_terms: int) -> mp.mpf:
    s = to_mpf(s)
    if s <= 3:
        raise DomainError(f"partial sums are only defined in the convergence region s > 3, got {s}")
    if m < 1:
        raise DomainError("m must be >= 1")
    if N_terms < 1:
        raise DomainError("N_terms must be >= 1")
    if N_terms > f.truncation_order:
        raise TruncationError(f"f is truncated at {f.truncation_order}, need {N_terms} terms", N_terms)
    return s


@at_working_precision
def _linear_growth_constant(f: QExpansion) -> mp.mpf:
    """c with |a_n| <= c n on the available coefficients, times 1.5 (trivial bound a_n << n)."""
    ratios = [abs(to_mpf(f[n])) / n for n in range(1, f.truncation_order + 1)]
    return max(ratios, default=mp.mpf(0)) * mp.mpf("1.5")


@at_working_precision
def l_plusplus_partial(f: QExpansion, k1: KroneckerLimit, m: int, s, N_terms: int) -> Approx:
    """sum_{n=m+1}^{N_terms} a_n k(m-n) / n^s and a bound on the remainder n > N_terms."""
    s = _check_l_args(f, k1, m, s, N_terms)
    if N_terms - m > k1.n_max:
        raise TruncationError(f"k table too short; need n_max >= {N_terms - m}", N_terms - m)
    terms = [
        to_mpf(f[n]) * k1.k(m - n) / mp.mpf(n) ** s
        for n in range(m + 1, N_terms + 1)
        if f[n] != 0
    ]
    value = mp.fsum(terms) if terms else mp.mpf(0)
    # |a_n k(m-n)| n^-s <= c B (1 + log n) n^{1-s}
    c = _linear_growth_constant(f)
    remainder = c * k1.k_bound_scale * log_power_tail(s - 1, max(N_terms, m))
    return Approx(value, remainder)


@at_working_precision
def l_minus_partial(f: QExpansion, k1: KroneckerLimit, m: int, s, N_terms: int) -> Approx:
    """sum_{n=1}^{N_terms} (a_n/n) k(-m-n) / (m+n)^{s-1} and a remainder bound."""
    s = _check_l_args(f, k1, m, s, N_terms)
    if N_terms + m > k1.n_max:
        raise TruncationError(f"k table too short; need n_max >= {N_terms + m}", N_terms + m)
    terms = [
        to_mpf(f[n]) / n * k1.k(-m - n) / mp.mpf(m + n) ** (s - 1)
        for n in range(1, N_terms + 1)
        if f[n] != 0
    ]
    value = mp.fsum(terms) if terms else mp.mpf(0)
    # with j = m + n: |.| <= c B (1 + log j) j^{1-s}
    c = _linear_growth_constant(f)
    remainder = c * k1.k_bound_scale * log_power_tail(s - 1, N_terms + m)
    return Approx(value, remainder)


@at_working_precision
def k2_assemble(f: QExpansion, k1: KroneckerLimit, b: K2Coefficients | None, z: HalfPlanePoint) -> Approx:
    """K_2(z) = A(z) + sum_m b_m e(mz) + sum_m b_{-m} e(-m zbar) + F(z) K_1(z).

    Errors are the propagated tail bounds of A, F and K_1 (plus the supplied
    errors on b when present).
    """
    if b is None:
        raise ValueError(
            "K2 coefficients are required: supply K2Coefficients(b_plus, b_minus); "
            "their values need the analytic continuation of L^+_m, L^-_m to s = 1"
        )
    _cusp_check(f)
    _check_y(z)
    a_val, a_err = a_func_eval(f, k1.volume, z)
    F = f_antiderivative(f)
    f_val, f_err = qexp_eval(F, z)
    k_val, k_err = k1_eval(k1, z)
    zz = z.z
    zbar = mp.conj(zz)
    b_terms = []
    b_err = mp.mpf(0)
    for m, (bp, bm) in enumerate(zip(b.b_plus, b.b_minus), 1):
        bp, bm = mp.mpc(bp), mp.mpc(bm)
        if bp:
            b_terms.append(bp * e(m * zz))
        if bm:
            b_terms.append(bm * e(-m * zbar))
        if b.errors is not None:
            b_err += 2 * to_mpf(b.errors[m - 1]) * mp.exp(-2 * mp.pi * m * z.im)
    value = a_val + (mp.fsum(b_terms) if b_terms else 0) + f_val * k_val
    err = a_err + abs(f_val) * k_err + f_err * (abs(k_val) + k_err) + b_err
    return Approx(mp.mpc(value), err)
