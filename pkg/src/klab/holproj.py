"""Holomorphic projection of f*K_1 for weight-24 cusp forms on PSL2(Z).

For f = sum a_l q^l in S_24 and Pi_hol(f K_1) = sum d_m q^m,

    pi d_m = 6 sum_{l<m} a_l sigma(m-l)/(m-l)
           + 6 m^23 sum_{l>m} a_l sigma(l-m) / (l^23 (l-m))
           + 23 a_m / (4m) + 3 a_m (2 gamma + log m - H_22).

The l = m term of the first sum is not a divisor-sum term: the constant
term y + K - (3/pi) log y of K_1 pairs with a_m and produces the last two
summands.  The infinite sum is cut at L with a certified remainder.
"""
from __future__ import annotations

from dataclasses import dataclass

import mpmath as mp

from .arithlib import euler_gamma, harmonic, sigma
from .numerics import (
    Approx,
    DomainError,
    TruncationError,
    at_working_precision,
    fmt,
    log_power_tail,
    required_terms,
    to_mpf,
)
from .qseries import QExpansion, s24_basis

WEIGHT = 24
DEFAULT_TOL = mp.mpf("1e-10")
DEFAULT_M_FIT = 10
GROWTH_SAFETY = mp.mpf("1.5")


@dataclass(frozen=True)
class ProjectionCoeffs:
    d: tuple
    tail_error: tuple
    form_id: str = "custom"
    tol: object = DEFAULT_TOL

    def __post_init__(self):
        if len(self.d) != len(self.tail_error):
            raise ValueError("d and tail_error must have equal length")
        if any(t < 0 for t in self.tail_error):
            raise ValueError("tail errors must be non-negative")

    def __len__(self):
        return len(self.d)


@dataclass(frozen=True)
class Decomposition:
    c_delta2: mp.mpf
    c_deltaG12: mp.mpf
    residual: mp.mpf

    def to_json(self) -> dict:
        return {
            "c_delta2": fmt(self.c_delta2),
            "c_deltaG12": fmt(self.c_deltaG12),
            "residual": fmt(self.residual),
        }


class _Prepared:
    """Coefficients of f converted once to working precision, plus the growth constant."""

    def __init__(self, f: QExpansion):
        if f.weight not in (None, WEIGHT):
            raise DomainError(f"expected a weight-24 form, got weight {f.weight}")
        if not f.is_cuspidal():
            raise DomainError("f must be a cusp form (zero constant term)")
        self.trunc = f.truncation_order
        self.a = [to_mpf(c) for c in f.coeffs]
        # Hecke-type bound |a_l| <= c l^12, calibrated on the computed coefficients
        ratios = [abs(self.a[l]) / mp.mpf(l) ** 12 for l in range(1, self.trunc + 1)]
        self.c = max(ratios, default=mp.mpf(0)) * GROWTH_SAFETY
        h = harmonic(22)
        self.h22 = mp.mpf(h.numerator) / h.denominator
        self.gamma = euler_gamma()

    def tail(self, m: int, L: int) -> mp.mpf:
        # |6 m^23 a_l sigma(l-m)/(l^23 (l-m))| <= 6 m^23 c (1 + log l) l^-11, using sigma(k)/k <= 1 + log k
        if self.c == 0:
            return mp.mpf(0)
        return 6 * mp.mpf(m) ** 23 * self.c * log_power_tail(11, max(L, m)) / mp.pi

    def dm(self, m: int, L: int) -> mp.mpf:
        a = self.a
        terms = [6 * a[l] * sigma(1, m - l) / (m - l) for l in range(1, m) if a[l]]
        mm = mp.mpf(m)
        terms += [
            6 * a[l] * sigma(1, l - m) / (l - m) * (mm / l) ** 23
            for l in range(m + 1, L + 1)
            if a[l]
        ]
        if a[m]:
            terms.append(23 * a[m] / (4 * mm))
            terms.append(3 * a[m] * (2 * self.gamma + mp.log(mm) - self.h22))
        return mp.fsum(terms) / mp.pi if terms else mp.mpf(0)

    def solve(self, m: int, tol, terms: int | None) -> Approx:
        if m < 1:
            raise DomainError("m must be >= 1")
        if m > self.trunc:
            raise TruncationError(f"f is truncated at {self.trunc}, below m = {m}", 2 * m)
        if terms is not None:
            if terms > self.trunc:
                raise TruncationError(f"f is truncated at {self.trunc}, need {terms} terms", terms)
            L = max(terms, m)
            return Approx(self.dm(m, L), self.tail(m, L))
        estimate = self.dm(m, self.trunc)
        if estimate == 0 and self.c == 0:
            return Approx(mp.mpf(0), mp.mpf(0))
        target = to_mpf(tol) * abs(estimate) / 10
        tail_at = lambda L: self.tail(m, L)
        if tail_at(self.trunc) > target:
            need = required_terms(tail_at, target, self.trunc)
            raise TruncationError(
                f"d_{m}: f must be expanded to at least {need} terms for tol {mp.nstr(tol, 3)}", need
            )
        L = required_terms(tail_at, target, m)
        L = min(max(L, m), self.trunc)
        return Approx(self.dm(m, L), tail_at(L))


@at_working_precision
def dm_weight24(f: QExpansion, m: int, tol=DEFAULT_TOL, terms: int | None = None) -> Approx:
    """d_m of Pi_hol(f K_1) with a bound on the truncated infinite sum.

    With ``terms`` the infinite sum runs over l <= terms.  Otherwise the cut-off
    is the smallest L whose certified remainder is below tol * |d_m| / 10.
    """
    return _Prepared(f).solve(m, tol, terms)


@at_working_precision
def project(f: QExpansion, M_max: int, tol=DEFAULT_TOL, form_id: str = "custom") -> ProjectionCoeffs:
    """d_1, ..., d_{M_max}, each summed in ascending l."""
    if M_max < 2:
        raise DomainError("M_max must be >= 2")
    prep = _Prepared(f)
    out = [prep.solve(m, tol, None) for m in range(1, M_max + 1)]
    return ProjectionCoeffs(tuple(v for v, _ in out), tuple(t for _, t in out), form_id, to_mpf(tol))


FORMS = ("delta2", "delta_g12")


def basis_form(name: str, N: int) -> QExpansion:
    delta2, delta_g12 = s24_basis(N)
    if name == "delta2":
        return delta2
    if name == "delta_g12":
        return delta_g12
    raise ValueError(f"unknown form {name!r}; choose from {FORMS}")


def project_named(name: str, M_max: int = DEFAULT_M_FIT, tol=DEFAULT_TOL, start: int = 128) -> ProjectionCoeffs:
    """Project a basis form, extending its q-expansion until every d_m meets tol."""
    N = max(start, 2 * M_max)
    while True:
        try:
            return project(basis_form(name, N), M_max, tol, form_id=name)
        except TruncationError as exc:
            if exc.required is None or N >= 200000:
                raise
            N = max(2 * N, exc.required + 16)


@at_working_precision
def decompose(p: ProjectionCoeffs, M_fit: int = DEFAULT_M_FIT) -> Decomposition:
    """Least-squares coordinates of (d_m) in the basis {Delta^2, Delta G_12} over m <= M_fit.

    The 2x2 solve on m = 1, 2 is computed alongside; when the fit certifies
    membership (residual <= 1e-6) the two must agree to 1e-6 relative.
    """
    if M_fit < 2:
        raise DomainError("M_fit must be >= 2")
    if M_fit > len(p.d):
        raise DomainError(f"only {len(p.d)} coefficients available, M_fit = {M_fit}")
    delta2, delta_g12 = s24_basis(M_fit)
    A = mp.matrix(M_fit, 2)
    b = mp.matrix(M_fit, 1)
    for i, m in enumerate(range(1, M_fit + 1)):
        A[i, 0] = to_mpf(delta2[m])
        A[i, 1] = to_mpf(delta_g12[m])
        b[i] = to_mpf(p.d[i])

    # column-normalize, then solve the 2x2 normal equations
    norms = [mp.sqrt(mp.fsum(A[i, j] ** 2 for i in range(M_fit))) for j in range(2)]
    scaled = mp.matrix(M_fit, 2)
    for i in range(M_fit):
        for j in range(2):
            scaled[i, j] = A[i, j] / norms[j]
    sv = mp.svd_r(scaled, compute_uv=False)
    cond = max(sv) / min(sv) if min(sv) > 0 else mp.inf
    if cond > mp.mpf("1e12"):
        raise ArithmeticError(f"basis fit is ill-conditioned (condition number {mp.nstr(cond, 3)})")

    bnorm = mp.sqrt(mp.fsum(b[i] ** 2 for i in range(M_fit)))
    if bnorm == 0:
        return Decomposition(mp.mpf(0), mp.mpf(0), mp.mpf(0))
    with mp.extradps(20):
        gram = scaled.T * scaled
        y = mp.lu_solve(gram, scaled.T * b)
        x = [y[0] / norms[0], y[1] / norms[1]]
        resid = [mp.fsum([A[i, 0] * x[0], A[i, 1] * x[1], -b[i]]) for i in range(M_fit)]
        residual = mp.sqrt(mp.fsum(r**2 for r in resid)) / bnorm

    x2 = mp.lu_solve(A[0:2, 0:2], b[0:2, 0])
    scale = max(abs(x[0]), abs(x[1]))
    gap = max(abs(x[0] - x2[0]), abs(x[1] - x2[1])) / scale
    if residual <= mp.mpf("1e-6") and gap > mp.mpf("1e-6"):
        raise ArithmeticError(
            f"least-squares and 2x2 coordinates disagree by {mp.nstr(gap, 3)} relative"
        )
    return Decomposition(+x[0], +x[1], +residual)


def projection_json(p: ProjectionCoeffs, dec: Decomposition | None = None) -> dict:
    out = {
        "form": p.form_id,
        "tol": fmt(p.tol),
        "d": [fmt(v) for v in p.d],
        "tail_error": [fmt(t) for t in p.tail_error],
    }
    if dec is not None:
        out["decomposition"] = dec.to_json()
    return out
