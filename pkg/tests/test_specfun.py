import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from klab.numerics import DomainError, precision
from klab.qseries import HalfPlanePoint, e
from klab.specfun import (
    FDConfig,
    exp_int_e1,
    fd_derivative,
    fd_dz,
    fd_dzbar,
    fd_laplacian,
    harmonic_integral,
    harmonic_integral_closed_form,
    kbessel,
    kbessel_s_derivative_at_1,
    whittaker_star,
    whittaker_w,
)

I = HalfPlanePoint(0, 1)


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("x", ["1e-6", "0.01", "0.5", "1.1999", "1.2", "3", "20", "150", "700"])
def test_e1_against_mpmath(x):
    got = exp_int_e1(x)
    mp.mp.dps = 40
    assert rel(got, mp.e1(mp.mpf(x))) < mp.mpf("1e-30")


@given(st.floats(1e-5, 500))
def test_e1_property(x):
    got = exp_int_e1(x)
    mp.mp.dps = 40
    assert rel(got, mp.e1(x)) < mp.mpf("1e-29")


def test_e1_examples():
    mp.mp.dps = 40
    assert abs(exp_int_e1(1) - mp.mpf("0.21938393439552027368")) < mp.mpf("1e-19")
    with pytest.raises(DomainError):
        exp_int_e1(0)


@pytest.mark.parametrize("x", ["0.5", "5"])
def test_e1_integration_by_parts(x):
    mp.mp.dps = 32
    xv = mp.mpf(x)
    quad = mp.exp(-xv) / xv - mp.quad(lambda t: mp.exp(-t) / t**2, [xv, mp.inf])
    assert rel(exp_int_e1(x), quad) < mp.mpf("1e-14")


def test_e1_high_precision():
    with precision("high"):
        got = exp_int_e1("2.5")
    mp.mp.dps = 70
    assert rel(got, mp.e1(mp.mpf("2.5"))) < mp.mpf("1e-58")


@pytest.mark.parametrize("s", ["0.5", "0.75", "1", "1.5", "2.3", "3"])
@pytest.mark.parametrize("y", ["0.05", "0.4", "1", "6"])
def test_kbessel_against_mpmath(s, y):
    got = kbessel(s, y)
    mp.mp.dps = 40
    want = mp.besselk(mp.mpf(s) - mp.mpf("0.5"), 2 * mp.pi * mp.mpf(y))
    assert rel(got, want) < mp.mpf("1e-22")


def test_kbessel_half_integer_closed_form():
    # K_{1/2}(x) = sqrt(pi / 2x) e^{-x}
    got = kbessel(1, "0.3")
    mp.mp.dps = 40
    x = 2 * mp.pi * mp.mpf("0.3")
    assert rel(got, mp.sqrt(mp.pi / (2 * x)) * mp.exp(-x)) < mp.mpf("1e-25")


def test_kbessel_domain():
    with pytest.raises(DomainError):
        kbessel(0, 1)
    with pytest.raises(DomainError):
        kbessel(1, -1)


@pytest.mark.parametrize("y", ["0.25", "0.5", "1", "2", "4"])
def test_s_derivative_at_1(y):
    fd = fd_derivative(lambda s: kbessel(s, y), 1)
    assert rel(fd.value, kbessel_s_derivative_at_1(y)) < mp.mpf("1e-6")


def test_whittaker_star_is_s_derivative():
    z = HalfPlanePoint("0.3", "0.7")
    for n in (1, 3):
        fd = fd_derivative(lambda s: whittaker_w(s, n, z), 1)
        assert rel(fd.value, whittaker_star(n, z)) < mp.mpf("1e-10")


def test_whittaker_star_at_i():
    got = whittaker_star(1, I)
    mp.mp.dps = 40
    want = mp.e1(4 * mp.pi) * mp.exp(4 * mp.pi) * mp.exp(-2 * mp.pi)
    assert rel(got, want) < mp.mpf("1e-28")
    with pytest.raises(DomainError):
        whittaker_star(0, I)
    with pytest.raises(DomainError):
        whittaker_w(1, 0, I)


@pytest.mark.parametrize("n", range(11))
def test_harmonic_integral(n):
    assert rel(harmonic_integral(n), harmonic_integral_closed_form(n)) < mp.mpf("1e-8")


def test_harmonic_integral_against_gamma_derivative():
    # int y^n log y e^{-y} dy = Gamma'(n + 1)
    mp.mp.dps = 40
    assert rel(harmonic_integral(4), mp.diff(mp.gamma, 5)) < mp.mpf("1e-25")


def test_fd_constant_and_linear():
    assert abs(fd_laplacian(lambda p: mp.mpf(7), I).value) < mp.mpf("1e-20")
    assert abs(fd_dz(lambda p: p.z, I).value - 1) < mp.mpf("1e-20")
    assert abs(fd_dzbar(lambda p: p.z, I).value) < mp.mpf("1e-20")


def test_fd_eigenfunction_y_power():
    s = mp.mpf("0.7")
    lap = fd_laplacian(lambda p: p.im**s, I)
    assert abs(lap.value - s * (1 - s)) < mp.mpf("1e-8")


@pytest.mark.parametrize("s", ["0.8", "1.2"])
def test_whittaker_eigenfunction(s):
    z = HalfPlanePoint("0.2", "0.9")
    sv = mp.mpf(s)
    lap = fd_laplacian(lambda p: whittaker_w(s, 1, p), z)
    want = sv * (1 - sv) * whittaker_w(s, 1, z)
    assert abs(lap.value - want) <= 10 * lap.error + mp.mpf("1e-12")
    assert rel(lap.value, want) < mp.mpf("1e-5")


@pytest.mark.parametrize("n", [1, 2])
@pytest.mark.parametrize("x,y", [("0", "1"), ("0.3", "0.7")])
def test_wstar_derivatives(n, x, y):
    z = HalfPlanePoint(x, y)
    w = lambda p: whittaker_star(n, p)
    en = e(n * z.z)
    yv = z.im
    assert rel(fd_dz(w, z).value, 1j / (2 * yv) * en) < mp.mpf("1e-6")
    want = -1j / (2 * yv) * en + 2j * mp.pi * n * whittaker_star(n, z)
    assert rel(fd_dzbar(w, z).value, want) < mp.mpf("1e-6")
    assert rel(fd_laplacian(w, z).value, -en) < mp.mpf("1e-5")


def test_fd_config_validation():
    with pytest.raises(ValueError):
        FDConfig(step=0)
    with pytest.raises(ValueError):
        FDConfig(richardson_levels=7)
    with pytest.raises(DomainError):
        fd_laplacian(lambda p: p.im, HalfPlanePoint(0, 1), FDConfig(step=2.0))


def test_fd_coarser_config_still_accurate():
    cfg = FDConfig(step=1e-2, richardson_levels=2)
    lap = fd_laplacian(lambda p: whittaker_star(1, p), I, cfg)
    assert rel(lap.value, -e(I.z)) < mp.mpf("1e-5")
