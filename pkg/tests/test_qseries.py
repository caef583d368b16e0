import json
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from klab.arithlib import sigma
from klab.numerics import DomainError
from klab.qseries import (
    G12_CONSTANT,
    HalfPlanePoint,
    QExpansion,
    delta_qexp,
    e,
    euler_product,
    f_antiderivative,
    g12_qexp,
    qexp_eval,
    qexp_mul,
    qexp_pow,
    renormalize_weight,
    s24_basis,
)

TAU = [0, 1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def naive_mul(a, b, n):
    out = [0] * (n + 1)
    for i, x in enumerate(a[: n + 1]):
        for j, y in enumerate(b[: n + 1 - i]):
            out[i + j] += x * y
    return out


def naive_delta(n):
    # q * prod (1 - q^k)^24 by schoolbook products
    series = [1] + [0] * n
    for k in range(1, n + 1):
        factor = [0] * (n + 1)
        factor[0], factor[k] = 1, -1
        for _ in range(24):
            series = naive_mul(series, factor, n)
    return [0] + series[:n]


exact_coeffs = st.lists(
    st.one_of(st.integers(-(10**30), 10**30), st.fractions(max_denominator=1000)), min_size=1, max_size=30
)


def test_delta_first_coefficients():
    assert list(delta_qexp(10).coeffs) == TAU


def test_delta_matches_schoolbook_product():
    assert list(delta_qexp(40).coeffs) == naive_delta(40)


def test_euler_product_pentagonal():
    # prod (1 - q^n) = sum (-1)^k q^{k(3k-1)/2}
    p = euler_product(30).coeffs
    want = [0] * 31
    for k in range(-5, 6):
        g = k * (3 * k - 1) // 2
        if g <= 30:
            want[g] = (-1) ** k
    assert list(p) == want


def test_ramanujan_congruence():
    d = delta_qexp(500)
    assert all((d[n] - sigma(11, n)) % 691 == 0 for n in range(1, 501))


def test_truncation_consistency():
    big = delta_qexp(300)
    for m in (1, 17, 120):
        assert big.truncate(m) == delta_qexp(m)


def test_g12():
    g = g12_qexp(5)
    assert g[0] == Fraction(691, 65520) == G12_CONSTANT
    assert [g[n] for n in range(1, 6)] == [sigma(11, n) for n in range(1, 6)]
    assert list(g12_qexp(1).coeffs) == [Fraction(691, 65520), 1]


def test_s24_basis():
    delta2, delta_g12 = s24_basis(6)
    assert list(delta2.coeffs[:4]) == [0, 0, 1, -48]
    assert delta2.weight == delta_g12.weight == 24
    assert delta_g12[1] == G12_CONSTANT
    assert list(s24_basis(2)[0].coeffs) == [0, 0, 1]


@given(exact_coeffs, exact_coeffs)
def test_mul_matches_schoolbook(a, b):
    n = min(len(a), len(b)) - 1
    got = qexp_mul(QExpansion.exact(a), QExpansion.exact(b))
    assert list(got.coeffs) == naive_mul([Fraction(x) for x in a], [Fraction(x) for x in b], n)


@given(exact_coeffs, exact_coeffs, exact_coeffs)
def test_mul_commutative_associative(a, b, c):
    A, B, C = (QExpansion.exact(x) for x in (a, b, c))
    assert A * B == B * A
    assert (A * B) * C == A * (B * C)


def test_mul_weight_tags():
    d = delta_qexp(4)
    assert (d * d).weight == 24
    assert (d * QExpansion.exact([1, 2, 3, 4, 5])).weight is None
    assert qexp_pow(d, 3) == d * d * d


def test_mixed_kind_rejected():
    with pytest.raises(TypeError):
        qexp_mul(delta_qexp(3), delta_qexp(3).to_floating())


def test_getitem_beyond_truncation():
    with pytest.raises(IndexError):
        delta_qexp(3)[4]


@given(exact_coeffs, st.sampled_from([None, 2, 12, 24]))
def test_json_round_trip(cs, w):
    q = QExpansion.exact(cs, w)
    obj = json.loads(json.dumps(q.to_json()))
    assert QExpansion.from_json(obj) == q
    assert obj["truncation_order"] == len(cs) - 1


def test_json_layout():
    obj = g12_qexp(1).to_json()
    assert obj == {"truncation_order": 1, "weight": 12, "kind": "exact", "coeffs": ["691/65520", "1"]}


def test_eval_trivial_series():
    mp.mp.dps = 40
    z = HalfPlanePoint("0.1", "0.8")
    assert qexp_eval(QExpansion.exact([0, 0, 0]), z) == (0, 0)
    v, err = qexp_eval(QExpansion.exact([Fraction(3, 7)]), z)
    assert abs(v - mp.mpf(3) / 7) < mp.mpf("1e-30")
    assert err == 0


def test_eval_delta_truncation_doubling():
    z = HalfPlanePoint(0, 1)
    lo, lo_err = qexp_eval(delta_qexp(50), z)
    hi, _ = qexp_eval(delta_qexp(200), z)
    assert abs(lo - hi) < mp.mpf("1e-20")
    assert abs(lo - hi) <= lo_err or lo_err < mp.mpf("1e-100")
    # Delta(i) is about 0.0017853698
    assert abs(lo.real - mp.mpf("0.00178536985064215")) < mp.mpf("1e-15")


def test_eval_against_product_formula():
    mp.mp.dps = 40
    z = mp.mpc("0.23", "0.61")
    q = e(z)
    want = q * mp.qp(q) ** 24
    got, err = qexp_eval(delta_qexp(120), HalfPlanePoint("0.23", "0.61"))
    assert abs(got - want) < mp.mpf("1e-28") + err


DELTA60 = delta_qexp(60)
G12_60 = g12_qexp(60)


@given(st.floats(-0.5, 0.5), st.floats(0.5, 2.0))
def test_eval_is_multiplicative(x, y):
    mp.mp.dps = 40
    z = HalfPlanePoint(x, y)
    a, b, ab_series = DELTA60, G12_60, DELTA60 * G12_60
    ab, ab_err = qexp_eval(ab_series, z)
    (av, ae), (bv, be) = qexp_eval(a, z), qexp_eval(b, z)
    slack = ab_err + ae * abs(bv) + be * abs(av) + ae * be + mp.mpf("1e-25")
    assert abs(ab - av * bv) <= slack


def test_eval_tail_bound_covers_truncation():
    z = HalfPlanePoint(0, "0.5")
    lo, err = qexp_eval(delta_qexp(20), z)
    hi, _ = qexp_eval(delta_qexp(200), z)
    assert 0 < abs(lo - hi) <= err


def test_f_antiderivative():
    F = f_antiderivative(QExpansion.exact([0, 1, -24]))
    assert list(F.coeffs) == [0, 1, -12]
    d = delta_qexp(6)
    assert list(f_antiderivative(d).coeffs) == [0] + [Fraction(TAU[n], n) for n in range(1, 7)]
    assert f_antiderivative(QExpansion.exact([0, 0])).coeffs == (0, 0)
    with pytest.raises(ValueError):
        f_antiderivative(g12_qexp(3))


def test_renormalize_weight():
    r = renormalize_weight(delta_qexp(4), 2)
    assert r.weight == 2
    assert list(r.coeffs) == [0, 1, Fraction(-24, 32), Fraction(252, 243), Fraction(-1472, 1024)]
    with pytest.raises(DomainError):
        renormalize_weight(QExpansion.exact([0, 1]))


def test_half_plane_point():
    with pytest.raises(DomainError):
        HalfPlanePoint(0, 0)
    z = HalfPlanePoint.from_complex(mp.mpc(1, 2))
    assert z.z == mp.mpc(1, 2)
    assert z.shifted(dy=1).im == 3
