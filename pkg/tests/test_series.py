"""Series arithmetic against an exact integer-convolution oracle, and the
residue coefficients against closed forms and contour quadrature."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from mpmath import mp, mpc, mpf

from divisorlab import series, zeta as zeta_engine
from divisorlab.errors import DomainError, PrecisionError
from divisorlab.series import TruncatedLaurentSeries


def make(coeffs, lowest=0, precision=128):
    return TruncatedLaurentSeries(mpc(1), lowest, tuple(mpc(c) for c in coeffs),
                                  precision)


def convolve(a, b, length):
    """Exact Cauchy product of integer coefficient lists, truncated."""
    out = [0] * length
    for i, ca in enumerate(a[:length]):
        for j, cb in enumerate(b[:length]):
            if i + j < length:
                out[i + j] += ca * cb
    return out


small_ints = st.lists(st.integers(min_value=-9, max_value=9),
                      min_size=1, max_size=6)


@settings(max_examples=60, deadline=None)
@given(a=small_ints, b=small_ints, lo_a=st.integers(-3, 2), lo_b=st.integers(-3, 2))
def test_product_matches_integer_convolution(a, b, lo_a, lo_b):
    length = min(len(a), len(b))
    product = make(a, lo_a) * make(b, lo_b)
    assert product.lowest_order == lo_a + lo_b
    oracle = convolve(a, b, length)
    for k, expected in enumerate(oracle):
        got = product.coefficient(lo_a + lo_b + k)
        assert got.real == expected and got.imag == 0


@settings(max_examples=40, deadline=None)
@given(a=small_ints, b=small_ints, lo=st.integers(-2, 2))
def test_addition_is_coefficientwise(a, b, lo):
    length = min(len(a), len(b))
    total = make(a, lo) + make(b, lo)
    for k in range(length):
        assert total.coefficient(lo + k).real == a[k] + b[k]


def test_invert_against_fraction_recurrence():
    """Inverse coefficients reproduced by exact rational arithmetic."""
    coeffs = [3, -1, 4, -1, 5, 9]
    inv = series.series_invert(make(coeffs, lowest=-2))
    # exact oracle: q_0 = 1/c_0, q_n = -(1/c_0) sum_{k>=1} c_k q_{n-k}
    q = [Fraction(1, coeffs[0])]
    for n in range(1, len(coeffs)):
        acc = sum(Fraction(coeffs[k]) * q[n - k] for k in range(1, n + 1))
        q.append(-acc / coeffs[0])
    assert inv.lowest_order == 2
    for n, expected in enumerate(q):
        got = inv.coefficient(2 + n)
        assert abs(got - mpf(expected.numerator) / expected.denominator) < mpf("1e-35")


@settings(max_examples=40, deadline=None)
@given(a=small_ints, lo=st.integers(-2, 2))
def test_invert_residual(a, lo):
    if a[0] == 0:
        a = [1] + a[1:]
    s = make(a, lo)
    product = s * series.series_invert(s)
    assert product.lowest_order == 0
    assert abs(product.coefficient(0) - 1) < mpf("1e-30")
    for k in range(1, len(product)):
        assert abs(product.coefficient(k)) < mpf("1e-30")


def test_invert_zero_lead_rejected():
    with pytest.raises(DomainError):
        series.series_invert(make([0, 1, 2]))


def test_pow_is_repeated_multiplication():
    s = make([2, -1, 3], lowest=-1)
    cubed = series.series_pow(s, 3)
    assert cubed.lowest_order == -3
    manual = s * s * s
    for k in range(-3, cubed.highest_order + 1):
        assert abs(cubed.coefficient(k) - manual.coefficient(k)) < mpf("1e-30")
    with pytest.raises(DomainError):
        series.series_pow(s, 0)


def test_window_semantics():
    s = make([5, 6, 7], lowest=-1)
    assert s.coefficient(-2) == 0  # below the window: genuinely zero
    with pytest.raises(DomainError):
        s.coefficient(2)  # above the window: unknown, not zero
    with pytest.raises(DomainError):
        make([1]) * make([1], precision=192)  # mixed precisions
    with pytest.raises(PrecisionError):
        TruncatedLaurentSeries(mpc(1), 0, (mpc(1),), 32)


def test_geometric_and_exponential_building_blocks():
    g = series.geometric_inverse_s(6)
    for k in range(7):
        assert g.coefficient(k) == (-1) ** k
    x = mpf("7.25")
    e = series.exp_log_series(x, 6)
    lam = mp.ln(x)
    for k in range(7):
        assert abs(e.coefficient(k) - lam**k / mp.factorial(k)) < mpf("1e-32")


def test_zeta_laurent_pole_and_constant():
    z = series.zeta_laurent_at_1(4)
    assert z.coefficient(-1) == 1
    assert abs(z.coefficient(0) - mp.euler) < mpf("1e-30")
    assert abs(z.coefficient(1) + zeta_engine.stieltjes(1)) < mpf("1e-30")


def test_zeta_laurent_evaluates_zeta():
    z = series.zeta_laurent_at_1(8, 160)
    u = mpf("0.05")
    val = sum(z.coefficient(k) * u**k for k in range(-1, 9))
    assert abs(val - zeta_engine.zeta(1 + u, 160)) < mpf("1e-12")


def test_cube_principal_part():
    """zeta^3 Laurent data: c_-3 = 1, c_-2 = 3 gamma, c_-1 = 3 gamma^2 - 3 gamma_1."""
    cube = series.series_pow(series.zeta_laurent_at_1(6), 3)
    g0 = zeta_engine.stieltjes(0)
    g1 = zeta_engine.stieltjes(1)
    assert abs(cube.coefficient(-3) - 1) < mpf("1e-35")
    assert abs(cube.coefficient(-2) - 3 * g0) < mpf("1e-33")
    assert abs(cube.coefficient(-1) - (3 * g0**2 - 3 * g1)) < mpf("1e-33")


def test_inverse_zeta_2s_taylor():
    q = series.taylor_of_inverse_zeta_2s_at_1(4)
    z2 = zeta_engine.zeta(2).real
    zp2 = zeta_engine.zeta_derivative(2, 1).real
    assert abs(q.coefficient(0) - 1 / z2) < mpf("1e-30")
    # d/ds [1/zeta(2s)] at s=1 is -2 zeta'(2)/zeta(2)^2
    assert abs(q.coefficient(1) + 2 * zp2 / z2**2) < mpf("1e-30")


class TestMainTermCoefficients:
    def test_paper_mode_closed_forms(self):
        c = series.main_term_coefficients("paper")
        g0 = zeta_engine.stieltjes(0)
        g1 = zeta_engine.stieltjes(1)
        z2 = zeta_engine.zeta(2).real
        assert abs(c.A1 - 1 / (2 * z2)) < mpf("1e-30")
        assert abs(c.A2 - (6 * g0 - 2) / (2 * z2)) < mpf("1e-30")
        assert abs(c.A3 - (6 * g0**2 - 6 * g0 - 6 * g1 + 2) / (2 * z2)) < mpf("1e-28")

    def test_leading_coefficient_both_modes(self):
        # A1 = 3/pi^2 regardless of how 1/zeta(2s) is treated
        target = 3 / mp.pi**2
        for mode in ("paper", "exact"):
            c = series.main_term_coefficients(mode)
            assert abs(c.A1 - target) < mpf("1e-28")

    def test_mode_discrepancy_closed_form(self):
        paper = series.main_term_coefficients("paper")
        exact = series.main_term_coefficients("exact")
        shift = exact.A2 - paper.A2
        assert abs(shift) > mpf("0.5")  # the omission is not small
        assert abs(shift - series.a2_mode_shift()) < mpf("1e-20")

    def test_truncation_order_stability(self):
        lo = series.main_term_coefficients("exact", order=5)
        hi = series.main_term_coefficients("exact", order=8)
        for name in ("A1", "A2", "A3"):
            assert abs(getattr(lo, name) - getattr(hi, name)) < mpf("1e-25")

    def test_constant_term_is_quarter(self):
        c = series.main_term_coefficients("exact")
        assert abs(c.constant_term - mpf("0.25")) < mpf("1e-30")
        assert abs(series.residue_at_zero() - mpf("0.25")) < mpf("1e-30")

    def test_error_paths(self):
        with pytest.raises(DomainError):
            series.main_term_coefficients("frozen")
        with pytest.raises(DomainError):
            series.main_term_coefficients("exact", order=4)
        with pytest.raises(DomainError):
            series.residue_main_term(1.0)


def test_residue_main_term_matches_contour():
    from divisorlab import perron

    for x in (100.0, 1000.0):
        _, value = series.residue_main_term(x, mode="exact")
        circle = perron.residue_by_circle(1.0, 0.2, x, nodes=96)
        assert abs(circle.imag) < mpf("1e-20")
        assert abs(circle.real - value) / abs(value) < mpf("1e-10")


def test_theorem_A_companion_constants():
    a1p, a2p = series.theorem_A_coefficients()
    assert abs(a1p - 6 / mp.pi**2) < mpf("1e-28")
    assert abs(a2p - (2 * mp.euler - 1) * 6 / mp.pi**2) < mpf("1e-28")
    p1, p2 = series.two_omega_coefficients("paper")
    assert p1 == a1p and p2 == a2p
    e1, e2 = series.two_omega_coefficients("exact")
    assert e1 == a1p
    assert abs(e2 - (a2p + series.a2_mode_shift())) < mpf("1e-30")
    with pytest.raises(DomainError):
        series.two_omega_coefficients("neither")
