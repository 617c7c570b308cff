"""Tests of the special-function layer: every closed form is checked against
an independently computed oracle (recurrences, quadrature, finite differences,
or a second closed form reached by a different route)."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annulus_kernels.errors import ConvergenceError, DomainError, PoleError
from annulus_kernels.geometry import AnnulusParams, alpha_index
from annulus_kernels.special import (
    DEFAULT_SERIES,
    JacobiParams,
    SeriesControl,
    arccot,
    cauchy_beta_integral,
    gamma_abs_sq,
    gamma_pair_product_integer,
    jacobi_coefficients,
    jacobi_poly,
    jacobi_product_bateman,
    log_gamma,
    pochhammer,
    routh_coefficients,
    routh_leading_coefficient,
    routh_rodrigues_oracle,
    routh_romanovski,
    routh_romanovski_with_residual,
    student_weight,
    theta4,
    theta4_log_derivative,
)

# ---------------------------------------------------------------------------
# log_gamma / gamma_abs_sq


def test_log_gamma_recurrence():
    # Gamma(z+1) = z Gamma(z), i.e. loggamma(z+1) - loggamma(z) - log z = 0
    rng = np.random.default_rng(11)
    for _ in range(50):
        z = complex(rng.uniform(0.3, 6.0), rng.uniform(-8.0, 8.0))
        lhs = log_gamma(z + 1.0)
        rhs = log_gamma(z) + cmath.log(z)
        assert abs(lhs - rhs) < 1e-12 * max(abs(lhs), 1.0)


def test_log_gamma_known_values():
    assert abs(log_gamma(1.0)) < 1e-14
    assert abs(log_gamma(5.0) - math.log(24.0)) < 1e-13
    assert abs(log_gamma(0.5) - 0.5 * math.log(math.pi)) < 1e-14


def test_log_gamma_pole_raises():
    for z in (0.0, -1.0, -5.0):
        with pytest.raises(PoleError):
            log_gamma(z)


def test_gamma_abs_sq_half_line():
    # |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
    for y in (0.0, 0.3, 1.7, 4.0):
        expected = math.pi / math.cosh(math.pi * y)
        assert abs(gamma_abs_sq(0.5, y) - expected) < 1e-12 * expected


def test_gamma_abs_sq_integer_line():
    # |Gamma(1 + iy)|^2 = pi y / sinh(pi y)
    for y in (0.25, 1.0, 3.5):
        expected = math.pi * y / math.sinh(math.pi * y)
        assert abs(gamma_abs_sq(1.0, y) - expected) < 1e-12 * expected


def test_gamma_abs_sq_stays_accurate_at_large_height():
    # the log-space assembly keeps full accuracy deep in the exponential decay
    val = gamma_abs_sq(2.0, 200.0)
    assert val > 0.0
    # check against the asymptotic |Gamma(x+iy)|^2 ~ 2pi |y|^(2x-1) e^(-pi|y|)
    asym = 2.0 * math.pi * 200.0 ** 3.0 * math.exp(-math.pi * 200.0)
    assert abs(val - asym) < 1e-2 * asym


# ---------------------------------------------------------------------------
# gamma_pair_product_integer (elementary product route vs log-Gamma route)


@pytest.mark.parametrize("R", [2.0, 4.0, 10.0])
@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_gamma_pair_product_matches_loggamma(R, c):
    log_R = math.log(R)
    for j in range(-30, 31):
        direct = gamma_abs_sq(float(c), j * log_R / math.pi)
        elementary = gamma_pair_product_integer(B=c, l=0, j=j, R=R)
        assert direct > 0.0
        assert abs(elementary - direct) < 1e-11 * direct, (
            f"c={c}, j={j}, R={R}: {elementary} vs {direct}"
        )


def test_gamma_pair_product_j_zero_limit():
    # at j = 0 the formula must reproduce Gamma(c)^2 exactly
    for c in (1, 2, 5):
        got = gamma_pair_product_integer(B=c, l=0, j=0, R=3.0)
        assert abs(got - math.factorial(c - 1) ** 2) < 1e-13 * math.factorial(c - 1) ** 2


def test_gamma_pair_product_rejects_nonpositive_c():
    with pytest.raises(DomainError):
        gamma_pair_product_integer(B=2, l=2, j=1, R=4.0)


# ---------------------------------------------------------------------------
# pochhammer / jacobi


def test_pochhammer_basics():
    assert pochhammer(3.0, 0) == 1
    assert pochhammer(3.0, 4) == 3.0 * 4.0 * 5.0 * 6.0
    assert pochhammer(-2.0, 4) == 0.0  # terminates through zero
    got = pochhammer(1.5 + 2.0j, 3)
    want = (1.5 + 2.0j) * (2.5 + 2.0j) * (3.5 + 2.0j)
    assert abs(got - want) < 1e-14 * abs(want)


def test_jacobi_against_scipy_real_params():
    from scipy.special import eval_jacobi

    rng = np.random.default_rng(5)
    for _ in range(40):
        k = int(rng.integers(0, 7))
        a = float(rng.uniform(-0.9, 3.0))
        b = float(rng.uniform(-0.9, 3.0))
        x = float(rng.uniform(-2.0, 2.0))
        got = jacobi_poly(JacobiParams(a, b, k), x)
        want = float(eval_jacobi(k, a, b, x))
        assert abs(got - want) < 1e-10 * max(abs(want), 1.0)


def test_jacobi_value_at_one():
    # P_k^(a,b)(1) = (a+1)_k / k!
    a, b = 0.75 + 0.5j, -0.25 - 0.5j
    for k in range(6):
        got = jacobi_poly(JacobiParams(a, b, k), 1.0)
        want = pochhammer(a + 1.0, k) / math.factorial(k)
        assert abs(got - want) < 1e-12 * max(abs(want), 1.0)


@st.composite
def _jacobi_case(draw):
    k = draw(st.integers(min_value=0, max_value=6))
    re = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
    im = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)
    a = complex(draw(re), draw(im))
    b = complex(draw(re), draw(im))
    x = complex(draw(re), draw(im))
    return k, a, b, x


@given(_jacobi_case())
@settings(max_examples=200, deadline=None)
def test_jacobi_reflection_symmetry(case):
    # P_k^(a,b)(-x) = (-1)^k P_k^(b,a)(x), an identity of the coefficients
    k, a, b, x = case
    lhs = jacobi_poly(JacobiParams(a, b, k), -x)
    rhs = (-1.0) ** k * jacobi_poly(JacobiParams(b, a, k), x)
    assert abs(lhs - rhs) < 1e-11 * max(abs(lhs), abs(rhs), 1.0)


def test_jacobi_coefficients_match_values():
    params = JacobiParams(0.5 + 1.25j, 0.5 - 1.25j, 5)
    coeffs = jacobi_coefficients(params)
    for x in (-1.3, 0.2, 0.9 + 0.4j):
        direct = jacobi_poly(params, x)
        horner = complex(np.polynomial.polynomial.polyval(complex(x), coeffs))
        assert abs(direct - horner) < 1e-11 * max(abs(direct), 1.0)


def test_jacobi_degree_cap():
    with pytest.raises(DomainError):
        JacobiParams(0.0, 0.0, 65)


def test_jacobi_product_bateman_matches_direct_product():
    # the double-sum product expansion against the plain product of two
    # evaluations, over seeded real parameters and arguments
    rng = np.random.default_rng(11)
    for m in range(5):
        for _ in range(40):
            a, b = rng.uniform(-0.45, 3.0, size=2)
            x, y = rng.uniform(-2.0, 2.0, size=2)
            p = JacobiParams(a, b, m)
            direct = jacobi_poly(p, x) * jacobi_poly(p, y)
            expans = jacobi_product_bateman(p, x, y)
            assert abs(direct - expans) <= 1e-10 * max(abs(direct), 1.0)


def test_jacobi_product_bateman_complex_parameters():
    p = JacobiParams(0.3 + 0.7j, -0.2 - 0.7j, 3)
    direct = jacobi_poly(p, 0.4j) * jacobi_poly(p, -1.1j)
    expans = jacobi_product_bateman(p, 0.4j, -1.1j)
    assert abs(direct - expans) <= 1e-12 * abs(direct)


def test_jacobi_product_bateman_degree_zero_is_one():
    assert jacobi_product_bateman(JacobiParams(0.7, -0.3, 0), 0.2, -1.4) == (
        pytest.approx(1.0, rel=1e-13)
    )


# ---------------------------------------------------------------------------
# Routh-Romanovski


def test_routh_degree_zero_and_one():
    for a, b, x in [(0.7, -1.5, 0.3), (-2.0, 2.5, -1.1), (3.1, 0.0, 2.4)]:
        assert routh_romanovski(0, a, b, x) == pytest.approx(1.0, abs=1e-14)
        assert routh_romanovski(1, a, b, x) == pytest.approx(a + 2.0 * b * x, rel=1e-12)


def test_routh_degree_two_closed_form():
    # RR_2 = 2(2b+1)(b+1)x^2 + 2a(2b+1)x + a^2 + 2(b+1)
    for a, b, x in [(0.9, -1.5, 0.6), (-1.7, 2.0, -0.8), (2.4, 0.3, 1.9)]:
        want = (
            2.0 * (2.0 * b + 1.0) * (b + 1.0) * x * x
            + 2.0 * a * (2.0 * b + 1.0) * x
            + a * a
            + 2.0 * (b + 1.0)
        )
        assert routh_romanovski(2, a, b, x) == pytest.approx(want, rel=1e-11, abs=1e-11)


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
def test_routh_matches_rodrigues_oracle(m):
    # independent construction: same polynomial from the Rodrigues formula
    rng = np.random.default_rng(23 + m)
    for _ in range(8):
        a = float(rng.uniform(-4.0, 4.0))
        b = float(rng.uniform(-3.0, 1.0))
        x = float(rng.uniform(-2.0, 2.0))
        series = routh_romanovski(m, a, b, x)
        oracle = routh_rodrigues_oracle(m, a, b, x)
        scale = max(abs(series), abs(oracle), 1.0)
        assert abs(series - oracle) < 1e-7 * scale, (
            f"m={m}, a={a:.4f}, b={b:.4f}, x={x:.4f}: {series} vs {oracle}"
        )


def test_routh_coefficients_match_values():
    for m, a, b in [(0, 1.0, 0.5), (2, -1.3, -0.75), (4, 2.2, -1.5)]:
        coeffs = routh_coefficients(m, a, b)
        assert len(coeffs) == m + 1
        for x in (-1.7, 0.25, 2.1):
            val = float(np.polynomial.polynomial.polyval(x, coeffs))
            assert routh_romanovski(m, a, b, x) == pytest.approx(
                val, rel=1e-11, abs=1e-11
            )


def test_routh_leading_coefficient():
    # highest coefficient of RR_m^(a, 1-B) equals (-1)^m Gamma(2B-m)/Gamma(2B-2m)
    for m, B in [(0, 2.5), (1, 2.5), (2, 2.5), (1, 1.8), (2, 3.3)]:
        coeffs = routh_coefficients(m, 0.7, 1.0 - B)
        want = routh_leading_coefficient(m, B)
        assert coeffs[-1] == pytest.approx(want, rel=1e-10)


def test_routh_imaginary_residual_is_tiny():
    _, res = routh_romanovski_with_residual(3, 1.3, -2.0, 0.9)
    assert res < 1e-12


def test_routh_finite_orthogonality():
    # RR_p^(-alpha, 1-B) and RR_q^(-alpha, 1-B) are orthogonal against the
    # Student weight whenever p != q and p + q <= 2B - 2; checked by
    # Gauss-Legendre quadrature on theta in (0, pi) after xi = cot(theta).
    params = AnnulusParams(R=4.0, B=2.5)
    j = 1
    alpha = alpha_index(j, params)
    nodes, weights = np.polynomial.legendre.leggauss(400)
    theta = 0.5 * math.pi * (nodes + 1.0)
    w = 0.5 * math.pi * weights
    xi = 1.0 / np.tan(theta)
    # d(xi) = -(1+xi^2) d(theta): the weight in theta is exp(alpha*theta) sin^(2B-2)
    wt = np.exp(alpha * theta) * np.sin(theta) ** (2.0 * params.B - 2.0)

    def rr(m, x):
        return np.array([routh_romanovski(m, -alpha, 1.0 - params.B, float(v)) for v in x])

    r0, r1 = rr(0, xi), rr(1, xi)
    inner01 = float(np.sum(w * wt * r0 * r1))
    norm0 = float(np.sum(w * wt * r0 * r0))
    norm1 = float(np.sum(w * wt * r1 * r1))
    # p + q = 1 <= 2B - 2 = 3: orthogonal
    assert abs(inner01) < 1e-8 * math.sqrt(norm0 * norm1)


# ---------------------------------------------------------------------------
# arccot / student weight


def test_arccot_branch():
    assert arccot(0.0) == pytest.approx(math.pi / 2.0)
    assert arccot(1.0) == pytest.approx(math.pi / 4.0)
    assert arccot(-1.0) == pytest.approx(3.0 * math.pi / 4.0)
    # inverse of cot on (0, pi)
    for theta in (0.1, 1.0, 2.0, 3.0):
        assert arccot(1.0 / math.tan(theta)) == pytest.approx(theta, rel=1e-12)


def test_student_weight_tail_decay():
    # rho_j(xi) ~ xi^(-2B) exp(alpha/xi) -> xi^(-2B) as xi -> +inf
    params = AnnulusParams(R=4.0, B=2.5)
    for xi in (50.0, 200.0):
        ratio = student_weight(xi, 0, params) / xi ** (-2.0 * params.B)
        assert abs(ratio - 1.0) < 0.2


def test_student_weight_positive_everywhere():
    params = AnnulusParams(R=3.0, B=1.75)
    for xi in np.linspace(-30.0, 30.0, 17):
        assert student_weight(float(xi), -2, params) > 0.0


# ---------------------------------------------------------------------------
# Cauchy Beta integral


@pytest.mark.parametrize(
    "p,nu,expected",
    [
        (0.0, 0.0, math.pi),
        (0.0, 2.0, math.pi / 2.0),
        (1.0, 1.0, (1.0 + math.exp(-math.pi)) / 2.0),
    ],
)
def test_cauchy_beta_known_values(p, nu, expected):
    assert cauchy_beta_integral(p, nu) == pytest.approx(expected, rel=1e-12)


def test_cauchy_beta_against_quadrature():
    nodes, weights = np.polynomial.legendre.leggauss(300)
    x = 0.5 * math.pi * (nodes + 1.0)
    w = 0.5 * math.pi * weights
    rng = np.random.default_rng(7)
    for _ in range(10):
        p = float(rng.uniform(-3.0, 3.0))
        nu = float(rng.uniform(0.0, 5.0))
        quad = float(np.sum(w * np.exp(-p * x) * np.sin(x) ** nu))
        closed = cauchy_beta_integral(p, nu)
        assert abs(quad - closed) < 1e-8 * closed


def test_cauchy_beta_rejects_divergent_exponent():
    with pytest.raises(DomainError):
        cauchy_beta_integral(1.0, -1.0)


# ---------------------------------------------------------------------------
# theta_4


def test_theta4_partial_sum_oracle():
    # direct partial sum at a comfortable nome
    R = 4.0
    z = 0.3 + 0.2j
    k = np.arange(1, 40)
    want = 1.0 + 2.0 * np.sum(
        (-1.0) ** k * R ** (-k * k) * np.cos(2.0 * k * z)
    )
    got = theta4(z, R)
    assert abs(got - complex(want)) < 1e-13 * abs(want)


def test_theta4_at_origin():
    # theta_4(0, R) = 1 - 2/R + 2/R^4 - 2/R^9 + ...
    got = theta4(0.0, 4.0)
    want = 1.0 - 2.0 * 4.0**-1 + 2.0 * 4.0**-4 - 2.0 * 4.0**-9 + 2.0 * 4.0**-16
    assert got.imag == pytest.approx(0.0, abs=1e-15)
    assert got.real == pytest.approx(want, rel=1e-12)


def test_theta4_quasi_periodicity():
    # theta_4(z + i log R) = -exp(log R - 2iz) theta_4(z)
    R = 5.0
    log_R = math.log(R)
    for z in (0.2, 1.1 - 0.3j, -0.7 + 0.45j):
        lhs = theta4(z + 1j * log_R, R)
        rhs = -cmath.exp(log_R - 2j * z) * theta4(z, R)
        assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1.0)


def test_theta4_real_periodicity():
    R = 3.0
    for z in (0.4, 0.9 + 0.2j):
        assert abs(theta4(z + math.pi, R) - theta4(z, R)) < 1e-12


def test_theta4_overflow_guard():
    with pytest.raises(ConvergenceError):
        theta4(0.0 + 40.0j, 2.0)


# ---------------------------------------------------------------------------
# theta_4 logarithmic derivatives


def _theta4_log_deriv_nested(order, z, R, h):
    # central finite differences of log theta_4 along the real direction
    if order == 0:
        return cmath.log(theta4(z, R))
    f = lambda u: _theta4_log_deriv_nested(order - 1, u, R, h)
    return (f(z + h) - f(z - h)) / (2.0 * h)


def _theta4_log_deriv_fd(order, z, R, h=2e-3):
    # one Richardson step lifts the nested O(h^2) scheme to O(h^4)
    d1 = _theta4_log_deriv_nested(order, z, R, h)
    d2 = _theta4_log_deriv_nested(order, z, R, h / 2.0)
    return (4.0 * d2 - d1) / 3.0


@pytest.mark.parametrize("order", [1, 2, 3])
def test_theta4_log_derivative_vs_finite_differences(order):
    R = 4.0
    for z in (0.3, 0.8 + 0.25j, -1.2 + 0.4j):
        series = theta4_log_derivative(order, z, R)
        fd = _theta4_log_deriv_fd(order, z, R)
        assert abs(series - fd) < 1e-6 * max(abs(series), 1.0), (
            f"order={order}, z={z}: {series} vs {fd}"
        )


def test_theta4_log_derivative_strip_guard():
    # the series representation dies at |Im z| = log(R)/2
    R = 4.0
    with pytest.raises(ConvergenceError):
        theta4_log_derivative(1, 1j * (0.5 * math.log(R)), R)


def test_series_control_validation():
    with pytest.raises(DomainError):
        SeriesControl(tolerance=0.0)
    with pytest.raises(DomainError):
        SeriesControl(max_terms=3)
    with pytest.raises(DomainError):
        SeriesControl(boundary_margin=1.5)
    assert DEFAULT_SERIES.tolerance == 1e-12
