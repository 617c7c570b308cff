"""Complex-argument special functions used throughout the package.

Covers the principal-branch log-Gamma, the squared modulus |Gamma|^2 of
conjugate Gamma pairs (always assembled in log space, since the pairs decay
like exp(-pi*|Im|) and underflow individually), Jacobi polynomials with
arbitrary complex parameters, the Routh-Romanovski polynomials

    RR_m^(a,b)(x) = (-2i)^m m! P_m^(b-1+ia/2, b-1-ia/2)(ix),

their Rodrigues-formula oracle, the Student-type orthogonality weight, the
Cauchy Beta integral, and Jacobi's theta_4 together with its logarithmic
derivatives.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
import scipy.special as sc
from numpy.polynomial import polynomial as npoly

from .errors import ConvergenceError, DomainError, ImaginaryResidueError, PoleError
from .geometry import AnnulusParams, alpha_index


@dataclass(frozen=True)
class SeriesControl:
    """Truncation policy shared by all bilateral and theta series.

    tolerance        relative truncation target for every reported value
    max_terms        hard cap on the number of summed terms
    boundary_margin  minimum distance of any geometric decay ratio from 1;
                     a series whose ratio comes closer than this to 1 is
                     refused rather than summed slowly and inaccurately
    """

    tolerance: float = 1e-12
    max_terms: int = 4096
    boundary_margin: float = 1e-3

    def __post_init__(self) -> None:
        if not (self.tolerance > 0.0):
            raise DomainError(f"tolerance must be positive, got {self.tolerance}")
        if self.max_terms < 16:
            raise DomainError(f"max_terms must be at least 16, got {self.max_terms}")
        if not (0.0 < self.boundary_margin < 1.0):
            raise DomainError(
                f"boundary_margin must lie in (0, 1), got {self.boundary_margin}"
            )


DEFAULT_SERIES = SeriesControl()


@dataclass(frozen=True)
class JacobiParams:
    """Parameters (alpha, beta) and degree of a Jacobi polynomial.

    Both parameters may be arbitrary complex numbers; the degree is capped
    at 64, far beyond any level index that occurs in practice.
    """

    alpha: complex
    beta: complex
    degree: int

    def __post_init__(self) -> None:
        if not (0 <= self.degree <= 64):
            raise DomainError(f"degree must lie in 0..64, got {self.degree}")


def _is_nonpositive_integer(z: complex) -> bool:
    z = complex(z)
    return z.imag == 0.0 and z.real <= 0.0 and z.real == round(z.real)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma(z) for complex z.

    Raises PoleError at the poles z = 0, -1, -2, ...  Backed by a
    Lanczos/Stirling evaluation with reflection for Re z < 1/2, accurate to
    ~1e-13 relative over the working range |z| <= 1e3.
    """
    z = complex(z)
    if _is_nonpositive_integer(z):
        raise PoleError(f"log_gamma pole at z={z}")
    return complex(sc.loggamma(z))


def gamma_abs_sq(x: float, y: float) -> float:
    """|Gamma(x + iy)|^2 computed as exp(2 Re log Gamma(x + iy)).

    The pair Gamma(x+iy) Gamma(x-iy) decays like exp(-pi |y|); going through
    log space avoids the underflow of the individual factors.
    """
    return math.exp(2.0 * log_gamma(complex(x, y)).real)


def gamma_pair_product_integer(B: int, l: int, j: int, R: float) -> float:
    """Gamma(c + ij log(R)/pi) * Gamma(c - ij log(R)/pi) for integer c = B - l,

        = 2 log(R) * Gamma(c)^2 * j R^j / (R^(2j) - 1)
          * prod_{q=1}^{c-1} (1 + (j log R)^2 / (pi^2 q^2)),

    with the removable j = 0 singularity replaced by its limit
    j R^j / (R^(2j) - 1) -> 1 / (2 log R).  The factor j R^j / (R^(2j) - 1)
    is even in j, so only |j| enters.
    """
    c = B - l
    if c != int(c) or c < 1:
        raise DomainError(f"gamma pair product requires integer B - l >= 1, got {c}")
    if not (R > 1.0):
        raise DomainError(f"requires R > 1, got R={R}")
    c = int(c)
    log_R = math.log(R)
    n = abs(int(j))
    if n == 0:
        base = 1.0 / (2.0 * log_R)
    else:
        # n R^n / (R^(2n) - 1) = n R^(-n) / (1 - R^(-2n)), overflow-free
        base = n * R ** (-n) / (1.0 - R ** (-2 * n))
    poly = 1.0
    for q in range(1, c):
        poly *= 1.0 + (n * log_R) ** 2 / (math.pi * q) ** 2
    return 2.0 * log_R * math.factorial(c - 1) ** 2 * base * poly


def pochhammer(a: complex, n: int):
    """Rising factorial (a)_n = a (a+1) ... (a+n-1) as an exact product.

    No Gamma ratios are involved, so a may be a non-positive integer (the
    product then vanishes for n large enough).
    """
    if n < 0:
        raise DomainError(f"pochhammer needs n >= 0, got {n}")
    result = 1
    for i in range(n):
        result = result * (a + i)
    return result


def jacobi_poly(params: JacobiParams, x: complex):
    """Jacobi polynomial P_k^(alpha, beta)(x) for complex parameters,

        P_k = sum_{l=0}^{k} C(k+alpha, k-l) C(k+beta, l)
              * ((x-1)/2)^l * ((x+1)/2)^(k-l),

    the generalized binomials being C(k+alpha, k-l) = (alpha+l+1)_(k-l)/(k-l)!
    and C(k+beta, l) = (beta+k-l+1)_l / l!.  The sum is finite and exact; for
    real parameters and argument no complex arithmetic occurs at all.
    """
    k = params.degree
    alpha, beta = params.alpha, params.beta
    if isinstance(alpha, complex) and alpha.imag == 0.0:
        alpha = alpha.real
    if isinstance(beta, complex) and beta.imag == 0.0:
        beta = beta.real
    if isinstance(x, complex) and x.imag == 0.0:
        x = x.real
    xm = (x - 1) / 2
    xp = (x + 1) / 2
    total = 0
    for l in range(k + 1):
        c = pochhammer(alpha + l + 1, k - l) * pochhammer(beta + k - l + 1, l)
        c = c / (math.factorial(k - l) * math.factorial(l))
        total = total + c * xm**l * xp ** (k - l)
    return total


def jacobi_coefficients(params: JacobiParams) -> np.ndarray:
    """Monomial coefficients (ascending) of P_k^(alpha, beta), complex-valued.

    Built by convolving the binomial factors ((x-1)/2)^l ((x+1)/2)^(k-l);
    intended for small degrees where exact derivative work is needed.
    """
    k = params.degree
    coeffs = np.zeros(k + 1, dtype=complex)
    for l in range(k + 1):
        c = pochhammer(params.alpha + l + 1, k - l) * pochhammer(
            params.beta + k - l + 1, l
        )
        c = c / (math.factorial(k - l) * math.factorial(l))
        term = npoly.polymul(
            npoly.polypow([-0.5, 0.5], l), npoly.polypow([0.5, 0.5], k - l)
        )
        coeffs[: len(term)] += complex(c) * term
    return coeffs


def jacobi_product_bateman(params: JacobiParams, x, y):
    """Product P_m^(alpha,beta)(x) * P_m^(alpha,beta)(y) via Bateman's
    double-sum expansion:

        (-1)^m Gamma(alpha+m+1) Gamma(beta+m+1) / m!
          * sum_{k=0}^{m} (-1)^k (alpha+beta+m+1)_k / (4^k (m-k)!)
            * sum_{l=0}^{k} [(1-x)(1-y)]^l [(1+x)(1+y)]^(k-l)
                            / (l! (k-l)! Gamma(alpha+l+1) Gamma(beta+k-l+1)).

    Independent of jacobi_poly (reciprocal Gammas instead of Pochhammer
    binomials), so equality of the two is a nontrivial identity check.
    Parameter combinations where Gamma(alpha+m+1) or Gamma(beta+m+1) hits a
    pole are outside the expansion's validity and raise a pole error.
    """
    m = params.degree
    a, b = params.alpha, params.beta
    pref = (
        (-1.0) ** m
        * cmath.exp(log_gamma(a + m + 1) + log_gamma(b + m + 1))
        / math.factorial(m)
    )
    u = (1 - x) * (1 - y)
    v = (1 + x) * (1 + y)
    total = 0
    for k in range(m + 1):
        outer = (
            (-1.0) ** k
            * pochhammer(a + b + m + 1, k)
            / (4.0**k * math.factorial(m - k))
        )
        inner = 0
        for l in range(k + 1):
            inner = inner + (
                u**l
                * v ** (k - l)
                / (math.factorial(l) * math.factorial(k - l))
                * sc.rgamma(a + l + 1)
                * sc.rgamma(b + k - l + 1)
            )
        total = total + outer * inner
    result = pref * total
    if isinstance(result, complex) and result.imag == 0.0:
        return result.real
    return result


def routh_romanovski_with_residual(m: int, a: float, b: float, x: float):
    """Routh-Romanovski value together with its discarded imaginary residue.

    Returns (value, residual) where residual is the relative size of the
    imaginary part of the underlying complex Jacobi evaluation.  The value
    is real by construction (complex-conjugate parameters on the imaginary
    axis); the residue is a health indicator of the special-function stack.
    """
    pa = complex(b - 1.0, a / 2.0)
    pb = complex(b - 1.0, -a / 2.0)
    val = (-2j) ** m * math.factorial(m) * jacobi_poly(JacobiParams(pa, pb, m), 1j * x)
    val = complex(val)
    scale = max(abs(val), 1.0)
    return val.real, abs(val.imag) / scale


def routh_romanovski(m: int, a: float, b: float, x: float) -> float:
    """Routh-Romanovski polynomial RR_m^(a,b)(x), real for real (a, b, x).

        RR_m^(a,b)(x) = (-2i)^m m! P_m^(b-1+ia/2, b-1-ia/2)(ix)

    Raises ImaginaryResidueError if the imaginary residue of the underlying
    complex evaluation exceeds 1e-8 relative, which would indicate a bug in
    the Jacobi evaluation rather than a property of the inputs.
    """
    value, residual = routh_romanovski_with_residual(m, a, b, x)
    if residual > 1e-8:
        raise ImaginaryResidueError(
            f"RR_{m}^({a},{b})({x}): imaginary residue {residual:.3e} exceeds 1e-8"
        )
    return value


def routh_coefficients(m: int, a: float, b: float) -> np.ndarray:
    """Real monomial coefficients (ascending) of RR_m^(a,b).

    Used wherever exact polynomial derivatives are needed (Sturm-Liouville
    residuals, leading-coefficient checks)."""
    cj = jacobi_coefficients(JacobiParams(complex(b - 1.0, a / 2.0), complex(b - 1.0, -a / 2.0), m))
    pref = (-2j) ** m * math.factorial(m)
    coeffs = pref * cj * (1j) ** np.arange(m + 1)
    scale = max(np.max(np.abs(coeffs)), 1.0)
    if np.max(np.abs(coeffs.imag)) > 1e-8 * scale:
        raise ImaginaryResidueError(
            f"RR_{m}^({a},{b}) coefficients carry imaginary residue "
            f"{np.max(np.abs(coeffs.imag)) / scale:.3e}"
        )
    return coeffs.real.copy()


def routh_leading_coefficient(m: int, B: float) -> float:
    """Leading coefficient of RR_m^(a, 1-B) in x, independent of a:

        a_m = (-1)^m Gamma(2B - m) / Gamma(2B - 2m).
    """
    if _is_nonpositive_integer(2.0 * B - m) or _is_nonpositive_integer(2.0 * B - 2.0 * m):
        raise PoleError(
            f"leading coefficient undefined where Gamma(2B-m) or Gamma(2B-2m) "
            f"has a pole: B={B}, m={m}"
        )
    return (-1.0) ** m * float(sc.gamma(2.0 * B - m) / sc.gamma(2.0 * B - 2.0 * m))


def arccot(x: float) -> float:
    """The (0, pi) branch of the inverse cotangent: the exact inverse of
    x = cot(theta) for theta in (0, pi)."""
    return math.pi / 2.0 - math.atan(x)


def student_weight(xi: float, j: int, params: AnnulusParams) -> float:
    """Student-type weight of finite orthogonality on the real line,

        rho_j(xi) = (1 + xi^2)^(-B) * exp(alpha(j, B) * arccot(xi)),

    with arccot valued in (0, pi).  Under xi = cot(theta) this is exactly the
    radial weight exp(alpha * theta) * (sin theta)^(2B - 2) times the Jacobian
    of the substitution, which is what makes the Routh-Romanovski family with
    first parameter -alpha(j, B) finitely orthogonal against it.
    """
    alpha = alpha_index(j, params)
    return (1.0 + xi * xi) ** (-params.B) * math.exp(alpha * arccot(xi))


def cauchy_beta_integral(p: float, nu: float) -> float:
    """The Cauchy Beta integral

        int_0^pi exp(-p x) (sin x)^nu dx
            = pi 2^(-nu) exp(-pi p / 2) Gamma(nu + 1) / |Gamma(nu/2 + 1 + ip/2)|^2

    valid for nu > -1.  Evaluated entirely in log space.
    """
    if not (nu > -1.0):
        raise DomainError(f"cauchy_beta_integral requires nu > -1, got {nu}")
    log_value = (
        math.log(math.pi)
        - nu * math.log(2.0)
        - math.pi * p / 2.0
        + math.lgamma(nu + 1.0)
        - 2.0 * log_gamma(complex(nu / 2.0 + 1.0, p / 2.0)).real
    )
    return math.exp(log_value)


def _rodrigues_weight(x: float, a: float, b: float) -> float:
    """omega^(a,b)(x) = exp(-a arccot x) (1 + x^2)^(b-1)."""
    return math.exp(-a * arccot(x)) * (1.0 + x * x) ** (b - 1.0)


def routh_rodrigues_oracle(m: int, a: float, b: float, x: float) -> float:
    """Rodrigues-formula value of RR_m^(a,b)(x),

        (1 / omega^(a,b)(x)) d^m/dx^m [ omega^(a,b)(x) (1 + x^2)^m ],

    computed independently of the Jacobi-sum path: symbolically for m <= 2
    (the product rule closes in a few terms), by Richardson-extrapolated
    central differences for m in {3, 4}.  Serves as the oracle the series
    path is tested against.
    """
    if m < 0 or m > 4:
        raise DomainError(f"Rodrigues oracle implemented for 0 <= m <= 4, got {m}")
    if m == 0:
        return 1.0
    if m == 1:
        # (1/w) d/dx [w (1+x^2)] with w'/w = (a + 2(b-1)x)/(1+x^2)
        return a + 2.0 * b * x
    if m == 2:
        # (1/w) d^2/dx^2 [w (1+x^2)^2]; the logarithmic derivative of
        # W = w (1+x^2)^2 is (a + 2(b+1)x)/(1+x^2), and
        # W''/W = [(a+2(b+1)x)^2 + 2(b+1)(1+x^2) - 2x(a+2(b+1)x)]/(1+x^2)^2.
        s = a + 2.0 * (b + 1.0) * x
        return s * s + 2.0 * (b + 1.0) * (1.0 + x * x) - 2.0 * x * s

    # m in {3, 4}: differentiate g(u) = F(u)/F(x) with
    # F(u) = exp(-a arccot u) (1+u^2)^(b-1+m), which keeps values O(1) near u=x;
    # then RR_m = g^(m)(x) * (1+x^2)^m.
    c = b - 1.0 + m

    def g(u: float) -> float:
        return math.exp(-a * (arccot(u) - arccot(x))) * (
            (1.0 + u * u) / (1.0 + x * x)
        ) ** c

    # second-order central stencil for the m-th derivative, Richardson
    # extrapolated twice (h, h/2, h/4) to O(h^6)
    stencil = [(-1.0) ** i * math.comb(m, i) for i in range(m + 1)]

    def central(h: float) -> float:
        acc = 0.0
        for i, w in enumerate(stencil):
            acc += w * g(x + (m / 2.0 - i) * h)
        return acc / h**m

    h0 = 0.04 * (1.0 + abs(x))
    d1, d2, d3 = central(h0), central(h0 / 2.0), central(h0 / 4.0)
    r1 = (4.0 * d2 - d1) / 3.0
    r2 = (4.0 * d3 - d2) / 3.0
    value = (16.0 * r2 - r1) / 15.0
    return value * (1.0 + x * x) ** m


def theta4(z: complex, R: float, ctrl: SeriesControl = DEFAULT_SERIES) -> complex:
    """Jacobi's fourth theta function in the nome q = 1/R,

        theta_4(z, R) = 1 + 2 sum_{k>=1} (-1)^k R^(-k^2) cos(2kz),

    for R > 1 and complex z.  Terms decay like R^(-k^2) exp(2k |Im z|); the
    sum is truncated once the term bound falls below tolerance times the
    partial sum, with k capped at sqrt(max_terms).
    """
    z = complex(z)
    if not (R > 1.0):
        raise DomainError(f"theta4 requires R > 1, got R={R}")
    log_R = math.log(R)
    im = abs(z.imag)
    # peak of the term magnitude sits near k* = im / log R
    if im * im / log_R > 500.0:
        raise ConvergenceError(
            f"theta4 series peak exp({im * im / log_R:.1f}) exceeds the "
            "floating-point range"
        )
    k_max = max(int(math.isqrt(ctrl.max_terms)), 4)
    k_peak = im / log_R
    total = 1.0 + 0.0j
    for k in range(1, k_max + 1):
        term = 2.0 * (-1.0) ** k * math.exp(-(k * k) * log_R) * cmath.cos(2.0 * k * z)
        total += term
        bound = 2.0 * math.exp(-(k * k) * log_R + 2.0 * k * im)
        if k > k_peak and bound < ctrl.tolerance * max(abs(total), 1e-300):
            return total
    raise ConvergenceError(
        f"theta4 did not converge within k <= {k_max} (|Im z| = {im:.3g}, R = {R})"
    )


def theta4_log_derivative(
    order: int, z: complex, R: float, ctrl: SeriesControl = DEFAULT_SERIES
) -> complex:
    """Derivative of order s >= 1 of log theta_4(z, R), as the Lambert-type
    series

        (log theta_4)^(s)(z)
            = 4 sum_{j>=1} (2j)^(s-1) [R^j / (R^(2j) - 1)] sin(2jz + (s-1) pi/2).

    Converges iff exp(2 |Im z|) / R < 1; the distance of that ratio from 1
    must exceed ctrl.boundary_margin.
    """
    if order < 1:
        raise DomainError(f"derivative order must be >= 1, got {order}")
    z = complex(z)
    if not (R > 1.0):
        raise DomainError(f"requires R > 1, got R={R}")
    q = math.exp(2.0 * abs(z.imag)) / R
    if q >= 1.0 - ctrl.boundary_margin:
        raise ConvergenceError(
            f"log-derivative series ratio exp(2|Im z|)/R = {q:.6g} is within "
            f"{ctrl.boundary_margin} of 1 (|Im z| must stay below log(R)/2)"
        )
    phase = (order - 1) * math.pi / 2.0
    total = 0.0 + 0.0j
    for j in range(1, ctrl.max_terms + 1):
        g = R ** (-j) / (1.0 - R ** (-2 * j))
        term = 4.0 * (2.0 * j) ** (order - 1) * g * cmath.sin(2.0 * j * z + phase)
        total += term
        bound = 4.0 * (2.0 * j) ** (order - 1) * g * math.exp(2.0 * j * abs(z.imag))
        # geometric tail with ratio ~ 2^(order-1) adjustment absorbed by q-margin
        tail = bound * q * (1.0 + 1.0 / j) ** (order - 1) / (1.0 - q)
        if tail < ctrl.tolerance * max(abs(total), 1e-300):
            return total
    raise ConvergenceError(
        f"log-derivative series (order {order}) hit the {ctrl.max_terms}-term cap"
    )
