"""Reproducing kernels of the Landau-level eigenspaces on the annulus.

Four independent evaluation paths are implemented and cross-checked:

  closed_form      the double sum over sigma-series (Gamma-pair bilateral
                   series contracted against powers of V and conj(V)),
  basis_sum        the ground-truth oracle  K_m = sum_j Phi_j(z) conj(Phi_j(w))
                   built from the orthonormal basis and the closed-form norms,
  theta            integer B only: each sigma-series collapsed to finitely
                   many logarithmic derivatives of theta_4 via the elementary
                   Gamma-pair product,
  product_formula  integer B, m = 0 only: the elementary-coefficient series.

Convention note: textbook displays of the closed form differ in where the
conjugation sits and whether an alternating sign (-1)^m is present.  Both
choices are fixed here against the basis_sum oracle (which follows from the
definition of a reproducing kernel and the independently tested norms) and
pinned by regression tests: the sigma_{k,l} term carries V^l * conj(V)^k,
and the prefactor carries no alternating sign.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import mpmath as mp
import numpy as np
import scipy.special as sc

from .errors import ConvergenceError, DomainError, UnsupportedPathError
from .geometry import (
    AnnulusParams,
    as_complex,
    require_interior,
    xi_coordinate,
)
from .special import (
    DEFAULT_SERIES,
    SeriesControl,
    log_gamma,
    pochhammer,
    routh_romanovski,
    theta4_log_derivative,
)
from .basis import log_basis_norm_sq, require_admissible

KERNEL_PATHS = ("closed_form", "basis_sum", "theta", "product_formula")

_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class PairGeometry:
    """Joint coordinates of a point pair (z, w) entering every kernel series.

    t = z conj(w) / R,  X = cot(zeta_z),  Y = cot(zeta_w),
    V = (1 + iX)(1 + iY)/4,  mu(j) = i (j + B) log(R)/pi.
    """

    t: complex
    X: float
    Y: float
    V: complex
    B: float
    radial_scale: float

    def mu(self, j: int) -> complex:
        return 1j * (j + self.B) * self.radial_scale


@dataclass(frozen=True)
class KernelEvaluation:
    """A kernel value with its evaluation path and truncation diagnostics.

    condition is the gross-to-net ratio of the summed series (the factor by
    which floating-point rounding of individual terms can be amplified in
    the cancelled total); precision records whether the value came from the
    plain binary64 ladder or the extended-precision re-evaluation.
    """

    value: complex
    path: str
    terms_used: int
    tail_bound: float
    condition: float = 0.0
    precision: str = "binary64"


def pair_geometry(z, w, params: AnnulusParams) -> PairGeometry:
    """Pair coordinates (t, X, Y, V) of two interior points."""
    zc, wc = as_complex(z), as_complex(w)
    require_interior(zc, params)
    require_interior(wc, params)
    X = xi_coordinate(zc, params)
    Y = xi_coordinate(wc, params)
    return PairGeometry(
        t=zc * wc.conjugate() / params.R,
        X=X,
        Y=Y,
        V=0.25 * (1.0 + 1j * X) * (1.0 + 1j * Y),
        B=params.B,
        radial_scale=params.radial_scale,
    )


def _decay_ratios(t: complex, params: AnnulusParams) -> tuple[float, float]:
    """Geometric decay ratios of the bilateral series: q_plus for j -> +inf,
    q_minus for j -> -inf.  Both are < 1 exactly when 1/R < |t| < R."""
    return abs(t) / params.R, 1.0 / (params.R * abs(t))


def _require_ratios(t: complex, params: AnnulusParams, ctrl: SeriesControl) -> None:
    q_plus, q_minus = _decay_ratios(t, params)
    if min(1.0 - q_plus, 1.0 - q_minus) < ctrl.boundary_margin:
        raise ConvergenceError(
            f"pair too close to the boundary: decay ratios q+={q_plus:.6g}, "
            f"q-={q_minus:.6g} must stay below 1 - {ctrl.boundary_margin}"
        )


def _sigma_family(
    m: int, geo: PairGeometry, params: AnnulusParams, ctrl: SeriesControl
) -> tuple[np.ndarray, np.ndarray, np.ndarray, int]:
    """All sigma_{k,l} for 0 <= k, l <= m over one shared Gamma ladder.

    sigma_{k,l} = sum_{j in Z} Gamma(B-k + i alpha_j/2) Gamma(B-l - i alpha_j/2) t^j

    with alpha_j/2 = (j+B) log(R)/pi.  The ladder loggamma(B-k + i y_j) is
    computed once per k and shared by every l (the second factor is its
    Schwarz conjugate at row l).  Window [-J, J] doubles until the rigorous
    geometric tail bounds (edge term x q_eff/(1-q_eff), with the polynomial
    growth |y|^(2B-k-l-1) absorbed into q_eff) fall below tolerance times
    the family scale.  Returns (sigma, tails, gross, J), where gross[k, l]
    is the non-cancelling sum of term magnitudes (the rounding majorant).
    """
    B, c = params.B, params.radial_scale
    t = geo.t
    _require_ratios(t, params, ctrl)
    if B - m <= 0.0:
        raise DomainError(f"sigma series needs B - k > 0 for all k <= m={m}")
    q_plus, q_minus = _decay_ratios(t, params)
    log_t = cmath.log(t)

    J = 32
    while True:
        j = np.arange(-J, J + 1)
        y = (j + B) * c
        lg = sc.loggamma((B - np.arange(m + 1))[:, None] + 1j * y[None, :])
        log_pow = j * log_t
        sigma = np.empty((m + 1, m + 1), dtype=complex)
        tails = np.empty((m + 1, m + 1))
        gross = np.empty((m + 1, m + 1))
        y_hi, y_lo = abs(y[-1]), abs(y[0])
        scale = 0.0
        converged = True
        for k in range(m + 1):
            for l in range(m + 1):
                terms = np.exp(lg[k] + np.conj(lg[l]) + log_pow)
                sigma[k, l] = terms.sum()
                gross[k, l] = np.abs(terms).sum()
                p = max(2.0 * B - k - l - 1.0, 0.0)
                q_hi = q_plus * ((y_hi + c) / y_hi) ** p
                q_lo = q_minus * ((y_lo + c) / y_lo) ** p
                if q_hi >= 1.0 or q_lo >= 1.0:
                    converged = False
                    tails[k, l] = math.inf
                    continue
                tails[k, l] = (
                    abs(terms[-1]) * q_hi / (1.0 - q_hi)
                    + abs(terms[0]) * q_lo / (1.0 - q_lo)
                )
                scale = max(scale, abs(sigma[k, l]))
        if converged and np.all(tails <= ctrl.tolerance * max(scale, 1e-300)):
            return sigma, tails, gross, J
        if 2 * (2 * J) + 1 > ctrl.max_terms:
            raise ConvergenceError(
                f"sigma family did not reach tolerance {ctrl.tolerance} within "
                f"{ctrl.max_terms} terms (J={J}, q+={q_plus:.4g}, q-={q_minus:.4g})"
            )
        J *= 2


def sigma_kl(
    k: int,
    l: int,
    z,
    w,
    m_context: int,
    params: AnnulusParams,
    ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> complex:
    """The bilateral Gamma-pair series sigma_{k,l}(z, w).

    k and l must not exceed the level context m (which bounds the Gamma
    arguments away from poles: B - max(k,l) >= B - m > 0).  With
    rounding_rtol set, a cancellation-limited sum escalates to extended
    precision over a widened window.
    """
    if not (0 <= k <= m_context and 0 <= l <= m_context):
        raise DomainError(f"need 0 <= k,l <= m={m_context}, got k={k}, l={l}")
    require_admissible(m_context, params)
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    sigma, _, gross, J = _sigma_family(m_context, geo, params, ctrl)
    condition = gross[k, l] / max(abs(sigma[k, l]), 1e-300)
    # truncation (relative to the family scale) and rounding are both
    # amplified by the gross-to-net ratio of this entry
    if (
        rounding_rtol is not None
        and max(_EPS, ctrl.tolerance) * condition > rounding_rtol
    ):
        return _sigma_extended(k, l, zc, wc, params, J + J // 2 + 16)
    return complex(sigma[k, l])


def _kernel_prefactor(m: int, params: AnnulusParams) -> float:
    B, R = params.B, params.R
    return (
        (2.0 * math.pi) ** (2.0 * B - 3.0)
        * (2.0 * B - 2.0 * m - 1.0)
        / (R**B * math.log(R) ** (2.0 * B - 1.0) * math.gamma(2.0 * B - m))
    )


def _double_sum(
    m: int,
    geo: PairGeometry,
    sigma: np.ndarray,
    tails: np.ndarray,
    gross: np.ndarray,
    params: AnnulusParams,
) -> tuple[complex, float, float]:
    """The closed-form double sum over (k, l) with k + l <= m:

        sum (1-2B+m)_(k+l) / ((m-k-l)! k! l!) * V^l conj(V)^k * sigma_{k,l}

    (arrangement pinned against the basis-sum oracle; see module docstring).
    Returns the sum, the matching weighted tail bound, and the weighted
    gross magnitude (rounding majorant of the whole contraction).
    """
    B = params.B
    total = 0.0 + 0.0j
    bound = 0.0
    majorant = 0.0
    for l in range(m + 1):
        for k in range(m + 1 - l):
            coeff = pochhammer(1.0 - 2.0 * B + m, k + l) / (
                math.factorial(m - k - l) * math.factorial(k) * math.factorial(l)
            )
            weight = coeff * geo.V**l * np.conj(geo.V) ** k
            total += weight * sigma[k, l]
            bound += abs(weight) * tails[k, l]
            majorant += abs(weight) * gross[k, l]
    return total, bound, majorant


def _kernel_km_extended(
    m: int, zc: complex, wc: complex, params: AnnulusParams, J: int
) -> complex:
    """The same pinned closed form summed in extended precision (34 digits)
    over the fixed window [-J, J].

    Used when the binary64 ladder is cancellation-limited: near an
    off-diagonal zero of the kernel the gross-to-net ratio of the series
    makes binary64 rounding, not truncation, the dominant error.  All
    geometry (t, X, Y, V), the Gamma ladders, the Pochhammer coefficients
    and the prefactor are rebuilt from scratch at working precision.
    """
    B, R = params.B, params.R
    with mp.workdps(34):
        zm, wm = mp.mpc(zc), mp.mpc(wc)
        log_R = mp.log(R)
        c = log_R / mp.pi
        X = mp.cot(mp.pi * mp.log(abs(zm)) / log_R)
        Y = mp.cot(mp.pi * mp.log(abs(wm)) / log_R)
        V = (1 + 1j * X) * (1 + 1j * Y) / 4
        log_t = mp.log(zm * mp.conj(wm) / R)
        ladders = [
            [mp.loggamma(B - k + 1j * (jj + B) * c) for jj in range(-J, J + 1)]
            for k in range(m + 1)
        ]
        powers = [(jj * log_t) for jj in range(-J, J + 1)]
        total = mp.mpc(0)
        for l in range(m + 1):
            for k in range(m + 1 - l):
                coeff = mp.rf(1 - 2 * B + m, k + l) / (
                    mp.factorial(m - k - l) * mp.factorial(k) * mp.factorial(l)
                )
                weight = coeff * V**l * mp.conj(V) ** k
                fam = mp.fsum(
                    mp.e ** (ladders[k][i] + mp.conj(ladders[l][i]) + powers[i])
                    for i in range(2 * J + 1)
                )
                total += weight * fam
        pref = (
            (2 * mp.pi) ** (2 * B - 3)
            * (2 * B - 2 * m - 1)
            / (mp.mpf(R) ** B * log_R ** (2 * B - 1) * mp.gamma(2 * B - m))
        )
        return complex(pref * total)


def _mp_pair(zc: complex, wc: complex, params: AnnulusParams):
    """Pair geometry (log_R, c, X, Y, V, t) rebuilt at working precision.

    Must be called inside an mp.workdps context.
    """
    zm, wm = mp.mpc(zc), mp.mpc(wc)
    log_R = mp.log(params.R)
    c = log_R / mp.pi
    X = mp.cot(mp.pi * mp.log(abs(zm)) / log_R)
    Y = mp.cot(mp.pi * mp.log(abs(wm)) / log_R)
    V = (1 + 1j * X) * (1 + 1j * Y) / 4
    t = zm * mp.conj(wm) / params.R
    return zm, wm, log_R, c, X, Y, V, t


def _mp_jacobi(alpha, beta, k: int, x):
    """Jacobi P_k^(alpha, beta)(x) by the exact finite binomial sum at
    working precision (same formula as special.jacobi_poly)."""
    xm = (x - 1) / 2
    xp = (x + 1) / 2
    total = mp.mpc(0)
    for l in range(k + 1):
        coeff = mp.rf(alpha + l + 1, k - l) * mp.rf(beta + k - l + 1, l)
        coeff = coeff / (mp.factorial(k - l) * mp.factorial(l))
        total += coeff * xm**l * xp ** (k - l)
    return total


def _mp_routh(m: int, a, b, x):
    """RR_m^(a,b)(x) = (-2i)^m m! P_m^(b-1+ia/2, b-1-ia/2)(ix) at working
    precision; returns the complex evaluation (imaginary part ~ working eps).
    """
    val = _mp_jacobi(b - 1 + 1j * a / 2, b - 1 - 1j * a / 2, m, 1j * x)
    return mp.mpc(0, -2) ** m * mp.factorial(m) * val


def _mp_polymul(A: list, B: list) -> list:
    """Convolution of ascending mp coefficient lists."""
    out = [mp.mpc(0)] * (len(A) + len(B) - 1)
    for i, ai in enumerate(A):
        for j, bj in enumerate(B):
            out[i + j] += ai * bj
    return out


def _oracle_extended(
    m: int, zc: complex, wc: complex, params: AnnulusParams, J: int
) -> complex:
    """Basis-sum oracle re-summed at extended precision over [-J, J].

    Per-term formula identical to kernel_basis_sum_oracle: the closed-form
    log-norm and the Routh-Romanovski radial factors are rebuilt in mp."""
    B = params.B
    with mp.workdps(34):
        zm, wm, log_R, c, X, Y, _, _ = _mp_pair(zc, wc, params)
        log_u = mp.log(zm * mp.conj(wm))
        log_const = (
            (3 - 2 * (B - m)) * mp.log(2)
            + B * log_R
            + (2 * B - 1) * mp.log(log_R)
            - (2 * B - 3) * mp.log(mp.pi)
            + mp.loggamma(m + 1)
            + mp.loggamma(2 * B - m)
            - mp.log(2 * (B - m) - 1)
        )
        total = mp.mpc(0)
        for j in range(-J, J + 1):
            a = -2 * (j + B) * c
            log_norm = (
                log_const
                + j * log_R
                - 2 * mp.re(mp.loggamma(B - m + 1j * (j + B) * c))
            )
            radial = _mp_routh(m, a, 1 - B, X) * _mp_routh(m, a, 1 - B, Y)
            total += mp.e ** (j * log_u - log_norm) * radial
        return complex(total)


def _jacobi_product_extended(
    m: int, zc: complex, wc: complex, params: AnnulusParams, J: int
) -> complex:
    """Jacobi-product series re-summed at extended precision over [-J, J]."""
    B, R = params.B, params.R
    with mp.workdps(34):
        _, _, log_R, c, X, Y, _, t = _mp_pair(zc, wc, params)
        log_t = mp.log(t)
        gamma_m = (
            (2 * mp.pi) ** (2 * B - 3)
            * mp.factorial(m)
            * (2 * B - 2 * m - 1)
            / (mp.mpf(R) ** B * log_R ** (2 * B - 1) * mp.gamma(2 * B - m))
        )
        total = mp.mpc(0)
        for j in range(-J, J + 1):
            mu = 1j * (j + B) * c
            pair = mp.e ** (2 * mp.re(mp.loggamma(B - m + mu)))
            pz = _mp_jacobi(-B - mu, -B + mu, m, 1j * X)
            pw = _mp_jacobi(-B + mu, -B - mu, m, -1j * Y)
            total += mp.e ** (j * log_t) * pair * pz * pw
        return complex(gamma_m * total)


def _b1_extended(zc: complex, wc: complex, R: float, J: int) -> complex:
    """B = 1 elementary kernel series re-summed at extended precision."""
    with mp.workdps(34):
        zm, wm = mp.mpc(zc), mp.mpc(wc)
        Rm = mp.mpf(R)
        u = zm * mp.conj(wm) / Rm**2
        log_u = mp.log(u)
        log_R = mp.log(Rm)

        def coeff(j: int):
            if j == 0:
                return 1 / (2 * log_R)
            if j > 0:
                return j / (1 - Rm ** (-2 * j))
            n = -j
            return n * Rm ** (-2 * n) / (1 - Rm ** (-2 * n))

        total = mp.fsum(coeff(j) * mp.e ** (j * log_u) for j in range(-J, J + 1))
        return complex(total / (mp.pi * zm * mp.conj(wm)))


def _product_extended(
    zc: complex, wc: complex, params: AnnulusParams, J: int
) -> complex:
    """Integer-B product series re-summed at extended precision."""
    B = int(round(params.B))
    with mp.workdps(34):
        zm, wm = mp.mpc(zc), mp.mpc(wc)
        Rm = mp.mpf(params.R)
        log_R = mp.log(Rm)
        u = zm * mp.conj(wm)
        log_u = mp.log(u)
        pref = (
            (2 * mp.pi) ** (2 * B - 2)
            * mp.factorial(B - 1) ** 2
            / (mp.pi * mp.gamma(2 * B - 1) * u**B * log_R ** (2 * B - 2))
        )

        def coeff(j: int):
            if j == 0:
                base = 1 / (2 * log_R)
            elif j > 0:
                base = j * Rm ** (-2 * j) / (1 - Rm ** (-2 * j))
            else:
                n = -j
                base = n / (1 - Rm ** (-2 * n))
            poly = mp.mpf(1)
            for q in range(1, B):
                poly *= 1 + (j * log_R) ** 2 / (mp.pi * q) ** 2
            return base * poly

        total = mp.fsum(coeff(j) * mp.e ** (j * log_u) for j in range(-J, J + 1))
        return complex(pref * total)


def _sigma_extended(
    k: int, l: int, zc: complex, wc: complex, params: AnnulusParams, J: int
) -> complex:
    """The Gamma-pair bilateral series sigma_{k,l} re-summed at extended
    precision over [-J, J]."""
    B = params.B
    with mp.workdps(34):
        _, _, _, c, _, _, _, t = _mp_pair(zc, wc, params)
        log_t = mp.log(t)
        return complex(
            mp.fsum(
                mp.e
                ** (
                    mp.loggamma(B - k + 1j * (j + B) * c)
                    + mp.conj(mp.loggamma(B - l + 1j * (j + B) * c))
                    + j * log_t
                )
                for j in range(-J, J + 1)
            )
        )


def _mp_theta_log_derivative(s: int, z0, R: float):
    """(log theta_4)^(s)(z0) by the Lambert-type series at working precision."""
    total = mp.mpc(0)
    phase = (s - 1) * mp.pi / 2
    im0 = abs(mp.im(z0))
    Rm = mp.mpf(R)
    scale = mp.mpf(0)
    for j in range(1, 100001):
        g = Rm ** (-j) / (1 - Rm ** (-2 * j))
        term = 4 * (2 * j) ** (s - 1) * g * mp.sin(2 * j * z0 + phase)
        total += term
        bound = 4 * (2 * j) ** (s - 1) * g * mp.e ** (2 * j * im0)
        scale = max(scale, abs(term))
        if j > 4 and bound < mp.mpf("1e-45") * max(scale, mp.mpf("1e-300")):
            return total
    raise ConvergenceError("extended theta log-derivative series stalled")


def _mp_sigma_theta(k: int, l: int, B: int, c, log_R, t, L):
    """sigma_{k,l} by the theta contraction at working precision.

    Mirrors _sigma_theta_with_gross: the gap/weight polynomial contracts
    against the cached log-derivative callable L(s)."""
    c0 = B - max(k, l)
    P = [mp.mpc(1)]
    sign = 1 if k < l else -1
    for p in range(abs(k - l)):
        P = _mp_polymul(P, [mp.mpc(c0 + p), sign * 1j * c])
    for q in range(1, c0):
        P = _mp_polymul(
            P, [mp.mpc(1), mp.mpc(0), mp.mpc((log_R / (mp.pi * q)) ** 2)]
        )
    sig = mp.mpc(0)
    for p, cp in enumerate(P):
        if cp == 0:
            continue
        if p % 2 == 0:
            sp = (-1) ** (p // 2) * L(p + 2) / mp.mpf(2) ** (p + 2)
        else:
            sp = -1j * (-1) ** ((p + 1) // 2) * L(p + 2) / mp.mpf(2) ** (p + 2)
        if p == 0:
            sp = sp + 1 / (2 * log_R)
        sig += cp * sp
    return t ** (-B) * 2 * log_R * mp.factorial(c0 - 1) ** 2 * sig


def _theta_sigma_extended(
    k: int, l: int, zc: complex, wc: complex, params: AnnulusParams
) -> complex:
    """Single sigma_{k,l} through the theta path at extended precision."""
    B = int(round(params.B))
    with mp.workdps(34):
        _, _, log_R, c, _, _, _, t = _mp_pair(zc, wc, params)
        z0 = 0.5j * mp.log(t)
        cache: dict[int, object] = {}

        def L(s: int):
            if s not in cache:
                cache[s] = _mp_theta_log_derivative(s, z0, params.R)
            return cache[s]

        return complex(_mp_sigma_theta(k, l, B, c, log_R, t, L))


def _theta_extended(m: int, zc: complex, wc: complex, params: AnnulusParams) -> complex:
    """Theta-path kernel rebuilt at extended precision.

    Same structure as kernel_km_theta / sigma_theta_path: per (k, l), the
    gap/weight polynomial contracts against theta_4 log-derivatives at
    z0 = (i/2) log t, each log-derivative summed by its Lambert-type series
    to working precision."""
    B = int(round(params.B))
    with mp.workdps(34):
        _, _, log_R, c, _, _, V, t = _mp_pair(zc, wc, params)
        z0 = 0.5j * mp.log(t)
        cache: dict[int, object] = {}

        def L(s: int):
            if s not in cache:
                cache[s] = _mp_theta_log_derivative(s, z0, params.R)
            return cache[s]

        total = mp.mpc(0)
        for l in range(m + 1):
            for k in range(m + 1 - l):
                coeff = mp.rf(1 - 2 * B + m, k + l) / (
                    mp.factorial(m - k - l) * mp.factorial(k) * mp.factorial(l)
                )
                weight = coeff * V**l * mp.conj(V) ** k
                total += weight * _mp_sigma_theta(k, l, B, c, log_R, t, L)
        pref = (
            (2 * mp.pi) ** (2 * B - 3)
            * (2 * B - 2 * m - 1)
            / (mp.mpf(params.R) ** B * log_R ** (2 * B - 1) * mp.gamma(2 * B - m))
        )
        return complex(pref * total)


def kernel_km(
    m: int,
    z,
    w,
    params: AnnulusParams,
    ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> KernelEvaluation:
    """Closed-form reproducing kernel K_m(z, w) of the m-th eigenspace.

    Hermitian in (z, w), rotation invariant, and equal to the basis-sum
    oracle; the tail bound is the coefficient-weighted sum of the rigorous
    sigma-series bounds and satisfies tail_bound <= tolerance * |value|.

    ctrl.tolerance governs truncation only.  Rounding error is bounded by
    machine epsilon times the reported condition (gross-to-net cancellation
    of the contraction); when rounding_rtol is given and that bound exceeds
    it, the value is recomputed in extended precision over a widened window
    and reported with precision="extended".
    """
    require_admissible(m, params)
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    pref = _kernel_prefactor(m, params)
    eff = ctrl
    for _ in range(3):
        sigma, tails, gross, J = _sigma_family(m, geo, params, eff)
        total, bound, majorant = _double_sum(m, geo, sigma, tails, gross, params)
        value = pref * total
        tail = abs(pref) * bound
        if tail <= ctrl.tolerance * abs(value):
            condition = majorant / max(abs(total), 1e-300)
            if rounding_rtol is not None and _EPS * condition > rounding_rtol:
                J_ext = J + J // 2 + 16
                return KernelEvaluation(
                    value=_kernel_km_extended(m, zc, wc, params, J_ext),
                    path="closed_form",
                    terms_used=2 * J_ext + 1,
                    tail_bound=tail,
                    condition=condition,
                    precision="extended",
                )
            return KernelEvaluation(
                value=complex(value),
                path="closed_form",
                terms_used=2 * J + 1,
                tail_bound=tail,
                condition=condition,
            )
        eff = replace(eff, tolerance=eff.tolerance / 100.0)
    if rounding_rtol is not None:
        # binary64 truncation cannot certify the requested accuracy at this
        # gross-to-net ratio; the extended evaluation covers both error terms
        condition = majorant / max(abs(total), 1e-300)
        J_ext = J + J // 2 + 16
        return KernelEvaluation(
            value=_kernel_km_extended(m, zc, wc, params, J_ext),
            path="closed_form",
            terms_used=2 * J_ext + 1,
            tail_bound=tail,
            condition=condition,
            precision="extended",
        )
    raise ConvergenceError(
        f"kernel tail bound {tail:.3g} exceeds tolerance x |value| = "
        f"{ctrl.tolerance * abs(value):.3g} after refinement"
    )


def kernel_k0_closed(
    z, w, params: AnnulusParams, ctrl: SeriesControl = DEFAULT_SERIES
) -> KernelEvaluation:
    """Analytic-space kernel K_0 in its compact single-series form:

        K_0 = (2 pi)^(2B-3) / (Gamma(2B-1) R^B log(R)^(2B-1))
              * sum_j |Gamma(B + i (j+B) log(R)/pi)|^2 (z conj(w)/R)^j.

    Identical series to kernel_km at m = 0; the prefactors agree through
    Gamma(2B) = (2B-1) Gamma(2B-1).
    """
    geo = pair_geometry(z, w, params)
    B, R = params.B, params.R
    pref = (2.0 * math.pi) ** (2.0 * B - 3.0) / (
        math.gamma(2.0 * B - 1.0) * R**B * math.log(R) ** (2.0 * B - 1.0)
    )
    eff = ctrl
    for _ in range(3):
        sigma, tails, gross, J = _sigma_family(0, geo, params, eff)
        value = pref * sigma[0, 0]
        tail = abs(pref) * tails[0, 0]
        if tail <= ctrl.tolerance * abs(value):
            return KernelEvaluation(
                value=complex(value),
                path="closed_form",
                terms_used=2 * J + 1,
                tail_bound=tail,
                condition=gross[0, 0] / max(abs(sigma[0, 0]), 1e-300),
            )
        eff = replace(eff, tolerance=eff.tolerance / 100.0)
    raise ConvergenceError("K_0 tail bound failed to reach tolerance x |value|")


def kernel_basis_sum_oracle(
    m: int,
    z,
    w,
    params: AnnulusParams,
    window: int | None = None,
    tol: float = 1e-10,
    rounding_rtol: float | None = None,
) -> KernelEvaluation:
    """Ground-truth kernel oracle: K_m = sum_j Phi_j(z) conj(Phi_j(w)).

    Summed directly from the orthogonal basis and the closed-form norms in
    log space.  With window=None the range |j| <= J grows until the edge-term
    geometric estimate (polynomial growth of the radial factors absorbed into
    the effective ratio) drops below tol * |partial sum|; an explicit window
    gives the fixed partial sum with its reported tail estimate (and never
    escalates).  In the automatic mode, when rounding_rtol is given and
    machine epsilon times the gross-to-net condition exceeds it, the same
    per-term formula is re-summed at extended precision over a widened
    window.
    """
    require_admissible(m, params)
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    _require_ratios(geo.t, params, SeriesControl(tolerance=tol))
    q_plus, q_minus = _decay_ratios(geo.t, params)
    B, c = params.B, params.radial_scale
    log_u = cmath.log(zc * wc.conjugate())

    def term(j: int) -> complex:
        radial = routh_romanovski(
            m, -2.0 * (j + B) * c, 1.0 - B, geo.X
        ) * routh_romanovski(m, -2.0 * (j + B) * c, 1.0 - B, geo.Y)
        return cmath.exp(j * log_u - log_basis_norm_sq(j, m, params)) * radial

    J = 32 if window is None else int(window)
    while True:
        values = [term(j) for j in range(-J, J + 1)]
        total = sum(values)
        gross = sum(abs(v) for v in values)
        condition = gross / max(abs(total), 1e-300)
        y_hi, y_lo = (J + B) * c, abs((-J + B) * c)
        p = 2.0 * B - 1.0  # |Gamma|^-2 growth (2(B-m)-1) plus radial degree 2m
        q_hi = q_plus * ((y_hi + c) / y_hi) ** p
        q_lo = q_minus * ((y_lo + c) / y_lo) ** p
        if q_hi < 1.0 and q_lo < 1.0:
            tail = (
                abs(values[-1]) * q_hi / (1.0 - q_hi)
                + abs(values[0]) * q_lo / (1.0 - q_lo)
            )
        else:
            tail = math.inf
        if window is not None:
            return KernelEvaluation(
                complex(total), "basis_sum", 2 * J + 1, tail, condition
            )
        if tail <= tol * abs(total):
            if rounding_rtol is not None and _EPS * condition > rounding_rtol:
                J_ext = J + J // 2 + 16
                return KernelEvaluation(
                    value=_oracle_extended(m, zc, wc, params, J_ext),
                    path="basis_sum",
                    terms_used=2 * J_ext + 1,
                    tail_bound=tail,
                    condition=condition,
                    precision="extended",
                )
            return KernelEvaluation(
                complex(total), "basis_sum", 2 * J + 1, tail, condition
            )
        if 2 * (2 * J) + 1 > 8192:
            raise ConvergenceError(
                f"basis-sum oracle did not reach tol={tol} by J={J}"
            )
        J *= 2


def kernel_jacobi_product_sum(
    m: int, z, w, params: AnnulusParams, tol: float = 1e-10,
    rounding_rtol: float | None = None,
) -> complex:
    """Single-series Jacobi-product form of K_m:

        gamma_m sum_j t^j |Gamma(B-m+mu_j)|^2
                 P_m^(-B-mu_j, -B+mu_j)(iX) P_m^(-B+mu_j, -B-mu_j)(-iY),

    gamma_m = (2 pi)^(2B-3) m! (2B-2m-1) / (R^B log(R)^(2B-1) Gamma(2B-m)).

    Term-by-term this is the basis sum with the radial polynomials written
    as complex-parameter Jacobi values; it exercises the Jacobi plumbing and
    the norm closed form jointly, independently of the sigma machinery.
    With rounding_rtol set, cancellation-limited sums escalate to extended
    precision (same formula, widened window).
    """
    require_admissible(m, params)
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    B, c = params.B, params.radial_scale
    _require_ratios(geo.t, params, SeriesControl(tolerance=tol))
    q_plus, q_minus = _decay_ratios(geo.t, params)
    gamma_m = (
        (2.0 * math.pi) ** (2.0 * B - 3.0)
        * math.factorial(m)
        * (2.0 * B - 2.0 * m - 1.0)
        / (params.R**B * math.log(params.R) ** (2.0 * B - 1.0) * math.gamma(2.0 * B - m))
    )
    log_t = cmath.log(geo.t)

    from .special import JacobiParams, jacobi_poly

    def term(j: int) -> complex:
        mu = geo.mu(j)
        y = (j + B) * c
        pair = math.exp(2.0 * log_gamma(complex(B - m, y)).real)
        pz = jacobi_poly(JacobiParams(-B - mu, -B + mu, m), 1j * geo.X)
        pw = jacobi_poly(JacobiParams(-B + mu, -B - mu, m), -1j * geo.Y)
        return cmath.exp(j * log_t) * pair * pz * pw

    J = 32
    while True:
        values = [term(j) for j in range(-J, J + 1)]
        total = sum(values)
        gross = sum(abs(v) for v in values)
        condition = gross / max(abs(total), 1e-300)
        y_hi, y_lo = (J + B) * c, abs((-J + B) * c)
        p = 2.0 * B - 1.0
        q_hi = q_plus * ((y_hi + c) / y_hi) ** p
        q_lo = q_minus * ((y_lo + c) / y_lo) ** p
        if q_hi < 1.0 and q_lo < 1.0:
            tail = (
                abs(values[-1]) * q_hi / (1.0 - q_hi)
                + abs(values[0]) * q_lo / (1.0 - q_lo)
            )
            if tail <= tol * abs(total):
                if rounding_rtol is not None and _EPS * condition > rounding_rtol:
                    J_ext = J + J // 2 + 16
                    return _jacobi_product_extended(m, zc, wc, params, J_ext)
                return gamma_m * complex(total)
        if 2 * (2 * J) + 1 > 8192:
            raise ConvergenceError("Jacobi-product series did not converge")
        J *= 2


def kernel_k0_b1(
    z, w, R: float, ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> complex:
    """The analytic kernel at unit weight (B = 1) in elementary form:

        K_0^(R,1) = (1/(pi z conj(w))) sum_j [j/(1 - R^(-2j))] (z conj(w)/R^2)^j,

    the j = 0 coefficient being its limit 1/(2 log R).  With rounding_rtol
    set, cancellation-limited sums escalate to extended precision.
    """
    params = AnnulusParams(R=R, B=1.0)
    zc, wc = as_complex(z), as_complex(w)
    require_interior(zc, params)
    require_interior(wc, params)
    u = zc * wc.conjugate() / R**2
    q_plus = abs(u)
    q_minus = 1.0 / (abs(u) * R**2)
    if min(1.0 - q_plus, 1.0 - q_minus) < ctrl.boundary_margin:
        raise ConvergenceError(
            f"B=1 series ratios q+={q_plus:.6g}, q-={q_minus:.6g} too close to 1"
        )
    log_R = math.log(R)

    # the coefficient j/(1 - R^(-2j)) is evaluated overflow-free per sign,
    # with the removable j = 0 singularity replaced by its limit
    def coeff_exact(j: int) -> float:
        if j == 0:
            return 1.0 / (2.0 * log_R)
        if j > 0:
            return j / (1.0 - R ** (-2 * j))
        n = -j
        # j/(1 - R^(2n)) = n / (R^(2n) - 1) = n R^(-2n) / (1 - R^(-2n))
        return n * R ** (-2 * n) / (1.0 - R ** (-2 * n))

    J = 32
    log_u = cmath.log(u)
    while True:
        values = [coeff_exact(j) * cmath.exp(j * log_u) for j in range(-J, J + 1)]
        total = sum(values)
        condition = sum(abs(v) for v in values) / max(abs(total), 1e-300)
        q_hi = q_plus * (J + 1.0) / J
        q_lo = q_minus * (J + 1.0) / J
        if q_hi < 1.0 and q_lo < 1.0:
            tail = (
                abs(values[-1]) * q_hi / (1.0 - q_hi)
                + abs(values[0]) * q_lo / (1.0 - q_lo)
            )
            if tail <= ctrl.tolerance * abs(total):
                if rounding_rtol is not None and _EPS * condition > rounding_rtol:
                    return _b1_extended(zc, wc, R, J + J // 2 + 16)
                return complex(total) / (math.pi * zc * wc.conjugate())
        if 2 * (2 * J) + 1 > ctrl.max_terms:
            raise ConvergenceError("B=1 kernel series did not converge")
        J *= 2


def kernel_k0_integer_product(
    z, w, params: AnnulusParams, ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> complex:
    """Integer-B product form of the analytic kernel:

        K_0 = (2 pi)^(2B-2) Gamma(B)^2
              / (pi Gamma(2B-1) (z conj(w))^B log(R)^(2B-2))
              * sum_j [j/(R^(2j)-1)] prod_{q=1}^{B-1} (1 + (j log R)^2/(pi q)^2)
                      (z conj(w))^j,

    j = 0 coefficient by its limit 1/(2 log R).  Requires integer B >= 1.
    With rounding_rtol set, cancellation-limited sums escalate to extended
    precision.
    """
    if not params.is_integer_B():
        raise UnsupportedPathError(
            f"product-formula path requires integer B, got B={params.B}"
        )
    B = int(round(params.B))
    zc, wc = as_complex(z), as_complex(w)
    require_interior(zc, params)
    require_interior(wc, params)
    R = params.R
    log_R = math.log(R)
    u = zc * wc.conjugate()
    q_plus = abs(u) / R**2
    q_minus = 1.0 / abs(u)
    if min(1.0 - q_plus, 1.0 - q_minus) < ctrl.boundary_margin:
        raise ConvergenceError(
            f"product series ratios q+={q_plus:.6g}, q-={q_minus:.6g} too close to 1"
        )
    pref = (
        (2.0 * math.pi) ** (2 * B - 2)
        * math.factorial(B - 1) ** 2
        / (math.pi * math.gamma(2.0 * B - 1.0) * u**B * log_R ** (2 * B - 2))
    )

    # j/(R^(2j)-1): decays like j R^(-2j) for j -> +inf but grows linearly
    # for j -> -inf (the decay there comes from (z conj(w))^j); evaluated
    # overflow-free per sign, with the j = 0 limit 1/(2 log R)
    def coeff_term(j: int) -> float:
        if j == 0:
            base = 1.0 / (2.0 * log_R)
        elif j > 0:
            base = j * R ** (-2 * j) / (1.0 - R ** (-2 * j))
        else:
            n = -j
            # j/(R^(-2n) - 1) = n / (1 - R^(-2n))
            base = n / (1.0 - R ** (-2 * n))
        poly = 1.0
        for q in range(1, B):
            poly *= 1.0 + (j * log_R) ** 2 / (math.pi * q) ** 2
        return base * poly

    J = 32
    log_u = cmath.log(u)
    while True:
        values = [coeff_term(j) * cmath.exp(j * log_u) for j in range(-J, J + 1)]
        total = sum(values)
        condition = sum(abs(v) for v in values) / max(abs(total), 1e-300)
        growth = ((J + 1.0) / J) ** (2 * B - 1)
        q_hi = q_plus * growth
        q_lo = q_minus * growth
        if q_hi < 1.0 and q_lo < 1.0:
            tail = (
                abs(values[-1]) * q_hi / (1.0 - q_hi)
                + abs(values[0]) * q_lo / (1.0 - q_lo)
            )
            if tail <= ctrl.tolerance * abs(total):
                if rounding_rtol is not None and _EPS * condition > rounding_rtol:
                    return _product_extended(zc, wc, params, J + J // 2 + 16)
                return complex(pref * total)
        if 2 * (2 * J) + 1 > ctrl.max_terms:
            raise ConvergenceError("integer-B product series did not converge")
        J *= 2


def kernel_limit_R_inf(
    z, w, B: float, ctrl: SeriesControl = DEFAULT_SERIES
) -> complex:
    """Limit of K_0 as the outer radius grows without bound:

        2^(2B-2) / (pi Gamma(2B-1)) sum_{j>=1} j^(2B-1) / (z conj(w))^(j+B),

    valid for |z conj(w)| > 1 (geometric decay); integer B.
    """
    if B != int(B) or B < 1:
        raise DomainError(f"limit kernel implemented for integer B >= 1, got {B}")
    u = as_complex(z) * as_complex(w).conjugate()
    if abs(u) <= 1.0 + ctrl.boundary_margin:
        raise ConvergenceError(
            f"limit kernel series needs |z conj(w)| > 1 + margin, got {abs(u):.6g}"
        )
    pref = 2.0 ** (2.0 * B - 2.0) / (math.pi * math.gamma(2.0 * B - 1.0))
    inv = 1.0 / u
    total = 0.0 + 0.0j
    power = inv**B
    ratio = abs(inv)
    for j in range(1, ctrl.max_terms + 1):
        power *= inv
        term = j ** (2.0 * B - 1.0) * power
        total += term
        growth = ((j + 1.0) / j) ** (2.0 * B - 1.0)
        q_eff = ratio * growth
        if q_eff < 1.0:
            tail = abs(term) * q_eff / (1.0 - q_eff)
            if tail <= ctrl.tolerance * max(abs(total), 1e-300):
                return complex(pref * total)
    raise ConvergenceError("limit kernel series did not converge")


def sigma_theta_path(
    k: int,
    l: int,
    z,
    w,
    params: AnnulusParams,
    ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> complex:
    """sigma_{k,l} rebuilt from logarithmic derivatives of theta_4 (integer B).

    After the index shift j -> n - B, the Gamma pair at integer offset
    c0 = B - max(k,l) factors through the elementary product

        Gamma(c0 + i n c) Gamma(c0 - i n c)
            = 2 log R Gamma(c0)^2 [n R^n/(R^(2n)-1)] W(n),

    times a gap polynomial G(n) for k != l.  Writing G(n) W(n) = sum_p c_p n^p,
    each power contracts against a theta_4 log-derivative at
    z0 = (i/2) log(z conj(w)/R):

        sum_n n^p [n R^n/(R^(2n)-1)] t^n
            = delta_(p,0)/(2 log R)
              + (-1)^(p/2)     L_(p+2)/2^(p+2)        (p even)
              - i (-1)^((p+1)/2) L_(p+2)/2^(p+2)      (p odd),

    L_s = (log theta_4)^(s)(z0).  The result carries the t^(-B) prefactor
    from the shift.
    """
    if not params.is_integer_B():
        raise UnsupportedPathError(
            f"theta path requires integer B, got B={params.B}"
        )
    B = int(round(params.B))
    if k < 0 or l < 0 or B - max(k, l) < 1:
        raise DomainError(
            f"theta path needs B - max(k,l) >= 1, got B={B}, k={k}, l={l}"
        )
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    _require_ratios(geo.t, params, ctrl)
    value, gross = _sigma_theta_with_gross(k, l, geo, params, ctrl)
    condition = gross / max(abs(value), 1e-300)
    # the log-derivative series truncate relative to their own magnitude,
    # so truncation error is amplified by the contraction's gross-to-net
    # ratio exactly like rounding
    if (
        rounding_rtol is not None
        and max(_EPS, ctrl.tolerance) * condition > rounding_rtol
    ):
        return _theta_sigma_extended(k, l, zc, wc, params)
    return value


def _sigma_theta_with_gross(
    k: int, l: int, geo: PairGeometry, params: AnnulusParams, ctrl: SeriesControl
) -> tuple[complex, float]:
    """sigma_{k,l} via the theta contraction, with its rounding majorant.

    The second return value is the non-cancelling magnitude of the
    contraction (|prefactor| times the summed |c_p s_p| pieces, the p = 0
    constant counted separately): the cancellation between the theta
    log-derivative terms and the 1/(2 log R) constant is exactly what makes
    sigma small near off-diagonal kernel zeros.
    """
    B = int(round(params.B))
    c = params.radial_scale
    log_R = params.log_R
    c0 = B - max(k, l)

    # gap polynomial G(n): prod_(p=0)^(|k-l|-1) (c0 + p +- i n c), sign +i for
    # k < l (gap sits in the first Gamma factor), -i for k > l
    poly = np.polynomial.polynomial
    P = np.array([1.0 + 0.0j])
    sign = 1.0 if k < l else -1.0
    for p in range(abs(k - l)):
        P = poly.polymul(P, np.array([c0 + p, sign * 1j * c]))
    for q in range(1, c0):
        P = poly.polymul(P, np.array([1.0, 0.0, (log_R / (math.pi * q)) ** 2]))

    z0 = 0.5j * cmath.log(geo.t)
    log_derivs: dict[int, complex] = {}

    def L(s: int) -> complex:
        if s not in log_derivs:
            log_derivs[s] = theta4_log_derivative(s, z0, params.R, ctrl)
        return log_derivs[s]

    total = 0.0 + 0.0j
    gross = 0.0
    for p, cp in enumerate(P):
        if cp == 0.0:
            continue
        if p % 2 == 0:
            s_p = (-1.0) ** (p // 2) * L(p + 2) / 2.0 ** (p + 2)
        else:
            s_p = -1j * (-1.0) ** ((p + 1) // 2) * L(p + 2) / 2.0 ** (p + 2)
        gross += abs(cp) * abs(s_p)
        if p == 0:
            s_p = s_p + 1.0 / (2.0 * log_R)
            gross += abs(cp) / (2.0 * log_R)
        total += cp * s_p

    pref = geo.t ** (-B) * 2.0 * log_R * math.factorial(c0 - 1) ** 2
    return complex(pref * total), abs(pref) * gross


def kernel_km_theta(
    m: int, z, w, params: AnnulusParams, ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> KernelEvaluation:
    """K_m assembled with every sigma_{k,l} taken through the theta path.

    Integer B only; admissible m automatically satisfies B - m >= 1 there.
    terms_used counts the distinct theta-derivative contractions; the tail
    bound is tolerance times the non-cancelling majorant of the double sum.
    The condition is the gross-to-net ratio including the cancellation
    inside each theta contraction; with rounding_rtol set, conditioned
    evaluations are redone at extended precision.
    """
    require_admissible(m, params)
    if not params.is_integer_B():
        raise UnsupportedPathError(
            f"theta path requires integer B, got B={params.B}"
        )
    zc, wc = as_complex(z), as_complex(w)
    geo = pair_geometry(zc, wc, params)
    _require_ratios(geo.t, params, ctrl)
    pref = _kernel_prefactor(m, params)
    B = params.B
    eff = ctrl
    for _ in range(3):
        total = 0.0 + 0.0j
        majorant = 0.0
        contractions = 0
        for l in range(m + 1):
            for k in range(m + 1 - l):
                coeff = pochhammer(1.0 - 2.0 * B + m, k + l) / (
                    math.factorial(m - k - l) * math.factorial(k) * math.factorial(l)
                )
                weight = coeff * geo.V**l * np.conj(geo.V) ** k
                s, g = _sigma_theta_with_gross(k, l, geo, params, eff)
                total += weight * s
                majorant += abs(weight) * g
                contractions += abs(k - l) + 2 * (int(round(B)) - max(k, l)) - 1
        value = pref * total
        condition = majorant / max(abs(total), 1e-300)
        tail = eff.tolerance * abs(pref) * majorant
        # rounding-limited: refinement of the truncation cannot help, so the
        # escalation decision comes before the truncation check
        if rounding_rtol is not None and _EPS * condition > rounding_rtol:
            return KernelEvaluation(
                value=_theta_extended(m, zc, wc, params),
                path="theta",
                terms_used=max(contractions, 1),
                tail_bound=tail,
                condition=condition,
                precision="extended",
            )
        if tail <= ctrl.tolerance * abs(value):
            return KernelEvaluation(
                value=complex(value),
                path="theta",
                terms_used=max(contractions, 1),
                tail_bound=tail,
                condition=condition,
            )
        eff = replace(eff, tolerance=eff.tolerance / 100.0)
    if rounding_rtol is not None:
        # binary64 truncation cannot certify the requested accuracy at this
        # gross-to-net ratio; the extended evaluation covers both error terms
        return KernelEvaluation(
            value=_theta_extended(m, zc, wc, params),
            path="theta",
            terms_used=max(contractions, 1),
            tail_bound=tail,
            condition=condition,
            precision="extended",
        )
    raise ConvergenceError("theta-path kernel failed to reach tolerance x |value|")


def inversion_covariance_residual(
    m: int, z, w, params: AnnulusParams, ctrl: SeriesControl = DEFAULT_SERIES
) -> float:
    """Relative defect of the inversion rule (integer B):

        K_m(R/z, R/w) = (z conj(w)/R)^(2B) K_m(z, w),

    returned as |lhs - rhs| / |K_m(z, w)|.  Non-integer B is rejected: the
    rule maps the index ladder j -> -j - 2B onto itself only when 2B is an
    even integer.
    """
    if not params.is_integer_B():
        raise UnsupportedPathError(
            f"inversion covariance requires integer B, got B={params.B}"
        )
    zc, wc = as_complex(z), as_complex(w)
    # the covariance factor |z conj(w)/R|^(2B) amplifies both truncation and
    # rounding error of each side relative to |K_m(z, w)|, so the kernels are
    # evaluated two orders tighter than requested and with a rounding budget
    # shrunk by the amplification (near off-diagonal kernel zeros this
    # escalates the evaluation to extended precision)
    eff = replace(ctrl, tolerance=ctrl.tolerance / 100.0)
    factor = (zc * wc.conjugate() / params.R) ** (2.0 * params.B)
    rounding_rtol = ctrl.tolerance / max(abs(factor), 1.0)
    base = kernel_km(m, zc, wc, params, eff, rounding_rtol=rounding_rtol).value
    lhs = kernel_km(
        m, params.R / zc, params.R / wc, params, eff, rounding_rtol=rounding_rtol
    ).value
    return abs(lhs - factor * base) / abs(base)


def kernel_km_grid(
    m: int,
    z,
    w_nodes: np.ndarray,
    params: AnnulusParams,
    ctrl: SeriesControl = DEFAULT_SERIES,
    chunk: int = 1024,
) -> np.ndarray:
    """K_m(z, w) for one fixed first argument and an array of second
    arguments, sharing a single Gamma ladder across all nodes.

    The window is sized from the worst decay ratio over the node set; the
    t-powers form chunked node x ladder matrices contracted against the
    Gamma-pair vectors (one matrix product per (k, l) pair and chunk).
    Intended for quadrature node sets and plot grids.
    """
    require_admissible(m, params)
    zc = as_complex(z)
    require_interior(zc, params)
    w_flat = np.asarray(w_nodes, dtype=complex).ravel()
    B, c, R = params.B, params.radial_scale, params.R

    t_all = zc * np.conj(w_flat) / R
    q_plus = np.abs(t_all) / R
    q_minus = 1.0 / (R * np.abs(t_all))
    q_worst = max(float(q_plus.max()), float(q_minus.max()))
    if q_worst >= 1.0 - min(ctrl.boundary_margin, 1e-6):
        raise ConvergenceError(
            f"grid contains nodes with decay ratio {q_worst:.8g}; "
            "cannot sum the bilateral series there"
        )
    # window: geometric decay to tolerance plus slack for the polynomial
    # factor |y|^(2B-1) and the family prefactors
    J = int(math.ceil(math.log(ctrl.tolerance * 1e-3) / math.log(q_worst))) + 48
    if 2 * J + 1 > max(ctrl.max_terms, 4 * 4096):
        raise ConvergenceError(
            f"grid window 2J+1 = {2 * J + 1} exceeds the term budget"
        )

    j = np.arange(-J, J + 1)
    y = (j + B) * c
    lg = sc.loggamma((B - np.arange(m + 1))[:, None] + 1j * y[None, :])
    pair_vectors = {
        (k, l): np.exp(lg[k] + np.conj(lg[l])) for l in range(m + 1) for k in range(m + 1)
    }

    X = xi_coordinate(zc, params)
    zeta_w = math.pi * np.log(np.abs(w_flat)) / params.log_R
    Y_all = np.cos(zeta_w) / np.sin(zeta_w)
    V_all = 0.25 * (1.0 + 1j * X) * (1.0 + 1j * Y_all)
    pref = _kernel_prefactor(m, params)

    out = np.empty(w_flat.shape, dtype=complex)
    for start in range(0, w_flat.size, chunk):
        sl = slice(start, min(start + chunk, w_flat.size))
        log_t = np.log(t_all[sl])
        T = np.exp(np.outer(log_t, j))  # (chunk, 2J+1)
        acc = np.zeros(T.shape[0], dtype=complex)
        V = V_all[sl]
        for l in range(m + 1):
            for k in range(m + 1 - l):
                coeff = pochhammer(1.0 - 2.0 * B + m, k + l) / (
                    math.factorial(m - k - l)
                    * math.factorial(k)
                    * math.factorial(l)
                )
                sigma_vals = T @ pair_vectors[(k, l)]
                acc += coeff * V**l * np.conj(V) ** k * sigma_vals
        out[sl] = pref * acc
    return out.reshape(np.asarray(w_nodes, dtype=complex).shape)


def kernel_by_path(
    path: str,
    m: int,
    z,
    w,
    params: AnnulusParams,
    ctrl: SeriesControl = DEFAULT_SERIES,
    rounding_rtol: float | None = None,
) -> KernelEvaluation:
    """Dispatch a kernel evaluation to the named path.

    closed_form and basis_sum work for every admissible level; theta needs
    integer B; product_formula needs integer B and m = 0.  rounding_rtol is
    forwarded to each path's condition-aware escalation.
    """
    if path not in KERNEL_PATHS:
        raise DomainError(f"unknown path {path!r}; choose from {KERNEL_PATHS}")
    if path == "closed_form":
        return kernel_km(m, z, w, params, ctrl, rounding_rtol=rounding_rtol)
    if path == "basis_sum":
        return kernel_basis_sum_oracle(
            m, z, w, params, tol=max(ctrl.tolerance, 1e-12),
            rounding_rtol=rounding_rtol,
        )
    if path == "theta":
        return kernel_km_theta(m, z, w, params, ctrl, rounding_rtol=rounding_rtol)
    if m != 0:
        raise UnsupportedPathError(
            f"product-formula path exists only for m = 0, got m={m}"
        )
    value = kernel_k0_integer_product(
        z, w, params, ctrl, rounding_rtol=rounding_rtol
    )
    return KernelEvaluation(
        value=value,
        path="product_formula",
        terms_used=0,
        tail_bound=ctrl.tolerance * abs(value),
    )
