"""Landau levels and the orthogonal eigenbasis on the weighted annulus space.

The m-th Landau level carries the eigenvalue lambda_(B,m) = -m(2B - m - 1)
of the invariant Laplacian; its eigenspace is spanned by

    phi_j(z) = z^j RR_m^(-alpha(j,B), 1-B)(cot zeta_z),     j in Z,

with zeta_z = pi log|z| / log R and alpha(j, B) = 2 (j + B) log(R)/pi.  The
squared norms admit a closed form (a Gamma-pair expression); this module
also applies the invariant Laplacian, the one-dimensional radial operator
L_B, and powers of the invariant Cauchy-Riemann operator omega^2 d/dzbar
by finite differences, which is how the eigenvalue equations and the
polyanalyticity order are checked without trusting any series identity.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import DomainError, InadmissibleLevelError
from .geometry import (
    AnnulusParams,
    alpha_index,
    as_complex,
    poincare_density,
    poincare_density_dz,
    require_interior,
    xi_coordinate,
)
from .special import log_gamma, routh_coefficients, routh_romanovski

J_MAX_DEFAULT = 64
NORM_MARGIN = 1e-6


def admissible_levels(params: AnnulusParams) -> list[int]:
    """Landau levels m = 0, 1, ..., floor(B - 1/2) whose eigenspace carries
    finite norms, i.e. 2(B - m) - 1 > 1e-6.

    The margin excludes the borderline m = B - 1/2 where the closed-form
    norm has a vanishing denominator.
    """
    levels = []
    m = 0
    while 2.0 * (params.B - m) - 1.0 > NORM_MARGIN:
        levels.append(m)
        m += 1
    return levels


def require_admissible(m: int, params: AnnulusParams) -> None:
    """Raise InadmissibleLevelError unless m indexes a valid Landau level."""
    if m < 0 or 2.0 * (params.B - m) - 1.0 <= NORM_MARGIN:
        raise InadmissibleLevelError(
            f"level m={m} is not admissible for B={params.B}: requires "
            f"0 <= m and 2(B - m) - 1 > {NORM_MARGIN}"
        )


def landau_level_eigenvalue(m: int, params: AnnulusParams) -> float:
    """Eigenvalue lambda_(B,m) = -m (2B - m - 1) of the invariant Laplacian.

    Zero at m = 0 and strictly decreasing along the admissible range.
    """
    require_admissible(m, params)
    return -float(m) * (2.0 * params.B - m - 1.0)


def _require_window(j: int, j_max: int = J_MAX_DEFAULT) -> None:
    if abs(j) > j_max:
        raise DomainError(f"basis index j={j} outside the window |j| <= {j_max}")


def basis_phi(j: int, m: int, z, params: AnnulusParams) -> complex:
    """Eigenbasis function phi_j(z) = z^j RR_m^(-alpha(j,B), 1-B)(cot zeta_z).

    z^j is single-valued for integer j, so the principal power suffices.
    """
    require_admissible(m, params)
    _require_window(j)
    zc = as_complex(z)
    require_interior(zc, params)
    xi = xi_coordinate(zc, params)
    radial = routh_romanovski(m, -alpha_index(j, params), 1.0 - params.B, xi)
    return zc**j * radial


def basis_phi_nodes(j: int, m: int, z: np.ndarray, params: AnnulusParams) -> np.ndarray:
    """phi_j evaluated on an ndarray of interior points in one shot.

    Same polynomial as basis_phi (shared coefficient array), evaluated by
    Horner on the cot-coordinate array; no per-point boundary checks, so the
    caller is responsible for interior nodes (quadrature rules are).
    """
    require_admissible(m, params)
    _require_window(j)
    coeffs = routh_coefficients(m, -alpha_index(j, params), 1.0 - params.B)
    zeta = math.pi * np.log(np.abs(z)) / params.log_R
    xi = np.cos(zeta) / np.sin(zeta)
    return z**j * np.polynomial.polynomial.polyval(xi, coeffs)


def log_basis_norm_sq(j: int, m: int, params: AnnulusParams) -> float:
    """log of the closed-form squared norm of phi_j at level m:

        ||phi_j||^2 = 2^(3-2(B-m)) R^B (log R)^(2B-1) / pi^(2B-3)
                      * m! Gamma(2B-m) / (2(B-m)-1)
                      * R^j / |Gamma(B-m + i alpha(j,B)/2)|^2.

    Assembled in log space: the Gamma pair decays like R^-(j+B), so for
    large |j| the pieces overflow/underflow long before the ratio does.
    Defined for every integer j (no window check): kernel series legitimately
    walk the norm ladder far beyond the basis-evaluation window.
    """
    require_admissible(m, params)
    B, R = params.B, params.R
    alpha = alpha_index(j, params)
    return (
        (3.0 - 2.0 * (B - m)) * math.log(2.0)
        + B * math.log(R)
        + (2.0 * B - 1.0) * math.log(math.log(R))
        - (2.0 * B - 3.0) * math.log(math.pi)
        + math.lgamma(m + 1.0)
        + math.lgamma(2.0 * B - m)
        - math.log(2.0 * (B - m) - 1.0)
        + j * math.log(R)
        - 2.0 * log_gamma(complex(B - m, alpha / 2.0)).real
    )


def basis_norm_sq(j: int, m: int, params: AnnulusParams) -> float:
    """Closed-form squared norm ||phi_j||^2 (see log_basis_norm_sq)."""
    return math.exp(log_basis_norm_sq(j, m, params))


def orthonormal_phi(j: int, m: int, z, params: AnnulusParams) -> complex:
    """Unit-norm basis function Phi_j = phi_j / ||phi_j||."""
    return basis_phi(j, m, z, params) * math.exp(
        -0.5 * log_basis_norm_sq(j, m, params)
    )


def sturm_liouville_apply(m: int, j: int, xi: float, params: AnnulusParams) -> float:
    """Residual (L_B - lambda_(B,m)) RR_m at the point xi, where

        L_B = (1 + xi^2) d^2/dxi^2 + 2[(1-B) xi - (j+B) log(R)/pi] d/dxi.

    The polynomial derivatives are taken exactly from the coefficient array,
    so the residual is pure floating-point noise when the eigenvalue
    identity holds.
    """
    require_admissible(m, params)
    B = params.B
    y = routh_coefficients(m, -alpha_index(j, params), 1.0 - B)
    poly = np.polynomial.polynomial
    dy = poly.polyder(y)
    d2y = poly.polyder(y, 2)
    lam = landau_level_eigenvalue(m, params)
    acc = poly.polymul([1.0, 0.0, 1.0], d2y)
    drift = poly.polymul([-2.0 * (j + B) * params.radial_scale, 2.0 * (1.0 - B)], dy)
    n = max(len(acc), len(drift), len(y))
    res = np.zeros(n)
    res[: len(acc)] += np.atleast_1d(acc)
    res[: len(drift)] += np.atleast_1d(drift)
    res[: len(y)] -= lam * y
    return float(poly.polyval(xi, res))


def _default_step(z: complex, params: AnnulusParams) -> float:
    return 1e-3 * min(abs(z) - 1.0, params.R - abs(z))


def invariant_laplacian_apply(
    f, z, params: AnnulusParams, step: float | None = None
) -> complex:
    """The invariant Laplacian Delta_B f at z by 4th-order finite differences:

        Delta_B f = omega^2 (f_xx + f_yy) + 4 B omega (d omega/dz) (f_x + i f_y),

    the second term being 8 B omega (d omega/dz) d/dzbar written out in
    Cartesian derivatives.  f must be point-evaluable on complex arguments
    near z.  Requires boundary distance > 4*step.
    """
    zc = as_complex(z)
    require_interior(zc, params)
    h = _default_step(zc, params) if step is None else float(step)
    if not (h > 0.0) or params.boundary_distance(zc) <= 4.0 * h:
        raise DomainError(
            f"step {h} too large: z={zc} sits {params.boundary_distance(zc):.3g} "
            "from the boundary, need distance > 4*step"
        )

    def d1(direction: complex) -> complex:
        return (
            -f(zc + 2.0 * h * direction)
            + 8.0 * f(zc + h * direction)
            - 8.0 * f(zc - h * direction)
            + f(zc - 2.0 * h * direction)
        ) / (12.0 * h)

    def d2(direction: complex) -> complex:
        return (
            -f(zc + 2.0 * h * direction)
            + 16.0 * f(zc + h * direction)
            - 30.0 * f(zc)
            + 16.0 * f(zc - h * direction)
            - f(zc - 2.0 * h * direction)
        ) / (12.0 * h * h)

    fx, fy = d1(1.0), d1(1.0j)
    lap = d2(1.0) + d2(1.0j)
    om = poincare_density(zc, params)
    om_z = poincare_density_dz(zc, params)
    return om * om * lap + 4.0 * params.B * om * om_z * (fx + 1j * fy)


def cr_power_apply(
    f, order: int, z, params: AnnulusParams, step: float | None = None
) -> complex:
    """Iterated invariant Cauchy-Riemann operator (omega^2 d/dzbar)^order f.

    Each level is a 4th-order stencil for d/dzbar = (d/dx + i d/dy)/2; the
    steps are staggered (growing by 1.5 per nesting level) so that inner
    truncation errors are not resonantly amplified.  Accuracy degrades with
    order; order <= 3 is supported with a ~1e-3 relative contract at the
    outermost level.
    """
    if not (1 <= order <= 3):
        raise DomainError(f"order must be in 1..3, got {order}")
    zc = as_complex(z)
    require_interior(zc, params)
    h0 = _default_step(zc, params) if step is None else float(step)
    if not (h0 > 0.0):
        raise DomainError(f"step must be positive, got {h0}")
    # outermost level uses the largest step; total stencil halo is
    # 2*(h0 + 1.5 h0 + 1.5^2 h0) < 10 h0 at order 3
    halo = 2.0 * sum(h0 * 1.5**k for k in range(order))
    if params.boundary_distance(zc) <= halo:
        raise DomainError(
            f"z={zc} sits {params.boundary_distance(zc):.3g} from the boundary; "
            f"the order-{order} stencil needs clearance > {halo:.3g}"
        )

    def dbar(g, w: complex, h: float) -> complex:
        gx = (
            -g(w + 2.0 * h) + 8.0 * g(w + h) - 8.0 * g(w - h) + g(w - 2.0 * h)
        ) / (12.0 * h)
        gy = (
            -g(w + 2.0j * h)
            + 8.0 * g(w + 1.0j * h)
            - 8.0 * g(w - 1.0j * h)
            + g(w - 2.0j * h)
        ) / (12.0 * h)
        return 0.5 * (gx + 1j * gy)

    def level(k: int):
        if k == 0:
            return f
        inner = level(k - 1)
        h = h0 * 1.5 ** (k - 1)

        def applied(w: complex) -> complex:
            return poincare_density(w, params) ** 2 * dbar(inner, w, h)

        return applied

    return level(order)(zc)
