"""Quadrature over the annulus against the weighted area measure.

In the coordinates (zeta, theta) with |z| = R^(zeta/pi), the weighted
integral becomes

    int_Omega f(z) omega_R(z)^e dA(z)
        = c^(e+1) int_0^(2pi) int_0^pi f(z) R^((e+2) zeta/pi) (sin zeta)^e
          dzeta dtheta,         c = log(R)/pi,

which is smooth and periodic in theta (trapezoid rule, exact for angular
modes below the node count) and smooth in zeta for e >= 0 (Gauss-Legendre).
The default exponent e = 2B - 2 is the measure the kernel theory lives in.

Two radial rules are provided.  ``annulus_nodes`` places Gauss-Legendre
nodes directly in zeta and is spectrally accurate for integrands smooth up
to the boundary.  ``annulus_nodes_endpoint`` maps each half-interval
through zeta = t^2 before placing the nodes; the square-root substitution
turns an integrable algebraic boundary factor (sin zeta)^sigma with
sigma > -1 into a smooth one, which matters for products of level-m basis
functions (they carry (cot zeta)^(2m) against the weight's (sin zeta)^e,
a net exponent e - 2m that can be negative).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import AnnulusParams

DEFAULT_N_ANGULAR = 128
DEFAULT_N_RADIAL = 96


@dataclass(frozen=True)
class QuadratureSpec:
    """Node counts and weight exponent of an annulus quadrature rule.

    weight_exponent None means "use 2B - 2 of the parameter set at hand".
    n_angular must be even (trapezoid symmetry), n_radial at least 32.
    """

    n_angular: int = DEFAULT_N_ANGULAR
    n_radial: int = DEFAULT_N_RADIAL
    weight_exponent: float | None = None

    def __post_init__(self) -> None:
        if self.n_angular < 2 or self.n_angular % 2 != 0:
            raise DomainError(
                f"n_angular must be a positive even number, got {self.n_angular}"
            )
        if self.n_radial < 32:
            raise DomainError(f"n_radial must be at least 32, got {self.n_radial}")

    def resolve_exponent(self, params: AnnulusParams) -> float:
        e = 2.0 * params.B - 2.0 if self.weight_exponent is None else self.weight_exponent
        if e < 0.0:
            raise DomainError(
                f"weight exponent must be nonnegative (got e={e}); the rule "
                "places nodes arbitrarily close to the boundary where "
                "(sin zeta)^e is unbounded for e < 0"
            )
        return e


def _tensor_nodes(
    params: AnnulusParams,
    e: float,
    zeta: np.ndarray,
    w_zeta: np.ndarray,
    sin_zeta: np.ndarray,
    n_angular: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Tensor a radial rule in zeta with the angular trapezoid rule.

    sin_zeta is passed separately so callers can supply sin(zeta) without
    the cancellation that direct evaluation suffers near zeta = pi.
    """
    c = params.radial_scale
    radial_factor = params.R ** ((e + 2.0) * zeta / math.pi) * sin_zeta**e

    theta = 2.0 * math.pi * np.arange(n_angular) / n_angular
    w_theta = 2.0 * math.pi / n_angular

    r = params.R ** (zeta / math.pi)
    z = r[:, None] * np.exp(1j * theta)[None, :]
    w = (c ** (e + 1.0) * w_theta) * (w_zeta * radial_factor)[:, None]
    w = np.broadcast_to(w, z.shape).copy()
    return z, w


def annulus_nodes(
    params: AnnulusParams, spec: QuadratureSpec = QuadratureSpec()
) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature nodes and weights for the weighted annulus integral.

    Returns (z, w): complex nodes of shape (n_radial, n_angular) and real
    weights of the same shape, such that sum(w * f(z)) approximates the
    integral of f against omega^e dA with e = spec.resolve_exponent(params).
    """
    e = spec.resolve_exponent(params)
    x, gw = np.polynomial.legendre.leggauss(spec.n_radial)
    zeta = 0.5 * math.pi * (x + 1.0)
    w_zeta = 0.5 * math.pi * gw
    return _tensor_nodes(params, e, zeta, w_zeta, np.sin(zeta), spec.n_angular)


def annulus_nodes_endpoint(
    params: AnnulusParams, spec: QuadratureSpec = QuadratureSpec()
) -> tuple[np.ndarray, np.ndarray]:
    """Endpoint-adapted variant of ``annulus_nodes``.

    Same shapes and weight conventions, but the radial nodes come from
    Gauss-Legendre rules on the two half-intervals mapped through
    zeta = t^2 (respectively zeta = pi - t^2).  The substitution restores
    rapid convergence for integrands with an integrable algebraic factor
    (sin zeta)^sigma, sigma > -1, at the radial boundary -- the regime of
    level-m basis products when 2(B - m) - 2 < 0.  The total radial node
    count remains spec.n_radial (split between the halves).
    """
    e = spec.resolve_exponent(params)
    half = math.sqrt(0.5 * math.pi)
    n_left = spec.n_radial // 2
    n_right = spec.n_radial - n_left

    zetas: list[np.ndarray] = []
    weights: list[np.ndarray] = []
    sines: list[np.ndarray] = []
    for n, flip in ((n_left, False), (n_right, True)):
        x, gw = np.polynomial.legendre.leggauss(n)
        t = 0.5 * half * (x + 1.0)
        w_t = 0.5 * half * gw
        zeta_half = t * t
        w_half = 2.0 * t * w_t
        # sin(pi - t^2) = sin(t^2): evaluate at the small argument so the
        # flipped half does not lose digits to pi - t^2 cancellation.
        sin_half = np.sin(zeta_half)
        if flip:
            zeta_half = (math.pi - zeta_half)[::-1]
            w_half = w_half[::-1]
            sin_half = sin_half[::-1]
        zetas.append(zeta_half)
        weights.append(w_half)
        sines.append(sin_half)

    zeta = np.concatenate(zetas)
    w_zeta = np.concatenate(weights)
    sin_zeta = np.concatenate(sines)
    return _tensor_nodes(params, e, zeta, w_zeta, sin_zeta, spec.n_angular)


def annulus_integrate(
    f,
    params: AnnulusParams,
    spec: QuadratureSpec = QuadratureSpec(),
) -> complex:
    """Integral of f against omega^e dA over the annulus.

    f must accept a complex ndarray of points and return an ndarray of
    values of the same shape (vectorized contract; no scalar fallback).
    """
    z, w = annulus_nodes(params, spec)
    values = np.asarray(f(z))
    if values.shape != z.shape:
        raise DomainError(
            f"integrand returned shape {values.shape}, expected {z.shape}; "
            "integrands must be vectorized over node arrays"
        )
    return complex(np.sum(w * values))


def annulus_integrate_with_delta(
    f,
    params: AnnulusParams,
    spec: QuadratureSpec = QuadratureSpec(),
) -> tuple[complex, float]:
    """Integral together with a self-convergence estimate.

    Evaluates the rule at the requested node counts and at a refinement
    (angular doubled, radial + 32); returns the refined value and the
    absolute difference between the two as an error proxy.
    """
    coarse = annulus_integrate(f, params, spec)
    fine_spec = QuadratureSpec(
        n_angular=2 * spec.n_angular,
        n_radial=spec.n_radial + 32,
        weight_exponent=spec.weight_exponent,
    )
    fine = annulus_integrate(f, params, fine_spec)
    return fine, abs(fine - coarse)
