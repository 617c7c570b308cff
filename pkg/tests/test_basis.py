"""Tests of the Landau-level eigenbasis: closed-form norms against the
quadrature oracle, the eigenvalue equations by finite differences, exact
Sturm-Liouville residuals, and the polyanalyticity order."""

from __future__ import annotations

import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from annulus_kernels.errors import DomainError, InadmissibleLevelError
from annulus_kernels.geometry import AnnulusParams, polar_point
from annulus_kernels.quadrature import annulus_integrate
from annulus_kernels.basis import (
    admissible_levels,
    basis_norm_sq,
    basis_phi,
    basis_phi_nodes,
    cr_power_apply,
    invariant_laplacian_apply,
    landau_level_eigenvalue,
    log_basis_norm_sq,
    orthonormal_phi,
    require_admissible,
    sturm_liouville_apply,
)

P43 = AnnulusParams(R=4.0, B=3.0)


# ---------------------------------------------------------------------------
# levels and eigenvalues


def test_admissible_levels_examples():
    assert admissible_levels(AnnulusParams(R=4.0, B=1.0)) == [0]
    assert admissible_levels(P43) == [0, 1, 2]
    # m = 2 sits exactly at 2(B-2)-1 = 0 and is excluded by the margin
    assert admissible_levels(AnnulusParams(R=4.0, B=2.5)) == [0, 1]


def test_eigenvalue_examples():
    assert landau_level_eigenvalue(0, P43) == 0.0
    assert landau_level_eigenvalue(1, P43) == -4.0
    assert landau_level_eigenvalue(2, P43) == -6.0


@pytest.mark.parametrize("B", [1.0, 2.0, 3.0, 5.25])
def test_eigenvalue_ladder_strictly_decreasing(B):
    p = AnnulusParams(R=4.0, B=B)
    lams = [landau_level_eigenvalue(m, p) for m in admissible_levels(p)]
    assert all(b < a for a, b in zip(lams, lams[1:]))


def test_inadmissible_level_rejected():
    with pytest.raises(InadmissibleLevelError):
        landau_level_eigenvalue(3, P43)
    with pytest.raises(InadmissibleLevelError):
        require_admissible(-1, P43)
    with pytest.raises(InadmissibleLevelError):
        basis_phi(0, 2, 2.0, AnnulusParams(R=4.0, B=2.5))


# ---------------------------------------------------------------------------
# basis functions


def test_phi_level_zero_is_power():
    for j in (-3, 0, 2):
        for z in (1.5 + 0.5j, -2.0 + 1.0j):
            assert basis_phi(j, 0, z, P43) == pytest.approx(z**j, rel=1e-13)
    assert basis_phi(0, 0, 2.5j, P43) == pytest.approx(1.0)


@given(
    j=st.integers(min_value=-6, max_value=6),
    m=st.integers(min_value=0, max_value=2),
    zeta=st.floats(min_value=0.1, max_value=0.9),
    theta=st.floats(min_value=0.0, max_value=2.0 * math.pi),
    rot=st.floats(min_value=0.0, max_value=2.0 * math.pi),
)
@settings(max_examples=100, deadline=None)
def test_phi_rotation_equivariance(j, m, zeta, theta, rot):
    # phi_j(e^{i rot} z) = e^{i j rot} phi_j(z): the radial factor only sees |z|
    z = complex(polar_point(zeta * math.pi, theta, P43))
    lhs = basis_phi(j, m, cmath.exp(1j * rot) * z, P43)
    rhs = cmath.exp(1j * j * rot) * basis_phi(j, m, z, P43)
    assert abs(lhs - rhs) < 1e-10 * max(abs(lhs), 1e-30)


def test_phi_nodes_matches_pointwise():
    zs = np.array([1.5 + 0.5j, 2.0 - 1.0j, -3.0 + 0.5j, 0.2 + 1.8j])
    for j, m in [(-4, 0), (0, 1), (3, 2)]:
        vec = basis_phi_nodes(j, m, zs, P43)
        for i, z in enumerate(zs):
            assert vec[i] == pytest.approx(basis_phi(j, m, complex(z), P43), rel=1e-12)


def test_window_enforced():
    with pytest.raises(DomainError):
        basis_phi(65, 0, 2.0, P43)


# ---------------------------------------------------------------------------
# closed-form norms vs quadrature


def _quad_norm_sq(j, m, p):
    val = annulus_integrate(lambda z: np.abs(basis_phi_nodes(j, m, z, p)) ** 2, p)
    return val.real


@pytest.mark.parametrize("m", [0, 1, 2])
@pytest.mark.parametrize("j", [-10, -3, 0, 2, 10])
def test_norm_closed_form_vs_quadrature(m, j):
    closed = basis_norm_sq(j, m, P43)
    quad = _quad_norm_sq(j, m, P43)
    assert abs(quad - closed) < 1e-8 * closed, (
        f"m={m}, j={j}: closed {closed:.6e} vs quadrature {quad:.6e}"
    )


def test_norm_b1_elementary():
    # B = 1: the weight is trivial and the norm is pi (R^(2j+2) - 1)/(j+1)
    p = AnnulusParams(R=2.0, B=1.0)
    for j in (-4, -2, 0, 1, 5):
        want = math.pi * (2.0 ** (2 * j + 2) - 1.0) / (j + 1.0)
        assert basis_norm_sq(j, 0, p) == pytest.approx(want, rel=1e-11), f"j={j}"


def test_norm_ratio_asymptotic():
    # ||phi_(j+1)||^2 / ||phi_j||^2 -> R^2 (Stirling on the Gamma pair); the
    # finite-j correction is O(1/j) and must shrink as the index grows
    p = AnnulusParams(R=4.0, B=3.0)

    def deviation(j):
        ratio = math.exp(log_basis_norm_sq(j + 1, 1, p) - log_basis_norm_sq(j, 1, p))
        return abs(ratio / p.R**2 - 1.0)

    assert deviation(30) < 0.1
    assert deviation(60) < deviation(30)


def test_norm_positive_and_log_consistent():
    for j in (-8, 0, 8):
        n = basis_norm_sq(j, 1, P43)
        assert n > 0.0
        assert math.log(n) == pytest.approx(log_basis_norm_sq(j, 1, P43), rel=1e-12)


def test_orthonormal_phi_unit_norm():
    for j, m in [(0, 0), (2, 1), (-3, 2)]:
        val = annulus_integrate(
            lambda z: np.abs(
                basis_phi_nodes(j, m, z, P43)
                * math.exp(-0.5 * log_basis_norm_sq(j, m, P43))
            )
            ** 2,
            P43,
        )
        assert val.real == pytest.approx(1.0, abs=1e-7)


def test_orthonormal_phi_scaling_identity():
    z = 1.7 - 0.9j
    for j, m in [(1, 0), (-2, 1)]:
        lhs = abs(orthonormal_phi(j, m, z, P43)) ** 2 * basis_norm_sq(j, m, P43)
        rhs = abs(basis_phi(j, m, z, P43)) ** 2
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_distinct_indices_orthogonal_under_quadrature():
    for m in (0, 1):
        for j1, j2 in [(0, 1), (-2, 3)]:
            val = annulus_integrate(
                lambda z: basis_phi_nodes(j1, m, z, P43)
                * np.conj(basis_phi_nodes(j2, m, z, P43)),
                P43,
            )
            scale = math.sqrt(basis_norm_sq(j1, m, P43) * basis_norm_sq(j2, m, P43))
            assert abs(val) < 1e-7 * scale


# ---------------------------------------------------------------------------
# Sturm-Liouville residuals (exact polynomial derivatives)


def test_sturm_liouville_m0_exact_zero():
    assert sturm_liouville_apply(0, 3, 1.234, P43) == 0.0


def test_sturm_liouville_small_levels():
    rng = np.random.default_rng(3)
    for m in (1, 2):
        for j in (-10, -1, 0, 7, 10):
            for xi in rng.uniform(-3.0, 3.0, size=20):
                r = sturm_liouville_apply(m, j, float(xi), P43)
                assert abs(r) < 1e-9, f"m={m}, j={j}, xi={xi}: residual {r}"


def test_sturm_liouville_other_parameter_sets():
    rng = np.random.default_rng(4)
    for R, B in [(2.0, 1.0), (9.0, 2.0), (6.0, 2.75)]:
        p = AnnulusParams(R=R, B=B)
        for m in admissible_levels(p):
            for xi in rng.uniform(-2.0, 2.0, size=5):
                r = sturm_liouville_apply(m, -2, float(xi), p)
                assert abs(r) < 1e-9


# ---------------------------------------------------------------------------
# invariant Laplacian by finite differences


def test_laplacian_kills_constants():
    got = invariant_laplacian_apply(lambda z: 1.0 + 0.0j, 2.0 + 0.5j, P43)
    assert abs(got) < 1e-10


def test_laplacian_kills_holomorphic_powers():
    # the m = 0 eigenspace (lambda = 0) contains all z^j
    for j in (-3, 1, 4):
        z0 = 1.8 - 0.6j
        got = invariant_laplacian_apply(lambda z, j=j: z**j, z0, P43)
        assert abs(got) < 1e-6 * max(abs(z0**j), 1.0)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_laplacian_eigen_equation(m):
    lam = landau_level_eigenvalue(m, P43)
    for j in (-2, 0, 3):
        for z0 in (1.6 + 0.4j, -2.1 + 1.3j, 0.5 - 2.6j):
            f = lambda z, j=j, m=m: basis_phi(j, m, z, P43)
            got = invariant_laplacian_apply(f, z0, P43)
            want = lam * f(z0)
            scale = max(abs(want), abs(f(z0)))
            assert abs(got - want) < 1e-4 * scale, (
                f"m={m}, j={j}, z={z0}: {got} vs {want}"
            )


def test_laplacian_boundary_proximity_rejected():
    z = 1.001 + 0.0j  # distance 1e-3 from the inner circle
    with pytest.raises(DomainError):
        invariant_laplacian_apply(lambda w: w, z, P43, step=1e-3)


# ---------------------------------------------------------------------------
# invariant Cauchy-Riemann powers


def test_cr_order_one_kills_holomorphic():
    z0 = 2.0 + 0.3j
    for j in (-2, 5):
        got = cr_power_apply(lambda z, j=j: z**j, 1, z0, P43)
        assert abs(got) < 1e-8 * max(abs(z0**j), 1.0)


@pytest.mark.parametrize("m", [0, 1, 2])
def test_cr_annihilation_at_level(m):
    # (omega^2 dbar)^(m+1) phi_j = 0: the defining polyanalyticity order
    z0 = 1.9 + 0.7j
    for j in (-1, 2):
        f = lambda z, j=j, m=m: basis_phi(j, m, z, P43)
        got = cr_power_apply(f, m + 1, z0, P43)
        scale = max(abs(f(z0)), 1.0)
        assert abs(got) < 1e-3 * scale, f"m={m}, j={j}: {abs(got)} vs scale {scale}"


@pytest.mark.parametrize("m", [1, 2])
def test_cr_lower_order_does_not_annihilate(m):
    z0 = 1.9 + 0.7j
    j = 1
    f = lambda z: basis_phi(j, m, z, P43)
    low = cr_power_apply(f, m, z0, P43)
    high = cr_power_apply(f, m + 1, z0, P43)
    assert abs(low) > 10.0 * abs(high)


def test_cr_order_validation():
    with pytest.raises(DomainError):
        cr_power_apply(lambda z: z, 4, 2.0, P43)
    with pytest.raises(DomainError):
        cr_power_apply(lambda z: z, 0, 2.0, P43)
