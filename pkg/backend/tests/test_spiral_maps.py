import cmath
import math

import numpy as np
import pytest

from modules.analysis.exact_spectra import beta1_complex
from modules.analysis.spectrum_types import Branch, SleParams
from modules.analysis.spiral_maps import (
    half_spiral_map,
    log_phi,
    log_phi_prime,
    phi,
    phi_prime,
    spiral_beta_terms,
    spiral_integral_means,
    spiral_means_slope,
    spiral_spectrum_complete,
    spiral_spectrum_half,
)
from modules.core.errors import DomainError


def test_phi_at_origin():
    assert complex(phi(0.0, 0.0)) == pytest.approx(-1.0, abs=1e-15)


@pytest.mark.parametrize("z", [1.0, -1.0])
def test_phi_rejects_boundary_singularities(z):
    with pytest.raises(DomainError):
        phi(z, 0.5)


@pytest.mark.parametrize("z,a", [(0.3 + 0.2j, 1.0), (-0.5 + 0.1j, 0.3), (0.1 - 0.7j, 2.0)])
def test_phi_prime_matches_central_difference(z, a):
    h = 1e-6
    numeric = (phi(z + h, a) - phi(z - h, a)) / (2 * h)
    assert abs(phi_prime(z, a) - numeric) <= 1e-7 * max(1.0, abs(numeric))


def test_log_phi_prime_is_consistent():
    rng = np.random.default_rng(3)
    for _ in range(20):
        z = 0.9 * math.sqrt(rng.uniform()) * cmath.exp(2j * math.pi * rng.uniform())
        a = rng.uniform(-3, 3)
        assert complex(np.exp(log_phi_prime(z, a))) == pytest.approx(complex(phi_prime(z, a)), rel=1e-12)
        assert complex(np.exp(log_phi(z, a))) == pytest.approx(complex(phi(z, a)), rel=1e-12)


def test_half_spiral_without_drift_is_koebe_type_map():
    z = np.array([0.2 + 0.1j, -0.4j, 0.7])
    f, fprime = half_spiral_map(z, 0.0)
    np.testing.assert_allclose(f, z / (1.0 + z) ** 2, rtol=1e-14)
    np.testing.assert_allclose(fprime, (1.0 - z) / (1.0 + z) ** 3, rtol=1e-14)


def test_half_spiral_derivative_matches_central_difference():
    a, h = 1.3, 1e-6
    for z in (0.2 + 0.4j, -0.6 + 0.1j, 0.5 - 0.5j):
        f_plus, _ = half_spiral_map(z + h, a)
        f_minus, _ = half_spiral_map(z - h, a)
        _, fprime = half_spiral_map(z, a)
        assert abs(fprime - (f_plus - f_minus) / (2 * h)) <= 1e-7


def test_spiral_beta_terms():
    assert spiral_beta_terms(1, 0, 1) == pytest.approx((1.0, -1.0), abs=1e-15)


@pytest.mark.parametrize(
    "p,q,a,expected,branch",
    [
        (1, 0, 1, 1.0, Branch.ONE),
        (2, 0, 0, 5.0, Branch.ONE),
        (2, 1, 0.5, 2.6, Branch.ONE),
        (1.5, -1, 1, 3.0, Branch.ONE),
        (2 + 1j, 0, 2, 1.0, Branch.ONE),
        (0, 0, 1, 0.0, Branch.ZERO),
        (-1, 0, 0, 0.0, Branch.ZERO),
        (1, 2, 0, 2.0, Branch.TWO),
    ],
)
def test_complete_spiral_spectrum(p, q, a, expected, branch):
    result = spiral_spectrum_complete(p, q, a)
    assert result.beta == pytest.approx(expected, abs=1e-12)
    assert result.branch is branch


@pytest.mark.parametrize(
    "p,q,a,expected,branch",
    [
        (-4, 0, 1, 3.0, Branch.TIP),
        (0, 0, 1, 0.0, Branch.ZERO),
        (1, 0, 1, 1.0, Branch.ONE),
    ],
)
def test_half_spiral_spectrum(p, q, a, expected, branch):
    result = spiral_spectrum_half(p, q, a)
    assert result.beta == pytest.approx(expected, abs=1e-12)
    assert result.branch is branch


def test_integral_means_of_trivial_exponents():
    assert spiral_integral_means(0, 0, 1.0, 0.4) == pytest.approx(2 * math.pi * 0.4)


def test_integral_means_against_periodic_trapezoid():
    p, q, a, r = 1.5 + 0.5j, 0.3, 0.7, 0.5
    theta = np.linspace(0.0, 2 * math.pi, 4096, endpoint=False)
    z = r * np.exp(1j * theta)
    integrand = np.exp((p * log_phi_prime(z, a)).real - (q * log_phi(z, a)).real)
    expected = r * integrand.mean() * 2 * math.pi
    assert spiral_integral_means(p, q, a, r) == pytest.approx(expected, rel=1e-8)


@pytest.mark.parametrize("r", [0.0, 1.0, -0.5])
def test_integral_means_radius_domain(r):
    with pytest.raises(DomainError):
        spiral_integral_means(1, 0, 1.0, r)


@pytest.mark.parametrize("p,q,a", [(1, 0, 1), (2, 1, 0.5)])
def test_integral_means_slope_recovers_spectrum(p, q, a):
    radii = [0.99, 0.995, 0.998, 0.999, 0.9995, 0.9999]
    fit = spiral_means_slope(p, q, a, radii)
    assert fit.slope == pytest.approx(spiral_spectrum_complete(p, q, a).beta, abs=0.05)
    assert fit.n_points == len(radii)


def test_integral_means_slope_flat_for_trivial_exponents():
    fit = spiral_means_slope(0, 0, 1.0, [0.95, 0.98, 0.99, 0.995, 0.999])
    assert abs(fit.slope) < 0.02


def test_drifted_beta1_tends_to_spiral_term_as_kappa_vanishes():
    rng = np.random.default_rng(11)
    for _ in range(100):
        p = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        q = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        a = rng.uniform(-3, 3)
        limit, _ = spiral_beta_terms(p, q, a)
        assert beta1_complex(p, q, SleParams(1e-8, a)).beta == pytest.approx(limit, abs=1e-6)
