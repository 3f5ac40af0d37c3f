import math

import numpy as np
import pytest

from modules.analysis.spiral_maps import half_spiral_map
from modules.core.errors import DomainError
from modules.simulation.levy_driving import DriftedBrownian, sample_path
from modules.simulation.loewner_sim import (
    MapSample,
    constant_driver_map,
    default_horizon,
    driver_phases,
    evolve,
    evolve_batch,
    exterior_from_sample,
    frozen_phases,
    integrate_batch,
)


def _disk_points():
    angles = 2.0 * np.pi * (np.arange(12) + 0.25) / 12
    return np.concatenate([r * np.exp(1j * angles) for r in (0.3, 0.6, 0.9)])


def _relative_error(actual, expected):
    return np.max(np.abs(actual - expected) / np.maximum(1.0, np.abs(expected)))


def test_constant_driver_matches_closed_form():
    T = 30.0
    driver = sample_path(DriftedBrownian(kappa=0.0, a=0.0), T, 0.01, seed=0)
    zs = _disk_points()
    result = evolve_batch(driver, zs, T)
    f_exact, fprime_exact = constant_driver_map(zs)
    assert result.alive.all()
    assert _relative_error(result.f, f_exact) <= 1e-6
    assert _relative_error(result.fprime, fprime_exact) <= 1e-6


def test_rotated_constant_driver():
    T = 30.0
    driver = sample_path(DriftedBrownian(kappa=0.0, a=0.0), T, 0.01, seed=0, theta0=0.7)
    zs = _disk_points()[:12]
    result = evolve_batch(driver, zs, T)
    f_exact, fprime_exact = constant_driver_map(zs, theta0=0.7)
    assert _relative_error(result.f, f_exact) <= 1e-6
    assert _relative_error(result.fprime, fprime_exact) <= 1e-6


def test_deterministic_drift_gives_half_spiral():
    T = 30.0
    driver = sample_path(DriftedBrownian(kappa=0.0, a=1.0), T, 0.01, seed=0)
    zs = _disk_points()
    result = evolve_batch(driver, zs, T)
    f_exact, fprime_exact = half_spiral_map(zs, 1.0)
    assert _relative_error(result.f, f_exact) <= 1e-6
    assert _relative_error(result.fprime, fprime_exact) <= 1e-6


def test_constant_driver_closed_form_is_normalized():
    f, fprime = constant_driver_map(np.array([0.0, 0.5]))
    assert f[0] == 0.0 and fprime[0] == 1.0
    assert f[1] == pytest.approx(0.5 / 2.25)


def test_normalization_near_origin():
    driver = sample_path(DriftedBrownian(kappa=2.0, a=1.0), 10.0, 0.01, seed=31)
    sample = evolve(driver, 1e-6, 10.0)
    assert abs(sample.fprime - 1.0) <= 1e-4
    assert abs(sample.f / 1e-6 - 1.0) <= 1e-4


def test_origin_is_fixed():
    driver = sample_path(DriftedBrownian(kappa=2.0), 5.0, 0.01, seed=4)
    result = evolve_batch(driver, [0.0], 5.0)
    assert abs(result.f[0]) == 0.0
    assert abs(result.fprime[0] - 1.0) <= 1e-9


def test_points_outside_disk_are_rejected():
    driver = sample_path(DriftedBrownian(kappa=2.0), 1.0, 0.1, seed=1)
    with pytest.raises(DomainError):
        evolve(driver, 1.0 + 0j, 1.0)


def test_horizon_beyond_path_is_rejected():
    driver = sample_path(DriftedBrownian(kappa=2.0), 1.0, 0.1, seed=1)
    with pytest.raises(DomainError):
        evolve(driver, 0.5, 2.0)


def test_default_horizon():
    assert default_horizon(0.9) == pytest.approx(10.0 + 5.0 * math.log(10.0))
    assert default_horizon(0.5, {'horizon_base': 1.0, 'horizon_log_factor': 2.0}) == pytest.approx(
        1.0 + 2.0 * math.log(2.0)
    )


def test_frozen_phases_remove_drift():
    driver = sample_path(DriftedBrownian(kappa=0.0, a=2.0), 1.0, 0.25, seed=0, theta0=0.3)
    np.testing.assert_allclose(driver_phases(driver), np.full(5, 0.3), atol=1e-15)
    values = np.array([[0.0, 1.0, 2.0]])
    np.testing.assert_allclose(frozen_phases(values, 0.0, 0.5, theta0=1.0), [[1.0, 2.0, 3.0]])


def test_batch_rows_select_paths():
    paths = np.stack([
        sample_path(DriftedBrownian(kappa=2.0), 2.0, 0.02, seed=seed).values for seed in (1, 2)
    ])
    z = np.array([0.4, 0.4, 0.4])
    rows = np.array([0, 1, 0])
    result = integrate_batch(z, paths, 0.0, 0.02, 2.0, rows=rows)
    assert result.log_fprime[0] == result.log_fprime[2]
    assert result.log_fprime[0] != result.log_fprime[1]


def test_log_integrand_and_exterior_duality():
    driver = sample_path(DriftedBrownian(kappa=2.0, a=0.5), 8.0, 0.01, seed=12)
    zs = np.array([0.5 + 0.2j, -0.3 + 0.6j])
    result = evolve_batch(driver, zs, 8.0)
    for i, z in enumerate(zs):
        sample = MapSample(
            z=complex(z), f=complex(result.f[i]), fprime=complex(result.fprime[i]), T=8.0,
            log_fprime=complex(result.log_fprime[i]), log_f_over_z=complex(result.log_f_over_z[i]),
        )
        p, q = 1.3, 0.4
        direct = math.log(abs(sample.fprime) ** p * abs(sample.z / sample.f) ** q)
        assert sample.log_integrand(p, q) == pytest.approx(direct, rel=1e-10)
        exterior = exterior_from_sample(sample, p, q)
        assert result.exterior_log_integrand(p, q)[i] == pytest.approx(math.log(exterior), rel=1e-10)


@pytest.mark.parametrize('seed', [1, 2, 3])
def test_retained_trajectories_satisfy_schwarz_bound(seed):
    T = 3.0
    zs = _disk_points()
    path = sample_path(DriftedBrownian(kappa=4.0, a=0.5), T, 0.01, seed)
    result = evolve_batch(path, zs, T)
    assert result.alive.any()
    f_tilde = np.abs(result.f[result.alive]) * math.exp(-T)
    assert np.all(f_tilde < 1.0)
    assert np.all(f_tilde <= np.abs(zs[result.alive]) * (1.0 + 1e-9))
