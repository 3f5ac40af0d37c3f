import numpy as np
import pytest

from modules.analysis.exact_spectra import exact_beta, red_parabola, red_parabola_real_point
from modules.analysis.spectrum_types import SleParams
from modules.analysis.spiral_maps import half_spiral_map
from modules.core.errors import DomainError, QualityError
from modules.core.statistics import fit_loglog_slope
from modules.processors.moment_estimator import MomentEstimator
from modules.simulation.levy_driving import BrownianPlusOddPiJumps, DriftedBrownian


def test_trivial_exponents_give_unit_mean(small_mc_config):
    estimator = MomentEstimator(small_mc_config)
    estimate = estimator.estimate_moment_pointwise(
        DriftedBrownian(kappa=2.0, a=1.0), 0.0, 0.0, 0.5, n=5, T=1.0, seed=3, num_workers=1
    )
    assert estimate.mean == 1.0
    assert estimate.stderr == 0.0
    assert estimate.n_samples == 5
    mean, stderr = estimate
    assert (mean, stderr) == (1.0, 0.0)


def test_deterministic_drift_matches_half_spiral_quadrature(small_mc_config):
    estimator = MomentEstimator(small_mc_config)
    r_grid = [0.5, 0.8, 0.9]
    estimate = estimator.estimate_moments(
        DriftedBrownian(kappa=0.0, a=1.0), 1.0, 0.0, r_grid, n=100, T=25.0, num_workers=1
    )
    assert estimate.n_samples == 1
    n_theta = small_mc_config['n_theta']
    angles = 2.0 * np.pi * np.arange(n_theta) / n_theta
    for r, value in zip(r_grid, estimate.M_hat):
        _, fprime = half_spiral_map(r * np.exp(1j * angles), 1.0)
        expected = np.sum(np.abs(fprime)) * r * 2.0 * np.pi / n_theta
        assert value == pytest.approx(expected, rel=1e-6)
    assert np.all(estimate.stderr == 0.0)


def test_results_do_not_depend_on_thread_count(small_mc_config):
    small_mc_config['chunk_size'] = 2
    estimator = MomentEstimator(small_mc_config)
    symbol = BrownianPlusOddPiJumps(kappa=2.0, rate=0.5)
    runs = [
        estimator.estimate_moments(symbol, 1.0, 0.5, [0.3, 0.5], n=6, T=3.0, seed=11, num_workers=workers)
        for workers in (1, 3)
    ]
    assert np.array_equal(runs[0].M_hat, runs[1].M_hat)
    assert np.array_equal(runs[0].stderr, runs[1].stderr)
    assert runs[0].metadata == runs[1].metadata


def test_metadata_records_run_parameters(small_mc_config, tmp_path):
    estimator = MomentEstimator(small_mc_config)
    estimate = estimator.estimate_moments(
        DriftedBrownian(kappa=2.0), 1.0, 0.0, [0.3, 0.5], n=2, T=1.0, seed=99, num_workers=1
    )
    for key in ('seed', 'dt', 'T', 'n'):
        assert key in estimate.metadata
    assert estimate.metadata['seed'] == 99
    assert estimate.metadata['dt'] == small_mc_config['dt']
    success, path = estimate.to_csv(str(tmp_path / 'moments.csv'))
    assert success
    with open(path, encoding='utf-8') as f:
        text = f.read()
    assert '# seed=99' in text
    assert 'r,M_hat,stderr' in text
    assert estimate.to_dict()['n_samples'] == 2


def test_quality_gate_on_relative_stderr(small_mc_config):
    small_mc_config['max_rel_stderr'] = 1e-9
    estimator = MomentEstimator(small_mc_config)
    with pytest.raises(QualityError):
        estimator.estimate_beta(
            DriftedBrownian(kappa=2.0), 1.0, 0.0, [0.2, 0.3, 0.4, 0.5], n=4, T=1.0, num_workers=1
        )


def test_invalid_requests(small_mc_config):
    estimator = MomentEstimator(small_mc_config)
    symbol = DriftedBrownian(kappa=2.0)
    with pytest.raises(DomainError):
        estimator.estimate_beta(symbol, 1.0, 0.0, [0.5, 0.6, 0.7], n=4)
    with pytest.raises(DomainError):
        estimator.estimate_moment_pointwise(symbol, 1.0, 0.0, 1.0 + 0j, n=4)
    with pytest.raises(DomainError):
        estimator.estimate_moments(symbol, 1.0, 0.0, [0.6, 0.5], n=4)
    with pytest.raises(DomainError):
        estimator.estimate_moments(symbol, 1.0, 0.0, [0.5, 1.0], n=4)
    with pytest.raises(DomainError):
        estimator.estimate_moment_pointwise(symbol, 1.0, 0.0, 0.5, n=0, T=1.0)


def test_adaptive_angular_grid(config):
    estimator = MomentEstimator(config)
    assert estimator.theta_count(0.5) == config['n_theta']
    assert 800 <= estimator.theta_count(0.99) <= 801
    assert estimator.theta_count(0.99999) == config['max_theta']
    points, weights, starts = estimator.circle_points([0.5, 0.6])
    assert list(starts) == [0, config['n_theta']]
    assert points.size == weights.size == 2 * config['n_theta']
    assert np.sum(weights[:config['n_theta']]) == pytest.approx(2.0 * np.pi * 0.5)


def test_fit_window_keeps_radii_close_to_circle(small_mc_config):
    estimator = MomentEstimator(small_mc_config)
    result = estimator.estimate_beta(
        DriftedBrownian(kappa=0.0, a=1.0), 1.0, 0.0, [0.5, 0.6, 0.9, 0.95, 0.99], n=1, T=5.0, num_workers=1
    )
    assert result.n_fit_points == 3
    assert result.estimate.metadata['beta_hat'] == result.beta_hat


def test_fit_window_falls_back_to_all_radii(small_mc_config):
    estimator = MomentEstimator(small_mc_config)
    r_grid = [0.2, 0.3, 0.4, 0.5]
    result = estimator.estimate_beta(
        DriftedBrownian(kappa=0.0, a=1.0), 1.0, 0.0, r_grid, n=1, T=5.0, num_workers=1
    )
    assert result.n_fit_points == len(r_grid)
    expected = fit_loglog_slope([1.0 / (1.0 - r) for r in r_grid], result.estimate.M_hat)
    assert result.beta_hat == pytest.approx(expected.slope)


def test_discard_rate_gate(small_mc_config):
    # Nenhuma trajetória cabe em um único subpasso
    small_mc_config['max_substeps'] = 1
    estimator = MomentEstimator(small_mc_config)
    with pytest.raises(QualityError) as exc:
        estimator.estimate_moment_pointwise(
            DriftedBrownian(kappa=2.0), 1.0, 0.0, 0.5, n=4, T=0.5, seed=5, num_workers=1
        )
    assert exc.value.exit_code == 3
    assert 'descarte' in str(exc.value)


def test_reference_point_on_kappa_six_parabola():
    point = red_parabola(0.25, SleParams(6.0))
    assert (point.p.real, point.q.real) == pytest.approx((1.0625, 1.125))
    assert point.beta == pytest.approx(0.1875)
    assert exact_beta(point.p.real, point.q.real, SleParams(6.0)).beta == pytest.approx(0.1875)


@pytest.mark.slow
def test_spiral_spectrum_from_simulation(config):
    config.update({'dt': 0.02, 'max_theta': 16384})
    result = MomentEstimator(config).estimate_beta(
        DriftedBrownian(kappa=0.0, a=1.0), 1.0, 0.0, [0.9, 0.95, 0.98, 0.99, 0.995, 0.999], n=1
    )
    assert result.n_fit_points == 6
    assert abs(result.beta_hat - 1.0) <= 0.05


@pytest.mark.slow
def test_kappa_six_spectrum_on_red_parabola(config):
    params = SleParams(6.0)
    point = red_parabola(0.25, params)
    expected = exact_beta(point.p.real, point.q.real, params).beta
    config.update({'n_theta': 64, 'adaptive_theta': False, 'dt': 0.02, 'regression_window': 0.5})
    result = MomentEstimator(config).estimate_beta(
        DriftedBrownian(kappa=6.0), point.p.real, point.q.real, [0.6, 0.7, 0.8, 0.85, 0.9],
        n=400, T=12.0, seed=606,
    )
    assert result.n_fit_points == 5
    assert abs(result.beta_hat - expected) <= 0.1


@pytest.mark.slow
def test_pointwise_moment_on_red_parabola(config):
    params = SleParams(kappa=2.0, a=1.0)
    point = red_parabola_real_point(params)
    p, q = point.p.real, point.q.real
    assert (p, q) == pytest.approx((2.8125, 1.875))
    z = 0.3
    alpha = point.alpha
    expected = abs((1.0 - z) ** alpha) ** 2 * (1.0 - z * z) ** (-0.5 * params.kappa * abs(alpha) ** 2)
    assert expected == pytest.approx(0.4472, abs=1e-4)

    estimate = MomentEstimator(config).estimate_moment_pointwise(
        DriftedBrownian(kappa=2.0, a=1.0), p, q, z, n=20000, seed=2024
    )
    assert abs(estimate.mean - expected) <= 3.0 * estimate.stderr
    assert abs(estimate.mean - expected) <= 0.05 * expected


@pytest.mark.slow
def test_trivial_exponents_have_flat_spectrum(config):
    config['dt'] = 0.02
    result = MomentEstimator(config).estimate_beta(
        DriftedBrownian(kappa=0.0, a=0.0), 0.0, 0.0, [0.95, 0.98, 0.99, 0.995, 0.999], n=1
    )
    assert abs(result.beta_hat) < 0.02
