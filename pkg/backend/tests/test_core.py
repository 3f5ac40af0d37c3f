import json
import math
import os
from fractions import Fraction

import numpy as np
import pytest

from modules.core.config import DEFAULT_CONFIG, ConfigManager, get_setting
from modules.core.errors import (
    BlowUpError,
    ConvergenceError,
    DomainError,
    LoewnerError,
    QualityError,
    RootFindingError,
    SingularityError,
    VerificationError,
)
from modules.core.statistics import RunningMoments, fit_loglog_slope
from modules.core.utils import (
    fraction_to_string,
    mix64,
    parse_rational,
    resolve_threads,
    write_csv,
    write_json,
)


def test_exit_codes():
    assert LoewnerError.exit_code == 1
    assert DomainError.exit_code == 2
    for cls in (QualityError, VerificationError, BlowUpError, ConvergenceError, SingularityError, RootFindingError):
        assert cls.exit_code == 3
    assert issubclass(DomainError, ValueError)


def test_singularity_error_carries_collision():
    error = SingularityError("D_1 singular", k=1, collision='alpha0+ - k = 1')
    assert error.k == 1
    assert error.collision == 'alpha0+ - k = 1'


def test_mix64_is_deterministic_and_spreads():
    seeds = [mix64(42, i) for i in range(100)]
    assert seeds == [mix64(42, i) for i in range(100)]
    assert len(set(seeds)) == 100
    assert all(0 <= s < 2 ** 64 for s in seeds)
    assert mix64(42, 0) != mix64(43, 0)


@pytest.mark.parametrize('text, expected', [
    ('-2/5', Fraction(-2, 5)),
    ('11/5', Fraction(11, 5)),
    ('3', Fraction(3)),
    ('0.25', Fraction(1, 4)),
    (7, Fraction(7)),
])
def test_parse_rational(text, expected):
    assert parse_rational(text) == expected


def test_parse_rational_rejects_garbage():
    with pytest.raises(ValueError):
        parse_rational('abc')


def test_fraction_to_string():
    assert fraction_to_string(Fraction(19, 5)) == '19/5'
    assert fraction_to_string(Fraction(-4)) == '-4'


def test_resolve_threads_precedence(monkeypatch):
    monkeypatch.setenv('LOEWNER_THREADS', '3')
    assert resolve_threads({'threads': 5}, override=2) == 2
    assert resolve_threads({'threads': 5}) == 3
    monkeypatch.delenv('LOEWNER_THREADS')
    assert resolve_threads({'threads': 5}) == 5
    assert resolve_threads({'threads': None}) >= 1


def test_config_manager_ignores_unknown_keys(tmp_path, monkeypatch):
    monkeypatch.delenv('LOEWNER_THREADS', raising=False)
    path = tmp_path / 'config.json'
    path.write_text(json.dumps({'dt': 0.005, 'nao_existe': 1}), encoding='utf-8')
    config = ConfigManager(str(path)).get_config()
    assert config['dt'] == 0.005
    assert 'nao_existe' not in config
    assert config['n_theta'] == DEFAULT_CONFIG['n_theta']


def test_config_manager_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv('LOEWNER_THREADS', '6')
    config = ConfigManager(str(tmp_path / 'ausente.json')).get_config()
    assert config['threads'] == 6


def test_config_manager_save_and_reset(tmp_path):
    path = tmp_path / 'config.json'
    manager = ConfigManager(str(path))
    manager.update_config({'dt': 0.001, 'threads': None})
    assert manager.save_config()
    assert json.loads(path.read_text(encoding='utf-8'))['dt'] == 0.001
    assert manager.reset_to_default()
    assert manager.get_config()['dt'] == DEFAULT_CONFIG['dt']


def test_get_setting_fallback():
    assert get_setting(None, 'bisection_xtol') == DEFAULT_CONFIG['bisection_xtol']
    assert get_setting({'dt': None}, 'dt') == DEFAULT_CONFIG['dt']
    assert get_setting({'dt': 0.5}, 'dt') == 0.5


def test_write_csv_header_and_rows(tmp_path):
    path = str(tmp_path / 'sub' / 'out.csv')
    success, result = write_csv(path, ['r', 'value'], [(0.5, 0.1), (0.9, Fraction(1, 3))], {'seed': 7})
    assert success and result == path
    with open(path, encoding='utf-8', newline='') as f:
        lines = f.read().split('\n')
    assert lines[0] == '# seed=7'
    assert lines[1].startswith('# tool_version=')
    assert lines[2] == 'r,value'
    assert lines[3] == '0.5,0.1'
    assert lines[4] == '0.9,1/3'
    assert '\r' not in ''.join(lines)


def test_write_json_embeds_metadata(tmp_path):
    path = str(tmp_path / 'out.json')
    success, _ = write_json(path, {'beta': Fraction(19, 5), 'z': 0.5 + 1j}, {'n': 1})
    assert success
    with open(path, encoding='utf-8') as f:
        document = json.load(f)
    assert document['beta'] == '19/5'
    assert document['z'] == [0.5, 1.0]
    assert document['metadata']['n'] == 1
    assert 'tool_version' in document['metadata']


def test_write_csv_reports_failure(tmp_path):
    blocker = tmp_path / 'arquivo'
    blocker.write_text('x', encoding='utf-8')
    success, message = write_csv(os.path.join(str(blocker), 'out.csv'), ['a'], [])
    assert not success
    assert 'Erro' in message


def test_running_moments_merge_matches_batch():
    rng = np.random.default_rng(1)
    values = rng.normal(size=(50, 3))
    first = RunningMoments.from_samples(values[:20])
    second = RunningMoments.from_samples(values[20:])
    merged = first.merge(second)
    assert np.array_equal(merged.count, [50, 50, 50])
    np.testing.assert_allclose(merged.mean, values.mean(axis=0), rtol=1e-12)
    np.testing.assert_allclose(merged.variance, values.var(axis=0, ddof=1), rtol=1e-12)


def test_running_moments_push_with_mask():
    moments = RunningMoments.zeros(2)
    for row in ([1.0, 10.0], [3.0, 20.0], [5.0, 30.0]):
        moments.push(np.array(row), mask=np.array([True, row[1] != 20.0]))
    np.testing.assert_allclose(moments.mean, [3.0, 20.0])
    assert list(moments.count) == [3, 2]
    np.testing.assert_allclose(moments.stderr[0], np.sqrt(4.0 / 3.0))


def test_fit_loglog_slope_exact_power_law():
    x = np.array([10.0, 100.0, 1000.0, 10000.0])
    fit = fit_loglog_slope(x, 2.5 * x ** 1.75)
    assert fit.slope == pytest.approx(1.75, abs=1e-12)
    assert fit.n_points == 4
    assert fit.ci[0] <= fit.slope <= fit.ci[1]


def test_fit_loglog_slope_two_points_has_unbounded_interval():
    fit = fit_loglog_slope([10.0, 100.0], [1.0, 10.0])
    assert fit.slope == pytest.approx(1.0)
    assert fit.ci == (-math.inf, math.inf)
    with pytest.raises(ValueError):
        fit_loglog_slope([10.0], [1.0])
