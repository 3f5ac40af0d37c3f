import json

import pytest

from app import run


def test_exact_beta_spiral(capsys):
    assert run(['exact-beta', '--case', 'spiral', '--p', '1', '--q', '0', '--drift', '1']) == 0
    assert capsys.readouterr().out.strip() == 'beta=1'


def test_exact_beta_half_spiral_with_negative_p(capsys):
    assert run(['exact-beta', '--p', '-4', '--q', '0', '--drift', '1']) == 0
    assert capsys.readouterr().out.strip() == 'beta=3'


def test_exact_beta_writes_report(tmp_path):
    out = tmp_path / 'beta.json'
    assert run(['--quiet', '-o', str(out), 'exact-beta', '--case', 'spiral', '--p', '2', '--q', '0', '--drift', '0']) == 0
    assert '"beta"' in out.read_text(encoding='utf-8')


def test_exact_beta_lle_sle_line(capsys):
    argv = ['exact-beta', '--case', 'lle', '--p', '2', '--q', '-4', '--eta1', '1', '--eta2', '4']
    assert run(argv) == 0
    assert capsys.readouterr().out.strip() == 'beta=11'


def test_verify_lle_closure(capsys):
    assert run(['verify-lle', '--case', 'closure', '--n', '1', '--q', '-2/5', '--eta1', '11/5']) == 0
    assert capsys.readouterr().out.strip() == 'closed=true, beta=19/5'


def test_verify_lle_closure_on_generated_points(tmp_path, capsys):
    out = tmp_path / 'closure.json'
    argv = ['--threads', '2', '-o', str(out), 'verify-lle', '--case', 'closure', '--n', '2', '--points', '3']
    assert run(argv) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 3
    assert all(line.startswith('closed=true') for line in lines)
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert payload['closed'] is True
    assert [point['point'] for point in payload['points']][:2] == [['-2', '5'], ['-8/5', '9/5']]


def test_verify_lle_falsify(tmp_path, capsys):
    out = tmp_path / 'falsify.json'
    assert run(['-o', str(out), 'verify-lle', '--case', 'falsify', '--n', '2', '--q', '-1']) == 0
    assert capsys.readouterr().out.strip() == 'witness=-5/24 no_further_solution=true'
    assert '"witness"' in out.read_text(encoding='utf-8')


def test_verify_lle_falsify_on_ellipse_crossing(capsys):
    assert run(['verify-lle', '--case', 'falsify', '--n', '1', '--q', '-4']) == 0
    assert capsys.readouterr().out.strip() == 'witness=0 no_further_solution=true'


def test_verify_pde_on_red_parabola(tmp_path):
    out = tmp_path / 'pde.json'
    assert run(['-o', str(out), 'verify-pde', '--alpha', '1+0.5j', '--kappa', '2', '--drift', '1', '--grid', '4']) == 0
    content = out.read_text(encoding='utf-8')
    assert '"max_relative_residual"' in content


def test_phase_diagram_is_reproducible(tmp_path):
    argv = ['phase-diagram', '--kappa', '2', '--drift', '1', '--resolution', '16']
    first, second = tmp_path / 'first.csv', tmp_path / 'second.csv'
    assert run(['--quiet', '-o', str(first)] + argv) == 0
    assert run(['--quiet', '-o', str(second)] + argv) == 0
    assert first.read_bytes() == second.read_bytes()
    assert (tmp_path / 'first.svg').exists()


def test_sample_driver(tmp_path, capsys):
    out = tmp_path / 'driver.csv'
    assert run(['--seed', '7', '-o', str(out), 'sample-driver', '--kappa', '4', '--T', '1', '--dt', '0.1']) == 0
    assert out.exists()
    assert 'passos=10' in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    [],
    ['exact-beta', '--q', '0'],
    ['verify-lle', '--case', 'closure', '--q', 'abc'],
    ['phase-diagram', '--kappa', '2', '--format', 'xml'],
])
def test_usage_errors(argv):
    assert run(argv) == 64


@pytest.mark.parametrize("argv", [
    ['verify-lle', '--case', 'closure', '--q', '-1', '--eta1', '1'],
    ['verify-lle', '--case', 'closure', '--q', '-1'],
    ['verify-lle', '--case', 'falsify', '--n', '1'],
    ['verify-lle', '--case', 'closure', '--points', '0'],
    ['exact-beta', '--p', '1+1j', '--q', '0', '--kappa', '2'],
    ['phase-diagram', '--kappa', '0'],
    ['exact-beta', '--case', 'lle', '--p', '1', '--q', '0', '--eta1', '1', '--eta2', '4'],
])
def test_domain_errors(argv, tmp_path):
    assert run(['-o', str(tmp_path / 'out.csv')] + argv) == 2


def test_report_metadata_is_valid_json(tmp_path):
    out = tmp_path / 'mq.json'
    assert run(['-o', str(out), 'verify-lle', '--case', 'mq', '--q', '0', '--eta1', '1']) == 0
    payload = json.loads(out.read_text(encoding='utf-8'))
    assert payload['fuchsian']['eigenvalues'] == ['4', '3', '1']
    assert payload['metadata']['q'] == '0'
