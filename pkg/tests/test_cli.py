import json

import main
from src.exceptions import ObstructionAtOrder


def run_json(capsys, *argv):
    code = main.run(list(argv) + ['--emit', 'json'])
    return code, json.loads(capsys.readouterr().out)


def test_validate_reports_condition_star(capsys):
    code = main.run(['validate', '--example', 'example2'])
    assert code == main.EXIT_OK
    assert 'C ≡ 0' in capsys.readouterr().out


def test_compat_free_parameters(capsys):
    code, payload = run_json(capsys, 'compat', '--example', 'example3', '--n', '2',
                             '--target', 'einstein:6')
    assert code == main.EXIT_OK
    assert len(payload['free']) == 6
    assert all(check['passed'] for check in payload['cancellations'])


def test_solve_emits_exact_coefficients(capsys):
    code, payload = run_json(capsys, 'solve', '--example', 'sphere3', '--target', 'einstein:2',
                             '--order', '12')
    assert code == main.EXIT_OK
    assert payload['coefficients']['phi1'][:2] == ['-1/3', '2/45']
    assert payload['certificate']['passed']


def test_ricci_cross_checks(capsys):
    code, payload = run_json(capsys, 'ricci', '--example', 'berger', '--diag', '1/3,1,1')
    assert code == main.EXIT_OK
    assert payload['ricci'][0][0] == '1/18'
    assert all(payload['agreements'].values())


def test_oracle_subcommand(capsys):
    code, payload = run_json(capsys, 'oracle', '--example', 'solvable2', '--seed', '3',
                             '--count', '2')
    assert code == main.EXIT_OK
    assert payload['passed']


def test_unknown_example_is_input_error(capsys):
    assert main.run(['validate', '--example', 'torus7']) == main.EXIT_INPUT
    assert 'torus7' in capsys.readouterr().err


def test_beta_must_match_einstein_constant(capsys):
    code = main.run(['solve', '--example', 'sphere3', '--target', 'einstein:2',
                     '--gauge', 'reparam:1', '--beta', '3', '--order', '4'])
    assert code == main.EXIT_INPUT


def test_obstruction_exit_code(monkeypatch, capsys):
    def obstructed(problem, progress=False):
        raise ObstructionAtOrder(4, 'V1V1', 'resíduo 1 ≠ 0')

    monkeypatch.setattr(main, 'solve', obstructed)
    code = main.run(['solve', '--example', 'sphere3', '--target', 'einstein:2', '--order', '6'])
    assert code == main.EXIT_OBSTRUCTION
    assert 'V1V1' in capsys.readouterr().err


def test_solve_then_integrate(tmp_path, capsys):
    solution = tmp_path / 'sphere.json'
    code = main.run(['solve', '--example', 'sphere3', '--target', 'einstein:2', '--order', '12',
                     '--emit', 'json', '--output', str(solution)])
    assert code == main.EXIT_OK
    capsys.readouterr()
    code = main.run(['integrate', '--from-solution', str(solution), '--samples', '5'])
    assert code == main.EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith('t,g_V1V1,g_V2V2')
    assert len(lines) == 6
