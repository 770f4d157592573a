import json
from fractions import Fraction

import numpy as np

from src import catalog
from src.equations import EinsteinTarget
from src.ivp import IVPProblem, residual_certificate, solve
from src.liealg import validate
from src.report_generator import ReportGenerator, show
from src.series import AffineScalar
from utils.rational_io import RationalIO
from utils.residual_collector import ResidualCollector


def test_show_respects_precision(monkeypatch):
    monkeypatch.setenv('COHOM1_PRECISION', '2')
    assert show(Fraction(1, 3)) == '~1/2'
    assert RationalIO.dump(Fraction(1, 3)) == '1/3'
    monkeypatch.delenv('COHOM1_PRECISION')
    assert show(Fraction(1, 3)) == '1/3'


def test_show_affine():
    assert show(AffineScalar(1, {'x': -2})) == '1 - 2·x'
    assert show(AffineScalar(0, {'x': 1})) == 'x'


def test_collector_fits_slope():
    collector = ResidualCollector()
    collector.register('cubic', 2.8)
    for t in np.logspace(-1, -3, 11):
        collector.add_sample('cubic', float(t), float(t) ** 3)
    assert abs(collector.fit_slope('cubic') - 3) < 1e-9
    assert collector.status('cubic')[0] == 'passed'
    collector.register('slow', 4.0)
    for t in np.logspace(-1, -3, 11):
        collector.add_sample('slow', float(t), float(t) ** 2)
    assert [name for name, _, _ in collector.failures()] == ['slow']
    assert not collector.get_summary()['passed']


def test_collector_export(tmp_path):
    collector = ResidualCollector()
    collector.register('zero', 1.0)
    collector.add_exact('zero')
    collector.add_check('exata', True, 'ok')
    path = tmp_path / 'certificado.json'
    collector.export_to_json(str(path))
    summary = json.loads(path.read_text(encoding='utf-8'))
    assert summary['passed']
    assert summary['rows'][0]['status'] == 'exact'


def test_validation_report_text():
    data, _ = catalog.load('example2')
    text = ReportGenerator('text').validation_report(data, validate(data))
    assert text.startswith('=' * 80)
    assert 'C ≡ 0' in text
    assert '✓ válido' in text


def test_solution_report_formats():
    data, sd = catalog.load('sphere3')
    sol = solve(IVPProblem(data, sd, EinsteinTarget(Fraction(2)), order=6))
    collector = residual_certificate(sol)
    payload = json.loads(ReportGenerator('json').solution_report(sol, collector))
    assert payload['coefficients']['phi1'][:2] == ['-1/3', '2/45']
    assert payload['certificate']['passed']
    table = ReportGenerator('csv').solution_report(sol, collector).splitlines()
    assert table[0] == 'k,phi1'
    assert table[1] == '0,-1/3'
    text = ReportGenerator('text').solution_report(sol, collector)
    assert 'Certificado: ✓ aprovado' in text


def test_write_to_file(tmp_path, capsys):
    path = tmp_path / 'saida' / 'relatorio.txt'
    ReportGenerator('text', str(path)).write('conteúdo\n')
    assert path.read_text(encoding='utf-8') == 'conteúdo\n'
    assert 'Relatório gerado:' in capsys.readouterr().out
