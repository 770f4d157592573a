"""
Script principal: problemas de valor inicial para Ricci prescrito, Einstein e
sólitons em variedades de coomogeneidade um
"""
import argparse
import os
import random
import sys
from fractions import Fraction

# Adicionar diretório do projeto ao path
project_root = os.path.dirname(os.path.abspath(__file__))
sys.path.insert(0, project_root)

from config.settings import INTEGRATION_CONFIG, SERIES_CONFIG
from src import catalog
from src.compat import build_system, verify_cancellations
from src.equations import EinsteinTarget, TensorTarget, parse_gauge, parse_target
from src.exceptions import (CertificationFailed, CohomError, InputSchemaError, ObstructionAtOrder,
                            PositivityLost, StepFailure)
from src.homogeneous import MetricEndomorphism, ricci_diagonal, ricci_gh
from src.integrate import continue_solution
from src.ivp import IVPProblem, IVPSolution, residual_certificate, solve, target_text
from src.liealg import validate
from src.oracle import audit, closed_form_audit, koszul_ricci, orthonormal_basis_ricci
from src.report_generator import ReportGenerator
from src.series import TruncatedSeries
from utils.rational_io import RationalIO, load_json

EXIT_OK, EXIT_INPUT, EXIT_OBSTRUCTION = 0, 1, 2


def parse_free(items) -> dict:
    """--free k=v (repetível)"""
    values = {}
    for item in items or []:
        if '=' not in item:
            raise InputSchemaError('--free', f"esperado nome=valor, recebido {item!r}")
        name, value = item.split('=', 1)
        values[name.strip()] = RationalIO.parse(value, f"--free/{name.strip()}")
    return values


def parse_beta(text):
    """'2' (constante) ou '0:2,2:1/3' (expoente:coeficiente)"""
    if text is None:
        return None
    if ':' not in text:
        return TruncatedSeries.constant(RationalIO.parse(text, '--beta'))
    coefficients = {}
    for part in text.split(','):
        power, value = part.split(':', 1)
        coefficients[int(power)] = RationalIO.parse(value, f"--beta/{power}")
    return TruncatedSeries.from_dict(coefficients)


def load_inputs(args, need_smoothness: bool = True):
    if args.algebra:
        data, sd = catalog.load_file(args.algebra, args.metric)
    elif args.example:
        data, sd = catalog.load(args.example, args.n)
    else:
        raise InputSchemaError('--example', "informe --example ou --algebra")
    if need_smoothness and sd is None:
        raise InputSchemaError('smoothness', f"{data.name} não tem dados de suavidade")
    return data, sd


def build_problem(args, data, sd) -> IVPProblem:
    target = parse_target(args.target, data, sd)
    gauge = parse_gauge(args.gauge)
    beta = parse_beta(args.beta)
    if isinstance(target, TensorTarget) and beta is not None:
        target.beta = beta
    elif isinstance(target, EinsteinTarget) and beta is not None:
        if beta != TruncatedSeries.constant(target.lam):
            raise InputSchemaError('--beta', f"para alvo de Einstein β deve ser λ = {target.lam}")
    elif beta is not None:
        raise InputSchemaError('--beta', "β não se aplica ao alvo de sóliton")
    return IVPProblem(data, sd, target, gauge, parse_free(args.free), args.order)


# -- subcomandos ----------------------------------------------------------------
def cmd_validate(args, reporter: ReportGenerator) -> int:
    data, sd = load_inputs(args, need_smoothness=False)
    report = validate(data)
    problems = sd.validate() if sd is not None else []
    reporter.write(reporter.validation_report(data, report, problems))
    return EXIT_OK if report.passed and not problems else EXIT_INPUT


def cmd_ricci(args, reporter: ReportGenerator) -> int:
    data, _ = load_inputs(args, need_smoothness=False)
    if args.diag:
        values = [RationalIO.parse(x, '--diag') for x in args.diag.split(',')]
        if len(values) != data.dim_n:
            raise InputSchemaError('--diag', f"esperadas {data.dim_n} entradas")
    else:
        values = [data.q_norms[g] for g in data.n_indices]
    metric = [[values[i] if i == j else Fraction(0) for j in range(data.dim_n)]
              for i in range(data.dim_n)]
    ricci = ricci_gh(data, MetricEndomorphism.constant(data, metric)).constant_rows()
    agreements = {
        'ricci_diagonal': ricci == ricci_diagonal(data, values),
        'orthonormal_basis_ricci': ricci == orthonormal_basis_ricci(data, metric),
    }
    if not data.dim_h:
        agreements['koszul_ricci'] = ricci == koszul_ricci(data, metric)
    reporter.write(reporter.ricci_report(data, metric, ricci, agreements))
    return EXIT_OK


def cmd_compat(args, reporter: ReportGenerator) -> int:
    data, sd = load_inputs(args)
    target = parse_target(args.target, data, sd)
    system = build_system(data, sd, target, parse_gauge(args.gauge), parse_free(args.free))
    checks = verify_cancellations(data, sd)
    reporter.write(reporter.compat_report(data, system, target_text(target), checks))
    return EXIT_OBSTRUCTION if system.obstructions else EXIT_OK


def cmd_solve(args, reporter: ReportGenerator) -> int:
    data, sd = load_inputs(args)
    sol = solve(build_problem(args, data, sd), progress=args.progress)
    collector = residual_certificate(sol, raise_on_failure=False)
    reporter.write(reporter.solution_report(sol, collector))
    return EXIT_OK if collector.get_summary()['passed'] else EXIT_OBSTRUCTION


def cmd_certify(args, reporter: ReportGenerator) -> int:
    data, sd = load_inputs(args)
    sol = solve(build_problem(args, data, sd), progress=args.progress)
    collector = residual_certificate(sol, raise_on_failure=False)
    reporter.write(reporter.certificate_report(sol, collector))
    return EXIT_OK if collector.get_summary()['passed'] else EXIT_OBSTRUCTION


def cmd_integrate(args, reporter: ReportGenerator) -> int:
    if not args.from_solution:
        raise InputSchemaError('--from-solution', "informe o arquivo emitido por solve --emit json")
    raw = load_json(args.from_solution)
    if args.algebra:
        data, sd = catalog.load_file(args.algebra, args.metric)
    else:
        data, sd = catalog.load(str(raw.get('example', args.example)))
    sol = IVPSolution.from_dict(raw, data, sd)
    trajectory = continue_solution(sol, args.t0, args.tmax, args.reltol, args.samples)
    reporter.write(reporter.trajectory_report(trajectory))
    return EXIT_OK


def cmd_oracle(args, reporter: ReportGenerator) -> int:
    data, _ = load_inputs(args, need_smoothness=False)
    results = audit(data, random.Random(args.seed), args.count) + closed_form_audit()
    reporter.write(reporter.oracle_report(data.name, results))
    return EXIT_OK if all(r['passed'] for r in results) else EXIT_OBSTRUCTION


COMMANDS = {
    'validate': cmd_validate,
    'ricci': cmd_ricci,
    'compat': cmd_compat,
    'solve': cmd_solve,
    'integrate': cmd_integrate,
    'oracle': cmd_oracle,
    'certify': cmd_certify,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="PVI de Ricci prescrito em coomogeneidade um")
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p):
        p.add_argument('--example', help="exemplo do catálogo (sphere3, example1, ...)")
        p.add_argument('--n', type=int, help="parâmetro n de example3")
        p.add_argument('--algebra', help="arquivo JSON com a álgebra do usuário")
        p.add_argument('--metric', help="arquivo JSON com a seção smoothness")
        p.add_argument('--emit', choices=['text', 'json', 'csv'], default=None)
        p.add_argument('--output', help="arquivo de saída (padrão: saída padrão)")
        return p

    def problem(p):
        p.add_argument('--target', default='einstein:0')
        p.add_argument('--order', type=int, default=SERIES_CONFIG['default_order'])
        p.add_argument('--free', action='append', metavar='k=v')
        p.add_argument('--gauge', default='arclength')
        p.add_argument('--beta', help="β = T(ċ,ċ): constante ou k:c,k:c")
        p.add_argument('--progress', action='store_true')
        return p

    common(sub.add_parser('validate', help="confere as identidades dos dados de Lie"))
    ricci = common(sub.add_parser('ricci', help="Ricci de G/H numa métrica diagonal constante"))
    ricci.add_argument('--diag', help="entradas diagonais p/q separadas por vírgula")
    compat = common(sub.add_parser('compat', help="condições de compatibilidade em t = 0"))
    compat.add_argument('--target', default='einstein:0')
    compat.add_argument('--free', action='append', metavar='k=v')
    compat.add_argument('--gauge', default='arclength')
    problem(common(sub.add_parser('solve', help="solução em série com certificado")))
    problem(common(sub.add_parser('certify', help="só o certificado de resíduo")))
    integrate = common(sub.add_parser('integrate', help="continuação numérica a partir de t0"))
    integrate.add_argument('--from-solution', dest='from_solution')
    integrate.add_argument('--t0', type=float, default=INTEGRATION_CONFIG['t0'])
    integrate.add_argument('--tmax', type=float, default=INTEGRATION_CONFIG['t_max'])
    integrate.add_argument('--reltol', type=float, default=INTEGRATION_CONFIG['reltol'])
    integrate.add_argument('--samples', type=int, default=INTEGRATION_CONFIG['samples'])
    oracle = common(sub.add_parser('oracle', help="auditoria das fórmulas pelos oráculos"))
    oracle.add_argument('--seed', type=int, default=0)
    oracle.add_argument('--count', type=int, default=5)
    return parser


def run(argv=None) -> int:
    """
    Executa um subcomando

    Args:
        argv: argumentos (padrão sys.argv[1:])

    Returns:
        Código de saída: 0 sucesso, 2 obstrução, 1 erro de entrada
    """
    args = build_parser().parse_args(argv)
    reporter = ReportGenerator(args.emit, args.output)
    try:
        return COMMANDS[args.command](args, reporter)
    except (ObstructionAtOrder, CertificationFailed, StepFailure, PositivityLost) as e:
        print(f"ERRO: {e}", file=sys.stderr)
        return EXIT_OBSTRUCTION
    except CohomError as e:
        print(f"ERRO: {e}", file=sys.stderr)
        return EXIT_INPUT


def main():
    """Função principal"""
    try:
        sys.exit(run())
    except KeyboardInterrupt:
        print("\n\nProcessamento interrompido pelo usuário.")
        sys.exit(EXIT_INPUT)
    except Exception as e:
        print(f"\nERRO durante o processamento: {e}")
        import traceback
        traceback.print_exc()
        sys.exit(EXIT_INPUT)


if __name__ == "__main__":
    main()
