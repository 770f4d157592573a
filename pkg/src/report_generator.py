"""
Gerador de relatórios (texto, JSON e CSV) dos subcomandos
"""
import csv
import io
import json
import os
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence

from config.settings import REPORT_CONFIG
from src.series import AffineScalar
from utils.rational_io import RationalIO


def show(value) -> str:
    """Racional ou expressão afim para exibição (respeita COHOM1_PRECISION)"""
    if isinstance(value, AffineScalar):
        if value.nonlinear:
            return str(value)
        parts = []
        if value.constant or not value.terms:
            parts.append(RationalIO.display(value.constant))
        for name in sorted(value.terms):
            coef = value.terms[name]
            magnitude = abs(coef)
            body = name if magnitude == 1 else f"{RationalIO.display(magnitude)}·{name}"
            if parts:
                parts.append(f"{'-' if coef < 0 else '+'} {body}")
            else:
                parts.append(body if coef > 0 else f"-{body}")
        return ' '.join(parts)
    if isinstance(value, Fraction) or isinstance(value, int):
        return RationalIO.display(value)
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


class ReportGenerator:
    """Monta relatórios determinísticos a partir dos resultados do solucionador"""

    def __init__(self, emit: Optional[str] = None, output_path: Optional[str] = None):
        """
        Inicializa o gerador de relatórios

        Args:
            emit: 'text', 'json' ou 'csv' (padrão REPORT_CONFIG['emit'])
            output_path: arquivo de saída; None escreve na saída padrão
        """
        self.emit = emit or REPORT_CONFIG['emit']
        self.output_path = output_path

    # -- saída ---------------------------------------------------------------
    @staticmethod
    def header(title: str) -> List[str]:
        return ["=" * 80, title, "=" * 80, ""]

    @staticmethod
    def section(title: str) -> List[str]:
        return ["-" * 80, title, "-" * 80]

    @staticmethod
    def to_csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow([f"{x:.12e}" if isinstance(x, float) else x for x in row])
        return buffer.getvalue()

    def render(self, lines: List[str], payload: Dict[str, Any],
               table: Optional[Sequence[Sequence]] = None) -> str:
        """Escolhe a forma de saída: table[0] é o cabeçalho do CSV"""
        if self.emit == 'json':
            return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"
        if self.emit == 'csv' and table is not None:
            return self.to_csv(table[0], table[1:])
        return "\n".join(lines) + "\n"

    def write(self, content: str):
        """
        Escreve o relatório no arquivo pedido ou na saída padrão

        Args:
            content: relatório já formatado
        """
        if self.output_path is None:
            print(content, end='')
            return
        directory = os.path.dirname(self.output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(self.output_path, 'w', encoding='utf-8') as f:
            f.write(content)
        print(f"Relatório gerado: {self.output_path}")

    # -- validate ------------------------------------------------------------
    def validation_report(self, data, report, sd_problems: Sequence[str] = ()) -> str:
        lines = self.header(f"VALIDAÇÃO: {data.name}")
        lines.append(f"dim g = {data.dim_g}, dim h = {data.dim_h}, "
                     f"dim p = {data.dim_p}, dim m = {data.dim_m}")
        lines.append(f"Unimodular: {'sim' if report.unimodular else 'não'}")
        lines.append("")
        lines.extend(self.section("VIOLAÇÕES"))
        if report.violations:
            for violation in report.violations:
                lines.append(f"  • {violation}")
        else:
            lines.append("  nenhuma")
        for problem in sd_problems:
            lines.append(f"  • suavidade: {problem}")
        lines.append("")
        lines.extend(self.section("AVISOS"))
        lines.extend([f"  • {w}" for w in report.warnings] or ["  nenhum"])
        lines.append("")
        passed = report.passed and not sd_problems
        lines.append(f"Resultado: {'✓ válido' if passed else '✗ inválido'}")
        payload = {
            'example': data.name,
            'passed': passed,
            'unimodular': report.unimodular,
            'violations': [str(v) for v in report.violations] + [f"suavidade: {p}" for p in sd_problems],
            'warnings': list(report.warnings),
        }
        return self.render(lines, payload)

    # -- ricci ---------------------------------------------------------------
    def ricci_report(self, data, metric: Sequence[Sequence[Fraction]],
                     ricci: Sequence[Sequence[Fraction]], agreements: Dict[str, bool]) -> str:
        labels = [data.labels[g] for g in data.n_indices]
        lines = self.header(f"RICCI DE G/H: {data.name}")
        lines.extend(self.section("MÉTRICA (Gram em n)"))
        for label, row in zip(labels, metric):
            lines.append(f"  {label:>6}: " + "  ".join(show(x) for x in row))
        lines.append("")
        lines.extend(self.section("Ric"))
        for label, row in zip(labels, ricci):
            lines.append(f"  {label:>6}: " + "  ".join(show(x) for x in row))
        lines.append("")
        lines.extend(self.section("CONFERÊNCIA"))
        for name, ok in agreements.items():
            lines.append(f"  {'✓' if ok else '✗'} {name}")
        payload = {
            'example': data.name,
            'labels': labels,
            'metric': [[RationalIO.dump(x) for x in row] for row in metric],
            'ricci': [[RationalIO.dump(x) for x in row] for row in ricci],
            'agreements': agreements,
        }
        table = [['linha'] + labels] + [[label] + [RationalIO.dump(x) for x in row]
                                        for label, row in zip(labels, ricci)]
        return self.render(lines, payload, table)

    # -- compat --------------------------------------------------------------
    def compat_report(self, data, system, target_label: str, checks: Sequence = ()) -> str:
        lines = self.header(f"CONDIÇÕES DE COMPATIBILIDADE: {data.name}")
        lines.append(f"Alvo: {target_label}")
        lines.append("")
        lines.extend(self.section("LINHAS"))
        for row in system.rows:
            lines.append(f"  [{row.status:>10}] {row.id}: {show(row.equation)} = 0")
        lines.append("")
        lines.extend(self.section("SOLUÇÃO"))
        for name in sorted(system.solved):
            lines.append(f"  {name} = {show(system.solved[name])}")
        lines.append("")
        lines.extend(self.section(f"PARÂMETROS LIVRES ({len(system.free)})"))
        lines.extend([f"  • {name}" for name in system.free] or ["  nenhum"])
        if system.obstructions:
            lines.append("")
            lines.extend(self.section("OBSTRUÇÕES"))
            for row in system.obstructions:
                lines.append(f"  ✗ {row.id}: {show(row.equation)} ≠ 0")
        if checks:
            lines.append("")
            lines.extend(self.section("CANCELAMENTOS"))
            for check in checks:
                detail = f" ({check.detail})" if check.detail else ''
                lines.append(f"  {'✓' if check.passed else '✗'} {check.name}{detail}")
        payload = {
            'example': data.name,
            'target': target_label,
            'rows': [{'id': r.id, 'module': r.module, 'kind': r.kind, 'status': r.status,
                      'equation': str(r.equation)} for r in system.rows],
            'solved': {k: str(v) for k, v in sorted(system.solved.items())},
            'free': list(system.free),
            'obstructions': [r.id for r in system.obstructions],
            'cancellations': [{'name': c.name, 'passed': c.passed, 'detail': c.detail}
                              for c in checks],
        }
        table = [['id', 'module', 'kind', 'status', 'equation']] + \
            [[r.id, r.module, r.kind, r.status, str(r.equation)] for r in system.rows]
        return self.render(lines, payload, table)

    # -- solve / certify -----------------------------------------------------
    def certificate_lines(self, collector) -> List[str]:
        lines = self.section("CERTIFICADO DE RESÍDUO")
        summary = collector.get_summary()
        for row in summary['rows']:
            slope = '-' if row['slope'] is None else f"{row['slope']:.3f}"
            required = '-' if row['required'] is None else f"{row['required']:.3f}"
            lines.append(f"  {row['equation']:<20} inclinação {slope:>8}  exigida {required:>8}  "
                         f"{row['status']}")
        for check in summary['checks']:
            lines.append(f"  {'✓' if check['passed'] else '✗'} {check['name']}: {check['detail']}")
        lines.append(f"Certificado: {'✓ aprovado' if summary['passed'] else '✗ reprovado'}")
        return lines

    def solution_report(self, sol, collector=None) -> str:
        problem = sol.problem
        functions = list(sol.coefficients)
        lines = self.header(f"SOLUÇÃO EM SÉRIE: {problem.data.name}")
        lines.append(f"Alvo: {problem.target.describe()}")
        lines.append(f"Gauge: {problem.gauge.describe()}")
        lines.append(f"Ordem N = {sol.order}")
        lines.append("")
        lines.extend(self.section("COEFICIENTES f[2k] (t^2k)"))
        for f in functions:
            values = ", ".join(show(c) for c in sol.coefficients[f])
            lines.append(f"  {f}: {values}")
        lines.append("")
        lines.extend(self.section("PROVENIÊNCIA"))
        free = [name for name, origin in sol.provenance.items() if origin in ('livre', 'gauge')]
        lines.append(f"  parâmetros livres: {', '.join(free) if free else 'nenhum'}")
        if sol.nullspace:
            lines.append(f"  direções livres em ordens altas: {', '.join(sol.nullspace)}")
        if collector is not None:
            lines.append("")
            lines.extend(self.certificate_lines(collector))
        payload = sol.to_dict()
        if collector is not None:
            payload['certificate'] = collector.get_summary()
        width = max(len(v) for v in sol.coefficients.values())
        table = [['k'] + functions] + [
            [2 * k] + [RationalIO.dump(sol.coefficients[f][k]) if k < len(sol.coefficients[f]) else ''
                       for f in functions]
            for k in range(width)]
        return self.render(lines, payload, table)

    def certificate_report(self, sol, collector) -> str:
        lines = self.header(f"CERTIFICADO: {sol.problem.data.name}")
        lines.append(f"Alvo: {sol.problem.target.describe()}  Ordem N = {sol.order}")
        lines.append("")
        lines.extend(self.certificate_lines(collector))
        summary = collector.get_summary()
        table = [['equation', 'required', 'slope', 'status']] + \
            [[r['equation'], r['required'], r['slope'], r['status']] for r in summary['rows']]
        return self.render(lines, summary, table)

    # -- integrate -----------------------------------------------------------
    def trajectory_report(self, trajectory) -> str:
        """CSV t, g_.., v, h; o formato texto também é CSV"""
        header, rows = trajectory.header(), trajectory.rows()
        if self.emit == 'json':
            return self.render([], {'columns': header, 'rows': rows})
        return self.to_csv(header, rows)

    # -- oracle --------------------------------------------------------------
    def oracle_report(self, name: str, results: Sequence[Dict[str, Any]]) -> str:
        lines = self.header(f"ORÁCULOS: {name}")
        for result in results:
            lines.append(f"  {'✓' if result['passed'] else '✗'} {result['name']}: {result['detail']}")
        passed = all(r['passed'] for r in results)
        lines.append("")
        lines.append(f"Resultado: {'✓ concordam' if passed else '✗ divergem'}")
        table = [['name', 'passed', 'detail']] + [[r['name'], r['passed'], r['detail']] for r in results]
        return self.render(lines, {'example': name, 'passed': passed, 'results': list(results)}, table)
