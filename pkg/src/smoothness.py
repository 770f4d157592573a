"""
Ansatz de suavidade: funções pares φ_k, entradas da métrica e restrições
lineares perto da órbita singular
"""
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.exceptions import ExpansionMismatch, InputSchemaError, ParityViolation
from src.homogeneous import MetricEndomorphism
from src.liealg import FibrationData
from src.series import (AffineScalar, SeriesMatrix, TruncatedSeries, coefficient_name,
                        to_sympy_matrix)
from utils.rational_io import RationalIO, require


@dataclass
class AnsatzTerm:
    """c·t^d·φ (ou c·t^d quando function é None)"""
    function: Optional[str]
    d: int
    c: Fraction


@dataclass
class AnsatzEntry:
    entry: Tuple[int, int]  # posições em n
    terms: List[AnsatzTerm]

    @property
    def exponent(self) -> Optional[int]:
        """Menor expoente de φ na entrada"""
        exponents = [term.d for term in self.terms if term.function]
        return min(exponents) if exponents else None


@dataclass
class Constraint:
    """Σ a_ij g_ij = t^d·(combinação de φ); d None para identidades g-lineares"""
    id: str
    a: List[Tuple[int, int, Fraction]]
    d: Optional[int]


@dataclass
class SmoothnessData:
    data: FibrationData
    functions: List[str]
    ansatz: List[AnsatzEntry]
    constraints: List[Constraint]
    pivot_order: List[str] = field(default_factory=list)
    restrictions: List[str] = field(default_factory=list)

    @property
    def restricted_c(self) -> bool:
        return 'C=0' in self.restrictions

    @property
    def function_constraints(self) -> List[Constraint]:
        return [c for c in self.constraints if c.d is not None]

    @property
    def identity_constraints(self) -> List[Constraint]:
        return [c for c in self.constraints if c.d is None]

    def entry_terms(self) -> Dict[Tuple[int, int], List[AnsatzTerm]]:
        terms: Dict[Tuple[int, int], List[AnsatzTerm]] = {}
        for item in self.ansatz:
            i, j = item.entry
            terms[(i, j)] = item.terms
            terms[(j, i)] = item.terms
        return terms

    def substitute_constraint(self, constraint: Constraint):
        """
        Substitui o ansatz em Σ a_ij g_ij

        Returns:
            (parte constante {expoente: c}, termos em φ {função: {expoente: c}})
        """
        terms = self.entry_terms()
        constant: Dict[int, Fraction] = {}
        functions: Dict[str, Dict[int, Fraction]] = {}
        for i, j, a in constraint.a:
            for term in terms.get((i, j), []):
                if term.function is None:
                    constant[term.d] = constant.get(term.d, Fraction(0)) + a * term.c
                else:
                    by_power = functions.setdefault(term.function, {})
                    by_power[term.d] = by_power.get(term.d, Fraction(0)) + a * term.c
        constant = {k: v for k, v in constant.items() if v}
        functions = {f: {k: v for k, v in powers.items() if v} for f, powers in functions.items()}
        return constant, {f: powers for f, powers in functions.items() if powers}

    def validate(self) -> List[str]:
        """Problemas do ansatz frente às restrições (lista vazia se consistente)"""
        problems = []
        for constraint in self.constraints:
            constant, functions = self.substitute_constraint(constraint)
            if constraint.d is None:
                if constant or functions:
                    problems.append(f"{constraint.id}: identidade não satisfeita pelo ansatz")
                continue
            if not functions:
                problems.append(f"{constraint.id}: nenhuma função φ na combinação")
            for name, powers in functions.items():
                if set(powers) != {constraint.d}:
                    problems.append(f"{constraint.id}: {name} aparece em t^{sorted(powers)}, "
                                    f"esperado t^{constraint.d}")
        for item in self.ansatz:
            for term in item.terms:
                if term.function and term.function not in self.functions:
                    problems.append(f"função desconhecida {term.function} em {item.entry}")
        if len(self.function_constraints) != len(self.functions):
            problems.append(f"{len(self.function_constraints)} restrições com expoente para "
                            f"{len(self.functions)} funções")
        return problems

    def check_tensor(self, target: SeriesMatrix) -> List[str]:
        """
        Um tensor alvo deve satisfazer as mesmas restrições (expoente até 2 menor)

        Args:
            target: tensor simétrico em séries exatas

        Returns:
            Lista de problemas
        """
        problems = []
        for constraint in self.constraints:
            total = TruncatedSeries.zero()
            for i, j, a in constraint.a:
                total = total + target.get(i, j) * a
            if constraint.d is None:
                if not total.is_zero():
                    problems.append(f"{constraint.id}: combinação do alvo não se anula")
                continue
            if total.parity not in ('even', 'zero'):
                problems.append(f"{constraint.id}: combinação do alvo não é par")
            if not total.is_zero() and total.valuation() < constraint.d - 2:
                problems.append(f"{constraint.id}: alvo se anula com ordem menor que t^{constraint.d - 2}")
        return problems

    @classmethod
    def from_dict(cls, raw: Dict[str, Any], data: FibrationData) -> 'SmoothnessData':
        """
        Lê a seção `smoothness` do arquivo de entrada

        Args:
            raw: dicionário da seção
            data: dados de Lie já lidos (resolve rótulos para posições de n)

        Returns:
            SmoothnessData
        """
        pointer = 'smoothness'

        def position(label, where):
            index = data.index_of(label)
            if index not in data.position:
                raise InputSchemaError(where, f"{label!r} não está em n = p ⊕ m")
            return data.position[index]

        def function_name(value):
            if isinstance(value, int) and not isinstance(value, bool):
                return f"phi{value}"
            return str(value)

        ansatz = []
        for k, item in enumerate(require(raw, 'ansatz', pointer)):
            where = f"{pointer}/ansatz/{k}"
            i, j = require(item, 'entry', where)
            terms = []
            for t, term in enumerate(require(item, 'terms', where)):
                term_where = f"{where}/terms/{t}"
                d = require(term, 'd', term_where)
                if not isinstance(d, int) or d < 0:
                    raise InputSchemaError(f"{term_where}/d", "expoente deve ser inteiro ≥ 0")
                function = function_name(term['phi']) if term.get('phi') is not None else None
                terms.append(AnsatzTerm(function, d, RationalIO.parse(term.get('c', '1'),
                                                                      f"{term_where}/c")))
            ansatz.append(AnsatzEntry((position(i, where), position(j, where)), terms))

        declared = [function_name(f) for f in raw.get('functions', [])]
        seen = [term.function for item in ansatz for term in item.terms if term.function]
        functions = declared or list(dict.fromkeys(seen))

        constraints = []
        for k, item in enumerate(require(raw, 'constraints', pointer)):
            where = f"{pointer}/constraints/{k}"
            rows = []
            for r, (i, j, value) in enumerate(require(item, 'a', where)):
                rows.append((position(i, where), position(j, where),
                             RationalIO.parse(value, f"{where}/a/{r}")))
            d = item.get('d')
            if d is not None and (not isinstance(d, int) or d < 0):
                raise InputSchemaError(f"{where}/d", "expoente deve ser inteiro ≥ 0 ou null")
            constraints.append(Constraint(str(item.get('id', f"c{k}")), rows, d))

        pivot_order = [function_name(f) for f in raw.get('pivot_order', functions)]
        return cls(data, functions, ansatz, constraints, pivot_order,
                   [str(r) for r in raw.get('restrictions', [])])


@dataclass
class MetricExpansion:
    """
    P|p = s·t²·Id + t⁴B,  P|m = A0 + t·A1 + t²A,  P|mp = t²C0 + t³C

    (s = 1 no parâmetro de comprimento de arco). Índices locais: A, A0, A1 em m;
    B em p; C0 e C com linhas em m e colunas em p.
    """
    A0: List[List[Fraction]]
    A1: List[List[Fraction]]
    A: SeriesMatrix
    B: SeriesMatrix
    C0: List[List[Fraction]]
    C: Dict[Tuple[int, int], TruncatedSeries]

    def at_zero(self, block: str) -> List[List[AffineScalar]]:
        """Termo constante de A, B ou C (afim nas incógnitas)"""
        if block == 'C':
            rows, cols = len(self.C0), len(self.C0[0]) if self.C0 else 0
            return [[self.C[(i, j)].coefficient(0) if (i, j) in self.C else AffineScalar()
                     for j in range(cols)] for i in range(rows)]
        matrix = self.A if block == 'A' else self.B
        return [[matrix.get(i, j).coefficient(0) for j in range(matrix.size)]
                for i in range(matrix.size)]


def phi_parity_check(phi: Dict[str, TruncatedSeries]):
    for name, series in phi.items():
        if series.parity not in ('even', 'zero'):
            raise ParityViolation(f"{name} não é par (paridade {series.parity})")


def build_P(sd: SmoothnessData, phi: Dict[str, TruncatedSeries],
            p_scale: Fraction = Fraction(1)) -> MetricEndomorphism:
    """
    Monta P a partir do ansatz

    Args:
        sd: dados de suavidade
        phi: série par de cada função
        p_scale: fator dos termos constantes no bloco p (h0² no gauge reparametrizado)

    Returns:
        MetricEndomorphism com pivôs t² nas posições de p
    """
    phi_parity_check(phi)
    data = sd.data
    matrix = SeriesMatrix(data.dim_n)
    for item in sd.ansatz:
        i, j = item.entry
        in_p = i < data.dim_p and j < data.dim_p
        total = None
        for term in item.terms:
            if term.function is None:
                scale = term.c * (p_scale if in_p else 1)
                piece = TruncatedSeries.monomial(scale, term.d)
            else:
                if term.function not in phi:
                    raise InputSchemaError('phi', f"série ausente para {term.function}")
                piece = phi[term.function].shifted(term.d) * term.c
            total = piece if total is None else total + piece
        if total is None:
            continue
        matrix[(i, j)] = total
        matrix[(j, i)] = total
    shifts = [1] * data.dim_p + [0] * data.dim_m
    return MetricEndomorphism(data, matrix, shifts)


def _plain(value: AffineScalar, where: str) -> Fraction:
    if not value.is_plain:
        raise ExpansionMismatch(f"{where} deveria ser constante, obtido {value}")
    return value.constant


def _positive_definite(rows: List[List[Fraction]]) -> bool:
    return to_sympy_matrix(rows).is_positive_definite is True


def extract_expansion(metric: MetricEndomorphism, p_scale: Fraction = Fraction(1)) -> MetricExpansion:
    """
    Separa P nas partes A0, A1, A, B, C0, C

    Args:
        metric: métrica montada por build_P
        p_scale: coeficiente esperado de t² no bloco p

    Returns:
        MetricExpansion com divisões exatas

    Raises:
        ExpansionMismatch: se P não tem a forma esperada
    """
    data = metric.data
    dim_p, dim_m = data.dim_p, data.dim_m
    A0 = [[Fraction(0)] * dim_m for _ in range(dim_m)]
    A1 = [[Fraction(0)] * dim_m for _ in range(dim_m)]
    C0 = [[Fraction(0)] * dim_p for _ in range(dim_m)]
    A, B = SeriesMatrix(dim_m), SeriesMatrix(dim_p)
    C: Dict[Tuple[int, int], TruncatedSeries] = {}

    for i in range(dim_p):
        if metric.matrix[(i, i)] is None:
            raise ExpansionMismatch(f"entrada diagonal {i} de p ausente")

    for (i, j), series in metric.matrix.entries.items():
        where = f"P[{i},{j}]"
        if i < dim_p and j < dim_p:
            lead = p_scale if i == j else 0
            for power, expected in ((0, 0), (1, 0), (2, lead), (3, 0)):
                if series.coefficient(power) != expected:
                    raise ExpansionMismatch(f"{where}: coeficiente de t^{power} deveria ser {expected}")
            rest = series - TruncatedSeries.monomial(lead, 2) if lead else series
            B[(i, j)] = rest.shifted(-4)
        elif i >= dim_p and j >= dim_p:
            a, b = i - dim_p, j - dim_p
            A0[a][b] = _plain(series.coefficient(0), f"{where} (t^0)")
            A1[a][b] = _plain(series.coefficient(1), f"{where} (t^1)")
            rest = series - TruncatedSeries.from_dict({0: A0[a][b], 1: A1[a][b]})
            A[(a, b)] = rest.shifted(-2)
        elif i >= dim_p:
            a = i - dim_p
            for power in (0, 1):
                if series.coefficient(power) != 0:
                    raise ExpansionMismatch(f"{where}: termo misto em t^{power}")
            C0[a][j] = _plain(series.coefficient(2), f"{where} (t^2)")
            rest = series - TruncatedSeries.monomial(C0[a][j], 2)
            C[(a, j)] = rest.shifted(-3)

    if any(A0[a][b] != A0[b][a] for a in range(dim_m) for b in range(dim_m)):
        raise ExpansionMismatch("A0 não é simétrica")
    if dim_m and not _positive_definite(A0):
        raise ExpansionMismatch("A0 não é positiva definida")
    return MetricExpansion(A0, A1, A, B, C0, C)


def phi_series(coefficients: Dict[str, Sequence], order, unknown_power: Optional[int] = None
               ) -> Dict[str, TruncatedSeries]:
    """
    Séries pares φ a partir de coeficientes conhecidos

    Args:
        coefficients: função -> [φ[0], φ[2], ...]
        order: ordem absoluta declarada das séries
        unknown_power: se dado, acrescenta a incógnita "<função>[k]" em t^k

    Returns:
        função -> TruncatedSeries
    """
    result = {}
    for name, values in coefficients.items():
        terms: Dict[int, Any] = {2 * k: Fraction(v) for k, v in enumerate(values) if v}
        if unknown_power is not None:
            terms[unknown_power] = AffineScalar.unknown(coefficient_name(name, unknown_power))
        result[name] = TruncatedSeries.from_dict(terms, order)
    return result
