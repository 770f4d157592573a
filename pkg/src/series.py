"""
Séries de potências truncadas em t com coeficientes racionais exatos

Os coeficientes são AffineScalar: um racional mais uma combinação linear de
incógnitas nomeadas (coeficientes de Taylor ainda não determinados). Produtos
quadráticos nas incógnitas ficam marcados como não lineares e só levantam
AffineOverflow quando o coeficiente é consultado.
"""
import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import sympy

from src.exceptions import AffineOverflow, ExpansionMismatch, NotInvertible

EXACT = math.inf

Rational = Union[int, Fraction]


def coefficient_name(function: str, power: int) -> str:
    """Nome da incógnita do coeficiente de t^power da função par"""
    return f"{function}[{power}]"


def split_coefficient_name(name: str) -> Tuple[str, int]:
    function, _, rest = name.partition('[')
    return function, int(rest.rstrip(']'))


class AffineScalar:
    """Escalar afim: constante racional + Σ c_i·u_i"""

    __slots__ = ('constant', 'terms', 'nonlinear')

    def __init__(self, constant: Rational = 0, terms: Optional[Dict[str, Fraction]] = None,
                 nonlinear: bool = False):
        self.constant = Fraction(constant)
        self.nonlinear = nonlinear
        self.terms = {}
        if terms:
            for name, coef in terms.items():
                coef = Fraction(coef)
                if coef:
                    self.terms[name] = coef

    @classmethod
    def unknown(cls, name: str) -> 'AffineScalar':
        return cls(0, {name: Fraction(1)})

    @property
    def is_plain(self) -> bool:
        return not self.terms and not self.nonlinear

    def is_zero(self) -> bool:
        return not self.nonlinear and not self.constant and not self.terms

    def unknowns(self) -> set:
        return set(self.terms)

    def coefficient(self, name: str) -> Fraction:
        return self.terms.get(name, Fraction(0))

    def __add__(self, other) -> 'AffineScalar':
        if not isinstance(other, _SCALARS):
            return NotImplemented
        other = as_affine(other)
        if self.nonlinear or other.nonlinear:
            return NONLINEAR
        terms = dict(self.terms)
        for name, coef in other.terms.items():
            terms[name] = terms.get(name, 0) + coef
        return AffineScalar(self.constant + other.constant, terms)

    __radd__ = __add__

    def __neg__(self) -> 'AffineScalar':
        if self.nonlinear:
            return self
        return AffineScalar(-self.constant, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> 'AffineScalar':
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return self + (-as_affine(other))

    def __rsub__(self, other) -> 'AffineScalar':
        return as_affine(other) - self

    def __mul__(self, other) -> 'AffineScalar':
        if isinstance(other, (int, Fraction)):
            return self._scaled(Fraction(other))
        if not isinstance(other, AffineScalar):
            return NotImplemented
        if other.is_plain:
            return self._scaled(other.constant)
        if self.is_plain:
            return other._scaled(self.constant)
        raise AffineOverflow(f"produto quadrático nas incógnitas: ({self}) * ({other})")

    def product(self, other: 'AffineScalar') -> 'AffineScalar':
        """Produto que marca termos quadráticos em vez de falhar"""
        if self.is_zero() or other.is_zero():
            return _ZERO
        if self.is_plain:
            return other._scaled(self.constant)
        if other.is_plain:
            return self._scaled(other.constant)
        return NONLINEAR

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'AffineScalar':
        other = as_affine(other)
        if not other.is_plain or not other.constant:
            raise NotInvertible(f"divisão por {other}")
        return self._scaled(1 / other.constant)

    def _scaled(self, factor: Fraction) -> 'AffineScalar':
        if not factor:
            return AffineScalar()
        if self.nonlinear:
            return self
        return AffineScalar(self.constant * factor,
                            {k: v * factor for k, v in self.terms.items()})

    def substitute(self, values: Dict[str, 'AffineScalar']) -> 'AffineScalar':
        """Substitui incógnitas por valores (racionais ou afins)"""
        if self.nonlinear:
            return self
        result = AffineScalar(self.constant)
        for name, coef in self.terms.items():
            if name in values:
                result = result + as_affine(values[name]) * coef
            else:
                result = result + AffineScalar(0, {name: coef})
        return result

    def to_float(self) -> float:
        if self.nonlinear:
            raise AffineOverflow("coeficiente quadrático nas incógnitas")
        if self.terms:
            raise ValueError(f"Escalar ainda contém incógnitas: {self}")
        return float(self.constant)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self.is_plain and self.constant == other
        if not isinstance(other, AffineScalar):
            return NotImplemented
        if self.nonlinear or other.nonlinear:
            return False
        return self.constant == other.constant and self.terms == other.terms

    __hash__ = None

    def __repr__(self) -> str:
        return f"AffineScalar({self})"

    def __str__(self) -> str:
        if self.nonlinear:
            return "<não linear>"
        parts = []
        if self.constant or not self.terms:
            parts.append(str(self.constant))
        for name in sorted(self.terms):
            coef = self.terms[name]
            sign = '-' if coef < 0 else '+'
            magnitude = abs(coef)
            body = name if magnitude == 1 else f"{magnitude}·{name}"
            if parts:
                parts.append(f"{sign} {body}")
            else:
                parts.append(body if sign == '+' else f"-{body}")
        return ' '.join(parts)


def as_affine(value) -> AffineScalar:
    if isinstance(value, AffineScalar):
        return value
    if isinstance(value, (int, Fraction)):
        return AffineScalar(value)
    raise TypeError(f"Valor não racional: {value!r}")


_SCALARS = (int, Fraction, AffineScalar)

_ZERO = AffineScalar()
NONLINEAR = AffineScalar(nonlinear=True)

PARITIES = ('even', 'odd', 'mixed', 'zero')


class TruncatedSeries:
    """
    Série truncada em t

    coeffs[i] é o coeficiente de t^(shift + i); coeficientes entre o último
    armazenado e `order` são zero. Nada é afirmado além de `order`
    (ordem absoluta, pode ser EXACT para polinômios exatos).
    """

    __slots__ = ('coeffs', 'shift', 'order', 'parity')

    def __init__(self, coeffs: Sequence = (), shift: int = 0, order=None,
                 parity: Optional[str] = None):
        values = [as_affine(c) for c in coeffs]
        if order is None:
            order = shift + len(values) - 1
        keep = len(values) if order == EXACT else max(0, min(len(values), order - shift + 1))
        values = values[:keep]
        while values and values[-1].is_zero():
            values.pop()
        self.coeffs = tuple(values)
        self.shift = shift
        self.order = order
        self.parity = parity if parity is not None else self.brute_parity()

    # -- construtores ------------------------------------------------------
    @classmethod
    def constant(cls, value, order=EXACT) -> 'TruncatedSeries':
        return cls([value], 0, order)

    @classmethod
    def monomial(cls, value, power: int, order=EXACT) -> 'TruncatedSeries':
        return cls([value], power, order)

    @classmethod
    def zero(cls, order=EXACT) -> 'TruncatedSeries':
        return cls([], 0, order)

    @classmethod
    def from_dict(cls, coefficients: Dict[int, object], order=EXACT) -> 'TruncatedSeries':
        if not coefficients:
            return cls.zero(order)
        low, high = min(coefficients), max(coefficients)
        values = [coefficients.get(k, 0) for k in range(low, high + 1)]
        return cls(values, low, order)

    # -- consultas ---------------------------------------------------------
    def coefficient(self, power: int) -> AffineScalar:
        if power > self.order:
            raise ExpansionMismatch(
                f"coeficiente de t^{power} pedido, mas a série só é conhecida até t^{self.order}")
        value = self._stored(power)
        if value.nonlinear:
            raise AffineOverflow(f"coeficiente de t^{power} é quadrático nas incógnitas")
        return value

    def _stored(self, power: int) -> AffineScalar:
        index = power - self.shift
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return _ZERO

    def items(self) -> Iterable[Tuple[int, AffineScalar]]:
        for index, value in enumerate(self.coeffs):
            if not value.is_zero():
                yield self.shift + index, value

    def valuation(self):
        """Menor expoente com coeficiente não nulo (order + 1 se nulo)"""
        for power, _ in self.items():
            return power
        return self.order + 1

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def is_plain(self) -> bool:
        return all(c.is_plain for c in self.coeffs)

    def unknowns(self) -> set:
        names = set()
        for c in self.coeffs:
            names |= c.unknowns()
        return names

    def brute_parity(self) -> str:
        has_even = has_odd = False
        for power, _ in self.items():
            if power % 2:
                has_odd = True
            else:
                has_even = True
        if has_even and has_odd:
            return 'mixed'
        if has_even:
            return 'even'
        if has_odd:
            return 'odd'
        return 'zero'

    # -- aritmética --------------------------------------------------------
    def __add__(self, other) -> 'TruncatedSeries':
        other = _as_series(other)
        order = min(self.order, other.order)
        acc: Dict[int, AffineScalar] = {}
        for series in (self, other):
            for power, value in series.items():
                if power <= order:
                    acc[power] = acc.get(power, _ZERO) + value
        return _from_acc(acc, order, _parity_sum(self.parity, other.parity))

    __radd__ = __add__

    def __neg__(self) -> 'TruncatedSeries':
        return TruncatedSeries([-c for c in self.coeffs], self.shift, self.order, self.parity)

    def __sub__(self, other) -> 'TruncatedSeries':
        return self + (-_as_series(other))

    def __rsub__(self, other) -> 'TruncatedSeries':
        return _as_series(other) - self

    def __mul__(self, other) -> 'TruncatedSeries':
        if isinstance(other, (int, Fraction, AffineScalar)):
            return self.scale(other)
        other = _as_series(other)
        va, vb = self.valuation(), other.valuation()
        order = min(self.order + vb, other.order + va)
        acc: Dict[int, AffineScalar] = {}
        right = list(other.items())
        for i, a in self.items():
            for j, b in right:
                k = i + j
                if k > order:
                    break
                acc[k] = acc.get(k, _ZERO) + a.product(b)
        return _from_acc(acc, order, _parity_product(self.parity, other.parity))

    __rmul__ = __mul__

    def scale(self, factor) -> 'TruncatedSeries':
        factor = as_affine(factor)
        if factor.is_zero():
            return TruncatedSeries.zero(self.order)
        return TruncatedSeries([c.product(factor) for c in self.coeffs], self.shift, self.order,
                               self.parity)

    def shifted(self, power: int) -> 'TruncatedSeries':
        """Multiplica por t^power"""
        parity = self.parity
        if power % 2 and parity in ('even', 'odd'):
            parity = 'odd' if parity == 'even' else 'even'
        return TruncatedSeries(self.coeffs, self.shift + power, self.order + power, parity)

    def truncate(self, order) -> 'TruncatedSeries':
        order = min(order, self.order)
        return TruncatedSeries(self.coeffs, self.shift, order)

    def differentiate(self) -> 'TruncatedSeries':
        acc = {}
        for power, value in self.items():
            if power:
                acc[power - 1] = value * power
        parity = {'even': 'odd', 'odd': 'even'}.get(self.parity, self.parity)
        if not acc:
            parity = 'zero'
        return _from_acc(acc, self.order - 1, parity)

    def invert(self, order=None) -> 'TruncatedSeries':
        """
        Inversa de t^v·u com u(0) racional não nulo: t^(-v)·u⁻¹

        Args:
            order: ordem absoluta desejada (obrigatória se a série for exata
                   e não for um monômio)

        Returns:
            Série com deslocamento -v
        """
        v = self.valuation()
        if self.is_zero():
            raise NotInvertible("série nula")
        lead = self._stored(v)
        if not lead.is_plain:
            raise NotInvertible(f"termo líder com incógnitas: {lead}")
        known = self.order if order is None else min(order + 2 * v, self.order)
        relative = known - v
        unit = [self._stored(v + i) for i in range(len(self.coeffs) - (v - self.shift))]
        if relative == EXACT:
            if len(unit) > 1:
                raise NotInvertible("inversa de série exata exige ordem finita")
            return TruncatedSeries([1 / lead.constant], -v, EXACT, self.parity)
        inv_lead = 1 / lead.constant
        result: List[AffineScalar] = [AffineScalar(inv_lead)]
        for n in range(1, int(relative) + 1):
            total = _ZERO
            for i in range(1, min(n, len(unit) - 1) + 1):
                a = unit[i]
                b = result[n - i]
                if a.is_zero() or b.is_zero():
                    continue
                total = total + a.product(b)
            result.append(-(total * inv_lead))
        return TruncatedSeries(result, -v, relative - v, self.parity if self.parity != 'zero' else None)

    def substitute(self, values: Dict[str, AffineScalar]) -> 'TruncatedSeries':
        return TruncatedSeries([c.substitute(values) for c in self.coeffs], self.shift,
                               self.order)

    def evaluate(self, t: float) -> float:
        return sum(value.to_float() * t ** power for power, value in self.items())

    def evaluate_derivatives(self, t: float, count: int = 3) -> List[float]:
        """Valores de s, s', s'', ... em t"""
        values = []
        series = self
        for _ in range(count):
            values.append(series.evaluate(t))
            series = series.differentiate()
        return values

    def dump(self) -> str:
        """Uma linha por potência: 't^k : c + Σ c_i·u_i'"""
        lines = [f"t^{power} : {value}" for power, value in self.items()]
        lines.append(f"O(t^{self.order + 1})" if self.order != EXACT else "exata")
        return '\n'.join(lines)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return (self - other).truncate(order).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        terms = ' + '.join(f"({value})t^{power}" for power, value in self.items()) or '0'
        return f"TruncatedSeries({terms}, order={self.order})"


def _as_series(value) -> TruncatedSeries:
    if isinstance(value, TruncatedSeries):
        return value
    return TruncatedSeries.constant(value)


def _from_acc(acc: Dict[int, AffineScalar], order, parity: Optional[str]) -> TruncatedSeries:
    acc = {k: v for k, v in acc.items() if not v.is_zero()}
    if not acc:
        return TruncatedSeries([], 0, order, 'zero')
    low, high = min(acc), max(acc)
    series = TruncatedSeries([acc.get(k, _ZERO) for k in range(low, high + 1)], low, order)
    # a paridade declarada é preservada quando é compatível com os coeficientes
    if parity in ('even', 'odd') and series.parity in (parity, 'zero'):
        series.parity = parity
    return series


def _parity_sum(a: str, b: str) -> str:
    if a == 'zero':
        return b
    if b == 'zero' or a == b:
        return a
    return 'mixed'


def _parity_product(a: str, b: str) -> str:
    if 'zero' in (a, b):
        return 'zero'
    if 'mixed' in (a, b):
        return 'mixed'
    return 'even' if a == b else 'odd'


def sin_squared(order: int) -> TruncatedSeries:
    """sin²t = Σ (-1)^(k+1) 2^(2k-1) t^(2k) / (2k)!"""
    acc = {}
    for k in range(1, order // 2 + 1):
        acc[2 * k] = Fraction((-1) ** (k + 1) * 2 ** (2 * k - 1), math.factorial(2 * k))
    return TruncatedSeries.from_dict(acc, order)


class SeriesMatrix:
    """Matriz simétrica ou não, esparsa, de séries (None/ausente = zero exato)"""

    def __init__(self, size: int, entries: Optional[Dict[Tuple[int, int], TruncatedSeries]] = None):
        self.size = size
        self.entries: Dict[Tuple[int, int], TruncatedSeries] = {}
        for key, value in (entries or {}).items():
            self[key] = value

    @classmethod
    def identity(cls, size: int) -> 'SeriesMatrix':
        return cls(size, {(i, i): TruncatedSeries.constant(1) for i in range(size)})

    @classmethod
    def from_constants(cls, rows: Sequence[Sequence]) -> 'SeriesMatrix':
        size = len(rows)
        entries = {}
        for i, row in enumerate(rows):
            for j, value in enumerate(row):
                if value:
                    entries[(i, j)] = TruncatedSeries.constant(value)
        return cls(size, entries)

    def __getitem__(self, key: Tuple[int, int]) -> Optional[TruncatedSeries]:
        return self.entries.get(key)

    def __setitem__(self, key: Tuple[int, int], value: Optional[TruncatedSeries]):
        if value is None or (value.is_zero() and value.order == EXACT):
            self.entries.pop(key, None)
        else:
            self.entries[key] = value

    def get(self, i: int, j: int, order=EXACT) -> TruncatedSeries:
        value = self.entries.get((i, j))
        return value if value is not None else TruncatedSeries.zero(order)

    def row(self, i: int) -> List[Tuple[int, TruncatedSeries]]:
        return [(j, v) for (r, j), v in self.entries.items() if r == i]

    def rows(self) -> Dict[int, List[Tuple[int, TruncatedSeries]]]:
        by_row: Dict[int, List[Tuple[int, TruncatedSeries]]] = {}
        for (i, j), value in self.entries.items():
            by_row.setdefault(i, []).append((j, value))
        return by_row

    def map(self, fn) -> 'SeriesMatrix':
        return SeriesMatrix(self.size, {k: fn(v) for k, v in self.entries.items()})

    def transpose(self) -> 'SeriesMatrix':
        return SeriesMatrix(self.size, {(j, i): v for (i, j), v in self.entries.items()})

    def differentiate(self) -> 'SeriesMatrix':
        return self.map(lambda s: s.differentiate())

    def substitute(self, values) -> 'SeriesMatrix':
        return self.map(lambda s: s.substitute(values))

    def scale(self, factor) -> 'SeriesMatrix':
        return self.map(lambda s: s * factor)

    def __add__(self, other: 'SeriesMatrix') -> 'SeriesMatrix':
        result = SeriesMatrix(self.size, dict(self.entries))
        for key, value in other.entries.items():
            current = result.entries.get(key)
            result[key] = value if current is None else current + value
        return result

    def __neg__(self) -> 'SeriesMatrix':
        return self.map(lambda s: -s)

    def __sub__(self, other: 'SeriesMatrix') -> 'SeriesMatrix':
        return self + (-other)

    def __matmul__(self, other: 'SeriesMatrix') -> 'SeriesMatrix':
        right = other.rows()
        acc: Dict[Tuple[int, int], TruncatedSeries] = {}
        for (i, k), a in self.entries.items():
            for j, b in right.get(k, ()):
                term = a * b
                acc[(i, j)] = term if (i, j) not in acc else acc[(i, j)] + term
        return SeriesMatrix(self.size, acc)

    def trace(self) -> TruncatedSeries:
        total = TruncatedSeries.zero()
        for i in range(self.size):
            value = self.entries.get((i, i))
            if value is not None:
                total = total + value
        return total

    def is_symmetric(self) -> bool:
        keys = set(self.entries) | {(j, i) for (i, j) in self.entries}
        return all(self.get(i, j) == self.get(j, i) for (i, j) in keys)

    def constant_rows(self) -> List[List[Fraction]]:
        """Matriz de termos constantes (exige entradas racionais)"""
        rows = [[Fraction(0)] * self.size for _ in range(self.size)]
        for (i, j), value in self.entries.items():
            rows[i][j] = value.coefficient(0).constant
        return rows

    def invert(self, pivot_shifts: Optional[Sequence[int]] = None) -> 'SeriesMatrix':
        """
        Inversa por Gauss-Jordan no anel de séries

        Com S = diag(t^s_i), P = S·P̃·S e P̃ tem termo constante invertível;
        devolve S⁻¹·P̃⁻¹·S⁻¹.

        Args:
            pivot_shifts: expoentes s_i (padrão: todos zero)
        """
        n = self.size
        shifts = list(pivot_shifts) if pivot_shifts is not None else [0] * n
        work = [[None] * n for _ in range(n)]
        for (i, j), value in self.entries.items():
            work[i][j] = value.shifted(-(shifts[i] + shifts[j]))
        inverse = [[TruncatedSeries.constant(1) if i == j else None for j in range(n)]
                   for i in range(n)]
        for k in range(n):
            pivot = work[k][k]
            if pivot is None or pivot.valuation() != 0:
                raise NotInvertible(f"pivô {k} sem termo constante invertível")
            inv_pivot = pivot.invert()
            work[k] = [None if v is None else v * inv_pivot for v in work[k]]
            inverse[k] = [None if v is None else v * inv_pivot for v in inverse[k]]
            for i in range(n):
                factor = work[i][k]
                if i == k or factor is None or factor.is_zero():
                    continue
                for target, source in ((work, work), (inverse, inverse)):
                    for j in range(n):
                        if source[k][j] is None:
                            continue
                        term = factor * source[k][j]
                        target[i][j] = -term if target[i][j] is None else target[i][j] - term
        result = SeriesMatrix(n)
        for i in range(n):
            for j in range(n):
                value = inverse[i][j]
                if value is not None and not value.is_zero():
                    result[(i, j)] = value.shifted(-(shifts[i] + shifts[j]))
        return result


class LinearSolveResult:
    """Resultado de solve_linear_batch"""

    def __init__(self, solved: Dict[str, AffineScalar], free: List[str],
                 obstructions: List[Tuple[int, AffineScalar]]):
        self.solved = solved
        self.free = free
        self.obstructions = obstructions

    @property
    def consistent(self) -> bool:
        return not self.obstructions

    def assignment(self, free_values: Optional[Dict[str, Rational]] = None,
                   default: Rational = 0) -> Dict[str, Fraction]:
        """Valores numéricos de todas as incógnitas com livres fixadas"""
        free_values = free_values or {}
        values = {name: AffineScalar(Fraction(free_values.get(name, default)))
                  for name in self.free}
        result = {name: value.constant for name, value in values.items()}
        for name, expression in self.solved.items():
            result[name] = expression.substitute(values).constant
        return result


def to_sympy_matrix(rows: Sequence[Sequence[Rational]]) -> sympy.Matrix:
    """Matriz racional exata do sympy a partir de Fractions"""
    return sympy.Matrix([[sympy.Rational(Fraction(v).numerator, Fraction(v).denominator) for v in row]
                         for row in rows])


def from_sympy(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


def from_sympy_matrix(matrix: sympy.Matrix) -> List[List[Fraction]]:
    return [[from_sympy(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def solve_linear_batch(equations: Sequence[AffineScalar],
                       preference: Sequence[str] = ()) -> LinearSolveResult:
    """
    Resolve exatamente sobre Q o sistema afim Σ a·x + c = 0 (forma escalonada reduzida do sympy)

    As colunas seguem `preference` e depois as demais incógnitas em ordem
    alfabética, de modo que os pivôs são as primeiras colunas possíveis.

    Args:
        equations: expressões afins que devem ser zero
        preference: ordem de preferência das incógnitas como pivôs

    Returns:
        LinearSolveResult com incógnitas resolvidas (em função das livres),
        livres e linhas inconsistentes (índice original, resíduo)
    """
    unknowns = set()
    for eq in equations:
        if eq.nonlinear:
            raise AffineOverflow("equação quadrática nas incógnitas")
        unknowns |= eq.unknowns()
    columns = list(dict.fromkeys(preference))
    columns += sorted(unknowns - set(columns))
    if not equations:
        return LinearSolveResult({}, columns, [])

    augmented = to_sympy_matrix([[eq.coefficient(c) for c in columns] + [eq.constant]
                                 for eq in equations])
    width = len(columns)
    kept = list(range(len(equations)))
    obstructions: List[Tuple[int, AffineScalar]] = []
    if width in augmented.rref()[1]:
        kept, obstructions = _split_obstructions(augmented, width)

    solved: Dict[str, AffineScalar] = {}
    pivots = ()
    if kept and width:
        reduced, pivots = augmented.extract(kept, list(range(width + 1))).rref()
        for r, p in enumerate(pivots):
            terms = {columns[j]: -from_sympy(reduced[r, j])
                     for j in range(width) if j not in pivots and reduced[r, j] != 0}
            solved[columns[p]] = AffineScalar(-from_sympy(reduced[r, width]), terms)
    free = [c for k, c in enumerate(columns) if k not in pivots]
    return LinearSolveResult(solved, free, obstructions)


def _split_obstructions(augmented: sympy.Matrix,
                        width: int) -> Tuple[List[int], List[Tuple[int, AffineScalar]]]:
    """
    Percorre as equações em ordem: uma linha cujo lado esquerdo depende das
    anteriores e cujo resíduo não se anula é obstrução
    """
    kept: List[int] = []
    obstructions: List[Tuple[int, AffineScalar]] = []
    rank = 0
    lhs = list(range(width))
    for i in range(augmented.rows):
        new_rank = augmented.extract(kept + [i], lhs).rank() if width else 0
        if new_rank > rank:
            kept.append(i)
            rank = new_rank
            continue
        residual = augmented[i, width]
        if kept and width:
            previous = augmented.extract(kept, lhs)
            weights, params = previous.T.gauss_jordan_solve(augmented.extract([i], lhs).T)
            weights = weights.subs({p: 0 for p in params})
            residual -= (weights.T * augmented.extract(kept, [width]))[0, 0]
        if residual != 0:
            obstructions.append((i, AffineScalar(from_sympy(residual))))
        else:
            kept.append(i)
    return kept, obstructions
