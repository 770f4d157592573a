"""
Dados de Lie da fibração H ⊂ K ⊂ G: base, constantes de estrutura, forma de
Killing, decomposição em módulos e operadores de entrelaçamento
"""
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.exceptions import InputSchemaError
from utils.rational_io import RationalIO, require

Bracket = Dict[Tuple[int, int], Dict[int, Fraction]]

EQUIVALENCE_TYPES = {'real': 1, 'complex': 2, 'symplectic': 4}


@dataclass
class Module:
    """Submódulo declarado (índices da base de g)"""
    name: str
    indices: List[int]
    trivial: bool = False


@dataclass
class Equivalence:
    """Par de módulos equivalentes com o entrelaçamento f (matriz esparsa)"""
    module_a: str
    module_b: str
    kind: str
    level: str = 'K'
    intertwiner: Dict[int, Dict[int, Fraction]] = field(default_factory=dict)
    complex_structures: List[Dict[int, Dict[int, Fraction]]] = field(default_factory=list)


@dataclass
class Violation:
    kind: str
    indices: Tuple
    detail: str = ''

    def __str__(self) -> str:
        return f"{self.kind} {self.indices} {self.detail}".strip()


@dataclass
class ValidationReport:
    violations: List[Violation]
    warnings: List[str]
    unimodular: bool

    @property
    def passed(self) -> bool:
        return not self.violations


class FibrationData:
    """
    Tripla H ⊂ K ⊂ G em uma base fixa de g

    Os colchetes são guardados como coeficientes c_ij^u com
    [e_i, e_j] = Σ_u c_ij^u e_u; q_norms[u] = Q(e_u, e_u) (base Q-ortogonal).
    """

    def __init__(self, labels: Sequence[str], brackets: Bracket,
                 index_I: Sequence[int], index_J: Sequence[int],
                 q_norms: Optional[Sequence[Fraction]] = None,
                 m_modules: Optional[List[Module]] = None,
                 p_modules: Optional[List[Module]] = None,
                 h_modules: Optional[List[Module]] = None,
                 equivalences: Optional[List[Equivalence]] = None,
                 declared: Optional[Dict[Tuple[int, int, int], Fraction]] = None,
                 name: str = '', raw: Optional[Dict[str, Any]] = None):
        self.name = name
        self.labels = list(labels)
        self.dim_g = len(self.labels)
        self.brackets: Bracket = {k: dict(v) for k, v in brackets.items() if v}
        self.index_I = list(index_I)
        self.index_J = list(index_J)
        taken = set(self.index_I) | set(self.index_J)
        self.index_H = [i for i in range(self.dim_g) if i not in taken]
        self.q_norms = [Fraction(q) for q in (q_norms or [1] * self.dim_g)]
        self.m_modules = m_modules or []
        self.p_modules = p_modules or [Module('p', list(self.index_I))]
        self.h_modules = h_modules or []
        self.equivalences = equivalences or []
        self.declared = declared or {}
        self.raw = raw or {}

        # posições em n = p ⊕ m
        self.n_indices = self.index_I + self.index_J
        self.position = {g: pos for pos, g in enumerate(self.n_indices)}
        self.dim_p = len(self.index_I)
        self.dim_m = len(self.index_J)
        self.dim_h = len(self.index_H)
        self.dim_n = self.dim_p + self.dim_m
        self._killing = None
        self._gamma_n = None

    # -- consultas básicas ---------------------------------------------------
    def bracket(self, i: int, j: int) -> Dict[int, Fraction]:
        return self.brackets.get((i, j), {})

    def c(self, i: int, j: int, u: int) -> Fraction:
        return self.brackets.get((i, j), {}).get(u, Fraction(0))

    def lowered(self, i: int, j: int, u: int) -> Fraction:
        """Γ̂_ij^u = Q([e_i, e_j], e_u)"""
        return self.c(i, j, u) * self.q_norms[u]

    def index_of(self, label) -> int:
        if isinstance(label, int):
            return label
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputSchemaError('basis', f"rótulo desconhecido: {label}")

    def module(self, name: str) -> Module:
        for module in self.m_modules + self.p_modules + self.h_modules:
            if module.name == name:
                return module
        raise InputSchemaError('modules', f"módulo desconhecido: {name}")

    def module_side(self, name: str) -> str:
        """'p', 'm' ou 'mixed' conforme os índices do módulo"""
        indices = set(self.module(name).indices)
        if indices <= set(self.index_I):
            return 'p'
        if indices <= set(self.index_J):
            return 'm'
        return 'mixed'

    def gamma_n(self) -> List[Tuple[int, int, int, Fraction]]:
        """Entradas não nulas c_ij^u com i, j, u em n, em posições de n"""
        if self._gamma_n is None:
            entries = []
            for (i, j), targets in sorted(self.brackets.items()):
                if i not in self.position or j not in self.position:
                    continue
                for u, value in sorted(targets.items()):
                    if u in self.position and value:
                        entries.append((self.position[i], self.position[j],
                                        self.position[u], value))
            self._gamma_n = entries
        return self._gamma_n

    def trace_form(self) -> List[Fraction]:
        """z_k = Σ_s c_ks^s para cada k em n (posições de n)"""
        values = []
        for k in self.n_indices:
            values.append(sum((self.c(k, s, s) for s in range(self.dim_g)), Fraction(0)))
        return values

    @property
    def unimodular(self) -> bool:
        return all(sum((self.c(k, s, s) for s in range(self.dim_g)), Fraction(0)) == 0
                   for k in range(self.dim_g))

    @property
    def killing(self) -> 'KillingForm':
        if self._killing is None:
            self._killing = killing_form(self)
        return self._killing

    def with_brackets(self, brackets: Bracket) -> 'FibrationData':
        """Cópia com outros colchetes (mesmos índices e módulos)"""
        return FibrationData(self.labels, brackets, self.index_I, self.index_J,
                             self.q_norms, self.m_modules, self.p_modules, self.h_modules,
                             self.equivalences, None, self.name, self.raw)

    # -- leitura -------------------------------------------------------------
    @classmethod
    def from_dict(cls, raw: Dict[str, Any], name: str = '') -> 'FibrationData':
        """
        Constrói a partir do esquema de entrada

        Args:
            raw: dicionário com basis, gamma, index_I, index_J, módulos...
            name: nome do exemplo

        Returns:
            FibrationData (ainda não validado)
        """
        labels = [str(label) for label in require(raw, 'basis')]
        lookup = {label: pos for pos, label in enumerate(labels)}

        def resolve(value, pointer):
            if isinstance(value, int) and not isinstance(value, bool):
                if not 0 <= value < len(labels):
                    raise InputSchemaError(pointer, f"índice fora da base: {value}")
                return value
            if value in lookup:
                return lookup[value]
            raise InputSchemaError(pointer, f"rótulo desconhecido: {value!r}")

        declared: Dict[Tuple[int, int, int], Fraction] = {}
        for pos, triple in enumerate(require(raw, 'gamma')):
            pointer = f"gamma/{pos}"
            if not isinstance(triple, list) or len(triple) != 4:
                raise InputSchemaError(pointer, "esperado [i, j, u, \"p/q\"]")
            i, j, u = (resolve(x, pointer) for x in triple[:3])
            value = RationalIO.parse(triple[3], pointer)
            key = (i, j, u)
            declared[key] = declared.get(key, Fraction(0)) + value

        brackets: Bracket = defaultdict(dict)
        for (i, j, u), value in declared.items():
            brackets[(i, j)][u] = value
            if (j, i, u) not in declared:
                brackets[(j, i)][u] = -value
        brackets = {k: {u: v for u, v in t.items() if v} for k, t in brackets.items()}

        def modules(key):
            result = []
            for pos, item in enumerate(raw.get(key, [])):
                pointer = f"{key}/{pos}"
                indices = [resolve(x, pointer) for x in require(item, 'indices', pointer)]
                result.append(Module(str(require(item, 'name', pointer)), indices,
                                     bool(item.get('trivial', False))))
            return result

        def sparse_map(rows, pointer):
            matrix: Dict[int, Dict[int, Fraction]] = defaultdict(dict)
            for pos, (src, dst, value) in enumerate(rows or []):
                matrix[resolve(src, pointer)][resolve(dst, pointer)] = \
                    RationalIO.parse(value, f"{pointer}/{pos}")
            return dict(matrix)

        equivalences = []
        for pos, item in enumerate(raw.get('equivalences', [])):
            pointer = f"equivalences/{pos}"
            kind = str(require(item, 'type', pointer))
            if kind not in EQUIVALENCE_TYPES:
                raise InputSchemaError(f"{pointer}/type", f"tipo inválido: {kind}")
            equivalences.append(Equivalence(
                module_a=str(require(item, 'a', pointer)),
                module_b=str(require(item, 'b', pointer)),
                kind=kind,
                level=str(item.get('level', 'K')),
                intertwiner=sparse_map(item.get('map'), f"{pointer}/map"),
                complex_structures=[sparse_map(js, f"{pointer}/complex_structures")
                                    for js in item.get('complex_structures', [])],
            ))

        q_norms = [RationalIO.parse(q, f"q_norms/{k}") for k, q in enumerate(raw['q_norms'])] \
            if 'q_norms' in raw else None
        index_I = [resolve(x, 'index_I') for x in require(raw, 'index_I')]
        index_J = [resolve(x, 'index_J') for x in raw.get('index_J', [])]
        p_modules = modules('p_modules') or None
        return cls(labels, brackets, index_I, index_J, q_norms, modules('m_modules'),
                   p_modules, modules('h_modules'), equivalences, declared,
                   name=name or str(raw.get('name', '')), raw=raw)

    def __repr__(self) -> str:
        return (f"FibrationData({self.name!r}, dim_g={self.dim_g}, dim_p={self.dim_p}, "
                f"dim_m={self.dim_m})")


class KillingForm:
    """B(X, Y) = tr(ad X ∘ ad Y) sobre toda a base de g"""

    def __init__(self, matrix: List[List[Fraction]]):
        self.matrix = matrix

    def __getitem__(self, key: Tuple[int, int]) -> Fraction:
        u, v = key
        return self.matrix[u][v]

    def is_symmetric(self) -> bool:
        size = len(self.matrix)
        return all(self.matrix[u][v] == self.matrix[v][u]
                   for u in range(size) for v in range(u + 1, size))

    def restricted(self, indices: Sequence[int]) -> List[List[Fraction]]:
        return [[self.matrix[u][v] for v in indices] for u in indices]

    def invariance_defects(self, data: FibrationData) -> List[Tuple[int, int, int]]:
        """Triplas (z, x, y) com B([z,x],y) + B(x,[z,y]) ≠ 0"""
        defects = []
        size = data.dim_g
        for z in range(size):
            for x in range(size):
                for y in range(x, size):
                    total = sum((c * self.matrix[a][y] for a, c in data.bracket(z, x).items()),
                                Fraction(0))
                    total += sum((c * self.matrix[x][b] for b, c in data.bracket(z, y).items()),
                                 Fraction(0))
                    if total:
                        defects.append((z, x, y))
        return defects


def killing_form(data: FibrationData) -> KillingForm:
    """
    Forma de Killing B_uv = Σ_{a,b} c_ua^b c_vb^a

    Args:
        data: dados de Lie

    Returns:
        KillingForm exata
    """
    size = data.dim_g
    # ad_u como dicionário esparso (linha b, coluna a) -> c_ua^b
    ad = []
    for u in range(size):
        entries = {}
        for a in range(size):
            for b, value in data.bracket(u, a).items():
                entries[(b, a)] = value
        ad.append(entries)
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for u in range(size):
        for v in range(u, size):
            total = Fraction(0)
            for (b, a), value in ad[u].items():
                other = ad[v].get((a, b))
                if other:
                    total += value * other
            matrix[u][v] = matrix[v][u] = total
    return KillingForm(matrix)


def _apply(matrix: Dict[int, Dict[int, Fraction]], vector: Dict[int, Fraction]) -> Dict[int, Fraction]:
    result: Dict[int, Fraction] = defaultdict(Fraction)
    for src, value in vector.items():
        for dst, coef in matrix.get(src, {}).items():
            result[dst] += coef * value
    return {k: v for k, v in result.items() if v}


def _ad(data: FibrationData, r: int, vector: Dict[int, Fraction]) -> Dict[int, Fraction]:
    result: Dict[int, Fraction] = defaultdict(Fraction)
    for i, value in vector.items():
        for u, coef in data.bracket(r, i).items():
            result[u] += coef * value
    return {k: v for k, v in result.items() if v}


def validate(data: FibrationData) -> ValidationReport:
    """
    Verifica exatamente as identidades usadas pelas fórmulas de curvatura

    Args:
        data: dados de Lie

    Returns:
        ValidationReport; violações são entradas do relatório, nunca exceções
    """
    violations: List[Violation] = []
    warnings: List[str] = []
    size = data.dim_g
    I, J = set(data.index_I), set(data.index_J)

    # partições
    if I & J:
        violations.append(Violation('partition', tuple(sorted(I & J)), 'I e J se intersectam'))
    for q_index, q in enumerate(data.q_norms):
        if q <= 0:
            violations.append(Violation('q_norm', (q_index,), f"Q(e,e) = {q} não positivo"))
    covered = [i for module in data.m_modules for i in module.indices]
    if data.m_modules and sorted(covered) != sorted(data.index_J):
        violations.append(Violation('partition', tuple(sorted(covered)),
                                    'm_modules não particionam J'))
    covered = [i for module in data.p_modules for i in module.indices]
    if sorted(covered) != sorted(data.index_I):
        violations.append(Violation('partition', tuple(sorted(covered)),
                                    'p_modules não particionam I'))

    # antissimetria
    for (i, j, u), value in data.declared.items():
        if i == j and value:
            violations.append(Violation('antisymmetry', (i, j, u), f"c_ii^u = {value}"))
        other = data.declared.get((j, i, u))
        if other is not None and i < j and other != -value:
            violations.append(Violation('antisymmetry', (i, j, u),
                                        f"c_ij^u = {value}, c_ji^u = {other}"))

    # simetrias de Ad_K nas constantes abaixadas
    for r in data.index_I:
        for s in range(size):
            for k in range(s, size):
                in_I = (s in I) + (k in I)
                in_J = (s in J) + (k in J)
                if in_I == 2 or (in_J == 2):
                    left, right = data.lowered(r, s, k), data.lowered(r, k, s)
                    if left != -right:
                        violations.append(Violation('skew', (r, s, k), f"{left} != -({right})"))
    for r, s, k in _triples_two_in_I(data):
        value = data.lowered(r, s, k)
        if value:
            violations.append(Violation('skew', (r, s, k), f"dois índices em I e um em J: {value}"))

    # identidade de Jacobi
    for i, j, k in combinations(range(size), 3):
        total: Dict[int, Fraction] = defaultdict(Fraction)
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            for m, coef in data.bracket(a, b).items():
                for l, coef2 in data.bracket(m, c).items():
                    total[l] += coef * coef2
        bad = {l: v for l, v in total.items() if v}
        if bad:
            violations.append(Violation('jacobi', (i, j, k), f"resíduo {bad}"))

    # invariância de B, consequência de Jacobi
    if not any(v.kind == 'jacobi' for v in violations):
        for z, x, y in data.killing.invariance_defects(data):
            violations.append(Violation('killing_invariance', (z, x, y),
                                        "B([z,x],y) + B(x,[z,y]) != 0"))

    # entrelaçamentos
    for eq in data.equivalences:
        try:
            module_a, module_b = data.module(eq.module_a), data.module(eq.module_b)
        except InputSchemaError as e:
            violations.append(Violation('equivalence', (eq.module_a, eq.module_b), str(e)))
            continue
        if not eq.intertwiner:
            continue
        acting = data.index_H + (data.index_I if eq.level == 'K' else [])
        violations.extend(_check_intertwiner(data, eq, module_a, module_b, acting))

    if not check_condition_star(data):
        restricted = 'C=0' in data.raw.get('smoothness', {}).get('restrictions', [])
        if restricted:
            warnings.append("condição (*) falha; restrição C ≡ 0 ativada")
        else:
            warnings.append("condição (*) falha e nenhuma restrição C ≡ 0 foi declarada")

    return ValidationReport(violations, warnings, data.unimodular)


def _triples_two_in_I(data: FibrationData):
    I, J = data.index_I, data.index_J
    for a in I:
        for b in I:
            for c in J:
                yield a, b, c
                yield a, c, b
                yield c, a, b


def _check_intertwiner(data: FibrationData, eq: Equivalence, module_a: Module,
                       module_b: Module, acting: Sequence[int]) -> List[Violation]:
    violations = []
    f = eq.intertwiner
    # isometria a menos de constante: Q(f e_i, f e_j) = κ Q(e_i, e_j)
    ratios = set()
    for i in module_a.indices:
        for j in module_a.indices:
            fi, fj = _apply(f, {i: Fraction(1)}), _apply(f, {j: Fraction(1)})
            inner = sum((v * fj.get(k, 0) * data.q_norms[k] for k, v in fi.items()), Fraction(0))
            if i == j:
                ratios.add(inner / data.q_norms[i])
            elif inner:
                violations.append(Violation('intertwiner', (eq.module_a, eq.module_b, i, j),
                                            'f não preserva ortogonalidade'))
    if len(ratios) > 1 or (ratios and min(ratios) <= 0):
        violations.append(Violation('intertwiner', (eq.module_a, eq.module_b),
                                    'f não é isometria (a menos de escala)'))
    for r in acting:
        for i in module_a.indices:
            lhs = _apply(f, _ad(data, r, {i: Fraction(1)}))
            rhs = _ad(data, r, _apply(f, {i: Fraction(1)}))
            if lhs != rhs:
                violations.append(Violation('intertwiner', (eq.module_a, eq.module_b, r, i),
                                            'f não comuta com a ação'))
    for position, J_map in enumerate(eq.complex_structures):
        for i in module_b.indices:
            square = _apply(J_map, _apply(J_map, {i: Fraction(1)}))
            if square != {i: Fraction(-1)}:
                violations.append(Violation('complex_structure', (eq.module_b, position, i),
                                            'J² ≠ -1'))
    return violations


def check_condition_star(data: FibrationData) -> bool:
    """
    Condição (*): nenhuma equivalência declarada liga um submódulo de p a um de m

    Args:
        data: dados de Lie

    Returns:
        True se a condição vale
    """
    for eq in data.equivalences:
        sides = {data.module_side(eq.module_a), data.module_side(eq.module_b)}
        if sides == {'p', 'm'}:
            return False
    return True
