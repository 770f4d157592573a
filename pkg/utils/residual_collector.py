"""
Coletor de amostras de resíduo para o certificado de decaimento
"""
from collections import defaultdict, OrderedDict
from typing import Any, Dict, List, Optional, Tuple
import json

import numpy as np

from config.settings import CERTIFICATE_CONFIG


class ResidualCollector:
    """Guarda |resíduo(t)| por equação e ajusta a inclinação log-log"""

    def __init__(self):
        self.samples = defaultdict(list)  # {equation_id: [(t, |r|)]}
        self.required: Dict[str, Optional[float]] = OrderedDict()
        self.exact = set()  # equações com resíduo identicamente nulo
        self.checks: List[Dict[str, Any]] = []  # verificações exatas adicionais

    def register(self, equation_id: str, required: Optional[float]):
        """
        Declara uma equação do certificado

        Args:
            equation_id: identificador da equação
            required: inclinação mínima exigida (None = informativa)
        """
        self.required[equation_id] = required

    def add_sample(self, equation_id: str, t: float, value: float):
        self.samples[equation_id].append((t, abs(value)))

    def add_exact(self, equation_id: str):
        self.exact.add(equation_id)

    def add_check(self, name: str, passed: bool, detail: str = ''):
        self.checks.append({'name': name, 'passed': passed, 'detail': detail})

    def fit_slope(self, equation_id: str) -> Optional[float]:
        """
        Inclinação por mínimos quadrados de log|r| contra log t

        Returns:
            Inclinação, ou None se não houver pontos não nulos suficientes
        """
        threshold = CERTIFICATE_CONFIG['zero_threshold']
        points = [(t, r) for t, r in self.samples.get(equation_id, []) if r > threshold]
        if len(points) < 2:
            return None
        log_t = np.log10([t for t, _ in points])
        log_r = np.log10([r for _, r in points])
        return float(np.polyfit(log_t, log_r, 1)[0])

    def status(self, equation_id: str) -> Tuple[str, Optional[float]]:
        """(situação, inclinação) com situação em exact/passed/failed/info"""
        if equation_id in self.exact:
            return 'exact', None
        slope = self.fit_slope(equation_id)
        required = self.required.get(equation_id)
        if required is None:
            return 'info', slope
        if slope is None:
            # todos os pontos abaixo do limiar numérico
            return 'exact', None
        return ('passed' if slope >= required else 'failed'), slope

    def failures(self) -> List[Tuple[str, float, float]]:
        failed = []
        for equation_id, required in self.required.items():
            state, slope = self.status(equation_id)
            if state == 'failed':
                failed.append((equation_id, slope, required))
        return failed

    def get_summary(self) -> Dict[str, Any]:
        """
        Resumo completo do certificado

        Returns:
            Dicionário com as equações, inclinações e verificações exatas
        """
        rows = []
        for equation_id, required in self.required.items():
            state, slope = self.status(equation_id)
            rows.append({
                'equation': equation_id,
                'required': required,
                'slope': slope,
                'status': state,
                'samples': [[t, r] for t, r in self.samples.get(equation_id, [])],
            })
        return {
            'rows': rows,
            'checks': list(self.checks),
            'passed': not self.failures() and all(c['passed'] for c in self.checks),
        }

    def export_to_json(self, filepath: str):
        """
        Exporta o certificado para um arquivo JSON

        Args:
            filepath: Caminho do arquivo de saída
        """
        with open(filepath, 'w', encoding='utf-8') as f:
            json.dump(self.get_summary(), f, indent=2, ensure_ascii=False)
