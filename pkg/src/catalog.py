"""
Catálogo de exemplos embutidos (arquivos JSON em catalog/)
"""
import os
from typing import Any, Dict, List, Optional, Tuple

from config.settings import CATALOG_CONFIG
from src.exceptions import InputSchemaError
from src.liealg import FibrationData
from src.smoothness import SmoothnessData
from utils.rational_io import load_json

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def catalog_directory() -> str:
    return os.path.join(ROOT, CATALOG_CONFIG['directory'])


def catalog() -> List[Dict[str, str]]:
    """
    Lista os exemplos disponíveis

    Returns:
        Lista de {'name', 'description'} em ordem alfabética
    """
    entries = []
    directory = catalog_directory()
    for filename in sorted(os.listdir(directory)):
        if not filename.endswith('.json'):
            continue
        raw = load_json(os.path.join(directory, filename))
        entries.append({'name': filename[:-5], 'description': str(raw.get('description', ''))})
    return entries


def resolve_name(name: str, n: Optional[int] = None) -> str:
    """
    example3 aceita o parâmetro n (example3 + n=2 -> example3_n2)

    Em example3_n<n> o bloco p₁ tem dimensão 4(n−1), não 4n: a linha de
    compatibilidade sai −3(Σφ_ii(0) + 4(n−1)ψ(0)) = λ (coeficiente −12 em ψ(0)
    para n = 2) e a contagem de parâmetros livres não muda.
    """
    if name == 'example3':
        return f"example3_n{n or CATALOG_CONFIG['example3_default_n']}"
    if n is not None:
        raise InputSchemaError('n', f"{name} não aceita o parâmetro n")
    return name


def from_raw(raw: Dict[str, Any], name: str = '') -> Tuple[FibrationData, Optional[SmoothnessData]]:
    """
    Lê álgebra e (se houver) dados de suavidade de um dicionário

    Returns:
        (FibrationData, SmoothnessData ou None)
    """
    data = FibrationData.from_dict(raw, name)
    sd = SmoothnessData.from_dict(raw['smoothness'], data) if 'smoothness' in raw else None
    return data, sd


def load(name: str, n: Optional[int] = None) -> Tuple[FibrationData, Optional[SmoothnessData]]:
    """
    Carrega um exemplo do catálogo

    Args:
        name: nome do exemplo (sphere3, example1, example3, ...)
        n: parâmetro de example3

    Returns:
        (FibrationData, SmoothnessData ou None)
    """
    resolved = resolve_name(name, n)
    path = os.path.join(catalog_directory(), f"{resolved}.json")
    if not os.path.exists(path):
        known = ', '.join(entry['name'] for entry in catalog())
        raise InputSchemaError('example', f"exemplo desconhecido: {resolved} (disponíveis: {known})")
    return from_raw(load_json(path), resolved)


def load_file(algebra: str, metric: Optional[str] = None) -> Tuple[FibrationData, Optional[SmoothnessData]]:
    """
    Carrega dados do usuário

    Args:
        algebra: JSON com a álgebra (pode conter a seção smoothness)
        metric: JSON opcional só com a seção smoothness

    Returns:
        (FibrationData, SmoothnessData ou None)
    """
    raw = load_json(algebra)
    name = os.path.splitext(os.path.basename(algebra))[0]
    if metric is not None:
        extra = load_json(metric)
        raw = dict(raw, smoothness=extra.get('smoothness', extra))
    return from_raw(raw, name)
