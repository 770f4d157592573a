"""
Utilitários de leitura e escrita de racionais e arquivos de entrada
"""
import json
import os
from fractions import Fraction
from typing import Any, Dict, Optional

from config.settings import REPORT_CONFIG
from src.exceptions import InputSchemaError


class RationalIO:
    """Conversões entre racionais exatos e o formato textual "p/q" """

    @staticmethod
    def parse(value: Any, pointer: str = '') -> Fraction:
        """
        Converte "p/q", inteiro ou decimal em texto para Fraction

        Args:
            value: valor lido do arquivo
            pointer: caminho do campo, para mensagens de erro

        Returns:
            Fraction exata
        """
        if isinstance(value, bool):
            raise InputSchemaError(pointer, f"booleano não é racional: {value}")
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        if isinstance(value, str):
            try:
                return Fraction(value.strip())
            except (ValueError, ZeroDivisionError):
                raise InputSchemaError(pointer, f"racional inválido: {value!r}")
        # floats são recusados: a entrada deve ser exata
        raise InputSchemaError(pointer, f"use texto \"p/q\" em vez de {value!r}")

    @staticmethod
    def dump(value: Fraction) -> str:
        """Serializa sem perda ("p/q" ou inteiro)"""
        return str(Fraction(value))

    @staticmethod
    def display(value: Fraction, max_denominator: Optional[int] = None) -> str:
        """
        Formata para relatório; COHOM1_PRECISION limita denominadores

        Args:
            value: racional
            max_denominator: limite explícito (padrão: variável de ambiente)
        """
        value = Fraction(value)
        if max_denominator is None:
            raw = os.environ.get(REPORT_CONFIG['precision_env_var'])
            max_denominator = int(raw) if raw and raw.strip().isdigit() else None
        if max_denominator and value.denominator > max_denominator:
            return f"~{value.limit_denominator(max_denominator)}"
        return str(value)

    @staticmethod
    def parse_series(raw: Dict[str, Any], pointer: str = '') -> Dict[int, Fraction]:
        """Lê {"k": "p/q"} como dicionário expoente -> coeficiente"""
        if not isinstance(raw, dict):
            raise InputSchemaError(pointer, "série deve ser um objeto {expoente: coeficiente}")
        coefficients = {}
        for key, value in raw.items():
            try:
                power = int(key)
            except ValueError:
                raise InputSchemaError(f"{pointer}/{key}", "expoente deve ser inteiro")
            coefficients[power] = RationalIO.parse(value, f"{pointer}/{key}")
        return coefficients


def load_json(path: str) -> Dict[str, Any]:
    """
    Carrega um arquivo JSON de entrada

    Args:
        path: caminho do arquivo

    Returns:
        Conteúdo como dicionário
    """
    if not os.path.exists(path):
        raise InputSchemaError(path, "arquivo não encontrado")
    with open(path, 'r', encoding='utf-8') as f:
        try:
            content = json.load(f)
        except json.JSONDecodeError as e:
            raise InputSchemaError(path, f"JSON inválido ({e})")
    if not isinstance(content, dict):
        raise InputSchemaError(path, "o arquivo deve conter um objeto JSON")
    return content


def require(raw: Dict[str, Any], key: str, pointer: str = '') -> Any:
    if key not in raw:
        raise InputSchemaError(f"{pointer}/{key}", "campo obrigatório ausente")
    return raw[key]
