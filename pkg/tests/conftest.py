"""
Configuração comum dos testes
"""
import os
import sys

import pytest

# Adicionar diretório do projeto ao path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src import catalog  # noqa: E402

WITH_SMOOTHNESS = ['sphere3', 'flatcone', 'solvable2', 'example1', 'example2',
                   'example3_n1', 'example3_n2']


@pytest.fixture
def load():
    return catalog.load
