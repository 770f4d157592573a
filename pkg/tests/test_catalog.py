import json

import pytest

from src import catalog
from src.exceptions import InputSchemaError


def test_catalog_lists_examples():
    names = [entry['name'] for entry in catalog.catalog()]
    assert names == sorted(names)
    for name in ('sphere3', 'flatcone', 'berger', 'solvable2', 'example1', 'example2',
                 'example3_n1', 'example3_n2'):
        assert name in names


def test_example3_parameter():
    assert catalog.resolve_name('example3') == 'example3_n2'
    assert catalog.resolve_name('example3', 1) == 'example3_n1'
    with pytest.raises(InputSchemaError):
        catalog.resolve_name('sphere3', 2)


def test_unknown_example():
    with pytest.raises(InputSchemaError) as info:
        catalog.load('torus7')
    assert info.value.pointer == 'example'


def test_algebra_without_smoothness():
    data, sd = catalog.load('berger')
    assert sd is None
    assert data.dim_n == 3


def test_user_files(tmp_path):
    with open(f"{catalog.catalog_directory()}/flatcone.json", encoding='utf-8') as f:
        raw = json.load(f)
    smoothness = raw.pop('smoothness')
    algebra = tmp_path / 'cone.json'
    metric = tmp_path / 'cone_metric.json'
    algebra.write_text(json.dumps(raw))
    metric.write_text(json.dumps({'smoothness': smoothness}))
    data, sd = catalog.load_file(str(algebra), str(metric))
    assert data.name == 'cone'
    assert sd.functions == ['phi1']
    data, sd = catalog.load_file(str(algebra))
    assert sd is None
