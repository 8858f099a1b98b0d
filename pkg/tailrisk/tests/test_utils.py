#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import json

from datetime import date
from pathlib import Path

import numpy as np
import pytest

from tailrisk.app.data.schema.config import AnalysisConfig
from tailrisk.common.exception import errors
from tailrisk.utils.file_ops import output_path, prepare_output_dir, write_json
from tailrisk.utils.parallel import child_rng, ordered_map
from tailrisk.utils.serializers import json_dumps, json_line
from tailrisk.utils.toml_config import load_config


def test_json_output_is_sorted_and_finite() -> None:
    content = {'b': np.float64('nan'), 'a': [1.5, np.inf], 'when': date(2020, 1, 2), 'w': np.array([0.25, 0.75])}
    decoded = json.loads(json_dumps(content))
    assert list(decoded) == ['a', 'b', 'schema_version', 'w', 'when']
    assert decoded['a'] == [1.5, None]
    assert decoded['b'] is None
    assert decoded['when'] == '2020-01-02'
    assert decoded['w'] == [0.25, 0.75]


def test_json_line_is_single_line() -> None:
    line = json_line({'message': '约束集不可行', 'category': 'infeasible'})
    assert '\n' not in line
    assert line.startswith('{"category":"infeasible"')


def test_load_config_merges_overrides(tmp_path: Path) -> None:
    path = tmp_path / 'analysis.toml'
    path.write_text('half_life_days = 63\nseed = 4\n', encoding='utf-8')
    config = load_config(AnalysisConfig, path, {'seed': None, 'warmup_observations': 30})
    assert config.half_life_days == 63
    assert config.seed == 4
    assert config.warmup_observations == 30
    assert load_config(AnalysisConfig, None).half_life_days == 21


def test_load_config_errors(tmp_path: Path) -> None:
    with pytest.raises(errors.ParseError):
        load_config(AnalysisConfig, tmp_path / 'missing.toml')
    broken = tmp_path / 'broken.toml'
    broken.write_text('half_life_days = = 3\n', encoding='utf-8')
    with pytest.raises(errors.ParseError):
        load_config(AnalysisConfig, broken)
    with pytest.raises(errors.ValidationError):
        load_config(AnalysisConfig, None, {'half_life_days': 0})


def test_ordered_map_keeps_submission_order() -> None:
    items = list(range(50))
    assert ordered_map(lambda x: x * x, items, threads=4) == [x * x for x in items]


def test_child_rng_depends_only_on_key() -> None:
    first = child_rng(7, 1, 2).standard_normal(5)
    np.testing.assert_array_equal(first, child_rng(7, 1, 2).standard_normal(5))
    assert not np.array_equal(first, child_rng(7, 2, 1).standard_normal(5))
    assert not np.array_equal(first, child_rng(8, 1, 2).standard_normal(5))


def test_output_files_stay_inside_directory(tmp_path: Path) -> None:
    out = prepare_output_dir(tmp_path / 'nested' / 'out')
    assert out.is_dir()
    with pytest.raises(errors.ValidationError):
        output_path(out, '../escape.json')
    written = write_json(out, 'result.json', {'value': 1})
    assert json.loads(written.read_text(encoding='utf-8'))['value'] == 1
