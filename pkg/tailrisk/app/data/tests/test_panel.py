#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date

import numpy as np
import pytest

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.data.service.simulate_service import simulate_service
from tailrisk.app.data.tests.conftest import PANEL_CSV
from tailrisk.common.exception import errors


def test_load_well_formed_panel(write_csv) -> None:
    panel = panel_service.load_panel(path=write_csv(PANEL_CSV))
    assert panel.length == 3
    assert panel.width == 2
    assert panel.names == ('a', 'b')
    assert panel.dates[0] == date(2020, 1, 2)
    assert panel.returns[2, 1] == 0.03


def test_dates_out_of_order(write_csv) -> None:
    content = 'date,a\n2020-01-03,0.01\n2020-01-02,0.02\n'
    with pytest.raises(errors.ValidationError):
        panel_service.load_panel(path=write_csv(content))


def test_duplicate_date(write_csv) -> None:
    content = 'date,a\n2020-01-02,0.01\n2020-01-02,0.02\n'
    with pytest.raises(errors.ValidationError):
        panel_service.load_panel(path=write_csv(content))


def test_empty_cell_names_cell(write_csv) -> None:
    content = 'date,a,b\n2020-01-02,0.01,0.02\n2020-01-03,,0.01\n'
    with pytest.raises(errors.ParseError) as exc:
        panel_service.load_panel(path=write_csv(content))
    assert exc.value.data == {'row': 3, 'column': 'a'}


def test_non_numeric_cell(write_csv) -> None:
    content = 'date,a,b\n2020-01-02,0.01,abc\n'
    with pytest.raises(errors.ParseError) as exc:
        panel_service.load_panel(path=write_csv(content))
    assert exc.value.data == {'row': 2, 'column': 'b'}


def test_nan_cell_rejected(write_csv) -> None:
    content = 'date,a\n2020-01-02,nan\n'
    with pytest.raises(errors.ValidationError):
        panel_service.load_panel(path=write_csv(content))


def test_bad_date_and_ragged_row(write_csv) -> None:
    with pytest.raises(errors.ParseError):
        panel_service.load_panel(path=write_csv('date,a\n02/01/2020,0.01\n'))
    with pytest.raises(errors.ParseError):
        panel_service.load_panel(path=write_csv('date,a,b\n2020-01-02,0.01\n'))


def test_duplicate_column_name(write_csv) -> None:
    with pytest.raises(errors.ValidationError):
        panel_service.load_panel(path=write_csv('date,a,a\n2020-01-02,0.01,0.02\n'))


def test_missing_file(tmp_path) -> None:
    with pytest.raises(errors.ParseError):
        panel_service.load_panel(path=tmp_path / 'missing.csv')


def test_blank_lines_are_skipped(write_csv) -> None:
    panel = panel_service.load_panel(path=write_csv('date,a\n2020-01-02,0.01\n\n2020-01-03,0.02\n\n'))
    assert panel.length == 2
    assert panel.returns[:, 0].tolist() == [0.01, 0.02]


def test_surrounding_whitespace_is_ignored(write_csv) -> None:
    panel = panel_service.load_panel(path=write_csv('date, a\n2020-01-02 , 0.01\n'))
    assert panel.names == ('a',)
    assert panel.dates == (date(2020, 1, 2),)


def test_extra_field_rejected(write_csv) -> None:
    with pytest.raises(errors.ParseError):
        panel_service.load_panel(path=write_csv('date,a\n2020-01-02,0.01\n2020-01-03,0.02,0.03\n'))


def test_short_row_names_missing_column(write_csv) -> None:
    with pytest.raises(errors.ParseError) as exc:
        panel_service.load_panel(path=write_csv('date,a,b\n2020-01-02,0.01,0.02\n2020-01-03,0.01\n'))
    assert exc.value.data == {'row': 3, 'column': 'b'}


def test_invalid_utf8_is_parse_error(tmp_path) -> None:
    path = tmp_path / 'latin.csv'
    path.write_bytes(b'date,a\n2020-01-02,0.01\n2020-01-03,\xff\n')
    with pytest.raises(errors.ParseError) as exc:
        panel_service.load_panel(path=path)
    assert 'offset' in exc.value.data
    assert exc.value.code == 2


def test_empty_file_is_parse_error(write_csv) -> None:
    with pytest.raises(errors.ParseError):
        panel_service.load_panel(path=write_csv(''))


def test_header_only_has_no_rows(write_csv) -> None:
    with pytest.raises(errors.ValidationError):
        panel_service.load_panel(path=write_csv('date,a\n'))


def test_round_trip_is_exact(tmp_path) -> None:
    panel = simulate_service.simulate_panel(names=('mkt', 'size', 'value'), length=50, seed=7, vols=[0.01, 0.005, 0.02])
    path = tmp_path / 'round_trip.csv'
    panel_service.write_panel(panel=panel, path=path)
    loaded = panel_service.load_panel(path=path)
    assert loaded.dates == panel.dates
    assert loaded.names == panel.names
    np.testing.assert_array_equal(loaded.returns, panel.returns)


def test_slice_window_full(ten_row_panel: ReturnPanel) -> None:
    window = panel_service.slice_window(panel=ten_row_panel, end_date=date(2021, 3, 11))
    assert window.length == 10


def test_slice_window_is_strictly_prior(ten_row_panel: ReturnPanel) -> None:
    window = panel_service.slice_window(panel=ten_row_panel, end_date=date(2021, 3, 5))
    assert window.dates == tuple(date(2021, 3, day) for day in range(1, 5))


def test_slice_window_max_length(ten_row_panel: ReturnPanel) -> None:
    window = panel_service.slice_window(panel=ten_row_panel, end_date=date(2021, 3, 11), max_length=3)
    assert window.dates == (date(2021, 3, 8), date(2021, 3, 9), date(2021, 3, 10))
    np.testing.assert_array_equal(window.returns, ten_row_panel.returns[7:])


def test_slice_window_empty(ten_row_panel: ReturnPanel) -> None:
    with pytest.raises(errors.EmptyWindowError):
        panel_service.slice_window(panel=ten_row_panel, end_date=date(2021, 3, 1))
    with pytest.raises(errors.ValidationError):
        panel_service.slice_window(panel=ten_row_panel, end_date=date(2021, 3, 5), max_length=0)


def test_slice_period_is_closed(ten_row_panel: ReturnPanel) -> None:
    period = panel_service.slice_period(panel=ten_row_panel, start=date(2021, 3, 3), end=date(2021, 3, 5))
    assert period.dates == (date(2021, 3, 3), date(2021, 3, 4), date(2021, 3, 5))
    with pytest.raises(errors.EmptyWindowError):
        panel_service.slice_period(panel=ten_row_panel, start=date(2022, 1, 1), end=date(2022, 2, 1))


def test_panel_is_read_only(ten_row_panel: ReturnPanel) -> None:
    with pytest.raises(ValueError):
        ten_row_panel.returns[0, 0] = 1.0


def test_load_analysis_config(tmp_path) -> None:
    path = tmp_path / 'analysis.toml'
    path.write_text('half_life_days = 90\nconfidence_levels = [0.6, 0.95]\n', encoding='utf-8')
    config = panel_service.load_analysis_config(path=path, seed=11)
    assert config.half_life_days == 90
    assert config.confidence_levels == [0.6, 0.95]
    assert config.seed == 11
    assert config.floor is None


def test_load_analysis_config_rejects_bad_values(tmp_path) -> None:
    path = tmp_path / 'analysis.toml'
    path.write_text('confidence_levels = [1.0]\n', encoding='utf-8')
    with pytest.raises(errors.ValidationError):
        panel_service.load_analysis_config(path=path)
    path.write_text('unknown_key = 1\n', encoding='utf-8')
    with pytest.raises(errors.ValidationError):
        panel_service.load_analysis_config(path=path)
    path.write_text('half_life_days = [\n', encoding='utf-8')
    with pytest.raises(errors.ParseError):
        panel_service.load_analysis_config(path=path)
