#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date

import numpy as np
import pytest

from tailrisk.app.data.model.panel import ReturnPanel

PANEL_CSV = 'date,a,b\n2020-01-02,0.01,-0.02\n2020-01-03,0.005,0.0\n2020-01-06,-0.01,0.03\n'


@pytest.fixture
def write_csv(tmp_path):
    def _write(content: str, name: str = 'panel.csv'):
        path = tmp_path / name
        path.write_text(content, encoding='utf-8')
        return path

    return _write


@pytest.fixture
def ten_row_panel() -> ReturnPanel:
    dates = tuple(date(2021, 3, day) for day in range(1, 11))
    returns = np.arange(20, dtype=np.float64).reshape(10, 2) / 100
    return ReturnPanel(dates=dates, names=('x', 'y'), returns=returns)
