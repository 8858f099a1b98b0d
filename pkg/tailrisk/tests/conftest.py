#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from pathlib import Path

import numpy as np
import pytest

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.data.service.simulate_service import simulate_service
from tailrisk.cli import main

COVARIANCE = np.array([[1.0, 0.3, -0.2], [0.3, 0.6, 0.1], [-0.2, 0.1, 0.5]]) * 1e-4


def run_cli(*argv: str) -> int:
    """执行命令行并返回退出码"""
    try:
        main(list(argv))
    except SystemExit as e:
        return 0 if e.code is None else int(e.code)
    return 0


@pytest.fixture(scope='session')
def cli_panel() -> ReturnPanel:
    return simulate_service.simulate_panel(
        names=('mkt', 'size', 'value'), length=600, seed=5, distribution='t', covariance=COVARIANCE
    )


@pytest.fixture
def panel_csv(tmp_path: Path, cli_panel: ReturnPanel) -> Path:
    path = tmp_path / 'panel.csv'
    panel_service.write_panel(panel=cli_panel, path=path)
    return path


@pytest.fixture
def analysis_toml(tmp_path: Path) -> Path:
    path = tmp_path / 'analysis.toml'
    path.write_text('half_life_days = 63\nwarmup_observations = 100\n', encoding='utf-8')
    return path
