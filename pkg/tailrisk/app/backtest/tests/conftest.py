#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date

import numpy as np
import pytest

from tailrisk.app.backtest.model.report import BacktestReport
from tailrisk.app.backtest.schema.config import BacktestConfig
from tailrisk.app.backtest.service.backtest_service import backtest_service
from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.data.service.simulate_service import simulate_service

NAMES = ('mkt', 'size', 'value')
COVARIANCE = np.array([[1.0, 0.2, -0.1], [0.2, 0.5, 0.1], [-0.1, 0.1, 0.4]]) * 1e-4


@pytest.fixture(scope='module')
def factor_panel() -> ReturnPanel:
    return simulate_service.simulate_panel(names=NAMES, length=500, seed=8, covariance=COVARIANCE)


@pytest.fixture(scope='module')
def backtest_config(factor_panel: ReturnPanel) -> BacktestConfig:
    return BacktestConfig(
        confidence_levels=[0.6, 0.95],
        rebalance_frequency='monthly',
        half_life_days=63,
        start_date=factor_panel.dates[300],
        end_date=factor_panel.dates[-1],
        index_column='mkt',
        style_bound=0.5,
        warmup_observations=100,
        beta_window=60,
    )


@pytest.fixture(scope='module')
def report(factor_panel: ReturnPanel, backtest_config: BacktestConfig) -> BacktestReport:
    return backtest_service.run_backtest(panel=factor_panel, config=backtest_config)


@pytest.fixture(scope='module')
def co_crash_panel() -> ReturnPanel:
    """两个风格因子与指数的协方差相同，但 skew 与指数同时暴跌"""
    rng = np.random.default_rng(31)
    length = 1200
    crash = np.where(rng.random(length) < 0.1, -3.0, 1.0 / 3.0)
    market, noise_a, noise_b = rng.standard_normal((3, length))
    returns = 0.01 * np.column_stack(
        [market + crash, 0.5 * crash + 0.5 * noise_a, 0.5 * market + 0.5 * noise_b]
    )
    dates = panel_service.business_dates(start=date(2000, 1, 3), length=length)
    return ReturnPanel(dates=dates, names=('mkt', 'skew', 'sym'), returns=returns)


# 单次调仓手算用例：前 30 行为预热历史，后 5 行为回测日 (mkt, a, b)
HAND_HOLDING_RETURNS = np.array(
    [
        [0.010, 0.004, -0.002],
        [-0.005, 0.001, 0.003],
        [0.002, -0.006, 0.001],
        [0.007, 0.002, 0.002],
        [-0.003, 0.005, -0.004],
    ]
)

# 10 个情景，前两行指数与 a 同时下跌
HAND_SCENARIOS = np.array(
    [
        [-0.020, -0.010, 0.000],
        [-0.020, -0.010, 0.000],
        [0.010, 0.002, 0.001],
        [0.012, -0.003, 0.004],
        [0.008, 0.005, -0.002],
        [0.011, 0.000, 0.003],
        [0.009, -0.004, -0.001],
        [0.013, 0.006, 0.002],
        [0.010, -0.001, 0.005],
        [0.007, 0.003, 0.000],
    ]
)

HAND_COVARIANCE = np.array([[1.0, 0.5, 0.0], [0.5, 1.0, 0.0], [0.0, 0.0, 1.0]]) * 1e-4


@pytest.fixture(scope='module')
def single_rebalance_panel() -> ReturnPanel:
    history = np.random.default_rng(5).normal(0.0, 0.01, (30, 3))
    dates = panel_service.business_dates(start=date(2021, 1, 4), length=35)
    return ReturnPanel(dates=dates, names=('mkt', 'a', 'b'), returns=np.vstack([history, HAND_HOLDING_RETURNS]))


@pytest.fixture(scope='module')
def identical_style_panel() -> ReturnPanel:
    """两个风格因子收益完全相同"""
    rng = np.random.default_rng(41)
    length = 400
    market, style = rng.standard_normal((2, length))
    returns = 0.01 * np.column_stack([market, style, style])
    dates = panel_service.business_dates(start=date(2010, 1, 4), length=length)
    return ReturnPanel(dates=dates, names=('mkt', 's1', 's2'), returns=returns)
