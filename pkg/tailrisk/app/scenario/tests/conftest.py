#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pytest

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.schema.config import AnalysisConfig
from tailrisk.app.data.service.simulate_service import simulate_service

COVARIANCE = np.array([[1.0, 0.4, 0.0], [0.4, 1.5, -0.3], [0.0, -0.3, 0.8]]) * 1e-4


@pytest.fixture(scope='module')
def gaussian_panel() -> ReturnPanel:
    return simulate_service.simulate_panel(names=('mkt', 'size', 'value'), length=600, seed=11, covariance=COVARIANCE)


@pytest.fixture
def small_config() -> AnalysisConfig:
    return AnalysisConfig(half_life_days=21, warmup_observations=60)
