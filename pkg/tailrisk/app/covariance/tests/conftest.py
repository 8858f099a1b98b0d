#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pytest

from tailrisk.app.covariance.model.estimate import CovarianceEstimate
from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.simulate_service import simulate_service


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240501)


@pytest.fixture
def random_spd(rng: np.random.Generator) -> CovarianceEstimate:
    a = rng.standard_normal((5, 5))
    matrix = a @ a.T + 0.5 * np.eye(5)
    return CovarianceEstimate(matrix=0.5 * (matrix + matrix.T))


@pytest.fixture(scope='module')
def three_factor_panel() -> ReturnPanel:
    covariance = np.array([[1.0, 0.3, -0.2], [0.3, 2.0, 0.1], [-0.2, 0.1, 0.5]]) * 1e-4
    return simulate_service.simulate_panel(names=('mkt', 'size', 'value'), length=300, seed=42, covariance=covariance)
