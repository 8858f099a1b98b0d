#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pytest

from tailrisk.app.covariance.model.estimate import CovarianceEstimate
from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.app.scenario.model.scenario_set import ScenarioSet


@pytest.fixture
def budget() -> ConstraintSet:
    return ConstraintSet.full_investment(3, long_only=True)


@pytest.fixture(scope='module')
def three_asset_scenarios() -> ScenarioSet:
    rng = np.random.default_rng(2024)
    mixing = np.array([[1.0, 0.0, 0.0], [0.3, 0.8, 0.0], [-0.2, 0.4, 1.2]])
    draws = rng.standard_t(4, size=(400, 3)) @ mixing.T * 0.01 + np.array([0.0005, 0.0, 0.0002])
    return ScenarioSet.from_matrix(draws, names=('a', 'b', 'c'))


@pytest.fixture(scope='module')
def sample_covariance(three_asset_scenarios: ScenarioSet) -> CovarianceEstimate:
    return CovarianceEstimate(matrix=np.cov(three_asset_scenarios.scenarios, rowvar=False), names=('a', 'b', 'c'))
