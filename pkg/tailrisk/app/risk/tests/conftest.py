#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pandas as pd
import pytest

from tailrisk.app.data.service.panel_service import panel_service


@pytest.fixture(scope='module')
def normal_draws() -> np.ndarray:
    return np.random.default_rng(123).standard_normal(1_000_000)


@pytest.fixture(scope='module')
def scaled_t_draws() -> np.ndarray:
    return np.random.default_rng(321).standard_t(3, size=1_000_000) / np.sqrt(3.0)


@pytest.fixture
def market() -> pd.Series:
    values = np.random.default_rng(77).normal(0.0, 0.01, 800)
    dates = pd.Index(panel_service.business_dates(start=pd.Timestamp('2015-01-01').date(), length=800), name='date')
    return pd.Series(values, index=dates, name='market')
