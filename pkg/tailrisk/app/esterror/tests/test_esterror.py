#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import math

import numpy as np
import pytest

from tailrisk.app.esterror.service.esterror_service import esterror_service
from tailrisk.common.exception import errors


@pytest.mark.parametrize(
    'w, w_true, expected',
    [
        ([1.0, 0.0], [2.0, 0.0], 0.0),
        ([1.0, 0.0], [0.0, 1.0], 90.0),
        ([1.0, 0.0], [1 / math.sqrt(2), 1 / math.sqrt(2)], 45.0),
        ([1.0, 1.0, 1.0], [-1.0, -1.0, -1.0], 180.0),
    ],
)
def test_weight_error_angle(w: list[float], w_true: list[float], expected: float) -> None:
    assert esterror_service.weight_error_angle(w=np.array(w), w_true=np.array(w_true)) == pytest.approx(
        expected, abs=1e-6
    )


def test_weight_error_angle_errors() -> None:
    with pytest.raises(errors.ZeroVectorError):
        esterror_service.weight_error_angle(w=np.zeros(2), w_true=np.ones(2))
    with pytest.raises(errors.ValidationError):
        esterror_service.weight_error_angle(w=np.ones(2), w_true=np.ones(3))


def test_boundary_angle() -> None:
    assert esterror_service.boundary_angle(n=1) == pytest.approx(math.degrees(math.atan(0.5)), abs=1e-9)
    assert esterror_service.boundary_angle(n=1) == pytest.approx(26.57, abs=0.01)
    assert 34.5 <= esterror_service.boundary_angle(n=9) <= 35.7
    for n in range(1, 21):
        assert 0.0 < esterror_service.boundary_angle(n=n) < 90.0
    with pytest.raises(errors.ValidationError):
        esterror_service.boundary_angle(n=0)


def test_random_weight_baseline() -> None:
    baseline = esterror_service.random_weight_baseline(n_assets=2, samples=20_000, seed=1)
    assert 0.0 < baseline < 45.0
    assert esterror_service.random_weight_baseline(n_assets=1, samples=10, seed=1) == 0.0
    assert baseline == esterror_service.random_weight_baseline(n_assets=2, samples=20_000, seed=1)
    with pytest.raises(errors.ValidationError):
        esterror_service.random_weight_baseline(n_assets=2, samples=0, seed=1)


def test_small_study() -> None:
    reports = esterror_service.run_estimation_study(
        n_assets=3, sample_lengths=[200, 400], confidences=[0.9, 0.95], replications=4, seed=7
    )
    assert [(r.sample_length, r.confidence) for r in reports] == [(200, 0.9), (200, 0.95), (400, 0.9), (400, 0.95)]
    for report in reports:
        assert report.mean_risk_error >= 1 - 1e-9
        assert 0.0 <= report.mean_weight_error_deg <= 180.0
        assert report.boundary_angle_deg == esterror_service.boundary_angle(n=2)
        assert report.replications == 4

    grid = esterror_service.study_grid(reports=reports, metric='mean_weight_error_deg')
    assert grid.shape == (2, 2)
    assert list(grid.index) == [200, 400]
    assert list(grid.columns) == ['0.9', '0.95']
    assert grid.loc[400, '0.95'] == reports[3].mean_weight_error_deg


def test_study_is_thread_independent() -> None:
    kwargs = dict(n_assets=3, sample_lengths=[150, 300], confidences=[0.6, 0.9], replications=3, seed=11)
    assert esterror_service.run_estimation_study(**kwargs, threads=1) == esterror_service.run_estimation_study(
        **kwargs, threads=3
    )


def test_study_argument_errors() -> None:
    with pytest.raises(errors.ValidationError):
        esterror_service.run_estimation_study(n_assets=1, sample_lengths=[100], confidences=[0.9], replications=2, seed=0)
    with pytest.raises(errors.ValidationError):
        esterror_service.run_estimation_study(n_assets=3, sample_lengths=[100], confidences=[0.9], replications=0, seed=0)
    with pytest.raises(errors.DegenerateTailError):
        esterror_service.run_estimation_study(n_assets=3, sample_lengths=[50], confidences=[0.99], replications=2, seed=0)


@pytest.mark.slow
def test_long_samples_have_small_weight_error() -> None:
    reports = esterror_service.run_estimation_study(
        n_assets=3, sample_lengths=[20_000], confidences=[0.9], replications=3, seed=3
    )
    assert reports[0].mean_weight_error_deg < 10.0


@pytest.mark.slow
def test_ten_asset_protocol() -> None:
    lengths = [1000, 3000, 5000, 7000]
    confidences = [0.60, 0.90, 0.95, 0.99]
    reports = esterror_service.run_estimation_study(
        n_assets=10, sample_lengths=lengths, confidences=confidences, replications=100, seed=2024, threads=4
    )
    bound = esterror_service.boundary_angle(n=9)
    assert all(r.mean_weight_error_deg < bound for r in reports)
    grid = esterror_service.study_grid(reports=reports, metric='mean_weight_error_deg')
    for column in grid.columns:
        values = grid[column].to_numpy()
        assert np.sum(np.diff(values) > 0) <= 1
    for report in reports:
        if report.sample_length == 7000 and report.confidence <= 0.95:
            assert report.mean_risk_error <= 1.10
