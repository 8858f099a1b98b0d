#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pytest

from tailrisk.app.covariance.model.estimate import CovarianceEstimate
from tailrisk.app.esterror.service.esterror_service import esterror_service
from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.app.optimize.schema.objective import ObjectiveSpec
from tailrisk.app.optimize.service.optimize_service import optimize_service
from tailrisk.app.optimize.utils.lifted_lp import solve_lifted_lp
from tailrisk.app.risk.service.shortfall_service import shortfall_service
from tailrisk.app.scenario.model.scenario_set import ScenarioSet
from tailrisk.common.exception import errors


def test_dominant_asset_takes_everything() -> None:
    base = np.random.default_rng(1).standard_normal(100)
    scenarios = ScenarioSet.from_matrix(np.column_stack([base + 0.01, base]))
    result = optimize_service.minimize_shortfall(
        scenarios=scenarios, p=0.9, constraints=ConstraintSet.full_investment(2, long_only=True)
    )
    np.testing.assert_allclose(result.weights, [1.0, 0.0], atol=1e-7)


def test_perfect_hedge() -> None:
    x = np.random.default_rng(2).standard_normal(200)
    scenarios = ScenarioSet.from_matrix(np.column_stack([x, -x]))
    result = optimize_service.minimize_shortfall(
        scenarios=scenarios, p=0.9, constraints=ConstraintSet.full_investment(2, long_only=True)
    )
    np.testing.assert_allclose(result.weights, [0.5, 0.5], atol=1e-7)
    assert result.objective_value == pytest.approx(0.0, abs=1e-9)


def test_lp_matches_grid_oracle() -> None:
    rng = np.random.default_rng(3)
    constraints = ConstraintSet.full_investment(3, long_only=True).tightened(bounds=[(None, 1.0)] * 3)
    step = 0.01
    for _ in range(100):
        draws = rng.standard_normal((50, 3)) * rng.uniform(0.5, 2.0, 3) + rng.normal(0.0, 0.2, 3)
        scenarios = ScenarioSet.from_matrix(draws)
        lp = optimize_service.minimize_shortfall(scenarios=scenarios, p=0.9, constraints=constraints)
        grid = optimize_service.brute_force_shortfall(
            scenarios=scenarios, p=0.9, constraints=constraints, grid_step=step
        )
        assert lp.objective_value <= grid.objective_value + 1e-9
        assert grid.objective_value - lp.objective_value <= 3 * step * np.abs(draws).max()


@pytest.mark.parametrize('factor', [0.25, 4.0, 37.0])
def test_argmin_is_scale_invariant(three_asset_scenarios: ScenarioSet, budget: ConstraintSet, factor: float) -> None:
    base = optimize_service.minimize_shortfall(scenarios=three_asset_scenarios, p=0.95, constraints=budget)
    scaled = optimize_service.minimize_shortfall(
        scenarios=three_asset_scenarios.scale(factor), p=0.95, constraints=budget
    )
    np.testing.assert_allclose(scaled.weights, base.weights, atol=1e-6)
    assert scaled.objective_value == pytest.approx(factor * base.objective_value, rel=1e-7)


def test_lp_objective_equals_estimator(three_asset_scenarios: ScenarioSet, budget: ConstraintSet) -> None:
    for p in (0.6, 0.9, 0.95, 0.99):
        k = shortfall_service.tail_count(length=three_asset_scenarios.count, p=p)
        solution = solve_lifted_lp(scenarios=three_asset_scenarios.scenarios, tail_count=k, constraints=budget)
        estimate = shortfall_service.empirical_shortfall(
            returns=three_asset_scenarios.portfolio_returns(solution.weights), p=p
        ).value
        assert solution.objective == pytest.approx(estimate, abs=1e-8)
        assert solution.duality_gap < 1e-8


def test_shortfall_result_diagnostics(
    three_asset_scenarios: ScenarioSet, budget: ConstraintSet, sample_covariance: CovarianceEstimate
) -> None:
    result = optimize_service.minimize_shortfall(
        scenarios=three_asset_scenarios, p=0.95, constraints=budget, covariance=sample_covariance
    )
    assert result.names == ('a', 'b', 'c')
    assert result.weights.sum() == pytest.approx(1.0, abs=1e-9)
    assert np.all(result.weights >= -1e-9)
    assert result.shortfall.value == result.objective_value
    assert result.diagnostics.certificate == 'duality_gap'
    assert result.diagnostics.feasibility_residual <= 1e-7
    record = result.to_record()
    assert set(record['weights']) == {'a', 'b', 'c'}
    assert set(record['risk_contributions']) == {'variance', 'shortfall'}


def test_risk_contributions_sum_to_totals(
    three_asset_scenarios: ScenarioSet, budget: ConstraintSet, sample_covariance: CovarianceEstimate
) -> None:
    weights = np.array([0.2, 0.5, 0.3])
    variance, shortfall = optimize_service.risk_decomposition(
        weights=weights, scenarios=three_asset_scenarios, p=0.95, covariance=sample_covariance
    )
    assert variance.sum() == pytest.approx(sample_covariance.variance(weights), rel=1e-12)
    expected = shortfall_service.empirical_shortfall(returns=three_asset_scenarios.portfolio_returns(weights), p=0.95)
    assert shortfall.sum() == pytest.approx(expected.value, rel=1e-10)


def test_extra_constraints_never_lower_the_optimum(three_asset_scenarios: ScenarioSet, budget: ConstraintSet) -> None:
    loose = optimize_service.minimize_shortfall(scenarios=three_asset_scenarios, p=0.9, constraints=budget)
    for bound in (0.6, 0.45, 0.35):
        tighter = budget.tightened(bounds=[(None, bound)] * 3)
        tight = optimize_service.minimize_shortfall(scenarios=three_asset_scenarios, p=0.9, constraints=tighter)
        assert tight.objective_value >= loose.objective_value - 1e-9
        assert np.all(tight.weights <= bound + 1e-7)


def test_minimum_variance_closed_forms() -> None:
    identity = CovarianceEstimate(matrix=np.eye(4))
    result = optimize_service.minimize_variance(covariance=identity, constraints=ConstraintSet.full_investment(4))
    np.testing.assert_allclose(result.weights, 0.25, atol=1e-7)
    assert result.diagnostics.certificate == 'kkt_residual'

    s1, s2 = 0.02, 0.05
    diagonal = CovarianceEstimate(matrix=np.diag([s1**2, s2**2]))
    result = optimize_service.minimize_variance(covariance=diagonal, constraints=ConstraintSet.full_investment(2))
    assert result.weights[0] == pytest.approx(s2**2 / (s1**2 + s2**2), abs=1e-6)
    assert result.objective_value == pytest.approx(s1**2 * s2**2 / (s1**2 + s2**2), rel=1e-5)


def test_minimum_variance_with_index_bound() -> None:
    covariance = CovarianceEstimate(matrix=np.diag([1.0, 2.0, 3.0]) * 1e-4)
    constraints = ConstraintSet.create(
        3, equalities=[([0.0, 1.0, 1.0], 0.0)], bounds=[(1.0, 1.0), (-0.5, 0.5), (-0.5, 0.5)]
    )
    result = optimize_service.minimize_variance(covariance=covariance, constraints=constraints)
    np.testing.assert_allclose(result.weights, [1.0, 0.0, 0.0], atol=1e-7)


def test_combined_objective_reduces_to_shortfall(
    three_asset_scenarios: ScenarioSet, budget: ConstraintSet, sample_covariance: CovarianceEstimate
) -> None:
    objective = ObjectiveSpec(shortfall_aversion=1.0, variance_aversion=0.0, confidence=0.95)
    combined = optimize_service.maximize_mean_variance_shortfall(
        scenarios=three_asset_scenarios, covariance=sample_covariance, objective=objective, constraints=budget
    )
    minsf = optimize_service.minimize_shortfall(scenarios=three_asset_scenarios, p=0.95, constraints=budget)
    assert combined.objective_value == pytest.approx(-minsf.objective_value, abs=1e-8)


def test_combined_objective_reduces_to_variance(
    three_asset_scenarios: ScenarioSet, budget: ConstraintSet, sample_covariance: CovarianceEstimate
) -> None:
    objective = ObjectiveSpec(shortfall_aversion=0.0, variance_aversion=2.0, confidence=0.95)
    combined = optimize_service.maximize_mean_variance_shortfall(
        scenarios=three_asset_scenarios, covariance=sample_covariance, objective=objective, constraints=budget
    )
    minvar = optimize_service.minimize_variance(covariance=sample_covariance, constraints=budget)
    np.testing.assert_allclose(combined.weights, minvar.weights, atol=1e-7)
    assert combined.objective_value == pytest.approx(-2.0 * sample_covariance.variance(combined.weights), rel=1e-10)


def test_combined_objective_matches_grid() -> None:
    rng = np.random.default_rng(4)
    draws = rng.standard_normal((200, 2)) @ np.array([[1.0, 0.0], [0.5, 1.5]]).T
    scenarios = ScenarioSet.from_matrix(draws)
    covariance = CovarianceEstimate(matrix=np.cov(draws, rowvar=False))
    constraints = ConstraintSet.full_investment(2, long_only=True).tightened(bounds=[(None, 1.0)] * 2)
    for objective in (
        ObjectiveSpec(alpha=[0.1, 0.3], shortfall_aversion=1.0, variance_aversion=0.5, confidence=0.9),
        ObjectiveSpec(alpha=[0.2, 0.1], shortfall_aversion=0.0, variance_aversion=1.0, confidence=0.9),
        ObjectiveSpec(alpha=[0.5, 1.5], shortfall_aversion=0.5, variance_aversion=0.0, confidence=0.9),
    ):
        solved = optimize_service.maximize_mean_variance_shortfall(
            scenarios=scenarios, covariance=covariance, objective=objective, constraints=constraints
        )
        grid = optimize_service.brute_force_shortfall(
            scenarios=scenarios,
            p=objective.confidence,
            constraints=constraints,
            grid_step=0.001,
            covariance=covariance,
            objective=objective,
        )
        assert solved.objective_value >= grid.objective_value - 1e-7
        assert solved.objective_value - grid.objective_value <= 0.02
        assert solved.diagnostics.optimality_gap <= 1e-7 * (1 + abs(solved.objective_value))


def test_combined_objective_needs_some_aversion(
    three_asset_scenarios: ScenarioSet, budget: ConstraintSet, sample_covariance: CovarianceEstimate
) -> None:
    objective = ObjectiveSpec(shortfall_aversion=0.0, variance_aversion=0.0)
    with pytest.raises(errors.ValidationError):
        optimize_service.maximize_mean_variance_shortfall(
            scenarios=three_asset_scenarios, covariance=sample_covariance, objective=objective, constraints=budget
        )
    with pytest.raises(errors.ValidationError):
        optimize_service.maximize_mean_variance_shortfall(
            scenarios=three_asset_scenarios,
            covariance=sample_covariance,
            objective=ObjectiveSpec(alpha=[1.0, 2.0]),
            constraints=budget,
        )


def test_infeasible_constraints() -> None:
    scenarios = ScenarioSet.from_matrix(np.random.default_rng(5).standard_normal((50, 2)))
    constraints = ConstraintSet.full_investment(2, long_only=True).tightened(bounds=[(None, 0.2), (None, 0.2)])
    with pytest.raises(errors.InfeasibleError) as exc:
        optimize_service.minimize_shortfall(scenarios=scenarios, p=0.9, constraints=constraints)
    assert exc.value.code == 3
    with pytest.raises(errors.InfeasibleError):
        optimize_service.minimize_variance(covariance=CovarianceEstimate(matrix=np.eye(2)), constraints=constraints)


def test_unbounded_loss_reduction() -> None:
    draws = np.abs(np.random.default_rng(6).standard_normal((50, 2))) + 0.01
    with pytest.raises(errors.InfeasibleError) as exc:
        optimize_service.minimize_shortfall(
            scenarios=ScenarioSet.from_matrix(draws), p=0.9, constraints=ConstraintSet.create(2)
        )
    assert exc.value.code == 3


def test_argument_errors(three_asset_scenarios: ScenarioSet) -> None:
    with pytest.raises(errors.ValidationError):
        optimize_service.minimize_shortfall(
            scenarios=three_asset_scenarios, p=0.9, constraints=ConstraintSet.full_investment(2)
        )
    with pytest.raises(errors.DegenerateTailError):
        optimize_service.minimize_shortfall(
            scenarios=ScenarioSet.from_matrix(np.ones((10, 3))), p=0.95, constraints=ConstraintSet.full_investment(3)
        )
    with pytest.raises(errors.ValidationError):
        optimize_service.brute_force_shortfall(
            scenarios=ScenarioSet.from_matrix(np.ones((10, 5))),
            p=0.9,
            constraints=ConstraintSet.full_investment(5, long_only=True),
            grid_step=0.1,
        )
    with pytest.raises(errors.ValidationError):
        optimize_service.brute_force_shortfall(
            scenarios=three_asset_scenarios, p=0.9, constraints=ConstraintSet.full_investment(3), grid_step=0.1
        )


@pytest.mark.slow
@pytest.mark.parametrize('p', [0.60, 0.95])
def test_gaussian_shortfall_matches_minimum_variance(p: float) -> None:
    rng = np.random.default_rng(50_000)
    mixing = np.tril(rng.uniform(-0.5, 1.0, (5, 5))) + np.eye(5)
    draws = rng.standard_normal((50_000, 5)) @ mixing.T
    scenarios = ScenarioSet.from_matrix(draws)
    covariance = CovarianceEstimate(matrix=np.cov(draws, rowvar=False))
    constraints = ConstraintSet.full_investment(5)
    minsf = optimize_service.minimize_shortfall(scenarios=scenarios, p=p, constraints=constraints)
    minvar = optimize_service.minimize_variance(covariance=covariance, constraints=constraints)
    assert esterror_service.weight_error_angle(w=minsf.weights, w_true=minvar.weights) < 5.0
