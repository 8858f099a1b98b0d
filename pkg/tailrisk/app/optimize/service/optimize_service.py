#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import itertools

from time import perf_counter

import numpy as np

from scipy import linalg, sparse

from tailrisk.app.covariance.model.estimate import CovarianceEstimate
from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.app.optimize.model.result import Diagnostics, OptimizationResult
from tailrisk.app.optimize.schema.objective import ObjectiveSpec
from tailrisk.app.optimize.utils.lifted_lp import solve_lifted_lp
from tailrisk.app.optimize.utils.quadratic import solve_qp, stack_rows
from tailrisk.app.risk.service.shortfall_service import shortfall_service
from tailrisk.app.scenario.model.scenario_set import ScenarioSet
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings


def _check_size(constraints: ConstraintSet, n: int) -> None:
    if constraints.size != n:
        raise errors.ValidationError(msg=f'约束维度 {constraints.size} 与资产数 {n} 不一致')


def _check_feasible(constraints: ConstraintSet, weights: np.ndarray) -> float:
    residual = constraints.residual(weights)
    if residual > settings.OPTIMIZE_FEASIBILITY_TOLERANCE:
        raise errors.NumericalError(msg=f'解的约束违反量 {residual:.3e} 超过容差', data={'residual': residual})
    return max(residual, 0.0)


class OptimizeService:
    """组合优化服务类"""

    @staticmethod
    def risk_decomposition(
        *,
        weights: np.ndarray,
        scenarios: ScenarioSet | None = None,
        p: float | None = None,
        covariance: CovarianceEstimate | None = None,
    ) -> tuple[np.ndarray | None, np.ndarray | None]:
        """
        风险贡献：方差贡献 w_i(Σw)_i，缺口贡献 -w_i·(尾部情景中 r_i 的均值)，各自求和等于总量

        :param weights: 权重
        :param scenarios: 情景集
        :param p: 置信水平
        :param covariance: 协方差
        :return:
        """
        variance_contributions = None
        shortfall_contributions = None
        if covariance is not None:
            variance_contributions = weights * (covariance.matrix @ weights)
        if scenarios is not None and p is not None:
            tail = shortfall_service.tail_indices(returns=scenarios.portfolio_returns(weights), p=p)
            shortfall_contributions = -weights * scenarios.scenarios[tail].mean(axis=0)
        return variance_contributions, shortfall_contributions

    def _result(
        self,
        *,
        names: tuple[str, ...],
        weights: np.ndarray,
        objective_value: float,
        diagnostics: Diagnostics,
        scenarios: ScenarioSet | None,
        p: float | None,
        covariance: CovarianceEstimate | None,
    ) -> OptimizationResult:
        shortfall = None
        if scenarios is not None and p is not None:
            shortfall = shortfall_service.empirical_shortfall(returns=scenarios.portfolio_returns(weights), p=p)
        variance_contributions, shortfall_contributions = self.risk_decomposition(
            weights=weights, scenarios=scenarios, p=p, covariance=covariance
        )
        weights = weights.copy()
        weights.setflags(write=False)
        return OptimizationResult(
            names=names,
            weights=weights,
            objective_value=float(objective_value),
            diagnostics=diagnostics,
            shortfall=shortfall,
            variance=None if covariance is None else covariance.variance(weights),
            variance_contributions=variance_contributions,
            shortfall_contributions=shortfall_contributions,
        )

    def minimize_shortfall(
        self,
        *,
        scenarios: ScenarioSet,
        p: float,
        constraints: ConstraintSet,
        covariance: CovarianceEstimate | None = None,
    ) -> OptimizationResult:
        """
        最小缺口：线性规划 min -t - (1/K)Σz_i，t + z_i <= w'r_i，z_i <= 0

        :param scenarios: 情景集
        :param p: 置信水平
        :param constraints: 约束集
        :param covariance: 协方差，仅用于报告方差及方差贡献
        :return:
        """
        _check_size(constraints, scenarios.width)
        k = shortfall_service.checked_tail_count(length=scenarios.count, p=p)
        start = perf_counter()
        solution = solve_lifted_lp(scenarios=scenarios.scenarios, tail_count=k, constraints=constraints)
        weights = solution.weights
        residual = _check_feasible(constraints, weights)
        estimate = shortfall_service.empirical_shortfall(returns=scenarios.portfolio_returns(weights), p=p).value
        scale = 1.0 + abs(solution.objective)
        gap = max(solution.duality_gap, abs(solution.objective - estimate))
        if gap > settings.OPTIMIZE_OPTIMALITY_TOLERANCE * scale:
            raise errors.NumericalError(
                msg=f'线性规划对偶间隙 {gap:.3e} 超过容差', data={'objective': solution.objective, 'estimate': estimate}
            )
        elapsed = (perf_counter() - start) * 1000
        log.debug(f'最小缺口求解完成：K={k}，缺口 {estimate:.6g}，间隙 {gap:.2e}，耗时 {elapsed:.1f}ms')
        diagnostics = Diagnostics(
            feasibility_residual=residual,
            optimality_gap=gap,
            iterations=solution.iterations,
            solver=settings.OPTIMIZE_LP_METHOD,
            certificate='duality_gap',
        )
        return self._result(
            names=scenarios.names,
            weights=weights,
            objective_value=estimate,
            diagnostics=diagnostics,
            scenarios=scenarios,
            p=p,
            covariance=covariance,
        )

    def minimize_variance(
        self,
        *,
        covariance: CovarianceEstimate,
        constraints: ConstraintSet,
        scenarios: ScenarioSet | None = None,
        p: float | None = None,
    ) -> OptimizationResult:
        """
        最小方差：min w'Σw，协方差按 trace/N 缩放后求解

        :param covariance: 协方差
        :param constraints: 约束集
        :param scenarios: 情景集，仅用于报告缺口及缺口贡献
        :param p: 置信水平
        :return:
        """
        n = covariance.size
        _check_size(constraints, n)
        scale = float(np.trace(covariance.matrix)) / n or 1.0
        a, b, g, h = constraints.qp_form()
        solution = solve_qp(p_matrix=2.0 * covariance.matrix / scale, q=np.zeros(n), a=a, b=b, g=g, h=h)
        weights = solution.x
        residual = _check_feasible(constraints, weights)
        diagnostics = Diagnostics(
            feasibility_residual=residual,
            optimality_gap=solution.kkt_residual,
            iterations=solution.iterations,
            solver=settings.OPTIMIZE_QP_SOLVER,
            certificate='kkt_residual',
        )
        return self._result(
            names=covariance.names or tuple(f'x{i}' for i in range(n)),
            weights=weights,
            objective_value=covariance.variance(weights),
            diagnostics=diagnostics,
            scenarios=scenarios,
            p=p,
            covariance=covariance,
        )

    def maximize_mean_variance_shortfall(
        self,
        *,
        scenarios: ScenarioSet,
        covariance: CovarianceEstimate,
        objective: ObjectiveSpec,
        constraints: ConstraintSet,
    ) -> OptimizationResult:
        """
        组合目标：max w'α + Λ(t + (1/K)Σz_i) - λw'Σw；目标值报告为 w'α - Λ·缺口 - λ·w'Σw

        λ = 0 时为线性规划，Λ = 0 且 α = 0 时退化为最小方差

        :param scenarios: 情景集
        :param covariance: 协方差
        :param objective: 目标参数
        :param constraints: 约束集
        :return:
        """
        n = scenarios.width
        _check_size(constraints, n)
        if covariance.size != n:
            raise errors.ValidationError(msg=f'协方差维度 {covariance.size} 与资产数 {n} 不一致')
        alpha = np.zeros(n) if objective.alpha is None else np.asarray(objective.alpha, dtype=np.float64)
        if alpha.shape != (n,):
            raise errors.ValidationError(msg=f'alpha 长度 {alpha.size} 与资产数 {n} 不一致')
        big_lambda, small_lambda, p = objective.shortfall_aversion, objective.variance_aversion, objective.confidence
        pure_risk = not alpha.any()
        if pure_risk and big_lambda == 0 and small_lambda == 0:
            raise errors.ValidationError(msg='alpha 为 0 时缺口厌恶与方差厌恶至少一个为正')

        def utility(w: np.ndarray) -> float:
            sf = shortfall_service.empirical_shortfall(returns=scenarios.portfolio_returns(w), p=p).value
            return float(w @ alpha - big_lambda * sf - small_lambda * covariance.variance(w))

        if big_lambda == 0 and pure_risk:
            result = self.minimize_variance(covariance=covariance, constraints=constraints, scenarios=scenarios, p=p)
            return self._with_objective(result, utility(result.weights))

        k = shortfall_service.checked_tail_count(length=scenarios.count, p=p)
        if small_lambda == 0:
            solution = solve_lifted_lp(
                scenarios=scenarios.scenarios,
                tail_count=k,
                constraints=constraints,
                alpha=alpha,
                shortfall_aversion=big_lambda,
            )
            weights, iterations = solution.weights, solution.iterations
            residual = _check_feasible(constraints, weights)
            value = utility(weights)
            gap = max(solution.duality_gap, abs(-solution.objective - value))
            solver, certificate = settings.OPTIMIZE_LP_METHOD, 'duality_gap'
            if gap > settings.OPTIMIZE_OPTIMALITY_TOLERANCE * (1.0 + abs(value)):
                raise errors.NumericalError(msg=f'线性规划对偶间隙 {gap:.3e} 超过容差')
        else:
            weights, iterations, gap = self._solve_combined_qp(
                scenarios=scenarios.scenarios,
                tail_count=k,
                covariance=covariance.matrix,
                alpha=alpha,
                shortfall_aversion=big_lambda,
                variance_aversion=small_lambda,
                constraints=constraints,
            )
            residual = _check_feasible(constraints, weights)
            value = utility(weights)
            solver, certificate = settings.OPTIMIZE_QP_SOLVER, 'kkt_residual'

        diagnostics = Diagnostics(
            feasibility_residual=residual,
            optimality_gap=gap,
            iterations=iterations,
            solver=solver,
            certificate=certificate,
        )
        return self._result(
            names=scenarios.names,
            weights=weights,
            objective_value=value,
            diagnostics=diagnostics,
            scenarios=scenarios,
            p=p,
            covariance=covariance,
        )

    @staticmethod
    def _with_objective(result: OptimizationResult, value: float) -> OptimizationResult:
        return OptimizationResult(
            names=result.names,
            weights=result.weights,
            objective_value=value,
            diagnostics=result.diagnostics,
            shortfall=result.shortfall,
            variance=result.variance,
            variance_contributions=result.variance_contributions,
            shortfall_contributions=result.shortfall_contributions,
        )

    @staticmethod
    def _solve_combined_qp(
        *,
        scenarios: np.ndarray,
        tail_count: int,
        covariance: np.ndarray,
        alpha: np.ndarray,
        shortfall_aversion: float,
        variance_aversion: float,
        constraints: ConstraintSet,
    ) -> tuple[np.ndarray, int, float]:
        t, n = scenarios.shape
        a_w, b_w, g_w, h_w = constraints.qp_form()
        if shortfall_aversion == 0:
            # 无缺口项时 t、z 不进入目标，只对权重求解均值-方差问题
            solution = solve_qp(p_matrix=2.0 * variance_aversion * covariance, q=-alpha, a=a_w, b=b_w, g=g_w, h=h_w)
            return solution.x, solution.iterations, solution.kkt_residual
        width = n + 1 + t
        p_matrix = sparse.block_diag(
            [sparse.csr_matrix(2.0 * variance_aversion * covariance), sparse.csr_matrix((t + 1, t + 1))], format='csr'
        )
        q = np.concatenate([-alpha, [-shortfall_aversion], np.full(t, -shortfall_aversion / tail_count)])
        g = stack_rows(
            sparse.hstack(
                [sparse.csr_matrix(-scenarios), sparse.csr_matrix(np.ones((t, 1))), sparse.identity(t)], format='csr'
            ),
            sparse.hstack([sparse.csr_matrix((t, n + 1)), sparse.identity(t)], format='csr'),
            sparse.hstack([sparse.csr_matrix(g_w), sparse.csr_matrix((g_w.shape[0], t + 1))], format='csr'),
        )
        h = np.concatenate([np.zeros(2 * t), h_w])
        a = np.hstack([a_w, np.zeros((b_w.size, t + 1))])
        solution = solve_qp(p_matrix=p_matrix, q=q, a=a, b=b_w, g=g, h=h)
        if solution.x.size != width:
            raise errors.NumericalError(msg='二次规划返回的变量维度错误')
        return solution.x[:n], solution.iterations, solution.kkt_residual

    @staticmethod
    def _grid_candidates(constraints: ConstraintSet, grid_step: float) -> np.ndarray:
        """约束可行的网格点；等式约束通过消元确定因变量"""
        n = constraints.size
        a, b = np.asarray(constraints.eq_matrix), np.asarray(constraints.eq_rhs)
        if b.size:
            _, _, pivots = linalg.qr(a, pivoting=True, mode='economic')
            dependent = np.sort(pivots[: b.size])
        else:
            dependent = np.array([], dtype=int)
        free = np.array([i for i in range(n) if i not in set(dependent.tolist())], dtype=int)
        axes = []
        for i in free:
            lo, up = constraints.lower[i], constraints.upper[i]
            if not (np.isfinite(lo) and np.isfinite(up)):
                raise errors.ValidationError(msg=f'网格枚举要求自由变量 {i} 的上下界有限')
            axes.append(np.round(np.arange(lo, up + grid_step / 2, grid_step), 12))
        free_points = np.array(list(itertools.product(*axes))) if axes else np.zeros((1, 0))
        points = np.zeros((free_points.shape[0], n))
        points[:, free] = free_points
        if dependent.size:
            basis = a[:, dependent]
            if abs(np.linalg.det(basis)) < 1e-12:
                raise errors.ValidationError(msg='等式约束线性相关，无法消元')
            rhs = b[None, :] - free_points @ a[:, free].T
            points[:, dependent] = np.linalg.solve(basis, rhs.T).T
        tolerance = 1e-9
        feasible = np.all(points >= constraints.lower - tolerance, axis=1) & np.all(
            points <= constraints.upper + tolerance, axis=1
        )
        if constraints.ub_rhs.size:
            feasible &= np.all(points @ constraints.ub_matrix.T <= constraints.ub_rhs + tolerance, axis=1)
        return points[feasible]

    def brute_force_shortfall(
        self,
        *,
        scenarios: ScenarioSet,
        p: float,
        constraints: ConstraintSet,
        grid_step: float,
        covariance: CovarianceEstimate | None = None,
        objective: ObjectiveSpec | None = None,
    ) -> OptimizationResult:
        """
        网格枚举求最小缺口，仅用于小规模校验；给定 objective 时改为最大化组合目标

        :param scenarios: 情景集
        :param p: 置信水平
        :param constraints: 约束集
        :param grid_step: 网格步长
        :param covariance: 协方差，组合目标需要
        :param objective: 组合目标
        :return:
        """
        n = scenarios.width
        _check_size(constraints, n)
        if n > settings.OPTIMIZE_BRUTE_FORCE_MAX_ASSETS:
            raise errors.ValidationError(
                msg=f'网格枚举最多支持 {settings.OPTIMIZE_BRUTE_FORCE_MAX_ASSETS} 个资产，实际为 {n}'
            )
        if grid_step <= 0:
            raise errors.ValidationError(msg=f'网格步长必须为正，实际为 {grid_step}')
        if objective is not None and covariance is None:
            raise errors.ValidationError(msg='组合目标需要协方差')
        if objective is not None:
            p = objective.confidence
        k = shortfall_service.checked_tail_count(length=scenarios.count, p=p)
        points = self._grid_candidates(constraints, grid_step)
        if points.shape[0] == 0:
            raise errors.InfeasibleError(msg='网格上没有可行点')

        # 统一为最小化：损失 = Λ·缺口 + λ·方差 - α'w
        scores = np.empty(points.shape[0])
        chunk = settings.OPTIMIZE_BRUTE_FORCE_CHUNK
        for offset in range(0, points.shape[0], chunk):
            block = points[offset : offset + chunk]
            shortfall = shortfall_service.batch_shortfall(returns=block @ scenarios.scenarios.T, p=p)
            if objective is None:
                scores[offset : offset + chunk] = shortfall
            else:
                alpha = np.zeros(n) if objective.alpha is None else np.asarray(objective.alpha, dtype=np.float64)
                variance = np.einsum('ij,jk,ik->i', block, covariance.matrix, block)
                scores[offset : offset + chunk] = (
                    objective.shortfall_aversion * shortfall + objective.variance_aversion * variance - block @ alpha
                )
        best = int(np.argmin(scores))
        weights = points[best]
        value = float(scores[best]) if objective is None else -float(scores[best])
        log.debug(f'网格枚举 {points.shape[0]} 个可行点，K={k}，最优值 {value:.6g}')
        diagnostics = Diagnostics(
            feasibility_residual=max(constraints.residual(weights), 0.0),
            optimality_gap=grid_step,
            iterations=int(points.shape[0]),
            solver='grid',
            certificate='grid_step',
        )
        return self._result(
            names=scenarios.names,
            weights=weights,
            objective_value=value,
            diagnostics=diagnostics,
            scenarios=scenarios,
            p=p,
            covariance=covariance,
        )


optimize_service: OptimizeService = OptimizeService()
