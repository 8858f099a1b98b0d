#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

import numpy as np

from scipy import sparse
from scipy.optimize import linprog

from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings


@dataclasses.dataclass(frozen=True)
class LPSolution:
    """线性规划解及对偶证书"""

    weights: np.ndarray
    threshold: float
    objective: float
    dual_objective: float
    iterations: int

    @property
    def duality_gap(self) -> float:
        return abs(self.objective - self.dual_objective)


def _dual_objective(result, b_ub: np.ndarray, b_eq: np.ndarray, lower: np.ndarray, upper: np.ndarray) -> float:
    """由 HiGHS 的边际值重建对偶目标，无界一侧不计入"""
    total = float(b_ub @ result.ineqlin.marginals) if b_ub.size else 0.0
    if b_eq.size:
        total += float(b_eq @ result.eqlin.marginals)
    finite_lower = np.isfinite(lower)
    finite_upper = np.isfinite(upper)
    total += float(lower[finite_lower] @ result.lower.marginals[finite_lower])
    total += float(upper[finite_upper] @ result.upper.marginals[finite_upper])
    return total


def solve_lifted_lp(
    *,
    scenarios: np.ndarray,
    tail_count: int,
    constraints: ConstraintSet,
    alpha: np.ndarray | None = None,
    shortfall_aversion: float = 1.0,
) -> LPSolution:
    """
    求解提升变量后的缺口线性规划，变量为 x = [w, t, z]：

        min  -α'w + Λ(-t - (1/K) Σ z_i)
        s.t. t + z_i <= w'r_i,  z_i <= 0,  w 满足约束集

    :param scenarios: T'×N 情景矩阵
    :param tail_count: 尾部样本数 K
    :param constraints: 权重约束
    :param alpha: 预期收益
    :param shortfall_aversion: 缺口厌恶系数 Λ
    :return:
    """
    t, n = scenarios.shape
    alpha = np.zeros(n) if alpha is None else np.asarray(alpha, dtype=np.float64)
    cost = np.concatenate([-alpha, [-shortfall_aversion], np.full(t, -shortfall_aversion / tail_count)])

    scenario_rows = sparse.hstack(
        [sparse.csr_matrix(-scenarios), sparse.csr_matrix(np.ones((t, 1))), sparse.identity(t, format='csr')],
        format='csr',
    )
    padding = sparse.csr_matrix((constraints.ub_rhs.size, t + 1))
    a_ub = sparse.vstack([scenario_rows, sparse.hstack([sparse.csr_matrix(constraints.ub_matrix), padding])], format='csr')
    b_ub = np.concatenate([np.zeros(t), constraints.ub_rhs])
    b_eq = np.asarray(constraints.eq_rhs)
    a_eq = None
    if b_eq.size:
        a_eq = sparse.hstack(
            [sparse.csr_matrix(constraints.eq_matrix), sparse.csr_matrix((b_eq.size, t + 1))], format='csr'
        )
    lower = np.concatenate([constraints.lower, [-np.inf], np.full(t, -np.inf)])
    upper = np.concatenate([constraints.upper, [np.inf], np.zeros(t)])
    bounds = [(None if np.isinf(lo) else lo, None if np.isinf(up) else up) for lo, up in zip(lower, upper)]

    tolerance = settings.OPTIMIZE_LP_SOLVER_TOLERANCE

    def solve(presolve: bool):
        return linprog(
            cost,
            A_ub=a_ub,
            b_ub=b_ub,
            A_eq=a_eq,
            b_eq=b_eq if b_eq.size else None,
            bounds=bounds,
            method=settings.OPTIMIZE_LP_METHOD,
            options={
                'presolve': presolve,
                'primal_feasibility_tolerance': tolerance,
                'dual_feasibility_tolerance': tolerance,
            },
        )

    result = solve(True)
    if result.status == 4 and 'unbounded or infeasible' in result.message.lower():
        # 预处理无法区分不可行与无界，关闭预处理重解
        result = solve(False)
    log.debug(f'线性规划状态 {result.status}：{result.message}，迭代 {result.nit} 次')
    match result.status:
        case 0:
            pass
        case 2:
            raise errors.InfeasibleError(msg=f'约束集不可行：{result.message}')
        case 3:
            raise errors.UnboundedError(msg=f'约束集无法限制损失：{result.message}')
        case _:
            raise errors.NumericalError(msg=f'线性规划求解失败（状态 {result.status}）：{result.message}')

    return LPSolution(
        weights=np.asarray(result.x[:n]),
        threshold=float(result.x[n]),
        objective=float(result.fun),
        dual_objective=_dual_objective(result, b_ub, b_eq, lower, upper),
        iterations=int(result.nit),
    )
