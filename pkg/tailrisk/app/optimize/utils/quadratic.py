#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

import cvxpy as cp
import numpy as np

from scipy import sparse

from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings


@dataclasses.dataclass(frozen=True)
class QPSolution:
    """二次规划解及 KKT 残差"""

    x: np.ndarray
    objective: float
    kkt_residual: float
    iterations: int


def _solver_options() -> dict:
    tolerance = settings.OPTIMIZE_QP_SOLVER_TOLERANCE
    if settings.OPTIMIZE_QP_SOLVER.upper() == 'CLARABEL':
        return {'tol_gap_abs': tolerance, 'tol_gap_rel': tolerance, 'tol_feas': tolerance, 'tol_ktratio': 1e-8}
    return {}


def kkt_residual(
    *,
    p_matrix,
    q: np.ndarray,
    a: np.ndarray,
    b: np.ndarray,
    g,
    h: np.ndarray,
    x: np.ndarray,
    mu: np.ndarray,
) -> float:
    """
    min ½x'Px + q'x, Ax = b, Gx <= h 的 KKT 残差（相对梯度尺度）

    不等式乘子取求解器给出的值并截断为非负，等式乘子用最小二乘重新求解

    :return:
    """
    gradient = p_matrix @ x + q
    mu = np.maximum(np.asarray(mu, dtype=np.float64), 0.0) if h.size else np.zeros(0)
    partial = gradient + (g.T @ mu if h.size else 0.0)
    if b.size:
        nu, *_ = np.linalg.lstsq(a.T, -partial, rcond=None)
        stationarity = partial + a.T @ nu
        primal_eq = np.max(np.abs(a @ x - b))
    else:
        stationarity = partial
        primal_eq = 0.0
    slack = h - g @ x if h.size else np.zeros(0)
    complementarity = float(np.max(np.abs(mu * slack))) if h.size else 0.0
    primal_ub = float(np.max(-slack)) if h.size else 0.0
    scale = 1.0 + float(np.max(np.abs(gradient)))
    return max(float(np.max(np.abs(stationarity))) / scale, complementarity / scale, primal_eq, primal_ub, 0.0)


def solve_qp(*, p_matrix, q: np.ndarray, a: np.ndarray, b: np.ndarray, g, h: np.ndarray) -> QPSolution:
    """
    用 cvxpy 求解凸二次规划 min ½x'Px + q'x，Ax = b，Gx <= h

    :param p_matrix: 半正定矩阵 P（可为稀疏）
    :param q: 线性项
    :param a: 等式系数
    :param b: 等式右端
    :param g: 不等式系数（可为稀疏）
    :param h: 不等式右端
    :return:
    """
    x = cp.Variable(q.size)
    objective = 0.5 * cp.quad_form(x, cp.psd_wrap(p_matrix)) + q @ x
    constraints = []
    if b.size:
        constraints.append(a @ x == b)
    inequality = None
    if h.size:
        inequality = g @ x <= h
        constraints.append(inequality)
    problem = cp.Problem(cp.Minimize(objective), constraints)
    try:
        problem.solve(solver=settings.OPTIMIZE_QP_SOLVER, **_solver_options())
    except cp.error.SolverError as e:
        raise errors.NumericalError(msg=f'二次规划求解失败：{e}')
    log.debug(f'二次规划状态 {problem.status}，目标 {problem.value}')

    if problem.status in (cp.INFEASIBLE, cp.INFEASIBLE_INACCURATE):
        raise errors.InfeasibleError(msg=f'约束集不可行：{problem.status}')
    if problem.status in (cp.UNBOUNDED, cp.UNBOUNDED_INACCURATE):
        raise errors.UnboundedError(msg=f'目标无界：{problem.status}')
    if problem.status not in (cp.OPTIMAL, cp.OPTIMAL_INACCURATE) or x.value is None:
        raise errors.NumericalError(msg=f'二次规划求解失败：{problem.status}')

    solution = np.asarray(x.value, dtype=np.float64)
    mu = np.asarray(inequality.dual_value) if inequality is not None else np.zeros(0)
    residual = kkt_residual(p_matrix=p_matrix, q=q, a=a, b=b, g=g, h=h, x=solution, mu=mu)
    stats = problem.solver_stats
    iterations = int(stats.num_iters) if stats is not None and stats.num_iters is not None else 0
    if residual > settings.OPTIMIZE_OPTIMALITY_TOLERANCE:
        raise errors.NumericalError(msg=f'二次规划 KKT 残差 {residual:.3e} 超过容差', data={'kkt_residual': residual})
    return QPSolution(
        x=solution,
        objective=float(0.5 * solution @ (p_matrix @ solution) + q @ solution),
        kkt_residual=residual,
        iterations=iterations,
    )


def stack_rows(*blocks) -> sparse.csr_matrix:
    """纵向拼接稀疏块，空块被忽略"""
    kept = [block for block in blocks if block.shape[0]]
    return sparse.vstack(kept, format='csr') if kept else sparse.csr_matrix((0, blocks[0].shape[1]))
