#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import itertools
import math

from time import perf_counter
from typing import Sequence

import numpy as np
import pandas as pd

from scipy import special

from tailrisk.app.esterror.model.trial import TrialReport
from tailrisk.app.optimize.model.constraint_set import ConstraintSet
from tailrisk.app.optimize.service.optimize_service import optimize_service
from tailrisk.app.risk.service.shortfall_service import shortfall_service
from tailrisk.app.scenario.model.scenario_set import ScenarioSet
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.utils.parallel import child_rng, ordered_map


def _dispersion(values: np.ndarray) -> float:
    return float(np.std(values, ddof=1)) if values.size > 1 else 0.0


class EstimationErrorService:
    """估计误差实验服务类"""

    @staticmethod
    def weight_error_angle(*, w: np.ndarray, w_true: np.ndarray) -> float:
        """
        两个权重向量夹角（度）

        :param w: 权重
        :param w_true: 真实最优权重
        :return:
        """
        w = np.asarray(w, dtype=np.float64).ravel()
        w_true = np.asarray(w_true, dtype=np.float64).ravel()
        if w.shape != w_true.shape:
            raise errors.ValidationError(msg=f'权重长度不一致：{w.size} 与 {w_true.size}')
        norm = np.linalg.norm(w) * np.linalg.norm(w_true)
        if norm == 0:
            raise errors.ZeroVectorError()
        cosine = float(np.clip(w @ w_true / norm, -1.0, 1.0))
        return math.degrees(math.acos(cosine))

    @staticmethod
    def boundary_angle(*, n: int) -> float:
        """
        边界角：以真实最优点为球心、体积为可行单纯形一半的 n 维球，其半径对应的张角（度）

        单纯形体积 √(n+1)/n!，|w_op| = 1/√(n+1)

        :param n: 单纯形维数（资产数 - 1）
        :return:
        """
        if n < 1:
            raise errors.ValidationError(msg=f'单纯形维数必须为正，实际为 {n}')
        log_half_volume = 0.5 * math.log(n + 1) - special.gammaln(n + 1) - math.log(2)
        log_radius = (log_half_volume + special.gammaln(n / 2 + 1) - (n / 2) * math.log(math.pi)) / n
        return math.degrees(math.atan(math.exp(log_radius) * math.sqrt(n + 1)))

    @staticmethod
    def random_weight_baseline(*, n_assets: int, samples: int, seed: int) -> float:
        """
        单纯形上均匀随机权重与等权向量的平均夹角（度）

        :param n_assets: 资产数
        :param samples: 抽样数
        :param seed: 随机种子
        :return:
        """
        if n_assets < 1 or samples < 1:
            raise errors.ValidationError(msg=f'资产数与抽样数必须为正，实际为 {n_assets}、{samples}')
        draws = np.random.default_rng(seed).standard_exponential((samples, n_assets))
        weights = draws / draws.sum(axis=1, keepdims=True)
        cosine = weights.sum(axis=1) / (np.linalg.norm(weights, axis=1) * math.sqrt(n_assets))
        return float(np.degrees(np.arccos(np.clip(cosine, -1.0, 1.0))).mean())

    def _replicate(
        self, *, n_assets: int, length: int, confidences: Sequence[float], seed: int, key: tuple[int, int]
    ) -> list[tuple[float, float]]:
        """同一个样本上依次求解各置信水平，返回 (风险误差, 权重误差)"""
        sample = child_rng(seed, *key).standard_normal((length, n_assets))
        scenarios = ScenarioSet.from_matrix(sample)
        constraints = ConstraintSet.full_investment(n_assets, long_only=True)
        equal = np.full(n_assets, 1.0 / n_assets)
        outcomes = []
        for p in confidences:
            try:
                result = optimize_service.minimize_shortfall(scenarios=scenarios, p=p, constraints=constraints)
            except errors.BaseExceptionMixin as e:
                e.msg = f'样本长度 {length}、第 {key[1]} 次重复、置信水平 {p}：{e.msg}'
                raise
            # 标准正态资产下真实缺口与组合波动率成正比
            risk_error = float(np.linalg.norm(result.weights) * math.sqrt(n_assets))
            outcomes.append((risk_error, self.weight_error_angle(w=result.weights, w_true=equal)))
        return outcomes

    def run_estimation_study(
        self,
        *,
        n_assets: int,
        sample_lengths: Sequence[int],
        confidences: Sequence[float],
        replications: int,
        seed: int,
        threads: int = 1,
    ) -> list[TrialReport]:
        """
        在标准正态模拟数据上重复求解全额投资只做多的最小缺口组合，统计风险误差与权重误差

        :param n_assets: 资产数
        :param sample_lengths: 样本长度
        :param confidences: 置信水平
        :param replications: 重复次数
        :param seed: 主种子
        :param threads: 线程数
        :return:
        """
        if n_assets < 2:
            raise errors.ValidationError(msg=f'资产数至少为 2，实际为 {n_assets}')
        if replications < 1:
            raise errors.ValidationError(msg=f'重复次数必须为正，实际为 {replications}')
        for length, p in itertools.product(sample_lengths, confidences):
            shortfall_service.checked_tail_count(length=length, p=p)

        start = perf_counter()
        tasks = list(itertools.product(range(len(sample_lengths)), range(replications)))
        outcomes = ordered_map(
            lambda task: self._replicate(
                n_assets=n_assets,
                length=sample_lengths[task[0]],
                confidences=confidences,
                seed=seed,
                key=task,
            ),
            tasks,
            threads=threads,
        )
        grid = np.array(outcomes).reshape(len(sample_lengths), replications, len(confidences), 2)
        angle = self.boundary_angle(n=n_assets - 1)
        reports = []
        for i, length in enumerate(sample_lengths):
            for j, p in enumerate(confidences):
                risk_errors, weight_errors = grid[i, :, j, 0], grid[i, :, j, 1]
                reports.append(
                    TrialReport(
                        n_assets=n_assets,
                        sample_length=length,
                        confidence=p,
                        replications=replications,
                        mean_risk_error=float(risk_errors.mean()),
                        mean_weight_error_deg=float(weight_errors.mean()),
                        boundary_angle_deg=angle,
                        std_risk_error=_dispersion(risk_errors),
                        std_weight_error_deg=_dispersion(weight_errors),
                    )
                )
        elapsed = perf_counter() - start
        log.info(f'估计误差实验完成：{len(tasks)} 个样本，{len(reports)} 个单元，耗时 {elapsed:.1f}s')
        return reports

    @staticmethod
    def study_grid(*, reports: Sequence[TrialReport], metric: str) -> pd.DataFrame:
        """
        整理为行 = 样本长度、列 = 置信水平的表

        :param reports: 实验结果
        :param metric: TrialReport 字段名
        :return:
        """
        frame = pd.DataFrame(
            [{'sample_length': r.sample_length, 'confidence': r.confidence, metric: getattr(r, metric)} for r in reports]
        )
        grid = frame.pivot(index='sample_length', columns='confidence', values=metric)
        grid.columns = [f'{c:g}' for c in grid.columns]
        return grid


esterror_service: EstimationErrorService = EstimationErrorService()
