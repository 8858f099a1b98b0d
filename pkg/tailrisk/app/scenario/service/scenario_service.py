#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import os

from datetime import date
from time import perf_counter

import numpy as np

from tailrisk.app.covariance.service.covariance_service import covariance_service
from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.schema.config import AnalysisConfig
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.scenario.model.scenario_set import ScenarioSet
from tailrisk.common.exception import errors
from tailrisk.common.log import log

# 每批特征分解的日期数
_BATCH = 256


class ScenarioService:
    """情景生成服务类"""

    @staticmethod
    def normalize_history(
        *, panel: ReturnPanel, half_life_days: int, warmup: int, eigen_floor: float | None = None
    ) -> ReturnPanel:
        """
        剥离历史协方差：g_t = Σ_t^{-1/2} f_t，Σ_t 只使用 t 之前的观测，预热期不输出

        :param panel: 收益面板
        :param half_life_days: 半衰期
        :param warmup: 预热观测数
        :param eigen_floor: 特征值下限
        :return:
        """
        if warmup < 2:
            raise errors.ValidationError(msg=f'预热观测数至少为 2，实际为 {warmup}')
        if panel.length <= warmup:
            raise errors.InsufficientHistoryError(msg=f'面板只有 {panel.length} 个观测，预热需要超过 {warmup} 个')
        start = perf_counter()
        returns = panel.returns
        normalized = np.empty((panel.length - warmup, panel.width))
        path = covariance_service.ewma_covariance_path(returns=returns, half_life_days=half_life_days, start=warmup)
        offset = 0
        while offset < normalized.shape[0]:
            size = min(_BATCH, normalized.shape[0] - offset)
            covs = np.stack([next(path) for _ in range(size)])
            inv_sqrt = covariance_service.stacked_power(covs, -0.5, eigen_floor)
            rows = returns[warmup + offset : warmup + offset + size]
            normalized[offset : offset + size] = np.einsum('tij,tj->ti', inv_sqrt, rows)
            offset += size
        elapsed = (perf_counter() - start) * 1000
        log.debug(f'历史归一化完成：{normalized.shape[0]} 个日期，耗时 {elapsed:.1f}ms')
        return ReturnPanel(dates=panel.dates[warmup:], names=panel.names, returns=normalized)

    @staticmethod
    def scenarios_from_history(*, history: ReturnPanel, analysis_date: date, sigma_sqrt: np.ndarray) -> ScenarioSet:
        """
        以当前协方差平方根重新施加协方差：f̃_t = Σ_T^{1/2} g_t，只使用早于分析日的 g_t

        :param history: 归一化历史 g_t
        :param analysis_date: 分析日
        :param sigma_sqrt: Σ_T^{1/2}
        :return:
        """
        window = panel_service.slice_window(panel=history, end_date=analysis_date)
        return ScenarioSet(
            analysis_date=analysis_date,
            names=history.names,
            scenarios=window.returns @ sigma_sqrt.T,
            source_dates=window.dates,
        )

    def forecast_scenarios(self, *, panel: ReturnPanel, analysis_date: date, config: AnalysisConfig) -> ScenarioSet:
        """
        生成分析日的预测情景

        :param panel: 收益面板
        :param analysis_date: 分析日
        :param config: 分析参数
        :return:
        """
        prior = panel_service.count_before(panel=panel, end_date=analysis_date)
        if prior <= config.warmup_observations:
            raise errors.InsufficientHistoryError(
                msg=f'{analysis_date} 之前只有 {prior} 个观测，预热需要超过 {config.warmup_observations} 个'
            )
        window = panel.rows(0, prior)
        history = self.normalize_history(
            panel=window,
            half_life_days=config.half_life_days,
            warmup=config.warmup_observations,
            eigen_floor=config.floor,
        )
        current = covariance_service.ewma_covariance(
            panel=panel, half_life_days=config.half_life_days, as_of=analysis_date
        )
        sigma_sqrt = covariance_service.matrix_sqrt(cov=current, eigen_floor=config.floor)
        scenarios = self.scenarios_from_history(history=history, analysis_date=analysis_date, sigma_sqrt=sigma_sqrt)
        log.info(f'{analysis_date} 生成 {scenarios.count} 个情景')
        return scenarios

    @staticmethod
    def export_scenarios(*, scenarios: ScenarioSet, path: str | os.PathLike) -> None:
        """
        导出情景 CSV，日期列为来源日期

        :param scenarios: 情景集
        :param path: 文件路径
        :return:
        """
        panel_service.write_panel(panel=scenarios.to_panel(), path=path)


scenario_service: ScenarioService = ScenarioService()
