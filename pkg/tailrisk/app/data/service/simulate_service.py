#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date
from typing import Sequence

import numpy as np

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.common.enums import DistributionType
from tailrisk.common.exception import errors


class SimulateService:
    """模拟收益面板服务类"""

    @staticmethod
    def standard_draws(
        *, rng: np.random.Generator, shape: tuple[int, int], distribution: DistributionType, df: float = 3.0
    ) -> np.ndarray:
        """
        生成零均值单位方差的独立随机数

        :param rng: 随机数生成器
        :param shape: 形状
        :param distribution: 分布类型
        :param df: t 分布自由度，必须大于 2
        :return:
        """
        match DistributionType(distribution):
            case DistributionType.normal:
                return rng.standard_normal(shape)
            case DistributionType.t:
                if df <= 2:
                    raise errors.ValidationError(msg=f't 分布自由度必须大于 2，实际为 {df}')
                return rng.standard_t(df, size=shape) * np.sqrt((df - 2) / df)
            case DistributionType.skewed:
                # 1 - Exp(1)：均值 0、方差 1，左尾长
                return 1.0 - rng.standard_exponential(shape)

    def simulate_panel(
        self,
        *,
        names: Sequence[str],
        length: int,
        seed: int,
        distribution: DistributionType = DistributionType.normal,
        covariance: np.ndarray | None = None,
        vols: Sequence[float] | None = None,
        df: float = 3.0,
        dates: Sequence[date] | None = None,
        start: date = date(2000, 1, 3),
    ) -> ReturnPanel:
        """
        生成模拟收益面板

        :param names: 列名
        :param length: 观测数
        :param seed: 随机种子
        :param distribution: 分布类型
        :param covariance: 协方差矩阵，与 vols 互斥
        :param vols: 各列波动率
        :param df: t 分布自由度
        :param dates: 日期序列，为空时从 start 起生成工作日
        :param start: 起始日期
        :return:
        """
        n = len(names)
        if length < 1 or n < 1:
            raise errors.ValidationError(msg=f'模拟面板至少需要 1 行 1 列，实际为 {length}×{n}')
        if covariance is not None and vols is not None:
            raise errors.ValidationError(msg='covariance 与 vols 不能同时指定')
        rng = np.random.default_rng(seed)
        draws = self.standard_draws(rng=rng, shape=(length, n), distribution=distribution, df=df)
        if covariance is not None:
            covariance = np.asarray(covariance, dtype=np.float64)
            if covariance.shape != (n, n):
                raise errors.ValidationError(msg=f'协方差矩阵形状 {covariance.shape} 与列数 {n} 不一致')
            try:
                factor = np.linalg.cholesky(covariance)
            except np.linalg.LinAlgError:
                raise errors.ValidationError(msg='协方差矩阵必须正定')
            returns = draws @ factor.T
        elif vols is not None:
            if len(vols) != n:
                raise errors.ValidationError(msg=f'波动率数量 {len(vols)} 与列数 {n} 不一致')
            returns = draws * np.asarray(vols, dtype=np.float64)
        else:
            returns = draws
        if dates is None:
            dates = panel_service.business_dates(start=start, length=length)
        return ReturnPanel(dates=tuple(dates), names=tuple(names), returns=returns)


simulate_service: SimulateService = SimulateService()
