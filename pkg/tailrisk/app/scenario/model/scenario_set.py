#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from datetime import date

import numpy as np

from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.common.exception import errors


@dataclasses.dataclass(frozen=True)
class ScenarioSet:
    """某分析日的协方差归一化预测情景，每行对应一个历史日期"""

    analysis_date: date
    names: tuple[str, ...]
    scenarios: np.ndarray
    source_dates: tuple[date, ...]

    def __post_init__(self) -> None:
        scenarios = np.array(self.scenarios, dtype=np.float64, copy=True)
        if scenarios.ndim != 2 or scenarios.shape[0] < 1:
            raise errors.ValidationError(msg=f'情景矩阵至少需要 1 行，实际形状 {scenarios.shape}')
        if scenarios.shape[0] != len(self.source_dates):
            raise errors.ValidationError(
                msg=f'情景行数 {scenarios.shape[0]} 与来源日期数 {len(self.source_dates)} 不一致'
            )
        if scenarios.shape[1] != len(self.names):
            raise errors.ValidationError(msg=f'情景列数 {scenarios.shape[1]} 与列名数 {len(self.names)} 不一致')
        scenarios.setflags(write=False)
        object.__setattr__(self, 'scenarios', scenarios)
        object.__setattr__(self, 'names', tuple(self.names))
        object.__setattr__(self, 'source_dates', tuple(self.source_dates))

    @property
    def count(self) -> int:
        """情景数 T'"""
        return self.scenarios.shape[0]

    @property
    def width(self) -> int:
        """资产数 N"""
        return self.scenarios.shape[1]

    def portfolio_returns(self, weights: np.ndarray) -> np.ndarray:
        """
        组合在各情景下的收益

        :param weights: 权重
        :return:
        """
        weights = np.asarray(weights, dtype=np.float64)
        if weights.shape != (self.width,):
            raise errors.ValidationError(msg=f'权重长度 {weights.shape} 与情景列数 {self.width} 不一致')
        return self.scenarios @ weights

    def scale(self, factor: float) -> 'ScenarioSet':
        """
        整体缩放情景

        :param factor: 缩放系数
        :return:
        """
        return dataclasses.replace(self, scenarios=self.scenarios * factor)

    def to_panel(self) -> ReturnPanel:
        """以来源日期为日期列转换为收益面板"""
        return ReturnPanel(dates=self.source_dates, names=self.names, returns=self.scenarios)

    @classmethod
    def from_matrix(cls, scenarios: np.ndarray, *, names: tuple[str, ...] | None = None) -> 'ScenarioSet':
        """
        由裸矩阵构造情景集，来源日期为占位的连续日历日

        :param scenarios: T'×N 情景矩阵
        :param names: 列名
        :return:
        """
        scenarios = np.atleast_2d(np.asarray(scenarios, dtype=np.float64))
        t, n = scenarios.shape
        names = names or tuple(f'x{i}' for i in range(n))
        origin = date(2000, 1, 1).toordinal()
        dates = tuple(date.fromordinal(origin + i) for i in range(t))
        return cls(analysis_date=date.fromordinal(origin + t), names=names, scenarios=scenarios, source_dates=dates)
