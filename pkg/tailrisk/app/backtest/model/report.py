#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import dataclasses

from datetime import date

import numpy as np
import pandas as pd

from tailrisk.app.backtest.schema.config import BacktestConfig
from tailrisk.common.enums import StrategyKind
from tailrisk.common.exception import errors


def confidence_tag(p: float) -> str:
    """置信水平标签，0.6 -> '60'"""
    return f'{p * 100:g}'


def strategy_key(kind: StrategyKind, p: float | None = None) -> str:
    """策略键，如 minvar、xsf60、active60"""
    kind = StrategyKind(kind)
    return kind.value if p is None else f'{kind.value}{confidence_tag(p)}'


def held_weights(history: pd.DataFrame, index: pd.Index) -> pd.DataFrame:
    """
    把调仓日权重展开到每个日期（最近一次调仓，含当日）

    :param history: 以调仓日为索引的权重
    :param index: 日期索引
    :return:
    """
    rebalances = np.array([d.toordinal() for d in history.index])
    days = np.array([d.toordinal() for d in index])
    positions = np.searchsorted(rebalances, days, side='right') - 1
    if np.any(positions < 0):
        raise errors.ValidationError(msg='存在早于首个调仓日的日期')
    return pd.DataFrame(history.to_numpy()[positions], index=index, columns=history.columns)


@dataclasses.dataclass(frozen=True)
class BacktestReport:
    """
    回测结果

    returns 与 factor_returns 共享回测日期索引；weights 以调仓日为索引
    """

    config: BacktestConfig
    names: tuple[str, ...]
    rebalance_dates: tuple[date, ...]
    factor_returns: pd.DataFrame
    returns: pd.DataFrame
    weights: dict[str, pd.DataFrame]
    betas: pd.DataFrame
    diagnostics: pd.DataFrame

    @property
    def dates(self) -> tuple[date, ...]:
        return tuple(self.returns.index)

    @property
    def confidences(self) -> list[float]:
        return list(self.config.confidence_levels)

    def resolve_confidence(self, confidence: float) -> float:
        """
        在报告中查找置信水平

        :param confidence: 置信水平
        :return:
        """
        for p in self.confidences:
            if abs(p - confidence) < 1e-12:
                return p
        raise errors.UnknownConfidenceError(msg=f'回测报告不包含置信水平 {confidence}')

    def prevailing(self, key: str) -> pd.DataFrame:
        """
        每个回测日生效的权重（最近一次调仓，含当日）

        :param key: 策略键
        :return:
        """
        return held_weights(self.weights[key], self.returns.index)
