#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import numpy as np
import pandas as pd

from numpy.lib.stride_tricks import sliding_window_view

from tailrisk.common.exception import errors
from tailrisk.core.conf import settings


def _as_array(returns) -> np.ndarray:
    return np.asarray(returns, dtype=np.float64).ravel()


class PerformanceService:
    """已实现业绩统计服务类"""

    @staticmethod
    def realized_volatility(*, returns, periods_per_year: int | None = None) -> float:
        """
        年化已实现波动率（样本标准差，除数 T-1）

        :param returns: 收益序列
        :param periods_per_year: 每年期数
        :return:
        """
        values = _as_array(returns)
        if values.size < 2:
            raise errors.ValidationError(msg=f'计算波动率至少需要 2 个收益，实际为 {values.size}')
        periods = periods_per_year or settings.RISK_PERIODS_PER_YEAR
        if np.ptp(values) == 0:
            return 0.0
        return float(np.std(values, ddof=1) * np.sqrt(periods))

    def sharpe_ratio(self, *, returns, periods_per_year: int | None = None) -> float:
        """
        年化收益 / 年化波动率，不扣除无风险利率

        :param returns: 收益序列
        :param periods_per_year: 每年期数
        :return:
        """
        values = _as_array(returns)
        periods = periods_per_year or settings.RISK_PERIODS_PER_YEAR
        volatility = self.realized_volatility(returns=values, periods_per_year=periods)
        if volatility == 0:
            raise errors.ZeroVolatilityError(msg='已实现波动率为 0，无法计算夏普比率')
        return float(values.mean() * periods / volatility)

    @staticmethod
    def rolling_beta(*, portfolio: pd.Series, market: pd.Series, window_days: int | None = None) -> pd.Series:
        """
        滚动窗口 beta = cov(组合, 市场) / var(市场)，只输出窗口完整的日期

        :param portfolio: 组合收益
        :param market: 市场收益
        :param window_days: 窗口长度
        :return:
        """
        window = window_days or settings.RISK_ROLLING_BETA_WINDOW
        if window < 2:
            raise errors.ValidationError(msg=f'滚动窗口至少为 2，实际为 {window}')
        if not portfolio.index.equals(market.index):
            raise errors.ValidationError(msg='组合与市场收益的日期未对齐')
        if len(market) < window:
            return pd.Series([], index=market.index[:0], dtype=np.float64, name=portfolio.name)
        y = sliding_window_view(portfolio.to_numpy(dtype=np.float64), window)
        x = sliding_window_view(market.to_numpy(dtype=np.float64), window)
        flat = np.ptp(x, axis=1) == 0
        if flat.any():
            when = market.index[window - 1 + int(np.argmax(flat))]
            raise errors.ZeroVarianceError(msg=f'截至 {when} 的窗口内市场收益方差为 0')
        xc = x - x.mean(axis=1, keepdims=True)
        yc = y - y.mean(axis=1, keepdims=True)
        beta = (xc * yc).sum(axis=1) / (xc * xc).sum(axis=1)
        return pd.Series(beta, index=market.index[window - 1 :], name=portfolio.name)

    @staticmethod
    def cumulative_returns(*, returns: pd.Series, compounded: bool = False) -> pd.Series:
        """
        累计收益，简单加总或复利

        :param returns: 收益序列
        :param compounded: 是否复利
        :return:
        """
        if compounded:
            return (1.0 + returns).cumprod() - 1.0
        return returns.cumsum()


performance_service: PerformanceService = PerformanceService()
