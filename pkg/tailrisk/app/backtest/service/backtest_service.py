#!/usr/bin/env python3
# -*- coding: utf-8 -*-
import bisect
import itertools

from datetime import date
from time import perf_counter
from typing import Sequence

import numpy as np
import pandas as pd

from tailrisk.app.backtest.model.report import BacktestReport, held_weights, strategy_key
from tailrisk.app.backtest.schema.config import BacktestConfig, DateRange, RegimeSpec
from tailrisk.app.covariance.service.covariance_service import covariance_service
from tailrisk.app.data.model.panel import ReturnPanel
from tailrisk.app.data.service.panel_service import panel_service
from tailrisk.app.optimize.service.constraint_service import constraint_service
from tailrisk.app.optimize.service.optimize_service import optimize_service
from tailrisk.app.risk.service.performance_service import performance_service
from tailrisk.app.risk.service.shortfall_service import shortfall_service
from tailrisk.app.scenario.service.scenario_service import scenario_service
from tailrisk.common.enums import RebalanceFrequency, StrategyKind
from tailrisk.common.exception import errors
from tailrisk.common.log import log
from tailrisk.core.conf import settings
from tailrisk.utils.parallel import ordered_map


def _period_key(value: date, frequency: RebalanceFrequency):
    match RebalanceFrequency(frequency):
        case RebalanceFrequency.daily:
            return value
        case RebalanceFrequency.weekly:
            iso = value.isocalendar()
            return iso[0], iso[1]
        case RebalanceFrequency.monthly:
            return value.year, value.month
        case RebalanceFrequency.quarterly:
            return value.year, (value.month - 1) // 3


class BacktestService:
    """回测服务类"""

    @staticmethod
    def rebalance_schedule(*, dates: Sequence[date], frequency: RebalanceFrequency) -> tuple[date, ...]:
        """
        调仓日：每个周期（ISO 周、自然月、自然季度）内第一个可用日期，daily 为每个日期

        :param dates: 回测日期
        :param frequency: 调仓频率
        :return:
        """
        schedule = []
        previous = None
        for value in dates:
            key = _period_key(value, frequency)
            if key != previous:
                schedule.append(value)
                previous = key
        return tuple(schedule)

    def run_backtest(self, *, panel: ReturnPanel, config: BacktestConfig, threads: int = 1) -> BacktestReport:
        """
        滚动调仓回测：每个调仓日用之前的数据求解最小方差组合与各置信水平的最小缺口组合

        :param panel: 收益面板，需包含指数列
        :param config: 回测参数
        :param threads: 线程数，用于并行求解不同置信水平
        :return:
        """
        start = perf_counter()
        if config.index_column not in panel.names:
            raise errors.ValidationError(msg=f'收益面板不包含指数列 {config.index_column}')
        first = panel_service.count_before(panel=panel, end_date=config.start_date)
        stop = bisect.bisect_right(panel.dates, config.end_date)
        if first >= stop:
            raise errors.EmptyWindowError(msg=f'[{config.start_date}, {config.end_date}] 内没有面板日期')
        dates = panel.dates[first:stop]
        schedule = self.rebalance_schedule(dates=dates, frequency=config.rebalance_frequency)
        if first <= config.warmup_observations:
            raise errors.InsufficientHistoryError(
                msg=f'首个调仓日 {schedule[0]} 之前只有 {first} 个观测，需要超过 {config.warmup_observations} 个'
            )

        prefix = panel.rows(0, panel_service.count_before(panel=panel, end_date=schedule[-1]))
        history = scenario_service.normalize_history(
            panel=prefix,
            half_life_days=config.half_life_days,
            warmup=config.warmup_observations,
            eigen_floor=config.floor,
        )
        constraints = constraint_service.build_index_style_constraints(
            names=panel.names, index_column=config.index_column, style_bound=config.style_bound
        )
        confidences = list(config.confidence_levels)
        keys = [strategy_key(StrategyKind.minvar)] + [strategy_key(StrategyKind.minsf, p) for p in confidences]
        weight_rows: dict[str, list[np.ndarray]] = {key: [] for key in keys}
        diagnostics = []

        for rebalance in schedule:
            try:
                covariance = covariance_service.ewma_covariance(
                    panel=panel, half_life_days=config.half_life_days, as_of=rebalance
                )
                sigma_sqrt = covariance_service.matrix_sqrt(cov=covariance, eigen_floor=config.floor)
                scenarios = scenario_service.scenarios_from_history(
                    history=history, analysis_date=rebalance, sigma_sqrt=sigma_sqrt
                )
                minvar = optimize_service.minimize_variance(covariance=covariance, constraints=constraints)
                minsf = ordered_map(
                    lambda p: optimize_service.minimize_shortfall(scenarios=scenarios, p=p, constraints=constraints),
                    confidences,
                    threads=threads,
                )
            except errors.BaseExceptionMixin as e:
                e.msg = f'调仓日 {rebalance}：{e.msg}'
                raise
            for key, result in zip(keys, [minvar, *minsf]):
                weight_rows[key].append(np.asarray(result.weights))
                diagnostics.append(
                    {
                        'date': rebalance,
                        'strategy': key,
                        'feasibility_residual': result.diagnostics.feasibility_residual,
                        'optimality_gap': result.diagnostics.optimality_gap,
                        'iterations': result.diagnostics.iterations,
                    }
                )
            log.info(f'调仓日 {rebalance}：{scenarios.count} 个情景，求解 {len(keys)} 个组合')

        index = pd.Index(schedule, name='date')
        weights = {
            key: pd.DataFrame(np.vstack(rows), index=index, columns=list(panel.names))
            for key, rows in weight_rows.items()
        }
        minvar_key = keys[0]
        for p in confidences:
            active = weights[strategy_key(StrategyKind.minsf, p)] - weights[minvar_key]
            weights[strategy_key(StrategyKind.active, p)] = active

        factor_returns = panel.rows(first, stop).to_frame()
        returns = self._strategy_returns(factor_returns=factor_returns, weights=weights, keys=keys, config=config)
        report = BacktestReport(
            config=config,
            names=panel.names,
            rebalance_dates=schedule,
            factor_returns=factor_returns,
            returns=returns,
            weights=weights,
            betas=self._rolling_betas(returns=returns, window=config.beta_window),
            diagnostics=pd.DataFrame(diagnostics),
        )
        elapsed = perf_counter() - start
        log.info(f'回测完成：{len(dates)} 个交易日，{len(schedule)} 次调仓，耗时 {elapsed:.1f}s')
        return report

    @staticmethod
    def _strategy_returns(
        *, factor_returns: pd.DataFrame, weights: dict[str, pd.DataFrame], keys: list[str], config: BacktestConfig
    ) -> pd.DataFrame:
        """逐日计算 w'f，权重为当日生效的调仓权重"""
        rows = factor_returns.to_numpy()
        index_key = strategy_key(StrategyKind.index)
        columns: dict[str, np.ndarray] = {index_key: factor_returns[config.index_column].to_numpy()}
        for key in keys:
            held = held_weights(weights[key], factor_returns.index).to_numpy()
            columns[key] = np.array([rows[i] @ held[i] for i in range(rows.shape[0])])
        minvar = columns[strategy_key(StrategyKind.minvar)]
        for p in config.confidence_levels:
            active = columns[strategy_key(StrategyKind.minsf, p)] - minvar
            columns[strategy_key(StrategyKind.active, p)] = active
            columns[strategy_key(StrategyKind.index_plus_active, p)] = columns[index_key] + active
        return pd.DataFrame(columns, index=factor_returns.index)

    @staticmethod
    def _rolling_betas(*, returns: pd.DataFrame, window: int) -> pd.DataFrame:
        """各策略相对指数的滚动 beta"""
        market = returns[strategy_key(StrategyKind.index)]
        betas = {
            key: performance_service.rolling_beta(portfolio=returns[key], market=market, window_days=window)
            for key in returns.columns
            if key != strategy_key(StrategyKind.index)
        }
        return pd.DataFrame(betas).reindex(returns.index)

    @staticmethod
    def return_attribution(*, report: BacktestReport, confidence: float) -> pd.DataFrame:
        """
        收益归因：各因子累计贡献 Σ e_k,t·r_k,t，e 为当日生效的超额暴露（最小缺口 - 最小方差）

        :param report: 回测结果
        :param confidence: 置信水平
        :return:
        """
        p = report.resolve_confidence(confidence)
        exposure = report.prevailing(strategy_key(StrategyKind.active, p))
        return (exposure * report.factor_returns).cumsum()

    @staticmethod
    def average_excess_exposure(*, report: BacktestReport, confidence: float) -> pd.Series:
        """
        各因子在所有调仓日上的平均超额暴露

        :param report: 回测结果
        :param confidence: 置信水平
        :return:
        """
        p = report.resolve_confidence(confidence)
        return report.weights[strategy_key(StrategyKind.active, p)].mean(axis=0)

    @staticmethod
    def cumulative_table(*, report: BacktestReport, compounded: bool) -> pd.DataFrame:
        """
        各策略累计收益

        :param report: 回测结果
        :param compounded: 是否复利
        :return:
        """
        return report.returns.apply(lambda column: performance_service.cumulative_returns(returns=column, compounded=compounded))

    @staticmethod
    def realized_stats_table(*, report: BacktestReport, regimes: Sequence[RegimeSpec] | None = None) -> pd.DataFrame:
        """
        各策略 × 市场区间的已实现波动率、夏普比率、95% 缺口

        波动率为 0 时夏普比率为空，尾部样本不足时缺口为空

        :param report: 回测结果
        :param regimes: 市场区间，为空时使用全样本
        :return:
        """
        dates = report.dates
        if not regimes:
            regimes = [RegimeSpec(label='full', ranges=[DateRange(start=dates[0], end=dates[-1])])]
        records = []
        for regime in regimes:
            mask = np.array([any(r.contains(d) for r in regime.ranges) for d in dates])
            if not mask.any():
                raise errors.EmptyRegimeError(msg=f'市场区间 {regime.label} 内没有回测日期')
            for key in report.returns.columns:
                values = report.returns[key].to_numpy()[mask]
                record = {'regime': regime.label, 'strategy': key, 'observations': int(values.size)}
                record['realized_volatility'] = (
                    performance_service.realized_volatility(returns=values) if values.size > 1 else None
                )
                try:
                    record['sharpe_ratio'] = performance_service.sharpe_ratio(returns=values)
                except (errors.ZeroVolatilityError, errors.ValidationError):
                    record['sharpe_ratio'] = None
                try:
                    record['realized_shortfall'] = shortfall_service.empirical_shortfall(
                        returns=values, p=settings.RISK_REALIZED_SHORTFALL_CONFIDENCE
                    ).value
                except errors.DegenerateTailError:
                    record['realized_shortfall'] = None
                records.append(record)
        return pd.DataFrame(records)

    def run_parameter_sweep(
        self,
        *,
        panel: ReturnPanel,
        config: BacktestConfig,
        half_lives: Sequence[int],
        frequencies: Sequence[RebalanceFrequency],
        threads: int = 1,
    ) -> pd.DataFrame:
        """
        半衰期 × 调仓频率敏感性分析：各组合下主动组合的年化收益与波动率

        :param panel: 收益面板
        :param config: 基准回测参数
        :param half_lives: 半衰期
        :param frequencies: 调仓频率
        :param threads: 线程数
        :return:
        """
        records = []
        periods = settings.RISK_PERIODS_PER_YEAR
        for half_life, frequency in itertools.product(half_lives, frequencies):
            variant = config.model_copy(update={'half_life_days': half_life, 'rebalance_frequency': frequency})
            report = self.run_backtest(panel=panel, config=variant, threads=threads)
            for p in report.confidences:
                active = report.returns[strategy_key(StrategyKind.active, p)].to_numpy()
                records.append(
                    {
                        'half_life_days': half_life,
                        'rebalance_frequency': RebalanceFrequency(frequency).value,
                        'confidence': p,
                        'active_annual_return': float(active.mean() * periods),
                        'active_volatility': performance_service.realized_volatility(returns=active)
                        if active.size > 1
                        else None,
                    }
                )
        return pd.DataFrame(records)


backtest_service: BacktestService = BacktestService()
