#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date
from typing import Any

from pydantic import Field, model_validator

from tailrisk.common.enums import RebalanceFrequency
from tailrisk.common.schema import Probability, SchemaBase, Seed
from tailrisk.core.conf import settings


class DateRange(SchemaBase):
    """闭区间 [start, end]"""

    start: date
    end: date

    @model_validator(mode='after')
    def check_order(self) -> 'DateRange':
        if self.start > self.end:
            raise ValueError(f'区间起点 {self.start} 晚于终点 {self.end}')
        return self

    def contains(self, value: date) -> bool:
        return self.start <= value <= self.end


class RegimeSpec(SchemaBase):
    """市场区间，由若干日期区间组成"""

    label: str = Field(min_length=1)
    ranges: list[DateRange] = Field(min_length=1)


class BacktestConfig(SchemaBase):
    """回测参数"""

    confidence_levels: list[Probability] = Field(
        default_factory=lambda: list(settings.RISK_CONFIDENCE_LEVELS), min_length=1, description='置信水平'
    )
    rebalance_frequency: RebalanceFrequency = Field(default=RebalanceFrequency.monthly, description='调仓频率')
    half_life_days: int = Field(default=settings.COVARIANCE_HALF_LIFE_DAYS, ge=1, description='EWMA 半衰期')
    start_date: date
    end_date: date
    index_column: str = Field(min_length=1, description='指数列')
    style_bound: float = Field(default=settings.BACKTEST_STYLE_BOUND, gt=0, description='风格暴露上下限')
    warmup_observations: int = Field(default=settings.SCENARIO_WARMUP_OBSERVATIONS, ge=2, description='预热观测数')
    eigen_floor: float | None = Field(default=None, ge=0, description='特征值下限')
    beta_window: int = Field(default=settings.RISK_ROLLING_BETA_WINDOW, ge=2, description='滚动 beta 窗口')
    regimes: list[RegimeSpec] = Field(default_factory=list, description='市场区间')
    seed: Seed = 0

    @model_validator(mode='before')
    @classmethod
    def accept_confidences(cls, data: Any) -> Any:
        """confidences 为 confidence_levels 的别名，两者同时出现时以 confidence_levels 为准"""
        if isinstance(data, dict) and 'confidences' in data:
            data = dict(data)
            confidences = data.pop('confidences')
            data.setdefault('confidence_levels', confidences)
        return data

    @model_validator(mode='after')
    def check_dates(self) -> 'BacktestConfig':
        if self.start_date >= self.end_date:
            raise ValueError(f'start_date {self.start_date} 必须早于 end_date {self.end_date}')
        return self

    @property
    def floor(self) -> float | None:
        return self.eigen_floor or None
