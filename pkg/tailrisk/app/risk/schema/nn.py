#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from datetime import date

from pydantic import Field, model_validator

from tailrisk.common.enums import TailType
from tailrisk.common.schema import Probability, SchemaBase, Seed
from tailrisk.core.conf import settings


class NNStudyConfig(SchemaBase):
    """NN 持续性检验参数，两个时期由日期区间指定"""

    confidence_levels: list[Probability] = Field(
        default_factory=lambda: list(settings.RISK_CONFIDENCE_LEVELS), min_length=1, description='置信水平'
    )
    tails: list[TailType] = Field(default_factory=lambda: [TailType.loss, TailType.gain], min_length=1)
    half_life_days: int = Field(default=settings.COVARIANCE_HALF_LIFE_DAYS, ge=1)
    warmup_observations: int = Field(default=settings.SCENARIO_WARMUP_OBSERVATIONS, ge=2)
    eigen_floor: float | None = Field(default=None, ge=0)
    replications: int = Field(default=settings.RISK_BOOTSTRAP_REPLICATIONS, ge=settings.RISK_BOOTSTRAP_MIN_REPLICATIONS)
    seed: Seed = 0
    period_a_start: date
    period_a_end: date
    period_b_start: date
    period_b_end: date

    @model_validator(mode='after')
    def check_periods(self) -> 'NNStudyConfig':
        if self.period_a_start > self.period_a_end:
            raise ValueError('period_a_start 不能晚于 period_a_end')
        if self.period_b_start > self.period_b_end:
            raise ValueError('period_b_start 不能晚于 period_b_end')
        return self

    @property
    def floor(self) -> float | None:
        return self.eigen_floor or None


class NNRow(SchemaBase):
    """NN 报告中的一行，键为 (name, tail, confidence)"""

    name: str
    tail: TailType
    confidence: float
    nn_a: float
    ci_low_a: float
    ci_high_a: float
    nn_b: float
    ci_low_b: float
    ci_high_b: float
    diff: float
    diff_low: float
    diff_high: float
    persistent: bool
